import math
import logging
from fractions import Fraction

import pytest

from recordlab.core.exceptions import ExactModeError
from recordlab.core.specfun import harmonic
from recordlab.models.domain import Model
from recordlab.services.exactlaws import (chain_kernel, chain_mean_altsum, chain_moments_at, chain_moments_exact,
                                          chain_pgf, chain_pgf_moments, closed_form_d2, dom_moments,
                                          dom_moments_table, phi_product, solve_record_recurrence)

SIMPLEX2 = Model.of("simplex", 2)
CUBE2 = Model.of("cube", 2)


class TestChainKernel:
    @pytest.mark.parametrize("kind,d,n", [("simplex", 2, 7), ("simplex", 4, 12), ("cube", 3, 9)])
    def test_is_a_distribution(self, kind, d, n):
        probs = chain_kernel(Model.of(kind, d), n).probs
        assert len(probs) == n
        assert min(probs) >= 0
        assert math.fsum(probs) == pytest.approx(1.0, abs=1e-12)

    def test_d1_is_uniform(self):
        k = chain_kernel(Model.of("simplex", 1), 5, exact=True)
        assert k.exact == ["1/5"] * 5

    def test_exact_and_float_agree(self):
        for model in (SIMPLEX2, Model.of("cube", 3)):
            exact = chain_kernel(model, 10, exact=True).probs
            approx = chain_kernel(model, 10).probs
            assert approx == pytest.approx(exact, abs=1e-12)

    def test_simplex_domination_probability(self):
        # P(p2 dominates p1) = d!/((d+1)...(2d))
        k = chain_kernel(SIMPLEX2, 2, exact=True)
        assert Fraction(k.exact[1]) == Fraction(1, 6)


class TestChainMoments:
    def test_simplex_d2_n3(self):
        table = chain_moments_exact(SIMPLEX2, 3, exact=True)
        assert table.rows[2].mean_exact == "23/18"
        assert chain_mean_altsum(2, 3) == Fraction(23, 18)
        assert table.row(3).mean == pytest.approx(23 / 18)

    def test_altsum_matches_recurrence(self):
        table = chain_moments_exact(Model.of("simplex", 3), 25, exact=True)
        for row in table.rows:
            assert Fraction(row.mean_exact) == chain_mean_altsum(3, row.n)

    def test_d1_harmonic(self):
        table = chain_moments_exact(Model.of("simplex", 1), 6, exact=True)
        h1, h2 = harmonic(6).exact, harmonic(6, 2).exact
        assert Fraction(table.rows[-1].mean_exact) == h1
        assert Fraction(table.rows[-1].var_exact) == h1 - h2

    def test_float_recurrence_matches_exact(self):
        exact = chain_moments_exact(Model.of("simplex", 4), 30, exact=True)
        approx = chain_moments_exact(Model.of("simplex", 4), 30)
        for a, b in zip(exact.rows, approx.rows):
            assert b.mean == pytest.approx(a.mean, rel=1e-12)
            assert b.var == pytest.approx(a.var, rel=1e-10, abs=1e-12)

    def test_hypercube_pgf_matches_exact_kernel(self):
        model = Model.of("cube", 3)
        exact = chain_moments_exact(model, 15, exact=True)
        approx = chain_moments_exact(model, 15)
        for a, b in zip(exact.rows, approx.rows):
            assert b.mean == pytest.approx(a.mean, rel=1e-12)
            assert b.var == pytest.approx(a.var, rel=1e-10, abs=1e-12)

    def test_pgf_normalised(self):
        assert chain_pgf(SIMPLEX2, 10, 1.0) == pytest.approx(1.0, abs=1e-14)
        assert chain_pgf(Model.of("simplex", 3), 100, 1.0) == pytest.approx(1.0, abs=1e-12)
        assert chain_pgf(SIMPLEX2, 0, 0.3) == 1.0

    def test_pgf_warns_beyond_exact_range(self, caplog):
        with caplog.at_level(logging.WARNING, logger="recordlab.services.exactlaws"):
            chain_pgf(SIMPLEX2, 20, 0.5)
            assert not caplog.records
            value = chain_pgf(SIMPLEX2, 80, 0.5)
        assert 0 < value < 1
        assert any("beyond the exact range" in r.getMessage() for r in caplog.records)

    def test_pgf_moments(self):
        mean, var = chain_pgf_moments(SIMPLEX2, 3)
        assert mean == pytest.approx(23 / 18, rel=1e-14)
        exact = chain_moments_exact(SIMPLEX2, 3, exact=True).rows[2]
        assert var == pytest.approx(float(Fraction(exact.var_exact)), rel=1e-13)

    def test_moments_at_d1(self):
        mean, var = chain_moments_at(Model.of("cube", 1), 10)
        assert mean == pytest.approx(float(harmonic(10).exact))
        assert var == pytest.approx(float(harmonic(10).exact - harmonic(10, 2).exact))

    def test_exact_range(self):
        with pytest.raises(ExactModeError):
            chain_mean_altsum(2, 65)
        with pytest.raises(ValueError):
            chain_moments_exact(SIMPLEX2, 0)


class TestClosedForms:
    @pytest.mark.parametrize("n", [1, 2, 5, 12, 40])
    def test_simplex_d2(self, n):
        row = chain_moments_exact(SIMPLEX2, n).rows[-1]
        assert closed_form_d2("simplex-mean", n) == pytest.approx(row.mean, rel=1e-12)
        assert closed_form_d2("simplex-var", n) == pytest.approx(row.var, abs=1e-9)

    @pytest.mark.parametrize("n", [1, 3, 17])
    def test_cube_d2(self, n):
        mean, var = chain_moments_at(CUBE2, n)
        assert closed_form_d2("cube-mean", n) == pytest.approx(mean, rel=1e-12)
        assert closed_form_d2("cube-var", n) == pytest.approx(var, abs=1e-10)

    def test_unknown(self):
        with pytest.raises(ValueError):
            closed_form_d2("simplex-skew", 3)


class TestDominating:
    def test_cube_d2_n3(self):
        mean, var = dom_moments(CUBE2, 3, exact=True)
        assert mean == Fraction(49, 36)
        assert var == Fraction(49, 36) - harmonic(3, 4).exact

    def test_simplex_exact_and_float_agree(self):
        model = Model.of("simplex", 3)
        for n in (1, 4, 20):
            exact_mean, exact_var = dom_moments(model, n, exact=True)
            mean, var = dom_moments(model, n)
            assert mean == pytest.approx(float(exact_mean), rel=1e-13)
            assert var == pytest.approx(float(exact_var), rel=1e-11, abs=1e-14)

    def test_first_point_is_a_record(self):
        for model in (SIMPLEX2, CUBE2, Model.of("simplex", 5)):
            mean, var = dom_moments(model, 1)
            assert mean == pytest.approx(1.0)
            assert var == pytest.approx(0.0, abs=1e-14)

    def test_table_is_increasing(self):
        rows = dom_moments_table(SIMPLEX2, 30).rows
        means = [r.mean for r in rows]
        assert all(b > a for a, b in zip(means, means[1:]))


class TestRecurrence:
    def test_phi_product_gamma_form(self):
        for d in (2, 3, 6):
            assert abs(phi_product(d, 40).difference) < 1e-11

    def test_phi_product_d1(self):
        assert phi_product(1, 10).product == pytest.approx(0.1, rel=1e-14)

    def test_both_routes_give_chain_mean(self):
        sol = solve_record_recurrence(2, lambda n: 1, 20)
        table = chain_moments_exact(SIMPLEX2, 20)
        assert sol.alternating[1:] == pytest.approx([r.mean for r in table.rows], rel=1e-12)
        assert sol.direct == pytest.approx(sol.alternating, rel=1e-12)

    def test_alternating_route_range(self):
        with pytest.raises(ExactModeError):
            solve_record_recurrence(2, lambda n: 1, 100)
