import math

import pytest
from pydantic import ValidationError
from scipy import special

from recordlab.core.exceptions import DivergentLimitError
from recordlab.core.specfun import EULER_GAMMA
from recordlab.models.domain import AsymptoticMoment, AsymptoticTerm, Model
from recordlab.services.asymptotics import (chain_mean_asym, chain_params, chain_params_hypercube,
                                            chain_params_simplex, chain_variance_asym, dom_limits,
                                            maxima_mean_asym, pareto_mean_asym, pgf_quasi_power,
                                            record_variance_asym, summary_rows)
from recordlab.services.exactlaws import chain_moments_at, chain_pgf, dom_moments


class TestParetoAndMaxima:
    def test_pareto_mean_d2(self):
        n = 1e6
        m = pareto_mean_asym(2, n)
        assert m.value == pytest.approx(2 * math.sqrt(math.pi * n) - math.log(n) - EULER_GAMMA, rel=1e-14)
        assert [t.exponent for t in m.terms] == [0.5, 0.0, 0.0]
        assert m.terms[1].log and not m.terms[2].log

    def test_maxima_mean_d2(self):
        assert maxima_mean_asym(2, 400).value == pytest.approx(math.sqrt(400 * math.pi) - 1, rel=1e-14)

    def test_pareto_exceeds_maxima(self):
        for d in (2, 3, 5):
            assert pareto_mean_asym(d, 1e4).value > maxima_mean_asym(d, 1e4).value

    def test_d1_pareto_is_harmonic(self):
        m = pareto_mean_asym(1, 1000)
        assert m.value == pytest.approx(math.log(1000) + EULER_GAMMA)

    def test_domain(self):
        with pytest.raises(ValueError):
            pareto_mean_asym(2, 1)

    def test_terms_must_decrease(self):
        with pytest.raises(ValidationError):
            AsymptoticMoment(kind="x", d=2, n=10, value=0.0,
                             terms=[AsymptoticTerm(coefficient=1, exponent=0.0),
                                    AsymptoticTerm(coefficient=1, exponent=0.5)])

    def test_variance_leading_terms(self):
        n = 1e4
        assert record_variance_asym("pareto", 2, n) == pytest.approx(2.86126354931118 * math.sqrt(n), rel=1e-9)
        assert record_variance_asym("maxima", 2, n) == pytest.approx(0.684688927950036 * math.sqrt(n), rel=1e-9)
        with pytest.raises(ValueError):
            record_variance_asym("staircase", 2, n)


class TestChainParameters:
    def test_simplex_d2(self):
        p = chain_params_simplex(2)
        assert p.mu == pytest.approx(1 / 3)
        assert p.sigma2 == pytest.approx(5 / 27)
        assert p.c1 == pytest.approx(2 / 3, abs=1e-9)
        assert p.c2 == pytest.approx(5 * math.pi ** 2 / 54 - 26 / 27, abs=1e-8)

    def test_hypercube_d2(self):
        p = chain_params_hypercube(2)
        assert (p.mu, p.sigma2) == (0.5, 0.25)
        assert p.c1 == pytest.approx((1 + EULER_GAMMA) / 2, abs=1e-12)
        assert p.c2 == pytest.approx((EULER_GAMMA + math.pi ** 2 / 6 - 2) / 4, abs=1e-12)

    @pytest.mark.parametrize("d", [3, 6, 12])
    def test_constants_are_real(self, d):
        for p in (chain_params_simplex(d), chain_params_hypercube(d)):
            assert abs(p.c1_imag) < 1e-12
            assert abs(p.c2_imag) < 1e-12

    def test_d1_rejected(self):
        with pytest.raises(ValueError):
            chain_params(Model.of("simplex", 1))

    @pytest.mark.parametrize("kind", ["simplex", "cube"])
    def test_expansions_track_exact_moments(self, kind):
        model = Model.of(kind, 3)
        mean, var = chain_moments_at(model, 3000)
        assert chain_mean_asym(model, 3000) == pytest.approx(mean, abs=2e-3)
        assert chain_variance_asym(model, 3000) == pytest.approx(var, abs=5e-3)

    def test_quasi_power(self):
        n, y = 1000, 1.1
        approx = pgf_quasi_power(3, n, y)
        assert abs(approx.imag) < 1e-12
        assert approx.real == pytest.approx(chain_pgf(Model.of("simplex", 3), n, y), rel=1e-2)


class TestDominatingLimits:
    def test_simplex_d2(self):
        lim = dom_limits(Model.of("simplex", 2))
        assert lim.mean == pytest.approx(1.23372, abs=1e-5)
        assert lim.var == pytest.approx(0.2189, abs=1e-4)

    def test_cube_is_zeta(self):
        lim = dom_limits(Model.of("cube", 3))
        assert lim.mean == pytest.approx(special.zeta(3))
        assert lim.var == pytest.approx(special.zeta(3) - special.zeta(6))

    def test_finite_n_approaches_limit(self):
        model = Model.of("simplex", 3)
        lim = dom_limits(model)
        mean, var = dom_moments(model, 200)
        assert mean == pytest.approx(lim.mean, abs=1e-12)
        assert var == pytest.approx(lim.var, abs=1e-12)

    def test_d1_diverges(self):
        with pytest.raises(DivergentLimitError):
            dom_limits(Model.of("cube", 1))


class TestSummary:
    def test_d1_rows(self):
        rows = summary_rows(1)
        assert {r["statistic"] for r in rows} == {"dominating"}
        assert all(r["mean"] == "H_n" for r in rows)

    def test_d2_rows(self):
        rows = summary_rows(2)
        stats = [(r["statistic"], r["model"]) for r in rows]
        assert ("pareto", "simplex") in stats and ("chain", "cube") in stats
        assert all(set(r) == {"statistic", "model", "mean", "variance"} for r in rows)
