import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from recordlab.core.exceptions import PoleError, SeriesConvergenceError
from recordlab.core.specfun import (EULER_GAMMA, MpArith, alternating_sum, backend, euler_sum, harmonic,
                                    harmonic_float, hurwitz_tail_sum, ln_gamma, p_f_q, polygamma, power_sum,
                                    quad1d, quad2d)


def _inverse_square(j, ar):
    return 1 / (j * j)


def _alternating_harmonic(j, ar):
    return np.where(np.asarray(j, dtype=float) % 2 == 0, 1.0, -1.0) / (j + 1)


class TestSpecialFunctions:
    def test_harmonic_exact(self):
        h = harmonic(4)
        assert h.exact == Fraction(25, 12)
        assert h.value == pytest.approx(25 / 12, rel=1e-15)
        assert harmonic(3, 2).exact == Fraction(49, 36)

    def test_harmonic_large_n_is_float_only(self):
        h = harmonic(20_000)
        assert h.exact is None
        assert h.value == pytest.approx(harmonic_float(20_000), rel=1e-14)

    def test_harmonic_rejects_bad_order(self):
        with pytest.raises(ValueError):
            harmonic(3, 0)

    def test_ln_gamma(self):
        assert ln_gamma(5) == pytest.approx(math.log(24), rel=1e-14)
        with pytest.raises(PoleError):
            ln_gamma(-2)

    def test_polygamma(self):
        assert polygamma(0, 1) == pytest.approx(-EULER_GAMMA, rel=1e-14)
        assert polygamma(1, 1) == pytest.approx(math.pi ** 2 / 6, rel=1e-14)
        with pytest.raises(PoleError):
            polygamma(0, 0)
        with pytest.raises(ValueError):
            polygamma(2, 1.0)

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            backend("quad")


class TestSeries:
    def test_power_sum_zeta2(self):
        sv = power_sum(_inverse_square, 1, 2.0, eps=1e-12)
        assert sv.value == pytest.approx(math.pi ** 2 / 6, abs=1e-11)
        assert sv.err < 1e-10

    def test_power_sum_rejects_slow_decay(self):
        with pytest.raises(SeriesConvergenceError):
            power_sum(_inverse_square, 1, 1.0)

    def test_power_sum_dd_beats_double(self):
        ar = MpArith()
        sv = power_sum(lambda j, a: 1 / (j * j * j), 1, 3.0, ar=ar, eps=1e-18)
        with mpmath.workdps(40):
            diff = abs(sv.native() - mpmath.zeta(3))
        assert diff < 1e-16

    def test_hurwitz_tail_closes_two_term_tail(self):
        sv = hurwitz_tail_sum(lambda j, a: (j + 1) / (j * j * j), 1, 2.0, n=20_000)
        expected = math.pi ** 2 / 6 + 1.2020569031595942
        assert sv.value == pytest.approx(expected, abs=1e-12)
        assert sv.terms_used == 20_000

    def test_alternating_sum_log2(self):
        sv = alternating_sum(_alternating_harmonic, 0, eps=1e-12)
        assert sv.value == pytest.approx(math.log(2), abs=1e-11)

    def test_euler_sum_detects_kind(self):
        alt = euler_sum(lambda j: (-1) ** j / (j + 1), eps=1e-10)
        assert alt.value == pytest.approx(math.log(2), abs=1e-9)
        power = euler_sum(lambda j: 1.0 / (j + 1) ** 2, eps=1e-10, kind="power", exponent=2.0)
        assert power.value == pytest.approx(math.pi ** 2 / 6, abs=1e-9)


class TestHypergeometric:
    def test_inside_disc(self):
        assert p_f_q([1, 1], [2], 0.5).value == pytest.approx(2 * math.log(2), rel=1e-10)
        assert p_f_q([], [], 1.0).value == pytest.approx(math.e, rel=1e-12)

    def test_terminating(self):
        assert p_f_q([-2, 1], [1], 0.5).value == pytest.approx(0.25, abs=1e-15)

    def test_gauss_point(self):
        sv = p_f_q([0.5, 0.5], [2], 1.0, eps=1e-10)
        assert sv.value == pytest.approx(4 / math.pi, abs=1e-8)

    def test_minus_one(self):
        sv = p_f_q([1, 1], [2], -1.0, eps=1e-12)
        assert sv.value == pytest.approx(math.log(2), abs=1e-10)

    def test_divergent_parameters(self):
        with pytest.raises(SeriesConvergenceError):
            p_f_q([1, 1], [1], 1.0)
        with pytest.raises(SeriesConvergenceError):
            p_f_q([1, 1, 1], [2], 0.5)

    def test_lower_parameter_pole(self):
        with pytest.raises(PoleError):
            p_f_q([1], [0], 0.5)


class TestQuadrature:
    def test_quad1d(self):
        assert quad1d(lambda x: x * x, 0, 1).value == pytest.approx(1 / 3, abs=1e-12)
        assert quad1d(lambda x: mpmath.exp(-x), 0, math.inf).value == pytest.approx(1.0, abs=1e-12)

    def test_quad2d(self):
        sv = quad2d(lambda x, y: x * y, eps=1e-8)
        assert sv.value == pytest.approx(0.25, abs=1e-9)
