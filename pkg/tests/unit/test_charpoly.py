import math

import numpy as np
import pytest

from recordlab.core.charpoly import (all_zeros, branch_series_coeffs, char_zeros, continue_zeros, curve_value,
                                     dominant_branch, limit_curve, quasi_power_prefactor, residuals, rising_coeffs,
                                     zeros_table)


class TestCharacteristicZeros:
    def test_rising_coefficients(self):
        assert rising_coeffs(2) == (1, 3, 2)
        assert rising_coeffs(3) == (1, 6, 11, 6)

    def test_d2_zero(self):
        s = char_zeros(2)
        assert s.re == pytest.approx([-3.0], abs=1e-12)
        assert s.im == pytest.approx([0.0], abs=1e-12)

    def test_d3_conjugate_pair(self):
        lams = sorted(char_zeros(3).lambdas, key=lambda z: z.imag)
        assert lams[0] == pytest.approx(complex(-3, -math.sqrt(2)), abs=1e-12)
        assert lams[1] == pytest.approx(complex(-3, math.sqrt(2)), abs=1e-12)

    @pytest.mark.parametrize("d", [2, 5, 10, 25])
    def test_spectrum_properties(self, d):
        s = char_zeros(d)
        lams = np.asarray(s.lambdas)
        assert len(lams) == d - 1
        assert max(s.residuals) < 1e-10
        # Vieta: the zeros of (z+1)...(z+d) - d! sum to -d(d+1)/2 and include 0
        assert lams.sum().real == pytest.approx(-d * (d + 1) / 2, abs=1e-9 * d * d)
        assert abs(lams.sum().imag) < 1e-9
        assert np.all(lams.real < 0)
        assert np.allclose(np.sort_complex(lams), np.sort_complex(lams.conj()), atol=1e-9)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            char_zeros(1)
        with pytest.raises(ValueError):
            all_zeros(3, 0.0)

    def test_residuals_of_exact_zero(self):
        assert residuals(np.array([0.0]), 4, 1.0)[0] < 1e-15


class TestDominantBranch:
    def test_series_coefficients(self):
        c1, c2, _ = branch_series_coeffs(2)
        assert c1 == pytest.approx(2 / 3)
        # H_2^(2) / (2 H_2^3) with H_2 = 3/2, H_2^(2) = 5/4
        assert c2 == pytest.approx(1.25 / (2 * 1.5 ** 3))

    def test_origin(self):
        assert dominant_branch(4, 1.0) == 0.0

    def test_d2_closed_form(self):
        y = 1.2
        # z^2 + 3z + 2 = 2y
        assert dominant_branch(2, y) == pytest.approx((-3 + math.sqrt(1 + 8 * y)) / 2, abs=1e-13)

    def test_continuation_tracks_dominant_branch(self):
        z = continue_zeros(3, 1.1)
        assert z[0] == pytest.approx(dominant_branch(3, 1.1), abs=1e-12)

    def test_prefactor_at_one(self):
        assert quasi_power_prefactor(3, 1.0) == 1.0

    def test_branch_domain(self):
        with pytest.raises(ValueError):
            dominant_branch(3, 2.0)


class TestLimitCurve:
    def test_points_on_curve(self):
        pts = limit_curve(16)
        assert len(pts) > 8
        assert all(abs(curve_value(w) - 1.0) < 1e-9 for w in pts)
        assert any(abs(w) < 1e-9 for w in pts)
        assert any(abs(w + 1) < 1e-9 for w in pts)

    def test_zeros_table_layout(self):
        rows = zeros_table(3, resolution=8)
        assert rows[0] == pytest.approx((2, -1.5, 0.0), abs=1e-12)
        assert sum(1 for r in rows if r[0] == 3) == 2
        assert all(r[0] in (0, 2, 3) for r in rows)

    def test_resolution_floor(self):
        with pytest.raises(ValueError):
            limit_curve(1)
