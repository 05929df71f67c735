import math

import pytest

from recordlab.models.domain import ConstantReport, SeriesValue
from recordlab.services.varconstants import (REFERENCE_VALUES, constant, constants_table, k_const,
                                             oracle_integral, v_const, vtilde_const, with_oracle)

SQRT_PI = math.sqrt(math.pi)
LN2 = math.log(2)


class TestClosedForms:
    """d = 2, where every constant has an elementary closed form"""

    def test_v2(self):
        expected = 2 / 3 * SQRT_PI * (2 * math.pi ** 2 - 9 - 12 * LN2)
        report = v_const(2)
        assert report.value.value == pytest.approx(expected, abs=1e-10)
        assert report.value.err < 1e-8

    def test_v2_components(self):
        comps = v_const(2).components
        assert comps["I0"].value == pytest.approx(0.40055180475, abs=1e-10)
        assert comps["Idd"].value == pytest.approx(0.14333065672, abs=1e-10)
        assert set(comps) == {"I0", "Idd", "C1", "C2", "C3", "C"}

    def test_vtilde2(self):
        assert vtilde_const(2).value.value == pytest.approx(SQRT_PI * (2 * LN2 - 1), abs=1e-10)

    def test_k2(self):
        assert k_const(2).value.value == pytest.approx(SQRT_PI * LN2 / 4, abs=1e-10)


class TestTables:
    @pytest.mark.parametrize("d", [3, 4, 6])
    def test_reference_values(self, d):
        for name in ("v", "vtilde", "K"):
            got = constant(name, d).value.value
            assert got == pytest.approx(REFERENCE_VALUES[name][d], rel=1e-9)

    @pytest.mark.slow
    def test_full_table(self):
        for report in constants_table():
            assert report.value.value == pytest.approx(REFERENCE_VALUES[report.name][report.d], rel=1e-8)

    @pytest.mark.slow
    def test_dd_precision(self):
        report = vtilde_const(3, precision="dd")
        assert report.precision == "dd"
        assert report.value.value == pytest.approx(REFERENCE_VALUES["vtilde"][3], rel=1e-14)

    def test_component_keys(self):
        assert set(vtilde_const(3).components) == {"J0", "Jprime1", "Jsecond1", "Jprime2", "Jsecond2"}
        assert set(k_const(4).components) == {"K0", "K1", "K2"}

    def test_invalid_requests(self):
        with pytest.raises(ValueError):
            v_const(1)
        with pytest.raises(ValueError):
            v_const(13)
        with pytest.raises(ValueError):
            constant("w", 3)
        with pytest.raises(ValueError):
            k_const(3, eps=1e-14)


class TestOracles:
    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_single_integrals_match_series(self, d):
        v, vt = v_const(d), vtilde_const(d)
        assert oracle_integral("I0", d).value == pytest.approx(v.components["I0"].value, abs=1e-7)
        assert oracle_integral("Idd", d).value == pytest.approx(v.components["Idd"].value, abs=1e-7)
        assert oracle_integral("J0", d).value == pytest.approx(vt.components["J0"].value, abs=1e-7)

    def test_k_double_integral(self):
        assert oracle_integral("K", 3).value == pytest.approx(REFERENCE_VALUES["K"][3], abs=1e-5)

    def test_k_oracle_range(self):
        with pytest.raises(ValueError):
            oracle_integral("K", 9)
        with pytest.raises(ValueError):
            oracle_integral("L", 3)

    def test_table_attaches_k_oracle(self):
        reports = {r.name: r for r in constants_table(("vtilde", "K"), [3], oracle=True)}
        assert reports["vtilde"].oracle is None
        assert reports["K"].oracle.value == pytest.approx(reports["K"].value.value, abs=1e-5)
        assert k_const(3).oracle is None
        assert all(r.oracle is None for r in constants_table(("K",), [3]))

    def test_no_k_oracle_beyond_quadrature_range(self):
        report = ConstantReport(d=9, name="K", value=SeriesValue(value=0.1, err=1e-12))
        assert with_oracle(report) is report
