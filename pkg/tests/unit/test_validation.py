import pytest

from recordlab.services.validation import ValidationSuite, _within


class TestValidationSuite:
    @pytest.fixture
    def suite(self):
        return ValidationSuite(quick=True)

    def test_available_checks(self, suite):
        assert suite.get_available_checks() == [
            "constants-tables", "closed-forms", "quadrature-oracles", "exact-laws", "zeros",
            "clt-parameters", "monte-carlo-exact", "pareto-maxima-asymptotics", "normality",
            "dominating-limits",
        ]

    def test_fast_checks_pass(self, suite):
        report = suite.execute(["closed-forms", "clt-parameters", "dominating-limits", "zeros"])
        assert [c.name for c in report.checks] == ["closed-forms", "clt-parameters", "dominating-limits", "zeros"]
        for check in report.checks:
            assert check.passed, check.detail
        assert report.passed

    def test_exact_laws(self, suite):
        report = suite.execute(["exact-laws"])
        assert report.passed, report.checks[0].detail

    def test_unknown_check(self, suite):
        with pytest.raises(ValueError):
            suite.execute(["zeros", "nonsense"])

    def test_failing_check_is_reported(self, suite):
        def broken():
            raise RuntimeError("boom")

        suite.checks["zeros"] = broken
        report = suite.execute(["zeros"])
        assert not report.passed
        assert "boom" in report.checks[0].detail

    @pytest.mark.slow
    def test_quick_suite(self, suite):
        report = suite.execute()
        failures = [f"{c.name}: {c.detail}" for c in report.checks if not c.passed]
        assert not failures


class TestTolerances:
    def test_within_uses_per_item_tolerance(self):
        passed, detail = _within("errs", {"a": 1e-9, "b": 1e-3}, {"a": 1e-8, "b": 1e-2})
        assert passed
        assert "b" in detail

    def test_within_fails(self):
        passed, _ = _within("errs", {"a": 2e-8}, {"a": 1e-8})
        assert not passed
