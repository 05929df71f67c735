import csv
import io
import json
from fractions import Fraction
from unittest.mock import patch

import pytest

from recordlab.config import Config, settings
from recordlab.models.domain import (CheckResult, ConstantReport, ExperimentConfig, ExperimentReport, MomentRow,
                                     MomentTable, ReportRow, SeriesValue, ValidationReport)
from recordlab.services.export_service import REPORT_COLUMNS, export_service
from recordlab.utils.formatting import fmt, to_csv


def _report(keep_tallies=False):
    cfg = ExperimentConfig(model="simplex", d=2, ns=[5, 10], replications=3, keep_tallies=keep_tallies)
    rows = [ReportRow(statistic="chain", n=5, mean=2.0, var=0.5, se_mean=0.1, se_var=0.2, ref_mean=1.9,
                      ref_source="exact", z_mean=1.0, ks=0.1, ks_standardization="reference")]
    report = ExperimentReport(config=cfg, rows=rows, wall_clock_s=1.25)
    if keep_tallies:
        report.tallies = {"chain": [[1, 2], [2, 2], [1, 3]]}
    return report


class TestFormatting:
    def test_fmt(self):
        assert fmt(None) == ""
        assert fmt(Fraction(23, 18)) == "23/18"
        assert fmt(True) == "true"
        assert fmt(1 / 3) == "0.333333333333333"
        assert fmt(complex(-3, 1.5)) == "-3+1.5j"
        assert fmt(7) == "7"

    def test_to_csv(self):
        text = to_csv(("a", "b"), [(1, 0.5), (None, Fraction(1, 3))])
        assert text == "a,b\n1,0.5\n,1/3\n"


class TestExportService:
    def test_json_excludes_fields(self):
        data = json.loads(export_service.export_json(_report(), exclude={"wall_clock_s"}))
        assert "wall_clock_s" not in data
        assert data["config"]["model"] == "simplex"
        assert data["rows"][0]["statistic"] == "chain"

    def test_report_csv(self):
        rows = list(csv.reader(io.StringIO(export_service.export_report_csv(_report()))))
        assert tuple(rows[0]) == REPORT_COLUMNS
        assert rows[1][:4] == ["chain", "5", "2", "0.5"]
        assert rows[1][REPORT_COLUMNS.index("ref_var")] == ""
        assert rows[1][-2:] == ["0.1", "reference"]

    def test_every_public_method_is_an_exporter(self):
        public = [name for name in dir(export_service) if not name.startswith("_")]
        assert public and all(name.startswith("export_") for name in public)

    def test_tallies_csv(self):
        rows = list(csv.reader(io.StringIO(export_service.export_tallies_csv(_report(keep_tallies=True)))))
        assert rows[0] == ["replication", "statistic", "n", "count"]
        assert rows[1:3] == [["0", "chain", "5", "1"], ["0", "chain", "10", "2"]]
        assert len(rows) == 7
        with pytest.raises(ValueError):
            export_service.export_tallies_csv(_report())

    def test_moments_csv(self):
        table = MomentTable(model="simplex", d=2, statistic="chain",
                            rows=[MomentRow(n=3, mean=23 / 18, var=0.2, mean_exact="23/18")])
        lines = export_service.export_moments_csv(table).splitlines()
        assert lines[0] == "model,d,statistic,n,mean,var,mean_exact,var_exact"
        assert lines[1] == "simplex,2,chain,3,1.27777777777778,0.2,23/18,"

    def test_constants_csv(self):
        reports = [ConstantReport(d=2, name="vtilde", value=SeriesValue(value=0.684688927950036, err=1e-12)),
                   ConstantReport(d=2, name="v", value=SeriesValue(value=2.86126354931118, err=1e-11))]
        lines = export_service.export_constants_csv(reports).splitlines()
        assert lines[0] == "d,v,v_err,vtilde,vtilde_err"
        assert lines[1] == "2,2.86126354931118,1e-11,0.684688927950036,1e-12"

    def test_constants_csv_oracle_column(self):
        k = ConstantReport(d=3, name="K", value=SeriesValue(value=0.25, err=1e-12),
                           oracle=SeriesValue(value=0.2500001, err=1e-7))
        lines = export_service.export_constants_csv([k]).splitlines()
        assert lines == ["d,K,K_err,K_oracle", "3,0.25,1e-12,0.2500001"]

    def test_validation_text(self):
        report = ValidationReport(checks=[CheckResult(name="zeros", passed=True, detail="ok", seconds=0.5),
                                          CheckResult(name="normality", passed=False, detail="ks", seconds=2)])
        text = export_service.export_validation_text(report)
        assert text.startswith("PASS  zeros")
        assert "FAIL  normality" in text
        assert text.endswith("1/2 checks passed\n")


class TestConfig:
    def test_defaults_validate(self):
        assert settings.validate()
        assert settings.SIGNIFICANT_DIGITS == 15

    def test_thread_override(self):
        assert Config.threads(3) == 3
        assert Config.threads(0) == 1

    def test_threads_from_environment(self, mock_env_vars):
        assert Config.threads() == 2

    def test_invalid_precision_warns(self):
        with patch.object(Config, "PRECISION", "quad"):
            assert not Config.validate()
