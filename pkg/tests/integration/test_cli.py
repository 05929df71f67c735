import csv
import io
import json

import pytest

from recordlab import __version__
from recordlab.cli import run


def _invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCommands:
    def test_exact_chain(self, capsys):
        code, out, err = _invoke(capsys, "exact", "--model", "simplex", "--d", "2", "--stat", "chain", "--n", "3")
        assert code == 0
        assert "23/18" in out
        assert f"recordlab {__version__}" in err

    def test_exact_json(self, capsys):
        code, out, _ = _invoke(capsys, "exact", "--model", "cube", "--d", "2", "--stat", "dominating",
                               "--n", "3", "--out", "json")
        assert code == 0
        assert json.loads(out)["rows"][0]["mean_exact"] == "49/36"

    def test_constants(self, capsys):
        code, out, _ = _invoke(capsys, "constants", "--which", "vtilde", "--d", "2")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["d", "vtilde", "vtilde_err"]
        assert rows[1][1].startswith("0.6846889279")

    def test_constants_with_oracle(self, capsys):
        code, out, _ = _invoke(capsys, "constants", "--which", "K", "--d", "3", "--oracle")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["d", "K", "K_err", "K_oracle"]
        assert float(rows[1][3]) == pytest.approx(float(rows[1][1]), abs=1e-5)

    def test_zeros(self, capsys):
        code, out, _ = _invoke(capsys, "zeros", "--d", "2", "--out", "csv")
        assert code == 0
        assert out.splitlines() == ["d,re,im", "2,-3,0"]

    def test_asymptotic(self, capsys):
        code, out, _ = _invoke(capsys, "asymptotic", "--kind", "chain-params", "--model", "cube", "--d", "2")
        assert code == 0
        assert json.loads(out)["mu"] == 0.5

    def test_asymptotic_values(self, capsys):
        code, out, _ = _invoke(capsys, "asymptotic", "--kind", "chain-mean", "--d", "3",
                               "--n", "100", "--n", "1000", "--out", "csv")
        assert code == 0
        assert len(out.splitlines()) == 3

    def test_figure_dominance(self, capsys):
        code, out, _ = _invoke(capsys, "figure", "dominance")
        assert code == 0
        data = json.loads(out)
        assert data["tally"]["pareto_count"] == 5
        assert data["lifted_maxima"] == 5

    def test_figure_dom_rec(self, capsys):
        code, out, _ = _invoke(capsys, "figure", "dom-rec", "--d", "2", "--nmax", "4")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "d,n,mean,var"
        assert lines[1] == "2,1,1,0"
        assert lines[-1].startswith("2,0,1.2337")

    def test_schema(self, capsys):
        code, out, _ = _invoke(capsys, "schema")
        assert code == 0
        assert "ExperimentReport" in json.loads(out)["$defs"]

    def test_run_alias(self, capsys):
        code, out, _ = _invoke(capsys, "run", "zeros", "--d", "3", "--out", "json")
        assert code == 0
        assert json.loads(out)[0]["d"] == 3


class TestSimulate:
    ARGS = ("simulate", "--model", "simplex", "--d", "2", "--n", "20", "--reps", "150", "--seed", "0x2A",
            "--stat", "chain")

    def test_byte_identical_reruns(self, capsys):
        first = _invoke(capsys, *self.ARGS)
        second = _invoke(capsys, *self.ARGS, "--threads", "3")
        assert first[0] == second[0] == 0
        assert first[1] == second[1]
        assert "seed=42" in first[2]

    def test_tallies(self, capsys):
        code, out, _ = _invoke(capsys, *self.ARGS, "--tallies")
        assert code == 0
        assert out.splitlines()[0] == "replication,statistic,n,count"
        assert len(out.splitlines()) == 151


class TestExitCodes:
    def test_no_command(self, capsys):
        assert _invoke(capsys)[0] == 2

    def test_unknown_flag(self, capsys):
        assert _invoke(capsys, "zeros", "--bogus")[0] == 2

    def test_missing_required(self, capsys):
        assert _invoke(capsys, "simulate", "--d", "2", "--n", "5")[0] == 2

    def test_bad_constant_name(self, capsys):
        assert _invoke(capsys, "constants", "--which", "w", "--d", "2")[0] == 2

    def test_library_error(self, capsys):
        code, _, err = _invoke(capsys, "exact", "--model", "ball", "--d", "2", "--n", "3")
        assert code == 1
        assert "ball" in err

    def test_help(self, capsys):
        assert _invoke(capsys, "--help")[0] == 0
        code, out, _ = _invoke(capsys, "run", "--help")
        assert code == 0
        assert "usage" in out

    def test_validate_subset(self, capsys):
        code, out, _ = _invoke(capsys, "validate", "--check", "closed-forms")
        assert code == 0
        assert out.endswith("1/1 checks passed\n")

    def test_validate_unknown_check(self, capsys):
        assert _invoke(capsys, "validate", "--check", "nonsense")[0] == 1

    @pytest.mark.slow
    def test_validate_quick(self, capsys):
        code, out, _ = _invoke(capsys, "validate", "--quick")
        assert code == 0, out
