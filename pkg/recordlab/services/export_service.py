import json
from typing import Dict, Iterable, List, Sequence

from pydantic import BaseModel

from ..models.domain import ConstantReport, ExperimentReport, MomentTable, ValidationReport
from ..utils.formatting import to_csv

REPORT_COLUMNS = ("statistic", "n", "mean", "var", "se_mean", "se_var", "ref_mean", "ref_var",
                  "ref_source", "z_mean", "z_var", "ks", "ks_standardization")
TALLY_COLUMNS = ("replication", "statistic", "n", "count")
MOMENT_COLUMNS = ("model", "d", "statistic", "n", "mean", "var", "mean_exact", "var_exact")
CONSTANT_NAMES = ("v", "vtilde", "K")


class ExportService:
    """JSON and CSV renderings of every report type; JSON follows model_dump(mode="json")"""

    def export_json(self, payload, exclude=None) -> str:
        if isinstance(payload, BaseModel):
            payload = payload.model_dump(mode="json", exclude=exclude)
        elif isinstance(payload, list):
            payload = [p.model_dump(mode="json") if isinstance(p, BaseModel) else p for p in payload]
        return json.dumps(payload, indent=2)

    def export_report_csv(self, report: ExperimentReport) -> str:
        rows = ([getattr(r, c).value if c == "statistic" else getattr(r, c) for c in REPORT_COLUMNS]
                for r in report.rows)
        return to_csv(REPORT_COLUMNS, rows)

    def export_tallies_csv(self, report: ExperimentReport) -> str:
        """Per-replication counts; needs a report run with keep_tallies"""
        if not report.tallies:
            raise ValueError("Report carries no per-replication tallies")
        ns = report.config.ns
        rows = []
        for stat, per_rep in report.tallies.items():
            for r, counts in enumerate(per_rep):
                rows.extend((r, stat, n, c) for n, c in zip(ns, counts))
        return to_csv(TALLY_COLUMNS, rows)

    def export_moments_csv(self, table: MomentTable) -> str:
        rows = ((table.model.value, table.d, table.statistic.value, r.n, r.mean, r.var, r.mean_exact, r.var_exact)
                for r in table.rows)
        return to_csv(MOMENT_COLUMNS, rows)

    def export_constants_csv(self, reports: Iterable[ConstantReport]) -> str:
        """One row per d with value and error bound for each constant present, plus any attached oracle"""
        by_d: Dict[int, Dict[str, ConstantReport]] = {}
        for rep in reports:
            by_d.setdefault(rep.d, {})[rep.name] = rep
        names = [n for n in CONSTANT_NAMES if any(n in row for row in by_d.values())]
        with_oracle = {n for n in names if any(row.get(n) and row[n].oracle for row in by_d.values())}
        header = ["d"]
        for n in names:
            header += [n, f"{n}_err"] + ([f"{n}_oracle"] if n in with_oracle else [])
        rows = []
        for d in sorted(by_d):
            row = [d]
            for n in names:
                rep = by_d[d].get(n)
                row += [rep.value.value, rep.value.err] if rep else [None, None]
                if n in with_oracle:
                    row.append(rep.oracle.value if rep and rep.oracle else None)
            rows.append(row)
        return to_csv(header, rows)

    def export_rows_csv(self, header: Sequence[str], rows: Iterable[Sequence]) -> str:
        return to_csv(header, rows)

    def export_summary_csv(self, rows: List[Dict]) -> str:
        header = ("statistic", "model", "mean", "variance")
        return to_csv(header, ([r[h] for h in header] for r in rows))

    def export_validation_text(self, report: ValidationReport) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name:<28} {c.seconds:8.1f}s  {c.detail}"
                 for c in report.checks]
        lines.append(f"{sum(c.passed for c in report.checks)}/{len(report.checks)} checks passed")
        return "\n".join(lines) + "\n"


# Create singleton instance
export_service = ExportService()
