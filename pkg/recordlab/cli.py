"""Command line entry point: recordlab <command> [options].

Exit status is 0 on success, 1 when a library call or a validation check
fails and 2 on a usage error. Results go to stdout; the resolved-config
header and logs go to stderr so stdout stays machine readable.
"""
import argparse
import logging
import sys
from fractions import Fraction
from importlib import resources
from typing import List, Optional

try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

from . import __version__
from .config import settings
from .core.charpoly import char_zeros
from .core.exceptions import RecordLabError
from .models.domain import ExperimentConfig, Model, MomentRow, MomentTable, Statistic
from .models.requests import AsymptoticValue
from .services.asymptotics import (chain_mean_asym, chain_params, chain_variance_asym, dom_limits,
                                   maxima_mean_asym, pareto_mean_asym, record_variance_asym, summary_rows)
from .services.exactlaws import EXACT_N_MAX, chain_moments_exact, dom_moments
from .services.export_service import export_service
from .services.figures import FIGURES, dom_curves, dominance_illustration, zeros_figure
from .services.montecarlo import run_experiment
from .services.validation import ValidationSuite
from .services.varconstants import CONSTANT_NAMES, D_MAX, constants_table

logger = logging.getLogger("recordlab")

ASYMPTOTIC_KINDS = ("summary", "pareto-mean", "maxima-mean", "pareto-var", "maxima-var",
                    "chain-mean", "chain-var", "chain-params", "dom-limits")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser, model: bool = True, d: bool = True, n: bool = False) -> None:
    if model:
        p.add_argument("--model", default="simplex", help="cube or simplex")
    if d:
        p.add_argument("--d", type=int, action="append", help="dimension; repeatable where tables allow")
    if n:
        p.add_argument("--n", type=int, action="append", help="sample size; repeatable")
    p.add_argument("--out", choices=("json", "csv"), default=None)
    p.add_argument("--log-level", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="recordlab", description="Multivariate records and maxima")
    parser.add_argument("--version", action="version", version=f"recordlab {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("simulate", help="seeded Monte Carlo experiment")
    _common(p, n=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--stat", action="append", choices=[s.value for s in Statistic])
    p.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--tallies", action="store_true", help="emit per-replication counts as CSV")

    p = sub.add_parser("exact", help="exact finite-n mean and variance")
    _common(p, n=True)
    p.add_argument("--stat", choices=("chain", "dominating"), default="chain")

    p = sub.add_parser("asymptotic", help="asymptotic expansions and limits")
    _common(p, n=True)
    p.add_argument("--kind", choices=ASYMPTOTIC_KINDS, default="summary")
    p.add_argument("--precision", choices=("double", "dd"), default=None)

    p = sub.add_parser("constants", help="variance constants v, vtilde and K")
    _common(p, model=False)
    p.add_argument("--which", default=",".join(CONSTANT_NAMES), help="comma separated subset of v,vtilde,K")
    p.add_argument("--dmax", type=int, default=D_MAX)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--precision", choices=("double", "dd"), default=None)
    p.add_argument("--oracle", action="store_true", help="attach the double-integral value of K_d for d <= 8")

    p = sub.add_parser("zeros", help="zeros of the characteristic polynomial")
    _common(p, model=False)
    p.add_argument("--y", type=float, default=1.0)
    p.add_argument("--dmax", type=int, default=50)
    p.add_argument("--resolution", type=int, default=256)

    p = sub.add_parser("validate", help="run the acceptance checks")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--check", action="append", dest="checks")
    p.add_argument("--list", action="store_true", dest="list_checks")
    p.add_argument("--log-level", default=None)

    p = sub.add_parser("figure", help="data behind the plots")
    p.add_argument("which", choices=FIGURES)
    _common(p)
    p.add_argument("--nmax", type=int, default=30)
    p.add_argument("--dmax", type=int, default=50)
    p.add_argument("--resolution", type=int, default=256)

    p = sub.add_parser("run", help="alias: recordlab run <command> ...")
    p.add_argument("rest", nargs=argparse.REMAINDER)

    p = sub.add_parser("schema", help="print the JSON schema of all outputs")
    p.add_argument("--log-level", default=None)
    return parser


def _header(args) -> str:
    shown = {k: v for k, v in sorted(vars(args).items()) if v is not None and k not in ("command", "log_level")}
    return f"# recordlab {__version__} {args.command} " + " ".join(f"{k}={v}" for k, v in shown.items())


def _single_d(args, default: Optional[int] = None) -> int:
    if not args.d:
        if default is None:
            raise UsageError("--d is required")
        return default
    if len(args.d) > 1:
        raise UsageError("--d given more than once")
    return args.d[0]


def _ns(args) -> List[int]:
    if not args.n:
        raise UsageError("--n is required")
    return args.n


def cmd_simulate(args) -> str:
    cfg = ExperimentConfig(
        model=args.model, d=_single_d(args), ns=_ns(args), replications=args.reps,
        statistics=args.stat or list(Statistic),
        seed=settings.SEED if args.seed is None else args.seed,
        threads=args.threads, keep_tallies=args.tallies,
    )
    print(f"# seed={cfg.seed}", file=sys.stderr)
    report = run_experiment(cfg)
    logger.info(f"simulate finished in {report.wall_clock_s:.2f}s (partial={report.partial})")
    if args.tallies:
        return export_service.export_tallies_csv(report)
    if args.out == "csv":
        return export_service.export_report_csv(report)
    # stdout is independent of timing and thread count
    return export_service.export_json(report, exclude={"wall_clock_s": True, "tallies": True,
                                                       "config": {"threads"}})


def _exact_table(model: Model, stat: str, ns: List[int]) -> MomentTable:
    if stat == "chain":
        n_max = max(ns)
        full = chain_moments_exact(model, n_max, exact=n_max <= EXACT_N_MAX)
        rows = [full.rows[n - 1] for n in ns]
        return MomentTable(model=model.kind, d=model.d, statistic=Statistic.CHAIN, rows=rows)
    table = MomentTable(model=model.kind, d=model.d, statistic=Statistic.DOMINATING)
    for n in ns:
        mean, var = dom_moments(model, n, exact=n <= EXACT_N_MAX)
        if isinstance(mean, Fraction):
            table.rows.append(MomentRow(n=n, mean=float(mean), var=float(var),
                                        mean_exact=str(mean), var_exact=str(var)))
        else:
            table.rows.append(MomentRow(n=n, mean=mean, var=var))
    return table


def cmd_exact(args) -> str:
    ns = _ns(args)
    if min(ns) < 1:
        raise UsageError("--n must be >= 1")
    table = _exact_table(Model.of(args.model, _single_d(args)), args.stat, ns)
    return export_service.export_json(table) if args.out == "json" else export_service.export_moments_csv(table)


def cmd_asymptotic(args) -> str:
    d = _single_d(args)
    model = Model.of(args.model, d)
    kind = args.kind
    if kind == "summary":
        rows = summary_rows(d)
        return export_service.export_json(rows) if args.out == "json" else export_service.export_summary_csv(rows)
    if kind == "chain-params":
        return export_service.export_json(chain_params(model))
    if kind == "dom-limits":
        return export_service.export_json(dom_limits(model))
    results = []
    for n in _ns(args):
        if kind == "pareto-mean":
            results.append(pareto_mean_asym(d, n))
            continue
        if kind == "maxima-mean":
            results.append(maxima_mean_asym(d, n))
            continue
        if kind in ("pareto-var", "maxima-var"):
            value = record_variance_asym(kind.split("-")[0], d, n, precision=args.precision)
        elif kind == "chain-mean":
            value = chain_mean_asym(model, n)
        else:
            value = chain_variance_asym(model, n)
        results.append(AsymptoticValue(kind=kind, model=model.kind.value, d=d, n=n, value=value))
    if args.out == "csv":
        rows = [(kind, d, r.n, r.value) for r in results]
        return export_service.export_rows_csv(("kind", "d", "n", "value"), rows)
    return export_service.export_json(results)


def cmd_constants(args) -> str:
    names = [s.strip() for s in args.which.split(",") if s.strip()]
    unknown = [s for s in names if s not in CONSTANT_NAMES]
    if unknown:
        raise UsageError(f"unknown constant(s) {', '.join(unknown)}; choose from {', '.join(CONSTANT_NAMES)}")
    d_values = args.d or range(2, args.dmax + 1)
    reports = constants_table(names, d_values, eps=args.eps, precision=args.precision, oracle=args.oracle)
    return export_service.export_json(reports) if args.out == "json" else export_service.export_constants_csv(reports)


def cmd_zeros(args) -> str:
    if args.d:
        spectra = [char_zeros(d, args.y) for d in args.d]
        if args.out == "csv":
            rows = [(s.d, re, im) for s in spectra for re, im in zip(s.re, s.im)]
            return export_service.export_rows_csv(("d", "re", "im"), rows)
        return export_service.export_json(spectra)
    rows = zeros_figure(args.dmax, args.resolution)
    if args.out == "json":
        return export_service.export_json([list(r) for r in rows])
    return export_service.export_rows_csv(("d", "re", "im"), rows)


def cmd_figure(args) -> str:
    if args.which == "dominance":
        return export_service.export_json(dominance_illustration())
    if args.which == "dom-rec":
        d_values = args.d or range(2, 8)
        rows = dom_curves(d_values, args.nmax, args.model)
        return export_service.export_rows_csv(("d", "n", "mean", "var"), rows)
    return export_service.export_rows_csv(("d", "re", "im"), zeros_figure(args.dmax, args.resolution))


def cmd_schema(args) -> str:
    if settings.SCHEMA_PATH:
        with open(settings.SCHEMA_PATH, encoding="utf-8") as f:
            return f.read()
    return resources.files("recordlab").joinpath("schemas/recordlab.schema.json").read_text(encoding="utf-8")


COMMANDS = {
    "simulate": cmd_simulate,
    "exact": cmd_exact,
    "asymptotic": cmd_asymptotic,
    "constants": cmd_constants,
    "zeros": cmd_zeros,
    "figure": cmd_figure,
    "schema": cmd_schema,
}


def _validate(args) -> int:
    suite = ValidationSuite(quick=args.quick)
    if args.list_checks:
        sys.stdout.write("\n".join(suite.get_available_checks()) + "\n")
        return 0
    report = suite.execute(args.checks)
    sys.stdout.write(export_service.export_validation_text(report))
    return 0 if report.passed else 1


def run(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return 2
    except SystemExit as e:
        return int(e.code or 0)

    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    if args.command == "run":
        if not args.rest:
            print("recordlab run: missing command", file=sys.stderr)
            return 2
        return run(args.rest)

    logging.basicConfig(stream=sys.stderr, level=(args.log_level or settings.LOG_LEVEL).upper(),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    print(_header(args), file=sys.stderr)

    try:
        if args.command == "validate":
            return _validate(args)
        sys.stdout.write(COMMANDS[args.command](args))
        return 0
    except UsageError as e:
        print(f"recordlab {args.command}: {e}", file=sys.stderr)
        return 2
    except (RecordLabError, ValueError) as e:
        print(f"recordlab {args.command}: {e}", file=sys.stderr)
        return 1
    except Exception as e:
        logger.exception(f"{args.command} failed unexpectedly: {e}")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
