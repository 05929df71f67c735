"""Acceptance suite: named numerical and statistical checks run by `recordlab validate`."""
import logging
import math
import time
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from ..config import settings
from ..core.charpoly import all_zeros, branch_series_coeffs, char_zeros, dominant_branch
from ..core.specfun import EULER_GAMMA, harmonic_float
from ..models.domain import CheckResult, ExperimentConfig, Model, Statistic, ValidationReport
from .asymptotics import chain_params_hypercube, chain_params_simplex, dom_limits, maxima_mean_asym, pareto_mean_asym
from .exactlaws import (chain_kernel, chain_mean_altsum, chain_moments_exact, closed_form_d2,
                        hypercube_kernel_alternating, hypercube_kernel_quad, phi_product)
from .montecarlo import run_experiment
from .varconstants import REFERENCE_VALUES, constant, k_const, oracle_integral, v_const, vtilde_const

logger = logging.getLogger(__name__)

Outcome = Tuple[bool, str]

SQRT_PI = math.sqrt(math.pi)
LN2 = math.log(2)
CLOSED = {
    "v2": 2 / 3 * SQRT_PI * (2 * math.pi ** 2 - 9 - 12 * LN2),
    "vtilde2": SQRT_PI * (2 * LN2 - 1),
    "K2": SQRT_PI * LN2 / 4,
    "I20": SQRT_PI * (math.sqrt(2) - 1 + LN2 - math.log(math.sqrt(2) + 1)),
    "I22": SQRT_PI * (2 - math.sqrt(2) - 2 * LN2 + math.log(math.sqrt(2) + 1)),
}


def _worst(label: str, errors: Dict[str, float], tol: float) -> Outcome:
    return _within(label, errors, dict.fromkeys(errors, tol))


def _within(label: str, errors: Dict[str, float], tols: Dict[str, float]) -> Outcome:
    ratios = {k: errors[k] / tols[k] for k in errors}
    key = max(ratios, key=ratios.get)
    return ratios[key] <= 1, f"{label}: worst {key} at {errors[key]:.2e} (tol {tols[key]:.0e})"


def check_constants_tables() -> Outcome:
    rel = {}
    for name, table in REFERENCE_VALUES.items():
        for d, ref in table.items():
            rel[f"{name}_{d}"] = abs(constant(name, d).value.value - ref) / abs(ref)
    return _worst("relative error", rel, 1e-6)


def check_closed_forms() -> Outcome:
    v2 = v_const(2)
    got = {"v2": v2.value.value, "vtilde2": vtilde_const(2).value.value, "K2": k_const(2).value.value,
           "I20": v2.components["I0"].value, "I22": v2.components["Idd"].value}
    return _worst("absolute error", {k: abs(got[k] - CLOSED[k]) for k in CLOSED}, 1e-10)


def check_quadrature_oracles() -> Outcome:
    diffs = {}
    for d in range(2, 7):
        v, vt = v_const(d), vtilde_const(d)
        diffs[f"I0_{d}"] = abs(oracle_integral("I0", d).value - v.components["I0"].value)
        diffs[f"Idd_{d}"] = abs(oracle_integral("Idd", d).value - v.components["Idd"].value)
        diffs[f"J0_{d}"] = abs(oracle_integral("J0", d).value - vt.components["J0"].value)
    for d in range(2, 5):
        diffs[f"K_{d}"] = abs(oracle_integral("K", d, eps=1e-7).value - k_const(d).value.value)
    return _worst("series vs quadrature", diffs, 1e-5)


def check_exact_laws() -> Outcome:
    errs = {}
    for d in (1, 2, 3, 4):
        for n in (1, 5, 17, 30):
            exact = [Fraction(p) for p in chain_kernel(Model.of("simplex", d), n, exact=True).exact]
            errs[f"simplex-sum d={d} n={n}"] = float(abs(sum(exact) - 1))
            flt = chain_kernel(Model.of("simplex", d), n).probs
            errs[f"simplex-forms d={d} n={n}"] = max(abs(a - float(b)) for a, b in zip(flt, exact))
            if d >= 2 and n in (5, 17):
                alt = hypercube_kernel_alternating(d, n)
                quad = hypercube_kernel_quad(d, n)
                errs[f"cube-sum d={d} n={n}"] = float(abs(sum(alt) - 1))
                errs[f"cube-forms d={d} n={n}"] = max(abs(a - float(b)) for a, b in zip(quad, alt))
    for d in (2, 3):
        table = chain_moments_exact(Model.of("simplex", d), 30, exact=True)
        errs[f"recurrence-altsum d={d}"] = max(
            float(abs(Fraction(r.mean_exact) - chain_mean_altsum(d, r.n))) for r in table.rows)
    floats = chain_moments_exact(Model.of("simplex", 2), 2000)
    errs["simplex d=2 mean identity"] = max(abs(r.mean - (harmonic_float(r.n) + 2) / 3) for r in floats.rows)
    cube = chain_moments_exact(Model.of("cube", 2), 30, exact=True)
    errs["cube d=2 mean identity"] = max(abs(r.mean - closed_form_d2("cube-mean", r.n)) for r in cube.rows)
    errs["cube d=2 var identity"] = max(abs(r.var - closed_form_d2("cube-var", r.n)) for r in cube.rows)
    errs["simplex d=2 var identity n=1"] = abs(closed_form_d2("simplex-var", 1))
    errs["phi forms"] = max(abs(phi_product(d, n).difference) for d in (2, 3, 5) for n in (1, 10, 100, 1000))
    return _worst("identity error", errs, 1e-10)


def check_zeros() -> Outcome:
    errs, tols = {}, {}
    for d in range(2, 51):
        spectrum = char_zeros(d, 1.0)
        errs[f"residual d={d}"], tols[f"residual d={d}"] = max(spectrum.residuals), 1e-10
        z = all_zeros(d, 1.0)
        errs[f"vieta d={d}"] = abs(complex(np.sum(z)) + d * (d + 1) / 2)
        tols[f"vieta d={d}"] = 1e-10 * d * (d + 1) / 2
        if d % 2 == 0:
            errs[f"real zero d={d}"] = min(abs(lam + d + 1) for lam in spectrum.lambdas)
            tols[f"real zero d={d}"] = 1e-12 * (d + 1)
    h = 1e-3
    for d in (2, 3, 5, 8):
        f = {k: dominant_branch(d, math.exp(k * h)) for k in (-2, -1, 1, 2)}
        # five-point stencils around f(0) = 0
        d1 = (8 * (f[1] - f[-1]) - (f[2] - f[-2])) / (12 * h)
        d2 = (-f[2] + 16 * f[1] + 16 * f[-1] - f[-2]) / (12 * h * h) / 2
        d3 = (f[2] - 2 * f[1] + 2 * f[-1] - f[-2]) / (2 * h ** 3) / 6
        c = branch_series_coeffs(d)
        errs[f"branch series d={d}"] = max(abs(d1 - c[0]), abs(d2 - c[1]), abs(d3 - c[2]))
        tols[f"branch series d={d}"] = 1e-6
    return _within("zero checks", errs, tols)


def check_clt_parameters() -> Outcome:
    g = EULER_GAMMA
    s2, h2 = chain_params_simplex(2), chain_params_hypercube(2)
    errs = {
        "c1(2)": abs(s2.c1 - 2 / 3),
        "c2(2)": abs(s2.c2 - (5 * math.pi ** 2 / 54 - 26 / 27)),
        "cube c1(2)": abs(h2.c1 - (1 + g) / 2),
        "cube c2(2)": abs(h2.c2 - (g + math.pi ** 2 / 6 - 2) / 4),
    }
    tols = {"c1(2)": 1e-8, "c2(2)": 1e-8, "cube c1(2)": 1e-10, "cube c2(2)": 1e-10}
    for d in range(2, 13):
        s, h = chain_params_simplex(d), chain_params_hypercube(d)
        errs[f"imag d={d}"] = max(abs(s.c1_imag), abs(s.c2_imag), abs(h.c1_imag), abs(h.c2_imag))
        tols[f"imag d={d}"] = 1e-12
    return _within("clt constants", errs, tols)


def _z_failures(report, fields=("z_mean", "z_var")) -> List[str]:
    bad = []
    for row in report.rows:
        for field in fields:
            z = getattr(row, field)
            if z is not None and abs(z) > 4:
                bad.append(f"{row.statistic.value} n={row.n} {field}={z:.2f}")
    return bad


def check_monte_carlo_exact(quick: bool = False) -> Outcome:
    seed = settings.SEED
    reps = 2000 if quick else 10_000
    ns = [1000] if quick else [1000, 10_000]
    bad = []
    d1 = run_experiment(ExperimentConfig(model="simplex", d=1, ns=[100], replications=5000, seed=seed,
                                         statistics=[Statistic.PARETO, Statistic.CHAIN, Statistic.DOMINATING]))
    bad += _z_failures(d1, ("z_mean",))
    for model, d in (("simplex", 2), ("simplex", 3), ("cube", 3)):
        rep = run_experiment(ExperimentConfig(model=model, d=d, ns=ns, replications=reps, seed=seed,
                                              statistics=[Statistic.CHAIN, Statistic.DOMINATING]))
        bad += [f"{model} d={d} {b}" for b in _z_failures(rep)]
    return not bad, "all within 4 SE" if not bad else "; ".join(bad)


def check_pareto_maxima_asymptotics(quick: bool = False) -> Outcome:
    n, reps = 10_000, 500 if quick else 2000
    rep = run_experiment(ExperimentConfig(model="simplex", d=2, ns=[n], replications=reps, seed=settings.SEED,
                                          statistics=[Statistic.PARETO, Statistic.MAXIMA]))
    pareto, maxima = rep.row("pareto", n), rep.row("maxima", n)
    mean_gap = abs(pareto.mean - pareto_mean_asym(2, n).value)
    var_ratio = pareto.var / math.sqrt(n) / v_const(2).value.value
    max_gap = abs(maxima.mean - maxima_mean_asym(2, n).value)
    passed = mean_gap <= 2 and abs(var_ratio - 1) <= 0.1 and max_gap <= 2
    return passed, f"pareto mean gap {mean_gap:.3f}, variance ratio {var_ratio:.4f}, maxima mean gap {max_gap:.3f}"


def check_normality(quick: bool = False) -> Outcome:
    reps = 1000 if quick else 2000
    pareto = run_experiment(ExperimentConfig(model="simplex", d=2, ns=[10_000], replications=reps,
                                             seed=settings.SEED, statistics=[Statistic.PARETO]))
    chain_ns = [100, 1000, 10_000]
    chain = run_experiment(ExperimentConfig(model="simplex", d=2, ns=chain_ns, replications=reps,
                                            seed=settings.SEED, statistics=[Statistic.CHAIN]))
    ks_pareto = pareto.row("pareto", 10_000).ks
    ks_chain = [chain.row("chain", n).ks for n in chain_ns]
    monotone = all(b < a for a, b in zip(ks_chain, ks_chain[1:]))
    passed = ks_pareto <= 0.05 and monotone and ks_chain[-1] <= 0.2
    return passed, f"pareto KS {ks_pareto:.4f}; chain KS {', '.join(f'{k:.4f}' for k in ks_chain)}"


def check_dominating_limits() -> Outcome:
    lim2 = dom_limits(Model.of("simplex", 2))
    excess = {d: dom_limits(Model.of("simplex", d)).mean - 1 for d in range(2, 13)}
    decreasing = all(excess[d + 1] < excess[d] for d in range(2, 12))
    ratios = [excess[d] / (math.sqrt(math.pi * d) * 4.0 ** (-d)) for d in range(5, 13)]
    bounded = max(ratios) / min(ratios) < 2
    passed = abs(lim2.mean - 1.23372) <= 0.01 and abs(lim2.var - 0.2189) <= 0.01 and decreasing and bounded
    return passed, (f"d=2 limits ({lim2.mean:.5f}, {lim2.var:.5f}); excess decreasing={decreasing}; "
                    f"scale ratios in [{min(ratios):.3f}, {max(ratios):.3f}]")


class ValidationSuite:
    """Registry of acceptance checks; execute() runs them in registration order"""

    def __init__(self, quick: bool = False):
        self.quick = quick
        self.checks: Dict[str, Callable[[], Outcome]] = {
            "constants-tables": check_constants_tables,
            "closed-forms": check_closed_forms,
            "quadrature-oracles": check_quadrature_oracles,
            "exact-laws": check_exact_laws,
            "zeros": check_zeros,
            "clt-parameters": check_clt_parameters,
            "monte-carlo-exact": lambda: check_monte_carlo_exact(self.quick),
            "pareto-maxima-asymptotics": lambda: check_pareto_maxima_asymptotics(self.quick),
            "normality": lambda: check_normality(self.quick),
            "dominating-limits": check_dominating_limits,
        }

    def execute(self, names: Optional[Iterable[str]] = None) -> ValidationReport:
        selected = list(names) if names else list(self.checks)
        unknown = [n for n in selected if n not in self.checks]
        if unknown:
            raise ValueError(f"Unknown check(s) {', '.join(unknown)}")
        report = ValidationReport()
        for name in selected:
            started = time.perf_counter()
            try:
                passed, detail = self.checks[name]()
            except Exception as e:
                logger.error(f"check {name} failed with {type(e).__name__}: {e}")
                passed, detail = False, f"Error: {e}"
            seconds = time.perf_counter() - started
            logger.info(f"{'PASS' if passed else 'FAIL'} {name} ({seconds:.1f}s): {detail}")
            report.checks.append(CheckResult(name=name, passed=bool(passed), detail=detail, seconds=seconds))
        return report

    def get_available_checks(self) -> list:
        return list(self.checks.keys())
