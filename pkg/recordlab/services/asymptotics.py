"""Asymptotic means, variances and limit-law parameters of the record counts."""
import logging
import math
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np
from scipy import special

from ..core.charpoly import char_zeros, dominant_branch, quasi_power_prefactor
from ..core.exceptions import DivergentLimitError
from ..core.specfun import EULER_GAMMA, harmonic, harmonic_float, polygamma, power_sum
from ..models.domain import (AsymptoticMoment, AsymptoticTerm, ChainParams, DomLimits, Model,
                             ModelKind, Statistic)
from .varconstants import k_const, v_const, vtilde_const

logger = logging.getLogger(__name__)


def _moment(kind: str, d: int, n: float, terms: List[AsymptoticTerm], error_class: str) -> AsymptoticMoment:
    value = math.fsum(t.coefficient * n ** t.exponent * (math.log(n) if t.log else 1.0) for t in terms)
    return AsymptoticMoment(kind=kind, d=d, n=n, value=value, terms=terms, error_class=error_class)


def pareto_mean_asym(d: int, n: float) -> AsymptoticMoment:
    """Expected number of Pareto records in the simplex"""
    if d < 1 or n <= 1:
        raise ValueError("pareto_mean_asym needs d >= 1 and n > 1")
    terms = []
    for j in range(d - 1):
        coef = math.comb(d - 1, j) * (-1) ** j * math.gamma((j + 1) / d) * d / (d - 1 - j)
        terms.append(AsymptoticTerm(coefficient=coef, exponent=(d - 1 - j) / d))
    sign = (-1) ** (d - 1)
    terms.append(AsymptoticTerm(coefficient=sign, exponent=0.0, log=True))
    terms.append(AsymptoticTerm(coefficient=sign * EULER_GAMMA, exponent=0.0))
    return _moment("pareto-mean", d, n, terms, "O(n^-eps)")


def maxima_mean_asym(d: int, n: float) -> AsymptoticMoment:
    """Expected number of maxima of n uniform points in the simplex"""
    if d < 1 or n < 1:
        raise ValueError("maxima_mean_asym needs d >= 1 and n >= 1")
    terms = [AsymptoticTerm(coefficient=math.comb(d - 1, j) * (-1) ** j * math.gamma((j + 1) / d),
                            exponent=(d - 1 - j) / d) for j in range(d)]
    return _moment("maxima-mean", d, n, terms, "O(n^-eps)")


def _rising_float(j: np.ndarray, d: int) -> np.ndarray:
    return np.prod([d * j + i for i in range(1, d + 1)], axis=0)


def _c2_series(d: int):
    fact = math.factorial(d)

    def term(j, ar):
        p = _rising_float(j, d)
        dh = sum(1.0 / (d * j + i) for i in range(1, d + 1))
        return dh / (p * (1.0 - fact / p) ** 2)

    return power_sum(term, 1, d + 1, eps=1e-12)


@lru_cache(maxsize=32)
def chain_params_simplex(d: int) -> ChainParams:
    """mu, sigma^2, c1, c2 in E[Y_n] = mu H_n + c1 + o(1), V[Y_n] = sigma^2 H_n + c2 + o(1)"""
    if d < 2:
        raise ValueError("chain_params_simplex needs d >= 2")
    h1, h2, h3 = (harmonic(d, a).value for a in (1, 2, 3))
    lambdas = char_zeros(d, 1.0).lambdas
    psi_sum = sum(polygamma(0, -lam / d) - polygamma(0, ell / d) for ell, lam in enumerate(lambdas, 1))
    tri_sum = sum(polygamma(1, -lam / d) - polygamma(1, ell / d) for ell, lam in enumerate(lambdas, 1))
    c1 = psi_sum / (d * h1)
    series = _c2_series(d)
    c2 = (1 / 6 + math.pi ** 2 / (6 * d ** 2 * h1 ** 2) - 2 * h3 / (3 * h1 ** 3)
          + h2 ** 2 / (2 * h1 ** 4) + tri_sum / (d ** 2 * h1 ** 2) + c1 * h2 / h1 ** 2
          - 2 * math.factorial(d) / h1 * series.value)
    return ChainParams(model=ModelKind.SIMPLEX, d=d, mu=1 / (d * h1), sigma2=h2 / (d * h1 ** 3),
                       c1=complex(c1).real, c2=complex(c2).real,
                       c1_imag=complex(c1).imag, c2_imag=complex(c2).imag, c2_series=series)


@lru_cache(maxsize=32)
def chain_params_hypercube(d: int) -> ChainParams:
    """mu = 1/d and sigma^2 = 1/d^2 with the log n constants of the hypercube chain records"""
    if d < 2:
        raise ValueError("chain_params_hypercube needs d >= 2")
    omegas = [np.exp(2j * math.pi * ell / d) for ell in range(1, d)]
    c1 = EULER_GAMMA + sum(polygamma(0, 1 - w) for w in omegas) / d
    c2 = (EULER_GAMMA / d - math.pi ** 2 / (6 * d)
          + sum(polygamma(0, 1 - w) + (1 - 2 * w) * polygamma(1, 1 - w) for w in omegas) / d ** 2)
    return ChainParams(model=ModelKind.HYPERCUBE, d=d, mu=1 / d, sigma2=1 / d ** 2,
                       c1=complex(c1).real, c2=complex(c2).real,
                       c1_imag=complex(c1).imag, c2_imag=complex(c2).imag)


def chain_params(model: Model) -> ChainParams:
    if model.kind == ModelKind.SIMPLEX:
        return chain_params_simplex(model.d)
    return chain_params_hypercube(model.d)


def _log_scale(model: Model, n: float) -> float:
    # the simplex expansions are in H_n, the hypercube ones in log n
    if model.kind == ModelKind.SIMPLEX:
        return harmonic_float(int(n)) if float(n).is_integer() else math.log(n) + EULER_GAMMA
    return math.log(n)


def chain_mean_asym(model: Model, n: float) -> float:
    p = chain_params(model)
    return p.mu * _log_scale(model, n) + p.c1


def chain_variance_asym(model: Model, n: float) -> float:
    p = chain_params(model)
    return p.sigma2 * _log_scale(model, n) + p.c2


def pgf_quasi_power(d: int, n: float, y: float) -> complex:
    """Q(y) n^{lambda_d(y)/d}, the quasi-power approximation of P_n(y) (simplex)"""
    return quasi_power_prefactor(d, y) * n ** (dominant_branch(d, y) / d)


def dom_limits(model: Model) -> DomLimits:
    """Limits of the dominating-record mean and variance as n -> infinity"""
    d = model.d
    mean_scale = math.sqrt(math.pi * d) * 4.0 ** (-d)
    if model.kind == ModelKind.HYPERCUBE or d == 1:
        if d == 1:
            raise DivergentLimitError("the d=1 dominating-record mean grows like log n")
        zd, z2d = float(special.zeta(d)), float(special.zeta(2 * d))
        return DomLimits(model=model.kind, d=d, mean=zd, var=zd - z2d,
                         mean_scale=mean_scale, var_scale=3 * mean_scale)
    # terms decay geometrically like (d!/d^d)^k, far below 1e-17 by k = 400
    k = np.arange(1, 401, dtype=float)
    log_a = k * math.lgamma(d + 1) + d * special.gammaln(k) - special.gammaln(d * k + 1)
    a = np.exp(log_a)
    h_prev = np.concatenate([[0.0], np.cumsum(1.0 / k[:-1] ** d)])
    mean = math.fsum(a)
    var = 2 * math.fsum(a * h_prev) + mean - mean ** 2
    return DomLimits(model=model.kind, d=d, mean=mean, var=var,
                     mean_scale=mean_scale, var_scale=3 * mean_scale)


def record_variance_asym(kind: str, d: int, n: float, precision: Optional[str] = None) -> float:
    """Leading variance: pareto and maxima in the simplex, chain-simplex and chain-cube"""
    if kind == "pareto":
        return v_const(d, precision=precision).value.value * n ** (1 - 1 / d)
    if kind == "maxima":
        return vtilde_const(d, precision=precision).value.value * n ** (1 - 1 / d)
    if kind == "chain-simplex":
        return chain_variance_asym(Model.of("simplex", d), n)
    if kind == "chain-cube":
        return chain_variance_asym(Model.of("cube", d), n)
    raise ValueError(f"Unknown kind '{kind}', expected pareto, maxima, chain-simplex or chain-cube")


def summary_rows(d: int) -> List[Dict]:
    """Mean and variance laws per (record type, model) for one dimension"""
    rows = []
    simplex, cube = Model.of("simplex", d), Model.of("cube", d)
    if d >= 2:
        v = v_const(d).value.value
        vt = vtilde_const(d).value.value
        rows.append({"statistic": Statistic.PARETO.value, "model": "simplex",
                     "mean": f"{d / (d - 1) * math.gamma(1 / d):.15g} n^{(d - 1) / d:.6g}",
                     "variance": f"{v:.15g} n^{(d - 1) / d:.6g}"})
        rows.append({"statistic": Statistic.MAXIMA.value, "model": "simplex",
                     "mean": f"{math.gamma(1 / d):.15g} n^{(d - 1) / d:.6g}",
                     "variance": f"{vt:.15g} n^{(d - 1) / d:.6g}"})
        rows.append({"statistic": "K", "model": "simplex",
                     "mean": "", "variance": f"K={k_const(d).value.value:.15g}"})
        for model in (simplex, cube):
            p = chain_params(model)
            scale = "H_n" if model.kind == ModelKind.SIMPLEX else "log n"
            rows.append({"statistic": Statistic.CHAIN.value, "model": model.kind.value,
                         "mean": f"{p.mu:.15g} {scale} + {p.c1:.15g}",
                         "variance": f"{p.sigma2:.15g} {scale} + {p.c2:.15g}"})
    for model in (simplex, cube):
        try:
            lim = dom_limits(model)
            rows.append({"statistic": Statistic.DOMINATING.value, "model": model.kind.value,
                         "mean": f"{lim.mean:.15g}", "variance": f"{lim.var:.15g}"})
        except DivergentLimitError:
            rows.append({"statistic": Statistic.DOMINATING.value, "model": model.kind.value,
                         "mean": "H_n", "variance": "H_n - H_n^(2)"})
    return rows
