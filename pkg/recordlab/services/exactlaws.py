"""Exact finite-n laws of chain and dominating records."""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, NamedTuple, Sequence, Tuple

import mpmath
import numpy as np
from scipy import special

from ..core.charpoly import char_zeros
from ..core.exceptions import ExactModeError
from ..core.specfun import harmonic, harmonic_float, ln_gamma, power_sum, quad1d
from ..models.domain import KernelDist, Model, ModelKind, MomentRow, MomentTable, Statistic

logger = logging.getLogger(__name__)

EXACT_N_MAX = 64
RECURRENCE_N_MAX = 20_000


class PhiComparison(NamedTuple):
    product: float
    gamma_form: float
    difference: float


class RecurrenceSolution(NamedTuple):
    alternating: List[float]
    direct: List[float]


def _rising(j: int, d: int) -> int:
    """(dj+1)(dj+2)...(dj+d)"""
    return math.prod(range(d * j + 1, d * j + d + 1))


def _binom_row(n: int) -> np.ndarray:
    k = np.arange(n + 1)
    return special.gammaln(n + 1) - special.gammaln(k + 1) - special.gammaln(n - k + 1)


# --------------------------------------------------------------------------
# kernel

def _simplex_kernel_exact(d: int, n: int) -> List[Fraction]:
    probs = []
    for k in range(n):
        total = Fraction(0)
        for j in range(d):
            a = Fraction(j + 1, d)
            # Gamma(k+a)/Gamma(n+a) is a finite product
            ratio = Fraction(1)
            for i in range(k, n):
                ratio /= i + a
            total += math.comb(d - 1, j) * (-1) ** j * ratio
        probs.append(math.comb(n - 1, k) * math.factorial(n - k - 1) * total)
    return probs


def _simplex_kernel_float(d: int, n: int) -> np.ndarray:
    k = np.arange(n, dtype=float)
    log_binom = _binom_row(n - 1)
    total = np.zeros(n)
    for j in range(d):
        a = (j + 1) / d
        total += math.comb(d - 1, j) * (-1) ** j * np.exp(
            log_binom + special.gammaln(n - k) + special.gammaln(k + a) - special.gammaln(n + a))
    return np.clip(total, 0.0, None)


def hypercube_kernel_alternating(d: int, n: int) -> List[Fraction]:
    """binom(n-1,k) sum_i binom(n-1-k,i) (-1)^i / (k+i+1)^d in exact rationals"""
    probs = []
    for k in range(n):
        m = n - 1 - k
        s = sum(Fraction(math.comb(m, i) * (-1) ** i, (k + i + 1) ** d) for i in range(m + 1))
        probs.append(math.comb(n - 1, k) * s)
    return probs


def hypercube_kernel_quad(d: int, n: int) -> List[float]:
    norm = mpmath.factorial(d - 1)
    probs = []
    for k in range(n):
        c = math.comb(n - 1, k)

        def f(t, k=k):
            return c * t ** k * (1 - t) ** (n - 1 - k) * (-mpmath.log(t)) ** (d - 1) / norm

        probs.append(quad1d(f, 0, 1, eps=1e-12, dps=25).value)
    return probs


def chain_kernel(model: Model, n: int, exact: bool = False) -> KernelDist:
    """Distribution of I_n, the number of later points among p_2..p_n dominating p_1"""
    if n < 1:
        raise ValueError("chain_kernel needs n >= 1")
    d = model.d
    if model.kind == ModelKind.SIMPLEX:
        if exact:
            fr = _simplex_kernel_exact(d, n)
            return KernelDist(model=model.kind, d=d, n=n, probs=[float(p) for p in fr],
                              exact=[str(p) for p in fr])
        return KernelDist(model=model.kind, d=d, n=n, probs=_simplex_kernel_float(d, n).tolist())
    if exact:
        fr = hypercube_kernel_alternating(d, n)
        return KernelDist(model=model.kind, d=d, n=n, probs=[float(p) for p in fr],
                          exact=[str(p) for p in fr])
    return KernelDist(model=model.kind, d=d, n=n, probs=hypercube_kernel_quad(d, n))


# --------------------------------------------------------------------------
# chain-record moments

def chain_moments_exact(model: Model, n_max: int, exact: bool = False) -> MomentTable:
    """Mean and variance of Y_n for n = 1..n_max.

    Simplex: the kernel recurrence mu_n = 1 + sum_k pi_{n,k} mu_k, s_n = 1 + sum_k pi_{n,k}(2 mu_k + s_k).
    Hypercube: each row from the product-form PGF at elevated precision, or
    the exact alternating kernel when exact=True.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > RECURRENCE_N_MAX:
        raise ValueError(f"n_max above {RECURRENCE_N_MAX} is outside the O(n^2) recurrence range")
    table = MomentTable(model=model.kind, d=model.d, statistic=Statistic.CHAIN)
    if model.kind == ModelKind.HYPERCUBE and not exact:
        for n in range(1, n_max + 1):
            mean, var = chain_pgf_moments(model, n)
            table.rows.append(MomentRow(n=n, mean=mean, var=var))
        return table

    kernel = {
        (ModelKind.SIMPLEX, True): _simplex_kernel_exact,
        (ModelKind.HYPERCUBE, True): hypercube_kernel_alternating,
        (ModelKind.SIMPLEX, False): _simplex_kernel_float,
    }[(model.kind, exact)]
    if exact:
        mu, sec = [Fraction(0)], [Fraction(0)]
        for n in range(1, n_max + 1):
            pi = kernel(model.d, n)
            mu.append(1 + sum(p * m for p, m in zip(pi, mu)))
            sec.append(1 + sum(p * (2 * m + s) for p, m, s in zip(pi, mu, sec)))
            var = sec[n] - mu[n] ** 2
            table.rows.append(MomentRow(n=n, mean=float(mu[n]), var=float(var),
                                        mean_exact=str(mu[n]), var_exact=str(var)))
        return table

    mu = np.zeros(n_max + 1)
    sec = np.zeros(n_max + 1)
    for n in range(1, n_max + 1):
        pi = kernel(model.d, n)
        mu[n] = 1.0 + math.fsum(pi * mu[:n])
        sec[n] = 1.0 + math.fsum(pi * (2 * mu[:n] + sec[:n]))
        table.rows.append(MomentRow(n=n, mean=mu[n], var=max(sec[n] - mu[n] ** 2, 0.0)))
    return table


def chain_mean_altsum(d: int, n: int) -> Fraction:
    """mu_n = sum_k binom(n,k) (-1)^{k-1} prod_{1<=j<k} (1 - d!/((dj+1)...(dj+d)))"""
    if n > EXACT_N_MAX:
        raise ExactModeError(f"chain_mean_altsum is limited to n <= {EXACT_N_MAX}")
    fact = math.factorial(d)
    total, g = Fraction(0), Fraction(1)
    for k in range(1, n + 1):
        if k > 1:
            g *= 1 - Fraction(fact, _rising(k - 1, d))
        total += math.comb(n, k) * (-1) ** (k - 1) * g
    return total


def _pgf_factors(model: Model, k_max: int) -> List:
    """c_i with P_n(y) = sum_k binom(n,k)(-1)^k prod_{i<=k}(1 - y c_i); c_1 = 1"""
    d = model.d
    if model.kind == ModelKind.SIMPLEX:
        fact = math.factorial(d)
        return [None, Fraction(1)] + [Fraction(fact, _rising(i - 1, d)) for i in range(2, k_max + 1)]
    return [None, Fraction(1)] + [Fraction(1, i ** d) for i in range(2, k_max + 1)]


def _work_dps(n: int) -> int:
    # binomials reach 2^n, so cancellation costs about 0.302 n digits
    return int(0.302 * n) + 30


def chain_pgf(model: Model, n: int, y: float) -> float:
    """P_n(y) = E[y^{Y_n}] from the product-form alternating sum"""
    if n == 0:
        return 1.0
    c = _pgf_factors(model, n)
    if n <= EXACT_N_MAX:
        yy = Fraction(y)
        total, g = Fraction(0), Fraction(1)
        for k in range(0, n + 1):
            if k >= 1:
                g *= 1 - yy * c[k]
            total += math.comb(n, k) * (-1) ** k * g
        return float(total)
    logger.warning(f"chain_pgf: n={n} is beyond the exact range (n <= {EXACT_N_MAX}); "
                   f"evaluating in floating point at {_work_dps(n)} digits")
    with mpmath.workdps(_work_dps(n)):
        yy = mpmath.mpf(y)
        total, g, binom = mpmath.mpf(0), mpmath.mpf(1), mpmath.mpf(1)
        for k in range(0, n + 1):
            if k >= 1:
                g *= 1 - yy * mpmath.mpf(c[k].numerator) / c[k].denominator
                binom = binom * (n - k + 1) / k
            total += binom * (-1) ** k * g
        return float(total)


def chain_pgf_moments(model: Model, n: int) -> Tuple[float, float]:
    """Mean and variance of Y_n from P_n'(1) and P_n''(1)"""
    c = _pgf_factors(model, n)
    with mpmath.workdps(_work_dps(n)):
        p1, p2 = mpmath.mpf(0), mpmath.mpf(0)
        g, s, binom = mpmath.mpf(1), mpmath.mpf(0), mpmath.mpf(1)
        for k in range(1, n + 1):
            binom = binom * (n - k + 1) / k
            if k >= 2:
                ci = mpmath.mpf(c[k].numerator) / c[k].denominator
                g *= 1 - ci
                s += ci / (1 - ci)
            sign = 1 if k % 2 else -1
            p1 += sign * binom * g
            p2 -= 2 * sign * binom * g * s
        var = p2 + p1 - p1 ** 2
        return float(p1), max(float(var), 0.0)


def chain_moments_at(model: Model, n: int) -> Tuple[float, float]:
    """Mean and variance of Y_n at a single n"""
    if n < 1:
        raise ValueError("n must be >= 1")
    if model.d == 1:
        return harmonic_float(n), harmonic_float(n) - harmonic_float(n, 2)
    return chain_pgf_moments(model, n)


def phi_product(d: int, n: int) -> PhiComparison:
    """prod_{1<=j<n}(1 - d!/((dj+1)...(dj+d))) directly and through Gamma ratios of the zeros"""
    if n < 1:
        raise ValueError("n must be >= 1")
    fact = math.factorial(d)
    logs = [math.log1p(-fact / _rising(j, d)) for j in range(1, n)]
    product = math.exp(math.fsum(logs))
    if d == 1:
        return PhiComparison(product, 1.0 / n, product - 1.0 / n)
    lambdas = char_zeros(d, 1.0).lambdas
    total = -math.log(n)
    for ell, lam in enumerate(lambdas, start=1):
        total += (ln_gamma(n - lam / d) + ln_gamma(1 + ell / d)
                  - ln_gamma(n + ell / d) - ln_gamma(1 - lam / d))
    gamma_form = float(np.exp(complex(total)).real)
    return PhiComparison(product, gamma_form, product - gamma_form)


# --------------------------------------------------------------------------
# dominating records

@lru_cache(maxsize=64)
def _dom_simplex_terms(d: int, n: int) -> Tuple[np.ndarray, np.ndarray]:
    k = np.arange(1, n + 1, dtype=float)
    log_a = k * math.lgamma(d + 1) + d * special.gammaln(k) - special.gammaln(d * k + 1)
    h_prev = np.concatenate([[0.0], np.cumsum(1.0 / k[:-1] ** d)])
    return np.exp(log_a), h_prev


def dom_moments(model: Model, n: int, exact: bool = False) -> Tuple[float, float]:
    """Mean and variance of the number Z_n of dominating records"""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = model.d
    if model.kind == ModelKind.HYPERCUBE or d == 1:
        hd, h2d = harmonic(n, d), harmonic(n, 2 * d)
        if exact and hd.exact is not None:
            return hd.exact, hd.exact - h2d.exact
        return hd.value, hd.value - h2d.value
    if exact:
        if n > EXACT_N_MAX * 16:
            raise ExactModeError("exact dominating moments are limited to n <= 1024")
        fact = math.factorial(d)
        mean, second = Fraction(0), Fraction(0)
        for k in range(1, n + 1):
            a = Fraction(fact ** k * math.factorial(k - 1) ** d, math.factorial(d * k))
            mean += a
            second += a * harmonic(k - 1, d).exact if k > 1 else 0
        return mean, 2 * second + mean - mean ** 2
    a, h_prev = _dom_simplex_terms(d, n)
    mean = math.fsum(a)
    var = 2 * math.fsum(a * h_prev) + mean - mean ** 2
    return mean, max(var, 0.0)


def dom_moments_table(model: Model, n_max: int) -> MomentTable:
    table = MomentTable(model=model.kind, d=model.d, statistic=Statistic.DOMINATING)
    for n in range(1, n_max + 1):
        mean, var = dom_moments(model, n)
        table.rows.append(MomentRow(n=n, mean=float(mean), var=float(var)))
    return table


# --------------------------------------------------------------------------
# d = 2 closed forms

CLOSED_FORMS = ("simplex-mean", "simplex-var", "cube-mean", "cube-var")


def _simplex_d2_var_series(n: int):
    def term(j, ar):
        lbin = ar.lgamma(n + j + 1) - ar.lgamma(j + 1) - math.lgamma(n + 1)
        lbin_half = ar.lgamma(n + j + 1.5) - ar.lgamma(j + 1.5) - math.lgamma(n + 1)
        return ((2 * j - 1) / j ** 2 * ar.exp(-lbin)
                - 2 * j / (j + 0.5) ** 2 * ar.exp(-lbin_half))

    return power_sum(term, 1, n + 2, eps=1e-12)


def closed_form_d2(statistic: str, n: int) -> float:
    """d=2 identities: simplex mean/variance of Y_n and hypercube mean/variance"""
    if n < 1:
        raise ValueError("n must be >= 1")
    h1, h2 = harmonic_float(n), harmonic_float(n, 2)
    if statistic == "simplex-mean":
        return (h1 + 2) / 3
    if statistic == "simplex-var":
        series = _simplex_d2_var_series(n).value
        return 5 / 27 * h1 + 2 * math.pi ** 2 / 27 + h2 / 9 - 26 / 27 - 2 / 9 * series
    if statistic == "cube-mean":
        return (h1 + 1) / 2
    if statistic == "cube-var":
        return (h1 + h2 - 2) / 4
    raise ValueError(f"Unknown statistic '{statistic}', expected one of {', '.join(CLOSED_FORMS)}")


# --------------------------------------------------------------------------
# general recurrence a_n = b_n + sum_k pi_{n,k} a_k

def _binomial_inverse(values: Sequence[Fraction]) -> List[Fraction]:
    n = len(values)
    return [sum(math.comb(m, j) * (-1) ** (m - j) * values[j] for j in range(m + 1)) for m in range(n)]


def solve_record_recurrence(d: int, b: Callable[[int], float], n_max: int) -> RecurrenceSolution:
    """Solve a_n = b_n + sum_{k<n} pi_{n,k} a_k (simplex kernel) two ways.

    The alternating route iterates the binomial transform
    a~_{n+1} = -(1 - d!/P_n) a~_n + b~_n + b~_{n+1} in exact rationals; the
    direct route runs the O(n^2) kernel recurrence in floats.
    """
    if n_max > EXACT_N_MAX:
        raise ExactModeError(f"the alternating route is limited to n_max <= {EXACT_N_MAX}")
    bs = [Fraction(0)] + [Fraction(b(n)) for n in range(1, n_max + 1)]
    bt = _binomial_inverse(bs)
    fact = math.factorial(d)
    at = [Fraction(0)]
    for n in range(n_max):
        at.append(-(1 - Fraction(fact, _rising(n, d))) * at[n] + bt[n] + bt[n + 1])
    alternating = [float(sum(math.comb(n, k) * at[k] for k in range(n + 1))) for n in range(n_max + 1)]

    direct = np.zeros(n_max + 1)
    for n in range(1, n_max + 1):
        pi = _simplex_kernel_float(d, n)
        direct[n] = float(bs[n]) + math.fsum(pi * direct[:n])
    return RecurrenceSolution(alternating, direct.tolist())
