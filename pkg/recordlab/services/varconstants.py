"""Variance constants v_d, v~_d and K_d from their residue series, with quadrature oracles.

All Gamma ratios are formed from log-Gamma differences. Coefficients are kept
as Fractions and converted by the arithmetic backend, so the dd mode carries
them at full working precision.
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional

import mpmath
import numpy as np

from ..core.specfun import (DoubleArith, alternating_sum, backend, p_f_q, power_sum, quad1d, quad2d,
                            working)
from ..models.domain import ConstantReport, SeriesValue

logger = logging.getLogger(__name__)

CONSTANT_NAMES = ("v", "vtilde", "K")
ORACLE_NAMES = ("I0", "Idd", "J0", "K")
K_ORACLE_D_MAX = 8
D_MAX = 12

# published 20-digit values, used by the validation suite
REFERENCE_VALUES: Dict[str, Dict[int, float]] = {
    "v": {2: 2.86126354931117882531, 3: 3.22524364440557689660, 4: 3.97797274421945529293,
          5: 4.84527391716261142227, 6: 5.76349953219656864813, 7: 6.70865122508659036364,
          8: 7.66955044352466504704, 9: 8.64032797420828724931, 10: 9.61764755211375573944,
          11: 10.59949787665695163099, 12: 11.58460783146040977794},
    "vtilde": {2: 0.68468892795003617418, 3: 1.48217318734058368601, 4: 2.35824376120248693742,
               5: 3.27773900597949126685, 6: 4.22231094507706779998, 7: 5.18220766861607848517,
               8: 6.15196290237747445508, 9: 7.12835136584336052793, 10: 8.10938232211584982528,
               11: 9.09377746978668089695, 12: 10.08068646519733081132},
    "K": {2: 0.30714284735694402518, 3: 0.21288246847322099694, 4: 0.19494670282303318190,
          5: 0.20723215129967145855, 6: 0.24331170245183672555, 7: 0.30744565660789322242,
          8: 0.41127010589038583874, 9: 0.57571684566724364328, 10: 0.83615822367711600233,
          11: 1.25179632511407086480, 12: 1.92201040351884736013},
}


class _Combination:
    """Linear combination of SeriesValues accumulated in the backend's native precision"""

    def __init__(self, ar):
        self.ar = ar
        self.total = ar.num(0)
        self.err = 0.0
        self.terms = 0

    def _coef(self, coef):
        return self.ar.num(coef) if isinstance(coef, (int, Fraction)) else coef

    def add(self, coef, sv: SeriesValue) -> "_Combination":
        c = self._coef(coef)
        self.total = self.total + c * sv.native()
        self.err += abs(self.ar.to_float(c)) * sv.err
        self.terms += sv.terms_used
        return self

    def add_exact(self, value) -> "_Combination":
        self.total = self.total + self._coef(value)
        return self

    def result(self) -> SeriesValue:
        rounding = 8 * self.ar.unit * abs(self.ar.to_float(self.total))
        return SeriesValue(value=self.ar.to_float(self.total), err=self.err + rounding,
                           terms_used=self.terms).with_native(self.total)


def _signs(j: np.ndarray) -> np.ndarray:
    first = int(j[0]) % 2
    return np.where((np.arange(len(j)) + first) % 2 == 0, 1.0, -1.0)


def _check(d: int, eps: float, ar) -> None:
    if not 2 <= d <= D_MAX:
        raise ValueError(f"d must be in 2..{D_MAX}")
    if isinstance(ar, DoubleArith) and eps < 1e-12:
        raise ValueError("eps below 1e-12 needs precision='dd'")


def _resolve(eps: Optional[float], precision: Optional[str]):
    ar = backend(precision)
    if eps is None:
        eps = 1e-16 if ar.name == "dd" else 1e-11
    return ar, eps


# --------------------------------------------------------------------------
# v_d

def _i_d0(d: int, ar, eps: float) -> SeriesValue:
    inv = Fraction(1, d)

    def term(j, ar):
        r = ar.num(inv)
        return _signs(j) * ar.exp(ar.lgamma(j + 1 + r) + ar.lgamma(d * j + 1)
                                  - ar.lgamma(j + 2) - ar.lgamma(d * j + d + 1))

    series = alternating_sum(term, 0, ar=ar, eps=eps)
    return _Combination(ar).add(ar.gamma(ar.num(d - 1)), series).result()


def _i_dd(d: int, ar, eps: float) -> SeriesValue:
    inv = Fraction(1, d)

    def power_term(j, ar):
        return ar.exp(ar.lgamma(d * j - d) - ar.lgamma(d * j)) / j

    def alt_term(j, ar):
        r = ar.num(inv)
        return _signs(j) * ar.exp(ar.lgamma(j - 1 + r) + ar.lgamma(d * j - d + 1)
                                  - ar.lgamma(j) - ar.lgamma(d * j + 1))

    gd = ar.gamma(ar.num(d - 1))
    g1 = ar.gamma(ar.num(inv))
    first = power_sum(power_term, 2, d + 1, ar=ar, eps=eps)
    second = alternating_sum(alt_term, 2, ar=ar, eps=eps)
    return _Combination(ar).add(gd * g1, first).add(-gd, second).result()


def _ratio_minus_one(ar, shift: int, base: List) -> object:
    # prod_i (1 + shift/b_i) - 1 through log1p/expm1
    acc = 0
    for b in base:
        acc = acc + ar.log1p(shift / b)
    return ar.expm1(acc)


def _c1_inner(d: int, ell: int, ar, eps: float) -> SeriesValue:
    def term(j, ar):
        r = ar.num(Fraction(1, d))
        a = ar.num(Fraction(ell + 1, d))
        gam = ar.exp(ar.lgamma(j + 1 + r) - ar.lgamma(j + 1 + a)) / (j + 1)
        return gam * _ratio_minus_one(ar, ell + 1 - d, [d * j + i for i in range(1, d + 1)])

    return power_sum(term, 1, 2 + ell / d, ar=ar, eps=eps)


def _c3_inner(d: int, ell: int, ar, eps: float) -> SeriesValue:
    def term(j, ar):
        a = ar.num(Fraction(ell, d))
        gam = ar.exp(ar.lgamma(j + 1 - a) - ar.lgamma(j + 1)) / (d * j + d - ell - 1)
        return gam * _ratio_minus_one(ar, ell + 1 - d, [d * j - ell - 1 + i for i in range(1, d + 1)])

    return power_sum(term, 1, 2 + ell / d, ar=ar, eps=eps)


@lru_cache(maxsize=64)
def v_const(d: int, eps: Optional[float] = None, precision: Optional[str] = None) -> ConstantReport:
    """v_d in V[X_n] ~ v_d n^{1-1/d} for Pareto records in the simplex"""
    ar, eps = _resolve(eps, precision)
    _check(d, eps, ar)
    with working(ar):
        i0 = _i_d0(d, ar, eps)
        idd = _i_dd(d, ar, eps)
        if d % 2:
            c2 = SeriesValue(value=0.0, err=0.0).with_native(ar.num(0))
        else:
            g = ar.gamma(ar.num(Fraction(d + 1, d))) / (d * (d - 1))
            c2 = _Combination(ar).add(2, i0).add_exact(-2 * g).result()

        c1 = _Combination(ar)
        c3 = _Combination(ar)
        for ell in range(d - 1):
            weight = math.comb(d - 1, ell) * ar.gamma(ar.num(Fraction(ell + 1, d)))
            c1.add((-1) ** ell * weight, _c1_inner(d, ell, ar, eps))
            c3.add((-1) ** (ell - 1) * weight, _c3_inner(d, ell, ar, eps))
        c1v = _Combination(ar).add(Fraction((-1) ** d, d * (d - 1)), c1.result()).result()
        c3v = _Combination(ar).add(Fraction((-1) ** d, d - 1), c3.result()).result()

        cd = _Combination(ar)
        for part, sign in ((c1v, 1), (c2, 1), (c3v, 1), (idd, 1), (i0, -1)):
            cd.add(sign, part)
        cd = cd.result()
        value = _Combination(ar).add_exact(ar.num(Fraction(d, d - 1)) * ar.gamma(ar.num(Fraction(1, d))))
        value = value.add(2 * d * d, cd).result()
    logger.info(f"v_{d} = {value.value:.15g} (err {value.err:.1e}, {value.terms_used} terms)")
    return ConstantReport(d=d, name="v", value=value, precision=ar.name,
                          components={"I0": i0, "Idd": idd, "C1": c1v, "C2": c2, "C3": c3v, "C": cd})


# --------------------------------------------------------------------------
# v~_d

def _f21_half(d: int, j: int, ar, eps: float) -> SeriesValue:
    return p_f_q([Fraction(d + 1, d), 1], [Fraction(d + j + 1, d)], Fraction(1, 2), eps=eps, ar=ar)


def _f32_minus_one(d: int, k: int, j: int, ell: int, ar, eps: float) -> SeriesValue:
    return p_f_q([Fraction(d + 1, d), Fraction(k + j + 2, d), 1],
                 [Fraction(d + ell + j + 1, d), Fraction(d + k + j + 2, d)], -1, eps=eps, ar=ar)


@lru_cache(maxsize=64)
def vtilde_const(d: int, eps: Optional[float] = None, precision: Optional[str] = None) -> ConstantReport:
    """v~_d in V[M_n] ~ v~_d n^{1-1/d} for the maxima of the simplex"""
    ar, eps = _resolve(eps, precision)
    _check(d, eps, ar)
    with working(ar):
        g1 = ar.gamma(ar.num(Fraction(1, d)))
        pre = g1 * ar.num(2) ** (-ar.num(Fraction(1, d)))
        f21 = [_f21_half(d, j, ar, eps) for j in range(d)]

        j0 = _Combination(ar)
        for ell in range(d):
            j0.add(pre * ar.num(Fraction(math.comb(d - 1, ell) * (-1) ** ell, ell + 1)), f21[ell])
        j0 = j0.result()

        components = {"J0": j0}
        value = _Combination(ar).add_exact(g1).add(-1, j0)
        for k in range(d - 1):
            second = _Combination(ar)
            for j in range(k + 1, d):
                coef = Fraction((-1) ** k * math.comb(d - 1, j) * (-1) ** j, j + 1)
                second.add(pre * ar.num(coef), f21[j])
            second = second.result()

            first = _Combination(ar)
            scale = 2 * g1 * math.factorial(d - 1)
            for j in range(d - 1 - k):
                outer = Fraction((-1) ** j, math.factorial(j) * math.factorial(d - 2 - k - j))
                for ell in range(k + 1):
                    inner = Fraction((-1) ** ell, math.factorial(ell) * math.factorial(k - ell))
                    coef = outer * inner / ((ell + j + 1) * (k + j + 2))
                    first.add(scale * ar.num(coef), _f32_minus_one(d, k, j, ell, ar, eps))
            first = first.result()

            components[f"Jprime{k + 1}"] = first
            components[f"Jsecond{k + 1}"] = second
            binom = math.comb(d, k + 1)
            value.add(binom, first).add(binom, second)
        value = value.result()
    logger.info(f"vtilde_{d} = {value.value:.15g} (err {value.err:.1e})")
    return ConstantReport(d=d, name="vtilde", value=value, components=components, precision=ar.name)


# --------------------------------------------------------------------------
# K_d

def _k_inner(d: int, m: int, ell: int, ar, eps: float) -> SeriesValue:
    def term(j, ar):
        lo = ar.num(Fraction(ell, d))
        r = ar.num(Fraction(1, d))
        a = ar.num(Fraction(ell + 1, d))
        first = ar.exp(ar.lgamma(j + 1 - lo) + ar.lgamma(d * j + d - ell - m - 1)
                       - ar.lgamma(j + 1) - ar.lgamma(d * j + d - ell))
        second = ar.exp(ar.lgamma(j + 1 + r) + ar.lgamma(d * j + d - m)
                        - ar.lgamma(j + 1 + a) - ar.lgamma(d * j + d + 1))
        return first - second

    return power_sum(term, 0, 2 + m + ell / d, ar=ar, eps=eps)


@lru_cache(maxsize=64)
def k_const(d: int, eps: Optional[float] = None, precision: Optional[str] = None) -> ConstantReport:
    """K_d, the triple-integral constant attached to the maxima of the simplex"""
    ar, eps = _resolve(eps, precision)
    _check(d, eps, ar)
    components = {}
    with working(ar):
        total = _Combination(ar)
        for m in range(d - 1):
            km = _Combination(ar)
            for ell in range(d - 1 - m):
                coef = (math.comb(d - 2, m) * math.comb(d - 2 - m, ell) * (-1) ** (d - 2 - m - ell)
                        * math.factorial(m))
                km.add(ar.num(coef) * ar.gamma(ar.num(Fraction(ell + 1, d))), _k_inner(d, m, ell, ar, eps))
            km = km.result()
            components[f"K{m}"] = km
            total.add(Fraction(1, d * d), km)
        value = total.result()
    logger.info(f"K_{d} = {value.value:.15g} (err {value.err:.1e})")
    return ConstantReport(d=d, name="K", value=value, components=components, precision=ar.name)


CONSTANTS = {"v": v_const, "vtilde": vtilde_const, "K": k_const}


def constant(name: str, d: int, eps: Optional[float] = None, precision: Optional[str] = None) -> ConstantReport:
    if name not in CONSTANTS:
        raise ValueError(f"Unknown constant '{name}', expected one of {', '.join(CONSTANT_NAMES)}")
    return CONSTANTS[name](d, eps, precision)


# --------------------------------------------------------------------------
# quadrature oracles

def _h_kernel(t):
    # (-log(1-t) - t) / t^2
    if t < 0.1:
        return mpmath.fsum(t ** (m - 2) / m for m in range(2, 80))
    return (-mpmath.log1p(-t) - t) / t ** 2


def oracle_integral(name: str, d: int, eps: float = 1e-8) -> SeriesValue:
    """Quadrature of the single- and double-integral forms of I_{d,0}, I_{d,d}, J_{d,0} and K_d"""
    if name not in ORACLE_NAMES:
        raise ValueError(f"Unknown oracle '{name}', expected one of {', '.join(ORACLE_NAMES)}")
    if d < 2:
        raise ValueError("oracles need d >= 2")
    g1 = math.gamma(1 / d)
    if name == "I0":
        def f(x):
            return (1 - x) ** (d - 1) * -mpmath.expm1(-mpmath.log1p(x ** d) / d) / x ** d

        return quad1d(f, 0, 1, eps=eps).scaled(g1 / (d - 1))
    if name == "Idd":
        def f(t):
            if t >= 1:
                return mpmath.mpf(0)
            root = t ** (mpmath.mpf(1) / d)
            return (1 - root) ** (d - 1) * (root / t * (1 + t) ** (-mpmath.mpf(1) / d) + _h_kernel(t))

        inner = quad1d(f, 0, 1, eps=eps)
        return SeriesValue(value=g1 / (d * (d - 1)) * (inner.value - 1),
                           err=g1 / (d * (d - 1)) * inner.err)
    if name == "J0":
        def f(x):
            return (1 - x) ** (d - 1) * (1 + x ** d) ** (-1 - mpmath.mpf(1) / d)

        return quad1d(f, 0, 1, eps=eps).scaled(2 * g1)
    if d > K_ORACLE_D_MAX:
        raise ValueError(f"the K double-integral oracle is limited to d <= {K_ORACLE_D_MAX}")

    # half of the square with u = v s
    def g(s, v):
        u = v * s
        return ((u ** (-1 / d) + v ** (-1 / d) - 2) ** (d - 2) * v ** (-1 / d)
                * (1 + s - u) ** (-1 - 1 / d))

    return quad2d(g, eps=max(eps, 1e-7)).scaled(2 * g1 / d ** 4)


def with_oracle(report: ConstantReport) -> ConstantReport:
    """Copy of report carrying the double-integral value of K_d; other reports are returned as is"""
    if report.name != "K" or report.d > K_ORACLE_D_MAX:
        return report
    return report.model_copy(update={"oracle": oracle_integral("K", report.d, eps=1e-7)})


def constants_table(names=CONSTANT_NAMES, d_values=range(2, D_MAX + 1), eps: Optional[float] = None,
                    precision: Optional[str] = None, oracle: bool = False) -> List[ConstantReport]:
    reports = [constant(name, d, eps, precision) for name in names for d in d_values]
    return [with_oracle(r) for r in reports] if oracle else reports
