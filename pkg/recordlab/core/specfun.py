"""Special functions and series machinery.

Series helpers take a vectorised term function ``term(j, ar)`` where ``j`` is an
array of indices produced by an arithmetic backend ``ar``.  The double backend
evaluates terms with numpy/scipy in binary64; the ``dd`` backend evaluates the
same expressions elementwise with mpmath at ``settings.DD_DPS`` digits.
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, NamedTuple, Optional, Sequence

import mpmath
import numpy as np
from scipy import integrate, special

from ..config.config import settings
from ..models.domain import SeriesValue
from .exceptions import PoleError, QuadratureError, SeriesConvergenceError

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061
_EXACT_HARMONIC_MAX = 10_000
MP_TERM_CAP = 1 << 18


def _is_pole(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and float(z.real).is_integer()


def ln_gamma(z: complex) -> complex:
    """Principal branch of log Gamma; real input in (0, inf) returns a float"""
    zc = complex(z)
    if _is_pole(zc):
        raise PoleError(f"ln_gamma has a pole at {z}")
    if isinstance(z, (int, float, np.integer, np.floating)) and z > 0:
        return float(special.gammaln(float(z)))
    return complex(special.loggamma(zc))


def polygamma(m: int, z: complex) -> complex:
    """Digamma (m=0) or trigamma (m=1); complex arguments go through mpmath"""
    if m not in (0, 1):
        raise ValueError("polygamma supports m in {0, 1}")
    zc = complex(z)
    if _is_pole(zc):
        raise PoleError(f"polygamma({m}, z) has a pole at {z}")
    if zc.imag == 0 and isinstance(z, (int, float, np.integer, np.floating)):
        return float(special.polygamma(m, float(z)))
    return complex(mpmath.polygamma(m, mpmath.mpc(zc.real, zc.imag)))


class Harmonic(NamedTuple):
    exact: Optional[Fraction]
    value: float


@lru_cache(maxsize=256)
def _harmonic_exact(n: int, a: int) -> Fraction:
    total = Fraction(0)
    for i in range(1, n + 1):
        total += Fraction(1, i ** a)
    return total


def harmonic(n: int, a: int = 1) -> Harmonic:
    """H_n^{(a)} = sum_{i<=n} i^{-a}; exact for n <= 10^4"""
    if n < 0 or a < 1:
        raise ValueError("harmonic needs n >= 0 and a >= 1")
    if n == 0:
        return Harmonic(Fraction(0), 0.0)
    exact = _harmonic_exact(n, a) if n <= _EXACT_HARMONIC_MAX else None
    if exact is not None:
        return Harmonic(exact, float(exact))
    if a == 1:
        return Harmonic(None, float(special.digamma(n + 1.0)) + EULER_GAMMA)
    return Harmonic(None, float(special.zeta(a) - special.zeta(a, n + 1.0)))


def harmonic_float(n: int, a: int = 1) -> float:
    if n <= 0:
        return 0.0
    if a == 1:
        return float(special.digamma(n + 1.0)) + EULER_GAMMA
    return float(special.zeta(a) - special.zeta(a, n + 1.0))


# --------------------------------------------------------------------------
# arithmetic backends

class DoubleArith:
    name = "double"
    unit = 2.0 ** -52

    def grid(self, j0: int, j1: int) -> np.ndarray:
        return np.arange(j0, j1, dtype=float)

    def lgamma(self, x):
        return special.gammaln(x)

    def exp(self, x):
        return np.exp(x)

    def log(self, x):
        return np.log(x)

    def log1p(self, x):
        return np.log1p(x)

    def expm1(self, x):
        return np.expm1(x)

    def gamma(self, x) -> float:
        return math.gamma(x)

    def num(self, x) -> float:
        return float(x)

    def fsum(self, values) -> float:
        return math.fsum(values)

    def prefix_sums(self, terms: np.ndarray, lengths: Sequence[int]) -> List[float]:
        return [math.fsum(terms[:m]) for m in lengths]

    def solve(self, rows: List[List[float]], rhs: List[float]) -> List[float]:
        a = np.array(rows, dtype=float)
        scale = np.max(np.abs(a), axis=0)
        x = np.linalg.solve(a / scale, np.array(rhs, dtype=float))
        return list(x / scale)

    def to_float(self, x) -> float:
        return float(x)


class MpArith:
    """mpmath elementwise backend; callers wrap work in mpmath.workdps(self.dps)"""
    name = "dd"

    def __init__(self, dps: Optional[int] = None):
        self.dps = dps or settings.DD_DPS
        self.unit = 10.0 ** (-self.dps)
        self._lgamma = np.vectorize(mpmath.loggamma, otypes=[object])
        self._exp = np.vectorize(mpmath.exp, otypes=[object])
        self._log = np.vectorize(mpmath.log, otypes=[object])
        self._log1p = np.vectorize(mpmath.log1p, otypes=[object])
        self._expm1 = np.vectorize(mpmath.expm1, otypes=[object])

    def grid(self, j0: int, j1: int) -> np.ndarray:
        return np.array([mpmath.mpf(j) for j in range(j0, j1)], dtype=object)

    def lgamma(self, x):
        return self._lgamma(x) if isinstance(x, np.ndarray) else mpmath.loggamma(x)

    def exp(self, x):
        return self._exp(x) if isinstance(x, np.ndarray) else mpmath.exp(x)

    def log(self, x):
        return self._log(x) if isinstance(x, np.ndarray) else mpmath.log(x)

    def log1p(self, x):
        return self._log1p(x) if isinstance(x, np.ndarray) else mpmath.log1p(x)

    def expm1(self, x):
        return self._expm1(x) if isinstance(x, np.ndarray) else mpmath.expm1(x)

    def gamma(self, x):
        return mpmath.gamma(x)

    def num(self, x):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)

    def fsum(self, values):
        return mpmath.fsum(values)

    def prefix_sums(self, terms: np.ndarray, lengths: Sequence[int]) -> list:
        return [mpmath.fsum(terms[:m]) for m in lengths]

    def solve(self, rows, rhs) -> list:
        x = mpmath.lu_solve(mpmath.matrix(rows), mpmath.matrix(rhs))
        return [x[i] for i in range(len(rhs))]

    def to_float(self, x) -> float:
        return float(x)


def backend(precision: Optional[str] = None):
    precision = (precision or settings.PRECISION).lower()
    if precision == "double":
        return DoubleArith()
    if precision == "dd":
        return MpArith()
    raise ValueError(f"Unknown precision '{precision}', expected double or dd")


class _Precision:
    """Context manager that sets mpmath's working precision for the dd backend"""

    def __init__(self, ar):
        self.ar = ar
        self._ctx = mpmath.workdps(ar.dps) if isinstance(ar, MpArith) else None

    def __enter__(self):
        if self._ctx is not None:
            self._ctx.__enter__()
        return self.ar

    def __exit__(self, *exc):
        if self._ctx is not None:
            return self._ctx.__exit__(*exc)
        return False


def working(ar) -> _Precision:
    return _Precision(ar)


# --------------------------------------------------------------------------
# series acceleration

TermFn = Callable[[np.ndarray, object], np.ndarray]


def _term_cap() -> int:
    return min(settings.TERM_CAP, 10_000_000)


def _series_value(ar, native, err: float, terms: int) -> SeriesValue:
    return SeriesValue(value=ar.to_float(native), err=err, terms_used=terms).with_native(native)


def power_sum(term: TermFn, start: int, s: float, *, ar=None, eps: Optional[float] = None,
              n0: int = 4096, levels: int = 6) -> SeriesValue:
    """Sum a series whose terms behave like j^{-s}(c0 + c1/j + ...), s > 1.

    Partial sums at geometric checkpoints N/2^levels, ..., N are fitted to
    S + sum_k b_k M^{-(s-1+k)}; the error is the change of S when the first
    checkpoint is dropped from the fit.  N doubles until the bound is below eps.
    """
    ar = ar or DoubleArith()
    eps = settings.EPS if eps is None else eps
    if s <= 1:
        raise SeriesConvergenceError(f"power_sum needs decay exponent s > 1, got {s}")
    cap = _term_cap() if not isinstance(ar, MpArith) else MP_TERM_CAP
    n_max = max(n0, start + 2 ** (levels + 3))
    with working(ar):
        while True:
            terms = term(ar.grid(start, n_max + 1), ar)
            count = n_max - start + 1
            total = ar.fsum(terms)
            tail_bound = abs(ar.to_float(terms[-1])) * n_max / (s - 1)
            if tail_bound <= ar.unit * max(1.0, abs(ar.to_float(total))):
                return _series_value(ar, total, tail_bound + 4 * ar.unit * abs(ar.to_float(total)), count)
            lengths = [count >> (levels - k) for k in range(levels + 1)]
            cps = [start + m - 1 for m in lengths]
            sums = ar.prefix_sums(terms, lengths)
            full = _fit_limit(ar, cps, sums, s, levels, n_max)
            reduced = _fit_limit(ar, cps[1:], sums[1:], s, levels - 1, n_max)
            value = ar.to_float(full)
            err = abs(ar.to_float(full - reduced)) + 16 * ar.unit * max(1.0, abs(value))
            best = _series_value(ar, full, err, count)
            if err <= eps * max(1.0, abs(value)):
                return best
            if 2 * n_max > cap:
                raise SeriesConvergenceError(
                    f"power_sum reached the term cap with error {err:.3e} > {eps:.1e}", achieved=best)
            logger.debug(f"power_sum: doubling to {2 * n_max} terms (err {err:.2e})")
            n_max *= 2


def _fit_limit(ar, cps, sums, s, levels, scale):
    rows = []
    for m in cps:
        ratio = ar.num(m) / ar.num(scale)
        rows.append([ar.num(1)] + [ratio ** (-(ar.num(s) - 1 + k)) for k in range(levels)])
    return ar.solve(rows, sums)[0]


def hurwitz_tail_sum(term: TermFn, start: int, s: float, *, n: int = 1_000_000) -> SeriesValue:
    """Direct sum to n closed by a tail fitted as A j^{-s} + B j^{-s-1} on the last decade"""
    ar = DoubleArith()
    terms = term(ar.grid(start, n + 1), ar)
    head = math.fsum(terms)
    j1, j2 = n // 10, n
    r1 = float(terms[j1 - start]) * j1 ** s
    r2 = float(terms[j2 - start]) * j2 ** s
    slope = (r1 - r2) / (1.0 / j1 - 1.0 / j2)
    amp = r2 - slope / j2
    z0 = float(special.zeta(s, n + 1.0))
    z1 = float(special.zeta(s + 1, n + 1.0))
    tail = amp * z0 + slope * z1
    err = 10 * abs(slope) * float(special.zeta(s + 2, n + 1.0)) + 64 * DoubleArith.unit * abs(head)
    return SeriesValue(value=head + tail, err=err, terms_used=n - start + 1)


def alternating_sum(term: TermFn, start: int, *, ar=None, eps: Optional[float] = None,
                    n0: int = 128, levels: int = 32) -> SeriesValue:
    """Euler transform by repeated averaging of the last partial sums (van Wijngaarden form)"""
    ar = ar or DoubleArith()
    eps = settings.EPS if eps is None else eps
    cap = _term_cap() if not isinstance(ar, MpArith) else MP_TERM_CAP
    n = max(n0, 2 * levels + 2)
    with working(ar):
        while True:
            terms = term(ar.grid(start, start + n), ar)
            first, last = abs(ar.to_float(terms[0])), abs(ar.to_float(terms[-1]))
            if first > 0 and last >= first:
                raise SeriesConvergenceError("alternating_sum: terms are not decaying")
            tail = list(np.cumsum(terms)[-(levels + 1):])
            estimates = []
            while len(tail) > 1:
                tail = [(tail[i] + tail[i + 1]) / 2 for i in range(len(tail) - 1)]
                estimates.append(tail[-1])
            value = ar.to_float(estimates[-1])
            err = abs(ar.to_float(estimates[-1] - estimates[-2])) + 16 * ar.unit * max(1.0, abs(value))
            best = _series_value(ar, estimates[-1], err, n)
            if err <= eps * max(1.0, abs(value)):
                return best
            if 2 * n > cap:
                raise SeriesConvergenceError(
                    f"alternating_sum reached the term cap with error {err:.3e}", achieved=best)
            n *= 2


def _estimate_exponent(values: np.ndarray) -> float:
    # local slopes at N/4 -> N/2 and N/2 -> N, extrapolated linearly in 1/N
    j = len(values) - 1
    a4, a2, a1 = abs(values[j // 4]), abs(values[j // 2]), abs(values[j])
    s_low = math.log(a4 / a2) / math.log(2)
    s_high = math.log(a2 / a1) / math.log(2)
    s = 2 * s_high - s_low
    guess = Fraction(s).limit_denominator(12)
    return float(guess) if abs(float(guess) - s) < 1e-3 else s


def euler_sum(term: Callable[[int], float], eps: Optional[float] = None, *, start: int = 0,
              kind: str = "auto", exponent: Optional[float] = None) -> SeriesValue:
    """Accelerated sum of a scalar term function j -> real.

    kind="alternating" applies the Euler transform; kind="power" applies
    Richardson extrapolation of partial sums with decay exponent ``exponent``
    (estimated from the terms when omitted).
    """
    eps = settings.EPS if eps is None else eps

    def vector(j, ar):
        return np.array([term(int(x)) for x in j], dtype=float)

    head_terms = vector(np.arange(start, start + 4096), None)
    if not np.all(np.isfinite(head_terms)):
        raise SeriesConvergenceError("euler_sum: non-finite terms")
    if kind == "auto":
        signs = np.sign(head_terms[:64])
        kind = "alternating" if np.all(signs[1:] * signs[:-1] < 0) else "power"
    if kind == "alternating":
        return alternating_sum(vector, start, eps=eps)
    if kind != "power":
        raise ValueError(f"Unknown euler_sum kind '{kind}'")
    if abs(head_terms[-1]) >= abs(head_terms[0]) > 0:
        raise SeriesConvergenceError("euler_sum: terms are not decaying")
    s = exponent if exponent is not None else _estimate_exponent(head_terms)
    return power_sum(vector, start, s, eps=eps)


# --------------------------------------------------------------------------
# generalized hypergeometric series

def _nonpositive_int(x: float) -> bool:
    return float(x) <= 0 and float(x).is_integer()


def p_f_q(alphas: Sequence[float], betas: Sequence[float], z: float,
          eps: Optional[float] = None, *, ar=None) -> SeriesValue:
    """pFq(alphas; betas; z) by the term recurrence t_{j+1} = t_j prod(j+a)/prod(j+b) z/(j+1).

    Parameters may be Fractions; they are converted in the backend so the dd
    mode keeps them exact to working precision.  Unit-circle cases of
    (q+1)Fq are routed to the alternating (z=-1) or power-law (z=1) accelerators.
    """
    ar = ar or DoubleArith()
    eps = settings.EPS if eps is None else eps
    if any(_nonpositive_int(b) for b in betas):
        raise PoleError("p_f_q: a lower parameter is a nonpositive integer")
    p, q = len(alphas), len(betas)
    terminating = any(_nonpositive_int(a) for a in alphas)
    excess = float(sum(Fraction(b) for b in betas) - sum(Fraction(a) for a in alphas))
    on_circle = p == q + 1 and abs(z) == 1
    if not terminating:
        if p > q + 1 or (p == q + 1 and abs(z) > 1):
            raise SeriesConvergenceError(f"{p}F{q} series diverges at z={z}")
        if on_circle and ((z == 1 and excess <= 0) or (z == -1 and excess <= -1)):
            raise SeriesConvergenceError(f"{p}F{q} diverges at z={z} (parameter excess {excess})")
    with working(ar):
        a_ = [ar.num(a) for a in alphas]
        b_ = [ar.num(b) for b in betas]
        zz = ar.num(z)

        def ratio(k):
            num = zz
            for a in a_:
                num = num * (k + a)
            den = ar.num(k + 1)
            for b in b_:
                den = den * (k + b)
            return num / den

        if on_circle and not terminating:
            def terms(j, ar_):
                out = np.empty(len(j), dtype=object if isinstance(ar_, MpArith) else float)
                t = ar_.num(1)
                first = int(j[0])
                for k in range(first):
                    t = t * ratio(k)
                for i in range(len(j)):
                    out[i] = t
                    t = t * ratio(first + i)
                return out

            if z == -1:
                wide = isinstance(ar, MpArith)
                return alternating_sum(terms, 0, ar=ar, eps=eps, n0=600 if wide else 300,
                                       levels=80 if wide else 40)
            return power_sum(terms, 0, 1 + excess, ar=ar, eps=eps)

        total = ar.num(1)
        t = ar.num(1)
        small = 0
        k = 0
        cap = _term_cap()
        while k < cap:
            r = ratio(k)
            t = t * r
            k += 1
            total = total + t
            if t == 0:
                return _series_value(ar, total, 0.0, k + 1)
            if abs(t) <= eps * abs(total):
                small += 1
                if small >= 3:
                    rho = abs(ar.to_float(r))
                    tail = abs(ar.to_float(t)) * (rho / (1 - rho) if rho < 1 else 1.0)
                    return _series_value(ar, total, tail + 4 * ar.unit * abs(ar.to_float(total)), k + 1)
            else:
                small = 0
        raise SeriesConvergenceError(
            "p_f_q reached the term cap",
            achieved=_series_value(ar, total, abs(ar.to_float(t)), k))


# --------------------------------------------------------------------------
# quadrature

def quad1d(f: Callable, a: float, b: float, eps: float = 1e-10, *, dps: int = 30,
           strict: bool = True) -> SeriesValue:
    """Adaptive tanh-sinh quadrature; b may be math.inf. f receives mpmath numbers."""
    hi = mpmath.inf if b == math.inf else b
    with mpmath.workdps(dps):
        value, err = mpmath.quad(f, [a, hi], error=True, maxdegree=8)
        if err > eps:
            value, err = mpmath.quad(f, [a, hi], error=True, maxdegree=12)
        value, err = float(mpmath.re(value)), float(err)
    if not math.isfinite(value) or (strict and err > eps):
        raise QuadratureError(f"quad1d did not reach {eps:.1e} (estimate {err:.2e})", value, err)
    return SeriesValue(value=value, err=max(err, 1e-16 * abs(value)), terms_used=0)


def quad2d(f: Callable[[float, float], float], eps: float = 1e-6, *, strict: bool = True) -> SeriesValue:
    """Adaptive Gauss-Kronrod over the unit square (scipy dblquad); f(x, y) gets floats"""
    value, err = integrate.dblquad(lambda y, x: f(x, y), 0.0, 1.0, 0.0, 1.0,
                                   epsabs=eps / 10, epsrel=eps / 10)
    if not math.isfinite(value) or (strict and err > eps):
        raise QuadratureError(f"quad2d did not reach {eps:.1e} (estimate {err:.2e})", value, err)
    return SeriesValue(value=value, err=max(err, 1e-16 * abs(value)), terms_used=0)
