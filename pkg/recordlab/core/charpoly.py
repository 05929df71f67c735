"""Zeros of (z+1)(z+2)...(z+d) - d! y and the branch through z = 0 at y = 1."""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from scipy import special
from scipy.optimize import linear_sum_assignment

from ..models.domain import Spectrum
from .exceptions import NewtonDivergenceError, RootPolishError
from .specfun import harmonic

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10


@lru_cache(maxsize=128)
def rising_coeffs(d: int) -> Tuple[int, ...]:
    """Integer coefficients of (z+1)...(z+d), highest degree first"""
    coeffs = [1]
    for i in range(1, d + 1):
        nxt = coeffs + [0]
        for k in range(1, len(nxt)):
            nxt[k] += i * coeffs[k - 1]
        coeffs = nxt
    return tuple(coeffs)


def _log_rising(z: np.ndarray, d: int) -> np.ndarray:
    shifts = np.arange(1, d + 1)
    return np.log(z[:, None] + shifts[None, :]).sum(axis=1)


def residuals(z: np.ndarray, d: int, y: float) -> np.ndarray:
    """|(z+1)...(z+d) - d! y| / d!"""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return np.abs(np.exp(_log_rising(z, d) - math.lgamma(d + 1)) - y)


def _newton_steps(z: np.ndarray, d: int, y: float) -> np.ndarray:
    shifts = np.arange(1, d + 1)
    ratio = y * np.exp(math.lgamma(d + 1) - _log_rising(z, d))
    dlog = (1.0 / (z[:, None] + shifts[None, :])).sum(axis=1)
    return (1.0 - ratio) / dlog


def polish(z: np.ndarray, d: int, y: float, max_iter: int = 60) -> np.ndarray:
    """Simultaneous Newton iteration with the Aberth correction (all zeros at once)"""
    z = np.asarray(z, dtype=complex).copy()
    for _ in range(max_iter):
        step = _newton_steps(z, d, y)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        repulsion = (1.0 / diff).sum(axis=1)
        z = z - step / (1.0 - step * repulsion)
        if np.all(np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(z))):
            break
    return z


def _symmetrize(z: np.ndarray) -> np.ndarray:
    scale = np.maximum(1.0, np.abs(z))
    real = z[np.abs(z.imag) <= 1e-9 * scale].real
    upper = z[z.imag > 1e-9 * scale]
    out = np.concatenate([real.astype(complex), upper, upper.conj()])
    return out[np.lexsort((out.imag, out.real))]


def all_zeros(d: int, y: float) -> np.ndarray:
    """All d zeros of (z+1)...(z+d) - d! y, conjugate-symmetric for real y"""
    if d < 1:
        raise ValueError("d must be >= 1")
    if y <= 0:
        raise ValueError("y must be positive")
    coeffs = [float(c) for c in rising_coeffs(d)]
    coeffs[-1] -= math.factorial(d) * y
    start = np.roots(coeffs)
    z = polish(start, d, y)
    res = residuals(z, d, y)
    if np.any(res > RESIDUAL_TOL):
        raise RootPolishError(f"zeros for d={d}, y={y} did not polish below {RESIDUAL_TOL}", res)
    return _symmetrize(z)


def char_zeros(d: int, y: float = 1.0) -> Spectrum:
    """Zeros lambda_l; at y=1 the zero z=0 is removed, leaving d-1 values"""
    if d < 2:
        raise ValueError("char_zeros needs d >= 2")
    z = all_zeros(d, y)
    if y == 1:
        drop = int(np.argmin(np.abs(z)))
        z = np.delete(z, drop)
    return Spectrum(d=d, y=y, re=z.real.tolist(), im=z.imag.tolist(),
                    residuals=residuals(z, d, y).tolist())


def branch_series_coeffs(d: int) -> List[float]:
    """Taylor coefficients of lambda_d(e^eta) in eta up to order 3"""
    h1 = harmonic(d, 1).exact
    h2 = harmonic(d, 2).exact
    h3 = harmonic(d, 3).exact
    coeffs = [1 / h1, h2 / (2 * h1 ** 3), -(2 * h1 * h3 - 3 * h2 ** 2) / (6 * h1 ** 5)]
    return [float(Fraction(c)) for c in coeffs]


def dominant_branch(d: int, y: complex, max_iter: int = 50) -> complex:
    """lambda_d(y): the zero with lambda_d(1) = 0, by Newton from the Lagrange expansion"""
    if abs(y - 1) > 0.5:
        raise ValueError("dominant_branch needs |y - 1| <= 1/2")
    eta = np.log(complex(y))
    c1, c2, c3 = branch_series_coeffs(d)
    z = np.array([c1 * eta + c2 * eta ** 2 + c3 * eta ** 3], dtype=complex)
    if y == 1:
        return 0.0
    for _ in range(max_iter):
        step = _newton_steps(z, d, complex(y))
        z = z - step
        if abs(step[0]) <= 1e-15 * max(1.0, abs(z[0])):
            break
    else:
        raise NewtonDivergenceError(f"dominant_branch did not converge for d={d}, y={y}")
    root = complex(z[0])
    if residuals(np.array([root]), d, complex(y))[0] > RESIDUAL_TOL:
        raise NewtonDivergenceError(f"dominant_branch converged to a non-root for d={d}, y={y}")
    if isinstance(y, (int, float)):
        return root.real
    return root


def continue_zeros(d: int, y: float, steps: int = 32) -> List[complex]:
    """Zeros at y labelled by continuation from y=1.

    Label 0 is the dominant branch; the rest follow the order of the y=1 zeros
    sorted by real then imaginary part.
    """
    start = np.concatenate([[0.0], np.asarray(char_zeros(d, 1.0).lambdas)])
    current = start.astype(complex)
    for y_s in np.linspace(1.0, y, steps + 1)[1:]:
        nxt = all_zeros(d, float(y_s))
        cost = np.abs(current[:, None] - nxt[None, :])
        rows, cols = linear_sum_assignment(cost)
        current = nxt[cols[np.argsort(rows)]]
    return current.tolist()


def quasi_power_prefactor(d: int, y: float) -> complex:
    """Q(y) in P_n(y) ~ Q(y) n^{lambda_d(y)/d}; Q(1) = 1"""
    if y == 1:
        return 1.0
    lam = dominant_branch(d, y)
    zeros = all_zeros(d, y)
    others = np.delete(zeros, int(np.argmin(np.abs(zeros - lam))))
    ell = np.arange(1, d)
    # pair each non-dominant zero with one ell; the product is symmetric so the pairing is free
    log_q = (np.log(d * (y - 1) / lam + 0j) - special.loggamma(1 + lam / d + 0j)
             + np.sum(special.loggamma((lam - others) / d) + special.loggamma(1 + ell / d)
                      - special.loggamma((lam + ell) / d + 0j) - special.loggamma(1 - others / d)))
    return complex(np.exp(log_q))


def limit_curve(resolution: int = 256, tol: float = 1e-14) -> List[complex]:
    """Points w with |w^{-w} (1+w)^{1+w}| = 1, found by bisection along rays from -1/2"""
    if resolution < 2:
        raise ValueError("resolution must be >= 2")

    def g(w: complex) -> float:
        return _curve_exponent(w).real

    half = [k * math.pi / (resolution // 2 + (resolution % 2)) for k in range(resolution // 2 + 1)]
    upper = []
    for theta in half:
        ray = complex(math.cos(theta), math.sin(theta))
        if theta in (0.0, math.pi):
            ray = complex(round(ray.real), 0.0)
        lo, hi = 0.0, 0.5
        while g(-0.5 + hi * ray) <= 0:
            hi *= 2
        while hi - lo > tol * max(1.0, hi):
            mid = (lo + hi) / 2
            if g(-0.5 + mid * ray) > 0:
                hi = mid
            else:
                lo = mid
        upper.append(-0.5 + hi * ray)
    upper = [complex(w.real, abs(w.imag)) for w in upper]
    lower = [w.conjugate() for w in upper if abs(w.imag) > 0]
    points = upper + lower
    return sorted(points, key=lambda w: (math.atan2(w.imag, w.real + 0.5)))


def _curve_exponent(w: complex) -> complex:
    # (1+w) log(1+w) - w log w with 0 log 0 = 0
    w = complex(w)
    out = 0j
    if w != -1:
        out += (1 + w) * np.log(1 + w)
    if w != 0:
        out -= w * np.log(w)
    return out


def curve_value(w: complex) -> float:
    """|w^{-w} (1+w)^{1+w}| on principal branches"""
    return float(abs(np.exp(_curve_exponent(w))))


def zeros_table(d_max: int, resolution: int = 256) -> List[Tuple[int, float, float]]:
    """(d, re, im) rows of lambda/d for d=2..d_max, curve rows tagged d=0"""
    rows = []
    for d in range(2, d_max + 1):
        for lam in char_zeros(d, 1.0).lambdas:
            rows.append((d, lam.real / d, lam.imag / d))
    rows.extend((0, w.real, w.imag) for w in limit_curve(resolution))
    return rows
