"""Uniform sampling in the hypercube and the simplex, and the dominance order."""
from typing import Sequence, Union

import numpy as np

from ..models.domain import Model, ModelKind, Point, RngStream
from .exceptions import DimensionMismatchError

PointLike = Union[Point, Sequence[float], np.ndarray]


def _coords(p: PointLike) -> np.ndarray:
    if isinstance(p, Point):
        return p.as_array()
    return np.asarray(p, dtype=float)


def _check_dims(p: np.ndarray, q: np.ndarray) -> None:
    if p.shape != q.shape:
        raise DimensionMismatchError(f"points have dimensions {p.size} and {q.size}")


def sample_block(model: Model, gen: np.random.Generator, size: int) -> np.ndarray:
    """Draw ``size`` iid points of ``model`` as a (size, d) array.

    Simplex points are normalised exponential spacings: with e_1..e_{d+1}
    iid Exp(1), (e_1, ..., e_d) / sum(e) is uniform on the simplex.
    """
    if model.d < 1:
        raise ValueError("dimension must be >= 1")
    if model.kind == ModelKind.HYPERCUBE:
        return gen.random((size, model.d))
    e = gen.standard_exponential((size, model.d + 1))
    return e[:, :-1] / e.sum(axis=1, keepdims=True)


def sample_point(model: Model, rng: Union[RngStream, np.random.Generator]) -> Point:
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    return Point(coords=sample_block(model, gen, 1)[0].tolist())


def sample_sequence(model: Model, rng: Union[RngStream, np.random.Generator], n: int) -> np.ndarray:
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    return sample_block(model, gen, n)


def dominates(p: PointLike, q: PointLike) -> bool:
    """True iff p_i > q_i for every coordinate"""
    a, b = _coords(p), _coords(q)
    _check_dims(a, b)
    return bool(np.all(a > b))


def join(p: PointLike, q: PointLike) -> Point:
    a, b = _coords(p), _coords(q)
    _check_dims(a, b)
    return Point(coords=np.maximum(a, b).tolist())


def in_region(model: Model, p: PointLike) -> bool:
    a = _coords(p)
    if a.size != model.d or np.any(a < 0):
        return False
    if model.kind == ModelKind.HYPERCUBE:
        return bool(np.all(a < 1))
    return bool(a.sum() <= 1.0)
