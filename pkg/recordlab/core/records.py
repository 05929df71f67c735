"""Streaming counters for Pareto, chain and dominating records, and maxima."""
import bisect
import logging
from abc import ABC, abstractmethod
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..models.domain import Point, RecordTally, Statistic
from .exceptions import DimensionMismatchError


def as_matrix(seq: Iterable) -> np.ndarray:
    """Stack a sequence of points into an (n, d) float array"""
    if isinstance(seq, np.ndarray):
        arr = np.asarray(seq, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
    else:
        rows = [p.coords if isinstance(p, Point) else list(np.atleast_1d(p)) for p in seq]
        if not rows:
            return np.empty((0, 0))
        if len({len(r) for r in rows}) != 1:
            raise DimensionMismatchError("all points of a sequence must have the same dimension")
        arr = np.asarray(rows, dtype=float)
    return arr


class BaseCounter(ABC):
    """One-pass record counter. Feed points in arrival order with `push`."""

    def __init__(self, name: str, keep_indices: bool = False):
        self.name = name
        self.keep_indices = keep_indices
        self.logger = logging.getLogger(f"counter.{name}")
        self.reset()

    def reset(self) -> None:
        self.n = 0
        self.count = 0
        self.indices: List[int] = []
        self._reset_state()

    @abstractmethod
    def _reset_state(self) -> None:
        pass

    @abstractmethod
    def _is_record(self, x: np.ndarray) -> bool:
        """Decide whether x is a record and update the counter state"""
        pass

    def push(self, x: np.ndarray) -> bool:
        self.n += 1
        hit = self._is_record(x)
        if hit:
            self.count += 1
            if self.keep_indices:
                self.indices.append(self.n)
        return hit

    def feed(self, seq: Iterable) -> "BaseCounter":
        arr = as_matrix(seq)
        for x in arr:
            self.push(x)
        self.logger.debug(f"{self.count} records in {self.n} points")
        return self


class DominatingCounter(BaseCounter):
    """Record iff the point beats the running componentwise maximum in every coordinate"""

    def _reset_state(self) -> None:
        self._top: Optional[np.ndarray] = None

    def _is_record(self, x: np.ndarray) -> bool:
        if self._top is None:
            self._top = x.copy()
            return True
        hit = bool(np.all(x > self._top))
        np.maximum(self._top, x, out=self._top)
        return hit


class ChainCounter(BaseCounter):
    def _reset_state(self) -> None:
        self._top: Optional[np.ndarray] = None

    def _is_record(self, x: np.ndarray) -> bool:
        if self._top is None or np.all(x > self._top):
            self._top = x.copy()
            return True
        return False


class ParetoCounter(BaseCounter):
    """Keeps the maxima of the prefix as a flat array; a record evicts the maxima it dominates"""

    def _reset_state(self) -> None:
        self.maxima = np.empty((0, 0))

    def _is_record(self, x: np.ndarray) -> bool:
        if self.maxima.size == 0:
            self.maxima = x[None, :].copy()
            return True
        if np.any(np.all(self.maxima > x, axis=1)):
            return False
        keep = ~np.all(x > self.maxima, axis=1)
        self.maxima = np.vstack([self.maxima[keep], x])
        return True


class StaircaseCounter(BaseCounter):
    """d=2 Pareto counter: maxima sorted by x with decreasing y, binary search per point.

    Assumes no ties in either coordinate, which holds almost surely for the
    continuous samples it is used on.
    """

    def _reset_state(self) -> None:
        self._xs: List[float] = []
        self._ys: List[float] = []

    def _is_record(self, x: np.ndarray) -> bool:
        if x.shape[0] != 2:
            raise DimensionMismatchError("StaircaseCounter handles d=2 only")
        px, py = float(x[0]), float(x[1])
        pos = bisect.bisect_right(self._xs, px)
        if pos < len(self._xs) and self._ys[pos] > py:
            return False
        left = bisect.bisect_left(self._xs, px)
        lo = left
        while lo > 0 and self._ys[lo - 1] < py:
            lo -= 1
        # maxima with smaller x and smaller y are now dominated
        del self._xs[lo:left]
        del self._ys[lo:left]
        self._xs.insert(lo, px)
        self._ys.insert(lo, py)
        return True


COUNTERS = {
    Statistic.PARETO: ParetoCounter,
    Statistic.CHAIN: ChainCounter,
    Statistic.DOMINATING: DominatingCounter,
}


def _fragment(statistic: Statistic, counter: BaseCounter) -> RecordTally:
    fields = {"n": counter.n, f"{statistic.value}_count": counter.count}
    if counter.keep_indices:
        fields[f"{statistic.value}_indices"] = list(counter.indices)
    return RecordTally(**fields)


def count_dominating(seq: Iterable, keep_indices: bool = True) -> RecordTally:
    return _fragment(Statistic.DOMINATING, DominatingCounter("dominating", keep_indices).feed(seq))


def count_chain(seq: Iterable, keep_indices: bool = True) -> RecordTally:
    return _fragment(Statistic.CHAIN, ChainCounter("chain", keep_indices).feed(seq))


def count_pareto(seq: Iterable, keep_indices: bool = True) -> RecordTally:
    arr = as_matrix(seq)
    cls = StaircaseCounter if arr.ndim == 2 and arr.shape[1] == 2 and len(arr) > 4096 else ParetoCounter
    return _fragment(Statistic.PARETO, cls("pareto", keep_indices).feed(arr))


def maxima_mask(points: Iterable) -> np.ndarray:
    """Boolean mask of the points dominated by no other point"""
    arr = as_matrix(points)
    if arr.size == 0:
        return np.zeros(0, dtype=bool)
    # any dominator has a larger first coordinate, so it comes earlier in this order
    order = np.argsort(-arr[:, 0], kind="stable")
    counter = ParetoCounter("maxima", keep_indices=True).feed(arr[order])
    mask = np.zeros(len(arr), dtype=bool)
    mask[order[np.asarray(counter.indices, dtype=int) - 1]] = True
    return mask


def count_maxima(points: Iterable) -> int:
    return int(maxima_mask(points).sum())


def lift_to_extended(seq: Iterable) -> np.ndarray:
    """Append (n+1-i)/(n+1) to point i; the maxima of the result are the Pareto records of seq"""
    arr = as_matrix(seq)
    n = len(arr)
    if n == 0:
        return arr
    rank = (n + 1 - np.arange(1, n + 1)) / (n + 1)
    return np.hstack([arr, rank[:, None]])


def tally(seq: Iterable, statistics: Sequence["Statistic | str"] = tuple(Statistic),
          keep_indices: bool = True) -> RecordTally:
    """All requested statistics for one sequence, merged into a single RecordTally"""
    arr = as_matrix(seq)
    fields = {"n": len(arr)}
    for stat in map(Statistic, statistics):
        if stat == Statistic.MAXIMA:
            mask = maxima_mask(arr)
            fields["maxima_count"] = int(mask.sum())
            if keep_indices:
                fields["maxima_indices"] = [int(i) + 1 for i in np.flatnonzero(mask)]
            continue
        fragment = {
            Statistic.PARETO: count_pareto,
            Statistic.CHAIN: count_chain,
            Statistic.DOMINATING: count_dominating,
        }[stat](arr, keep_indices)
        fields.update(fragment.model_dump(exclude={"n"}, exclude_defaults=True))
    return RecordTally(**fields)


# --------------------------------------------------------------------------
# brute-force oracles

def dominance_matrix(seq: Iterable) -> np.ndarray:
    """D[i, j] is True iff point i dominates point j (O(n^2 d))"""
    arr = as_matrix(seq)
    return np.all(arr[:, None, :] > arr[None, :, :], axis=2)


def first_dominator(seq: Iterable) -> np.ndarray:
    """t_j: 1-based index of the first point dominating point j, n+1 if none"""
    dom = dominance_matrix(seq)
    n = dom.shape[0]
    has = dom.any(axis=0)
    return np.where(has, dom.argmax(axis=0) + 1, n + 1)


def brute_force_tally(seq: Iterable) -> RecordTally:
    arr = as_matrix(seq)
    n = len(arr)
    dom = dominance_matrix(arr)
    idx = np.arange(n)
    earlier = idx[:, None] < idx[None, :]
    pareto = [j + 1 for j in range(n) if not np.any(dom[:, j] & earlier[:, j])]
    dominating = [j + 1 for j in range(n) if np.all(dom[j, :j])]
    chain, top = [], None
    for j in range(n):
        if top is None or dom[j, top]:
            chain.append(j + 1)
            top = j
    maxima = [j + 1 for j in range(n) if not dom[:, j].any()]
    return RecordTally(n=n, pareto_count=len(pareto), chain_count=len(chain),
                       dominating_count=len(dominating), maxima_count=len(maxima),
                       pareto_indices=pareto, chain_indices=chain,
                       dominating_indices=dominating, maxima_indices=maxima)


def prefix_maxima_counts(seq: Iterable) -> Tuple[int, np.ndarray]:
    """Pareto record count X_n and the maxima counts M_1..M_n of every prefix"""
    arr = as_matrix(seq)
    n = len(arr)
    t = first_dominator(arr)
    j = np.arange(1, n + 1)
    records = int(np.sum(t > j))
    # point j is maximal in the prefix of length k iff j <= k < t_j
    delta = np.zeros(n + 2, dtype=int)
    np.add.at(delta, j, 1)
    np.add.at(delta, t, -1)
    return records, np.cumsum(delta)[1:n + 1]
