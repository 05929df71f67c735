"""Vectorised record indicators for a stack of replications.

Every function takes an array X of shape (R, n, d) and returns a boolean
array of shape (R, n) whose entry [r, k] says whether point k+1 of
replication r is a record.  Record counts at any prefix length are cumulative
sums of these rows.
"""
import numpy as np

BLOCK = 256


def dominating_flags(x: np.ndarray) -> np.ndarray:
    top = np.maximum.accumulate(x, axis=1)
    flags = np.ones(x.shape[:2], dtype=bool)
    flags[:, 1:] = np.all(x[:, 1:, :] > top[:, :-1, :], axis=2)
    return flags


def chain_flags(x: np.ndarray) -> np.ndarray:
    reps, n, _ = x.shape
    flags = np.zeros((reps, n), dtype=bool)
    if n == 0:
        return flags
    top = x[:, 0, :].copy()
    flags[:, 0] = True
    for k in range(1, n):
        hit = np.all(x[:, k, :] > top, axis=1)
        top[hit] = x[hit, k, :]
        flags[:, k] = hit
    return flags


def pareto_flags_single(x: np.ndarray, block: int = BLOCK) -> np.ndarray:
    """Pareto record flags of one (n, d) sequence, processed in blocks.

    A point is a record iff neither a current prefix maximum nor an earlier
    point of its own block dominates it.
    """
    n = len(x)
    flags = np.zeros(n, dtype=bool)
    maxima = x[:0]
    for start in range(0, n, block):
        pts = x[start:start + block]
        m = len(pts)
        by_maxima = np.zeros(m, dtype=bool)
        if len(maxima):
            by_maxima = np.all(maxima[None, :, :] > pts[:, None, :], axis=2).any(axis=1)
        inner = np.all(pts[:, None, :] > pts[None, :, :], axis=2)
        earlier = np.triu(inner, k=1)
        rec = ~by_maxima & ~earlier.any(axis=0)
        flags[start:start + m] = rec

        new = pts[rec]
        keep_old = ~np.all(new[:, None, :] > maxima[None, :, :], axis=2).any(axis=0) if len(maxima) else []
        later = np.tril(inner[np.ix_(rec, rec)], k=-1)
        keep_new = ~later.any(axis=0)
        maxima = np.vstack([maxima[keep_old], new[keep_new]]) if len(maxima) else new[keep_new]
    return flags


def pareto_flags(x: np.ndarray) -> np.ndarray:
    return np.stack([pareto_flags_single(seq) for seq in x]) if len(x) else np.zeros(x.shape[:2], dtype=bool)


def maxima_counts(x: np.ndarray, ns) -> np.ndarray:
    """Maxima counts of the prefixes of length ns, shape (R, len(ns))"""
    out = np.zeros((len(x), len(ns)), dtype=np.int64)
    for r, seq in enumerate(x):
        for i, n in enumerate(ns):
            prefix = seq[:n]
            order = np.argsort(-prefix[:, 0], kind="stable")
            out[r, i] = int(pareto_flags_single(prefix[order]).sum())
    return out


def counts_at(flags: np.ndarray, ns) -> np.ndarray:
    """Record counts of the prefixes of length ns, shape (R, len(ns))"""
    cum = np.cumsum(flags, axis=1, dtype=np.int64)
    return cum[:, np.asarray(ns, dtype=int) - 1]
