"""Seeded simulation harness: replications on Philox streams, ordered moment merging, references."""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..config import settings
from ..core.batch import chain_flags, counts_at, dominating_flags, maxima_counts, pareto_flags
from ..core.exceptions import RecordLabError, ZeroVarianceError
from ..core.geometry import sample_block, sample_sequence
from ..core.records import prefix_maxima_counts
from ..core.specfun import harmonic_float
from ..models.domain import (ExperimentConfig, ExperimentReport, KernelCheckReport, MeanRelationReport,
                             Model, ModelKind, ReportRow, RngStream, Statistic)
from .asymptotics import maxima_mean_asym, pareto_mean_asym, record_variance_asym
from .exactlaws import chain_kernel, chain_moments_at, dom_moments

logger = logging.getLogger(__name__)

KS_MIN_SAMPLES = 100

FLAGS = {
    Statistic.PARETO: pareto_flags,
    Statistic.CHAIN: chain_flags,
    Statistic.DOMINATING: dominating_flags,
}


class RunningMoments:
    """Count, mean and central sums M2..M4 of a sample; merge() combines disjoint samples"""

    def __init__(self, shape: Tuple[int, ...] = ()):
        self.count = 0
        self.mean = np.zeros(shape)
        self.m2 = np.zeros(shape)
        self.m3 = np.zeros(shape)
        self.m4 = np.zeros(shape)

    @classmethod
    def of(cls, x: np.ndarray) -> "RunningMoments":
        out = cls(x.shape[1:])
        out.count = len(x)
        out.mean = x.mean(axis=0)
        dev = x - out.mean
        out.m2 = (dev ** 2).sum(axis=0)
        out.m3 = (dev ** 3).sum(axis=0)
        out.m4 = (dev ** 4).sum(axis=0)
        return out

    def merge(self, other: "RunningMoments") -> "RunningMoments":
        na, nb = self.count, other.count
        if nb == 0:
            return self
        if na == 0:
            self.count, self.mean, self.m2, self.m3, self.m4 = nb, other.mean, other.m2, other.m3, other.m4
            return self
        n = na + nb
        delta = other.mean - self.mean
        m2 = self.m2 + other.m2 + delta ** 2 * na * nb / n
        m3 = (self.m3 + other.m3 + delta ** 3 * na * nb * (na - nb) / n ** 2
              + 3 * delta * (na * other.m2 - nb * self.m2) / n)
        m4 = (self.m4 + other.m4
              + delta ** 4 * na * nb * (na * na - na * nb + nb * nb) / n ** 3
              + 6 * delta ** 2 * (na * na * other.m2 + nb * nb * self.m2) / n ** 2
              + 4 * delta * (na * other.m3 - nb * self.m3) / n)
        self.count, self.mean, self.m2, self.m3, self.m4 = n, self.mean + delta * nb / n, m2, m3, m4
        return self

    @property
    def var(self) -> np.ndarray:
        return self.m2 / (self.count - 1)

    @property
    def se_mean(self) -> np.ndarray:
        return np.sqrt(self.var / self.count)

    @property
    def se_var(self) -> np.ndarray:
        r = self.count
        mu4 = self.m4 / r
        return np.sqrt(np.maximum(mu4 - (r - 3) / (r - 1) * self.var ** 2, 0.0) / r)


def ks_normal(samples: Sequence[float], mean: Optional[float] = None, var: Optional[float] = None) -> float:
    """Kolmogorov distance between the standardized samples and N(0, 1).

    Standardizes by the given reference mean/variance, falling back to the
    sample's own for whichever is missing.
    """
    x = np.asarray(samples, dtype=float)
    if len(x) < KS_MIN_SAMPLES:
        raise ValueError(f"ks_normal needs at least {KS_MIN_SAMPLES} samples, got {len(x)}")
    m = float(x.mean()) if mean is None else mean
    v = float(x.var(ddof=1)) if var is None else var
    if v <= 0:
        raise ZeroVarianceError("ks_normal: zero variance, the standardization is undefined")
    return float(stats.kstest((x - m) / math.sqrt(v), "norm").statistic)


def _reference(model: Model, statistic: Statistic, n: int) -> Tuple[Optional[float], Optional[float], str]:
    d = model.d
    if statistic == Statistic.CHAIN:
        mean, var = chain_moments_at(model, n)
        return mean, var, "exact"
    if statistic == Statistic.DOMINATING:
        mean, var = dom_moments(model, n)
        return float(mean), float(var), "exact"
    if d == 1:
        if statistic == Statistic.MAXIMA:
            return 1.0, 0.0, "exact"
        return harmonic_float(n), harmonic_float(n) - harmonic_float(n, 2), "exact"
    if model.kind == ModelKind.SIMPLEX and n > 1:
        if statistic == Statistic.PARETO:
            return pareto_mean_asym(d, n).value, record_variance_asym("pareto", d, n), "asymptotic"
        return maxima_mean_asym(d, n).value, record_variance_asym("maxima", d, n), "asymptotic"
    return None, None, "none"


def _simulate_chunk(model: Model, seed: int, streams: range, ns: List[int],
                    statistics: List[Statistic]) -> Dict[Statistic, np.ndarray]:
    n_max = ns[-1]
    x = np.stack([sample_block(model, RngStream(seed=seed, stream=r).generator(), n_max) for r in streams])
    out = {}
    for stat in statistics:
        if stat == Statistic.MAXIMA:
            out[stat] = maxima_counts(x, ns)
        else:
            out[stat] = counts_at(FLAGS[stat](x), ns)
    return out


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Simulate cfg.replications sequences and compare the count moments with the references.

    Replication r always draws from stream r of cfg.seed and chunks are
    merged in stream order, so the report does not depend on the thread count.
    """
    started = time.perf_counter()
    model = Model.of(cfg.model, cfg.d)
    stats_ = list(dict.fromkeys(cfg.statistics))
    reps = cfg.replications
    partial = False
    if reps > settings.MAX_REPLICATIONS:
        logger.warning(f"replications {reps} above the cap {settings.MAX_REPLICATIONS}; report is partial")
        reps, partial = settings.MAX_REPLICATIONS, True

    chunk = max(1, settings.CHUNK)
    chunks = [range(s, min(s + chunk, reps)) for s in range(0, reps, chunk)]
    threads = settings.threads(cfg.threads)
    logger.info(f"simulating {reps} x {model.kind.value} d={model.d} n<={cfg.ns[-1]} "
                f"on {threads} threads ({len(chunks)} chunks)")

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda c: _simulate_chunk(model, cfg.seed, c, cfg.ns, stats_), chunks))

    report = ExperimentReport(config=cfg, partial=partial)
    if cfg.keep_tallies:
        report.tallies = {}
    for stat in stats_:
        moments = RunningMoments((len(cfg.ns),))
        for part in results:
            moments.merge(RunningMoments.of(part[stat].astype(float)))
        samples = np.concatenate([part[stat] for part in results])
        if cfg.keep_tallies:
            report.tallies[stat.value] = samples.tolist()

        for i, n in enumerate(cfg.ns):
            try:
                ref_mean, ref_var, source = _reference(model, stat, n)
            except RecordLabError as e:
                logger.warning(f"no reference for {stat.value} at n={n}: {e}")
                ref_mean, ref_var, source = None, None, "none"
            mean, var = float(moments.mean[i]), float(moments.var[i])
            se_mean, se_var = float(moments.se_mean[i]), float(moments.se_var[i])
            row = ReportRow(statistic=stat, n=n, mean=mean, var=var, se_mean=se_mean, se_var=se_var,
                            ref_mean=ref_mean, ref_var=ref_var, ref_source=source)
            if ref_mean is not None and se_mean > 0:
                row.z_mean = (mean - ref_mean) / se_mean
            if ref_var is not None and se_var > 0:
                row.z_var = (var - ref_var) / se_var
            if reps >= KS_MIN_SAMPLES and var > 0:
                if ref_mean is not None and ref_var is not None and ref_var > 0:
                    row.ks = ks_normal(samples[:, i], ref_mean, ref_var)
                    row.ks_standardization = "reference"
                else:
                    row.ks = ks_normal(samples[:, i])
                    row.ks_standardization = "sample"
            report.rows.append(row)

    report.wall_clock_s = time.perf_counter() - started
    logger.info(f"experiment finished in {report.wall_clock_s:.2f}s")
    return report


def mean_relation_check(d: int, n: int, replications: int, model: "str | ModelKind" = "simplex",
                        seed: Optional[int] = None) -> MeanRelationReport:
    """Compare X_n with sum_k M_k / k on the prefixes of the same samples"""
    if n > 200:
        raise ValueError("mean_relation_check is O(n^2) per replication and limited to n <= 200")
    if replications < 2:
        raise ValueError("replications must be >= 2")
    m = Model.of(model, d)
    seed = settings.SEED if seed is None else seed
    weights = 1.0 / np.arange(1, n + 1)
    records = np.empty(replications)
    weighted = np.empty(replications)
    for r in range(replications):
        seq = sample_sequence(m, RngStream(seed=seed, stream=r), n)
        x, maxima = prefix_maxima_counts(seq)
        records[r] = x
        weighted[r] = math.fsum(maxima * weights)
    diff = records - weighted
    return MeanRelationReport(model=m.kind, d=d, n=n, replications=replications,
                              pareto_mean=float(records.mean()), maxima_sum_mean=float(weighted.mean()),
                              difference=float(diff.mean()),
                              se=float(diff.std(ddof=1) / math.sqrt(replications)))


def _merge_bins(observed: np.ndarray, expected: np.ndarray, minimum: float = 5.0):
    obs, exp = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= minimum:
            obs.append(acc_o)
            exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 and exp:
        obs[-1] += acc_o
        exp[-1] += acc_e
    return np.array(obs), np.array(exp)


def kernel_check(model: "str | ModelKind", d: int, n: int, trials: int,
                 seed: Optional[int] = None, block: int = 10_000) -> KernelCheckReport:
    """Chi-square comparison of the simulated I_n (points among p_2..p_n dominating p_1) with chain_kernel"""
    if n < 2:
        raise ValueError("kernel_check needs n >= 2")
    m = Model.of(model, d)
    gen = RngStream(seed=settings.SEED if seed is None else seed).generator()
    observed = np.zeros(n, dtype=np.int64)
    done = 0
    while done < trials:
        size = min(block, trials - done)
        x = sample_block(m, gen, size * n).reshape(size, n, d)
        dominated_by = np.all(x[:, 1:, :] > x[:, :1, :], axis=2).sum(axis=1)
        observed += np.bincount(dominated_by, minlength=n)
        done += size
    expected = np.asarray(chain_kernel(m, n).probs) * trials
    obs, exp = _merge_bins(observed.astype(float), expected)
    exp = exp * obs.sum() / exp.sum()
    chi2, p_value = stats.chisquare(obs, exp)
    logger.info(f"kernel_check {m.kind.value} d={d} n={n}: chi2={chi2:.3f} over {len(obs)} bins, p={p_value:.4f}")
    return KernelCheckReport(model=m.kind, d=d, n=n, trials=trials, observed=observed.tolist(),
                             expected=expected.tolist(), chi2=float(chi2), p_value=float(p_value))
