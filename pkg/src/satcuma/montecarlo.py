"""Brute-force Monte-Carlo oracle for every closed form in the package.

Each trial draws fresh reference-port phases for all users, builds the
activated set from the desired user's phase by the explicit sign rule, and
sums port cosines directly -- the compact forms are never used here, so the
batch is an independent check on them.

Reproducibility contract: the phase stream is a counter-based generator
(Philox) indexed by absolute draw position, with a fixed number of draws
reserved per trial.  A batch is therefore bit-identical for a given
(scenario, master_seed, n_trials) regardless of block size or worker count,
and blocks can run in any order on any executor.
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass

import numpy as np

from .scenario import Scenario

DEFAULT_BLOCK = 65536
_WORDS_PER_COUNTER = 4  # Philox advances in 4x64-bit increments


def _stride(u: int) -> int:
    """Draws reserved per trial: U phases padded to the counter granularity."""
    return ((u + _WORDS_PER_COUNTER - 1) // _WORDS_PER_COUNTER) * _WORDS_PER_COUNTER


def _draw_block(master_seed: int, lo: int, hi: int, u: int) -> np.ndarray:
    """Phases for trials [lo, hi), shape (hi-lo, u), uniform on (0, 2*pi)."""
    stride = _stride(u)
    bitgen = np.random.Philox(key=master_seed)
    bitgen.advance(lo * stride // _WORDS_PER_COUNTER)
    raw = np.random.Generator(bitgen).random((hi - lo) * stride)
    raw = raw.reshape(hi - lo, stride)[:, :u]
    raw[raw == 0.0] = 0.5 ** 53  # keep the open-interval support
    return 2.0 * math.pi * raw


def _block_powers(args):
    """Brute-force power columns for one trial block (picklable worker)."""
    (master_seed, lo, hi, u, k, mu, zeta, gamma) = args
    psi = _draw_block(master_seed, lo, hi, u)
    ports = 2.0 * math.pi * np.arange(1, k) / mu  # k-1 phase offsets, ports 2..K
    cos0 = np.cos(psi[:, :1] + ports[None, :])
    mask = cos0 > 0.0
    amp = (cos0 * mask).sum(axis=1)
    alpha = zeta[0] * amp ** 2
    kbar = mask.sum(axis=1)
    ys = np.empty((hi - lo, u - 1))
    for j in range(1, u):
        s = (np.cos(psi[:, j:j + 1] + ports[None, :]) * mask).sum(axis=1)
        ys[:, j - 1] = zeta[j] * s ** 2
    beta = ys.sum(axis=1)
    denom = beta + kbar / (2.0 * gamma)
    # an empty activation set collects nothing: SINR is zero, not 0/0
    sinr = np.divide(alpha, denom, out=np.zeros_like(alpha), where=denom > 0.0)
    return lo, alpha, ys, beta, sinr, kbar


@dataclass(frozen=True)
class TrialBatch:
    """Columnar record of one Monte-Carlo run; immutable once built."""

    n_trials: int
    master_seed: int
    alpha: np.ndarray
    ys: np.ndarray      # shape (n_trials, U-1)
    beta: np.ndarray
    sinr: np.ndarray
    kbar: np.ndarray

    def column(self, name: str) -> np.ndarray:
        if name in ("alpha", "beta", "sinr", "kbar"):
            return getattr(self, name)
        if name.startswith("y_"):
            return self.ys[:, int(name[2:]) - 1]
        raise KeyError(f"unknown column {name!r}")

    def to_csv(self, path) -> None:
        """Columnar export: trial_index, alpha, y_1..y_{U-1}, beta, sinr."""
        n_int = self.ys.shape[1]
        header = ",".join(["trial_index", "alpha"]
                          + [f"y_{j + 1}" for j in range(n_int)]
                          + ["beta", "sinr"])
        cols = [np.arange(self.n_trials)] + [self.alpha] \
            + [self.ys[:, j] for j in range(n_int)] + [self.beta, self.sinr]
        with open(path, "w") as fh:
            fh.write(header + "\n")
            for row in zip(*cols):
                fh.write(",".join(("%d" % row[0],) + tuple("%.12g" % v for v in row[1:])) + "\n")


def run_trials(sc: Scenario, n: int, master_seed: int,
               block_size: int = DEFAULT_BLOCK, workers: int = 1) -> TrialBatch:
    """Run n brute-force trials.

    The result is independent of block_size and workers; blocks are seeded
    by absolute trial index and gathered in index order.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    u, k = sc.users.U, sc.antenna.K
    blocks = [(master_seed, lo, min(lo + block_size, n), u, k, sc.mu,
               tuple(sc.users.zeta), sc.Gamma) for lo in range(0, n, block_size)]

    alpha = np.empty(n)
    ys = np.empty((n, u - 1))
    beta = np.empty(n)
    sinr = np.empty(n)
    kbar = np.empty(n, dtype=np.int64)

    def _store(result):
        lo, a, y, b, s, kb = result
        hi = lo + a.shape[0]
        alpha[lo:hi] = a
        ys[lo:hi] = y
        beta[lo:hi] = b
        sinr[lo:hi] = s
        kbar[lo:hi] = kb

    if workers <= 1 or len(blocks) == 1:
        for blk in blocks:
            _store(_block_powers(blk))
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            for result in pool.map(_block_powers, blocks):
                _store(result)

    return TrialBatch(n_trials=n, master_seed=master_seed, alpha=alpha,
                      ys=ys, beta=beta, sinr=sinr, kbar=kbar)


@dataclass(frozen=True)
class NegativeSetBatch:
    """Per-trial comparison of the positive-cosine and negative-cosine sets."""

    n_trials: int
    master_seed: int
    amp_pos: np.ndarray   # sqrt(alpha) over the positive set
    amp_neg: np.ndarray   # |sum| over the negative set
    sinr_pos: np.ndarray
    sinr_neg: np.ndarray


def negative_set_trials(sc: Scenario, n: int, master_seed: int,
                        block_size: int = DEFAULT_BLOCK) -> NegativeSetBatch:
    """Brute-force both activation sets per trial, with per-set SINR."""
    u, k = sc.users.U, sc.antenna.K
    zeta = sc.users.zeta
    gamma = sc.Gamma
    ports = 2.0 * math.pi * np.arange(1, k) / sc.mu
    amp_p = np.empty(n)
    amp_n = np.empty(n)
    sinr_p = np.empty(n)
    sinr_n = np.empty(n)
    for lo in range(0, n, block_size):
        hi = min(lo + block_size, n)
        psi = _draw_block(master_seed, lo, hi, u)
        cos0 = np.cos(psi[:, :1] + ports[None, :])
        mpos = cos0 > 0.0
        mneg = cos0 < 0.0
        sp = (cos0 * mpos).sum(axis=1)
        sn = (cos0 * mneg).sum(axis=1)
        amp_p[lo:hi] = math.sqrt(zeta[0]) * sp
        amp_n[lo:hi] = math.sqrt(zeta[0]) * np.abs(sn)
        beta_p = np.zeros(hi - lo)
        beta_n = np.zeros(hi - lo)
        for j in range(1, u):
            cj = np.cos(psi[:, j:j + 1] + ports[None, :])
            beta_p += zeta[j] * (cj * mpos).sum(axis=1) ** 2
            beta_n += zeta[j] * (cj * mneg).sum(axis=1) ** 2
        den_p = beta_p + mpos.sum(axis=1) / (2.0 * gamma)
        den_n = beta_n + mneg.sum(axis=1) / (2.0 * gamma)
        ap = zeta[0] * sp ** 2
        an = zeta[0] * sn ** 2
        sinr_p[lo:hi] = np.divide(ap, den_p, out=np.zeros_like(ap), where=den_p > 0.0)
        sinr_n[lo:hi] = np.divide(an, den_n, out=np.zeros_like(an), where=den_n > 0.0)
    return NegativeSetBatch(n_trials=n, master_seed=master_seed, amp_pos=amp_p,
                            amp_neg=amp_n, sinr_pos=sinr_p, sinr_neg=sinr_n)


@dataclass(frozen=True)
class EmpiricalDist:
    """Sorted samples with a recorded histogram and summary moments."""

    sorted_samples: np.ndarray
    bin_edges: np.ndarray
    counts: np.ndarray
    mean: float
    variance: float

    @classmethod
    def from_samples(cls, samples, bins="fd") -> "EmpiricalDist":
        x = np.sort(np.asarray(samples, dtype=float))
        edges = np.histogram_bin_edges(x, bins=bins)
        counts, _ = np.histogram(x, bins=edges)
        return cls(sorted_samples=x, bin_edges=edges, counts=counts,
                   mean=float(x.mean()), variance=float(x.var()))

    def cdf(self, thresholds) -> np.ndarray:
        return empirical_cdf(self.sorted_samples, thresholds)


def empirical_cdf(samples, thresholds) -> np.ndarray:
    """P(X <= t) for each threshold, from the sample."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("empty sample")
    xs = np.sort(x)
    return np.searchsorted(xs, np.asarray(thresholds, dtype=float), side="right") / x.size


def ks_distance(samples, analytic_cdf) -> float:
    """Two-sided Kolmogorov-Smirnov statistic against an analytic CDF callable."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("empty sample")
    F = np.asarray(analytic_cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(F - i / n)), np.max(np.abs(F - (i - 1) / n))))


def ks_critical(alpha: float, n: int) -> float:
    """Asymptotic two-sided KS critical value at significance alpha."""
    return math.sqrt(-0.5 * math.log(alpha / 2.0)) / math.sqrt(n)


def empirical_outage(batch: TrialBatch, gamma: float):
    """Outage estimate with its Wilson 95% interval: (p, lo, hi)."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    n = batch.n_trials
    p = float((batch.sinr < gamma).mean())
    z = 1.959963984540054
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom
    return p, max(center - half, 0.0), min(center + half, 1.0)
