"""Distribution statistics for integer money balances.

All functions take any 1-d integer sequence of balances (list or ndarray).
Variance is the population variance (divide by N): the agents are the whole
population, not a sample from one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


def _as_balances(balances) -> np.ndarray:
    arr = np.asarray(balances)
    if arr.ndim != 1:
        raise ValueError("balances must be one-dimensional")
    if arr.size == 0:
        raise ValueError("balances must be nonempty")
    return arr


def summarize(balances):
    """Return ``(mean, variance)`` of the balances.

    Both moments come from exact integer sums when the input is integral, so
    the result does not depend on summation order.
    """
    arr = _as_balances(balances)
    n = arr.size
    if np.issubdtype(arr.dtype, np.integer):
        if n * int(np.abs(arr).max()) ** 2 < 2**62:
            wide = arr.astype(np.int64)
            total, sq = int(wide.sum()), int((wide * wide).sum())
        else:
            values = [int(v) for v in arr]
            total, sq = sum(values), sum(v * v for v in values)
        return total / n, (n * sq - total * total) / (n * n)
    return float(np.mean(arr)), float(np.var(arr))


def decile_totals(balances):
    """Sum each tenth of the population after sorting ascending.

    Returns ``(per_decile, top10_total, bottom50_total)`` where
    ``per_decile[0]`` is the poorest tenth.
    """
    arr = _as_balances(balances)
    n = arr.size
    if n % 10:
        raise ConfigError(f"decile partition needs a population divisible by 10, got {n}")
    ordered = np.sort(arr, kind="stable")
    size = n // 10
    per_decile = [int(ordered[i * size:(i + 1) * size].sum()) for i in range(10)]
    return per_decile, per_decile[9], sum(per_decile[:5])


@dataclass(frozen=True)
class Histogram:
    bin_width: int
    edges: tuple
    counts: tuple
    total_count: int

    @property
    def bins(self):
        return list(zip(self.edges, self.counts))

    def to_dict(self, tick=None) -> dict:
        return {
            "bin_width": self.bin_width,
            "edges": list(self.edges),
            "counts": list(self.counts),
            "total": self.total_count,
            "tick": tick,
        }


def histogram(balances, bin_width: int) -> Histogram:
    """Count balances into half-open bins ``[j*w, (j+1)*w)`` starting at 0.

    Bins run from 0 through the bin holding the largest balance; empty bins
    inside that range are kept.
    """
    if int(bin_width) != bin_width or bin_width < 1:
        raise ConfigError(f"bin width must be an integer >= 1, got {bin_width}")
    bin_width = int(bin_width)
    arr = _as_balances(balances).astype(np.int64)
    if arr.min() < 0:
        raise ValueError("balances must be nonnegative")
    counts = np.bincount(arr // bin_width)
    edges = tuple(int(i * bin_width) for i in range(counts.size))
    return Histogram(bin_width, edges, tuple(int(c) for c in counts), int(arr.size))


def ks_distance(balances, cdf) -> float:
    """Sup-norm distance between the empirical CDF and a continuous ``cdf``.

    The empirical CDF of integer data is a step function, so the supremum is
    attained just before or at one of its jumps.
    """
    arr = np.sort(_as_balances(balances).astype(np.float64))
    n = arr.size
    values, first = np.unique(arr, return_index=True)
    below = first / n
    upto = np.append(first[1:], n) / n
    ref = np.asarray(cdf(values), dtype=np.float64)
    return float(max(np.max(np.abs(upto - ref)), np.max(np.abs(ref - below))))


@dataclass(frozen=True)
class ExponentialFit:
    """Boltzmann-Gibbs fit ``p(m) = C * exp(-m / T)``."""

    temperature: float
    normalization: float
    ks_distance: float

    def pdf(self, m):
        return self.normalization * np.exp(-np.asarray(m, dtype=np.float64) / self.temperature)

    def cdf(self, m):
        return -np.expm1(-np.asarray(m, dtype=np.float64) / self.temperature)


@dataclass(frozen=True)
class NormalFit:
    mean: float
    std: float
    ks_distance: float


def fit_boltzmann_gibbs(balances) -> ExponentialFit:
    """Fit the exponential law with temperature equal to the mean balance.

    Raises ``ValueError`` when every balance is zero (no temperature).
    """
    mean, _ = summarize(balances)
    if mean <= 0:
        raise ValueError("degenerate fit: mean balance must be positive")
    temperature = mean

    def cdf(m):
        return -np.expm1(-m / temperature)

    return ExponentialFit(temperature, 1.0 / temperature, ks_distance(balances, cdf))


def _normal_cdf(mean, std):
    erf = np.vectorize(math.erf, otypes=[np.float64])

    def cdf(m):
        if std == 0:
            return (m >= mean).astype(np.float64)
        return 0.5 * (1.0 + erf((m - mean) / (std * math.sqrt(2.0))))

    return cdf


def fit_normal(balances) -> NormalFit:
    """Moment-matched normal fit, used as a baseline against the exponential."""
    mean, var = summarize(balances)
    std = math.sqrt(var)
    return NormalFit(mean, std, ks_distance(balances, _normal_cdf(mean, std)))
