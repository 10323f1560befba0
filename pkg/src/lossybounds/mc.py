"""Seeded random streams and Monte Carlo summary statistics."""
import math
from dataclasses import dataclass

import numpy as np


def stream(seed, *keys):
    """Independent generator for the work item identified by ``keys``.

    Streams depend only on (seed, keys), so results do not change with the
    number of workers or the order in which items are processed.
    """
    if seed is None:
        raise ValueError("an explicit integer seed is required")
    keys = tuple(int(k) for k in keys)
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=keys))


def proportion_interval(count, total):
    """Return (estimate, one-sigma halfwidth) for a binomial proportion.

    Near 0 or 1 the Wald error collapses, so the Wilson score halfwidth
    (z = 1) is used whenever fewer than 10 hits or misses were observed.
    """
    if total <= 0:
        raise ValueError("total must be positive")
    p = count / total
    if min(count, total - count) >= 10:
        return p, math.sqrt(p * (1.0 - p) / total)
    z2 = 1.0
    half = math.sqrt(p * (1.0 - p) / total + z2 / (4.0 * total * total)) / (1.0 + z2 / total)
    return p, half


@dataclass
class RunningMoments:
    """Mean and variance accumulated batch by batch (Chan's merge)."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def add(self, values):
        values = np.asarray(values, dtype=float).ravel()
        n_b = values.size
        if n_b == 0:
            return
        mean_b = float(values.mean())
        m2_b = float(((values - mean_b) ** 2).sum())
        total = self.count + n_b
        delta = mean_b - self.mean
        self.mean += delta * n_b / total
        self.m2 += m2_b + delta * delta * self.count * n_b / total
        self.count = total

    @property
    def variance(self):
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def standard_error(self):
        return math.sqrt(self.variance / self.count) if self.count > 0 else math.inf
