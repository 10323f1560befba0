"""The unit interval with Lebesgue measure."""
import math

import numpy as np

from ..regularity import RegularityCertificate
from .base import SpaceModel


class UnitInterval(SpaceModel):
    """X = Y = [0, 1], mu = Lebesgue, rho(x, y) = |x - y| ** k."""

    space_id = "interval"
    beta = 1.0

    def __init__(self, k=2.0):
        if not (k > 0):
            raise ValueError("k must be positive")
        self.k = float(k)

    def distance(self, points, center):
        points = np.asarray(points, dtype=float).reshape(-1)
        return np.abs(points - float(np.asarray(center).reshape(-1)[0]))

    def contains(self, points, tol=1e-12):
        points = np.asarray(points, dtype=float)
        return bool(np.all((points >= -tol) & (points <= 1.0 + tol)))

    def sample_reference(self, n, rng):
        return rng.random((n, 1))

    def project(self, embedded):
        return np.clip(np.asarray(embedded, dtype=float).reshape(-1, 1), 0.0, 1.0)

    def certificates(self):
        # Lebesgue balls in R have length 2 delta; inside [0, 1] at least delta up to delta = 1
        sub = RegularityCertificate("sub", 1.0, 2.0, math.inf, self.k)
        sup = RegularityCertificate("super", 1.0, 1.0, 1.0, self.k)
        return sub, sup

    def initial_codebooks(self, n, samples, rng):
        # sample quantiles are the natural scalar-quantizer start
        qs = np.quantile(np.asarray(samples).reshape(-1), (np.arange(n) + 0.5) / n)
        return [qs.reshape(-1, 1)] + super().initial_codebooks(n, samples, rng)

    def exact_vn(self, n):
        # n equal cells with midpoints are optimal for the uniform law
        return 1.0 / ((self.k + 1.0) * (2.0 * n) ** self.k)

    def describe(self):
        return {"type": "interval", "k": self.k}
