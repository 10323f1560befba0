"""Common interface shared by the concrete space models."""
import math

import numpy as np


class SpaceModel:
    """A source space X, reproduction space Y and distortion rho = distance**k.

    Subclasses set ``space_id``, ``k`` and ``beta`` (sup of distance over
    X x Y) and implement the sampling and geometry hooks below.  Points are
    stored as NumPy arrays with one point per leading index.
    """

    space_id = "space"
    k = 2.0
    beta = math.inf
    symmetric = True

    # geometry
    def distance(self, points, center):
        raise NotImplementedError

    def distortion(self, points, center):
        return self.distance(points, center) ** self.k

    def contains(self, points, tol=1e-9):
        raise NotImplementedError

    # measures
    def sample_reference(self, n, rng):
        """Draw from the normalized reference measure mu on X."""
        raise NotImplementedError

    def sample_codewords(self, n, rng):
        """Draw from the codeword measure nu on Y (defaults to mu)."""
        return self.sample_reference(n, rng)

    # Euclidean embedding for nearest-codeword search and Lloyd updates
    def embed(self, points):
        return np.ascontiguousarray(np.asarray(points, dtype=float).reshape(len(points), -1))

    def embed_codewords(self, points):
        return self.embed(points)

    def distortion_from_sqdist(self, sqdist):
        """Map squared embedding distance to distortion (monotone)."""
        sqdist = np.maximum(sqdist, 0.0)
        return sqdist if self.k == 2.0 else sqdist ** (self.k / 2.0)

    def project(self, embedded):
        """Map ambient centroids back to valid codewords in Y."""
        raise NotImplementedError

    # analytic hooks
    def certificates(self):
        """Return (sub certificate, super certificate); either may be None."""
        raise NotImplementedError

    def quant_bounds(self, n, p=1.0, sigma_p=1.0, alpha=0.5):
        """Return (L_n or None, U_n or None)."""
        from ..quant_bounds import QuantQuery, lower_bound_ln, upper_bound_un

        sub, sup = self.certificates()
        q = QuantQuery(n=n, cert_sub=sub, cert_super=sup, p=p, sigma_p=sigma_p, beta=self.beta)
        lower = lower_bound_ln(q) if sub is not None else None
        upper = upper_bound_un(q) if sup is not None else None
        return lower, upper

    def ball_law(self, delta):
        """(lower, upper) bounds on mu(B(y, delta)) for a codeword center y.

        The default reads them off the certificates; the lower side is only
        used when X = Y so both certificates talk about the same balls.
        """
        sub, sup = self.certificates()
        upper = 1.0
        if sub is not None and delta < sub.delta0:
            upper = min(1.0, sub.bound(delta))
        lower = 0.0
        if sup is not None and self.symmetric and delta < sup.delta0:
            lower = sup.bound(delta)
        return lower, upper

    def special_codebooks(self, n):
        """Known good codebooks for this space (may be empty)."""
        return []

    def initial_codebooks(self, n, samples, rng):
        """Data-driven starting codebooks for Lloyd."""
        return [kmeans_plus_plus(self, samples, n, rng)]

    def describe(self):
        return {"space_id": self.space_id, "k": self.k}


class UniformModel:
    """The reference measure itself viewed as a source distribution."""

    name = "uniform"

    def __init__(self, space):
        self.space = space

    def sample(self, n, rng):
        return self.space.sample_reference(n, rng)

    def log_density(self, points):
        return np.zeros(len(points))

    def entropy(self):
        return 0.0

    def sigma_p(self, p=1.0):
        return 1.0

    def describe(self):
        return {"type": "uniform"}


def kmeans_plus_plus(space, samples, n, rng):
    """D^2 seeding on a training sample, returned as codewords in Y."""
    emb = space.embed(samples)
    first = int(rng.integers(len(samples)))
    chosen = [first]
    d2 = ((emb - emb[first]) ** 2).sum(axis=1)
    for _ in range(1, n):
        total = d2.sum()
        if total <= 0.0:
            idx = int(rng.integers(len(samples)))
        else:
            idx = int(np.searchsorted(np.cumsum(d2), rng.random() * total))
            idx = min(idx, len(samples) - 1)
        chosen.append(idx)
        d2 = np.minimum(d2, ((emb - emb[idx]) ** 2).sum(axis=1))
    return space.project(emb[chosen])
