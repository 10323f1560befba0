"""Regularity certificates and the algebra that combines them.

A certificate with fields (kind, m, constant, delta0, k) asserts that balls
measured with ``rho ** (1 / k)`` satisfy

    kind == "sub":    mu(B(y, delta)) <= constant * delta ** m
    kind == "super":  nu(B(x, delta)) >= constant * delta ** m

for every center and every 0 < delta < delta0, where ``rho`` is the
distortion measure and ``delta0`` may be ``inf``.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .mc import proportion_interval, stream
from .special import log_gamma

KINDS = ("sub", "super")


@dataclass(frozen=True)
class RegularityCertificate:
    kind: str
    m: float
    constant: float
    delta0: float
    k: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        for name in ("m", "constant", "k"):
            value = getattr(self, name)
            if not (value > 0.0) or not math.isfinite(value):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if not (self.delta0 > 0.0) or math.isnan(self.delta0):
            raise ValueError(f"delta0 must be positive (inf allowed), got {self.delta0!r}")

    @property
    def is_global(self):
        return math.isinf(self.delta0)

    def bound(self, delta):
        """The certified ball-mass bound constant * delta ** m."""
        return self.constant * float(delta) ** self.m

    def to_dict(self):
        return {
            "kind": self.kind,
            "m": self.m,
            "constant": self.constant,
            "delta0": "inf" if math.isinf(self.delta0) else self.delta0,
            "k": self.k,
        }

    @classmethod
    def from_dict(cls, data):
        delta0 = data.get("delta0", "inf")
        delta0 = math.inf if delta0 in ("inf", "Infinity", None) else float(delta0)
        return cls(
            kind=data["kind"],
            m=float(data["m"]),
            constant=float(data["constant"]),
            delta0=delta0,
            k=float(data.get("k", 1.0)),
        )


@dataclass(frozen=True)
class DensityBound:
    """Norm of the density of X with respect to the reference measure.

    For p = 1 this is the sup-norm, otherwise the L^{p/(p-1)} norm.
    """

    p: float
    value: float

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise ValueError("p must be >= 1")
        if not (self.value > 0.0) or not math.isfinite(self.value):
            raise ValueError("density norm must be positive and finite")


@dataclass(frozen=True)
class BallProbe:
    """Monte Carlo estimate of the mass of one ball."""

    center: object
    radius: float
    estimate: float
    ci_halfwidth: float
    samples: int
    bound: float
    passed: bool


def scale_certificate(cert, alpha, beta, new_k=None):
    """Certificate for the scaled pair (beta * mu, alpha * rho).

    The result is stated for ``(alpha * rho) ** (1 / new_k)``; with
    ``new_k = 1`` this gives dimension m / k, constant beta * c / alpha**(m/k)
    and radius alpha * delta0**k.
    """
    if not (alpha > 0.0 and beta > 0.0):
        raise ValueError("alpha and beta must be positive")
    new_k = cert.k if new_k is None else float(new_k)
    if not (new_k > 0.0):
        raise ValueError("new_k must be positive")
    ratio = new_k / cert.k
    m_new = cert.m * ratio
    constant = beta * cert.constant * alpha ** (-cert.m / cert.k)
    if math.isinf(cert.delta0):
        delta0 = math.inf
    else:
        delta0 = (alpha * cert.delta0 ** cert.k) ** (1.0 / new_k)
    return RegularityCertificate(cert.kind, m_new, constant, delta0, new_k)


def globalize(cert, total_mass_one):
    """Remove the radius restriction of a subregularity certificate.

    Needs a probability measure: balls beyond delta0 have mass at most one,
    which the enlarged constant max(c, delta0 ** -m) covers.
    """
    if cert.kind != "sub":
        raise ValueError("only subregularity certificates can be globalized")
    if math.isinf(cert.delta0):
        return cert
    if not total_mass_one:
        raise ValueError("globalization requires a probability measure")
    constant = max(cert.constant, cert.delta0 ** (-cert.m))
    return RegularityCertificate("sub", cert.m, constant, math.inf, cert.k)


def transfer(cert, density_bound):
    """Push a subregularity certificate from the reference measure to P_X.

    Hoelder's inequality gives dimension m/p and constant ||f|| * c**(1/p).
    """
    if cert.kind != "sub":
        raise ValueError("transfer applies to subregularity certificates")
    p = density_bound.p
    return RegularityCertificate(
        "sub", cert.m / p, density_bound.value * cert.constant ** (1.0 / p), cert.delta0, cert.k
    )


def product_certificate(certs, alphas, k):
    """Certificate for the product measure under sum_i alpha_i * rho_i.

    Factors are processed in a canonical order so permuting the input gives
    bit-identical output.
    """
    certs = list(certs)
    alphas = [float(a) for a in alphas]
    if not certs:
        raise ValueError("need at least one factor")
    if len(certs) != len(alphas):
        raise ValueError("one weight per factor is required")
    kinds = {c.kind for c in certs}
    if len(kinds) != 1:
        raise ValueError("cannot mix sub- and superregular factors")
    if any(not (a > 0.0) for a in alphas):
        raise ValueError("weights must be positive")
    k = float(k)
    if any(c.k != k for c in certs):
        raise ValueError("all factors must be certified for the same exponent k")
    pairs = sorted(zip(certs, alphas), key=lambda ca: (ca[0].m, ca[0].constant, ca[0].delta0, ca[1]))
    m_total = math.fsum(c.m for c, _ in pairs)
    log_ratio = math.fsum(log_gamma(1.0 + c.m / k) for c, _ in pairs) - log_gamma(1.0 + m_total / k)
    scaled = 1.0
    for c, a in pairs:
        scaled *= c.constant * a ** (-c.m / k)
    delta0 = min(a ** (1.0 / k) * c.delta0 for c, a in pairs)
    return RegularityCertificate(kinds.pop(), m_total, math.exp(log_ratio) * scaled, delta0, k)


def _ball_fraction(space, measure, center, radius, cert_k, samples, rng):
    points = measure(samples, rng)
    dist = space.distance(points, center)
    # the certificate speaks about rho ** (1/cert_k) = dist ** (space.k / cert_k)
    if cert_k != space.k:
        dist = dist ** (space.k / cert_k)
    return int(np.count_nonzero(dist < radius))


def verify_certificate(cert, space, centers, radii, samples, seed, workers=1, sigmas=3.0):
    """Check a certificate against Monte Carlo ball masses.

    Each (center, radius) pair gets its own random stream keyed by its index,
    so results are reproducible and independent of ``workers``.  A probe
    passes when the certified bound lies within ``sigmas`` standard errors on
    the permitted side of the estimate.
    """
    radii = [float(r) for r in radii]
    for r in radii:
        if not (r > 0.0):
            raise ValueError("radii must be positive")
        if r >= cert.delta0:
            raise ValueError(f"radius {r} is outside the certified range (< {cert.delta0})")
    centers = list(centers)
    measure = space.sample_reference if cert.kind == "sub" else space.sample_codewords
    jobs = [(i, j) for i in range(len(centers)) for j in range(len(radii))]

    def run(job):
        i, j = job
        rng = stream(seed, i * len(radii) + j)
        hits = _ball_fraction(space, measure, centers[i], radii[j], cert.k, samples, rng)
        estimate, half = proportion_interval(hits, samples)
        bound = cert.bound(radii[j])
        if cert.kind == "sub":
            passed = estimate - sigmas * half <= bound
        else:
            passed = estimate + sigmas * half >= bound
        return BallProbe(centers[i], radii[j], estimate, half, samples, bound, bool(passed))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, jobs))
    return [run(job) for job in jobs]


def layer_cake(superlevel_mass, upper):
    """Integral of a nonnegative f bounded by ``upper`` via its superlevel sets.

    ``superlevel_mass(t)`` must return mu({f >= t}).
    """
    value, _ = integrate.quad(superlevel_mass, 0.0, upper, limit=200, epsabs=1e-13, epsrel=1e-12)
    return value
