"""Hyperspheres with the normalized surface measure, plus von Mises-Fisher sources."""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..rd_bounds import RDQuery, rd_lower_explicit
from ..regularity import RegularityCertificate
from ..special import (
    ball_volume,
    gamma,
    inverse_regularized_beta,
    log_bessel_i,
    log_gamma,
    regularized_beta,
    sinc,
    sphere_area,
)
from .base import SpaceModel


def _check_sphere(d, r):
    if int(d) != d or d < 2:
        raise ValueError(f"sphere dimension d must be an integer >= 2, got {d!r}")
    if not (r > 0):
        raise ValueError("radius must be positive")


def cap_profile(d, alpha):
    """G(alpha) = a(1)/2 * I_{(d-1)/2,1/2}(alpha) / alpha**((d-1)/2) on (0, 1].

    a(1) is the area of the unit sphere in R^d; G is increasing in alpha.
    """
    if not (0.0 < alpha <= 1.0):
        raise ValueError("alpha must lie in (0, 1]")
    half = (d - 1) / 2.0
    return 0.5 * sphere_area(d, 1.0) * regularized_beta(half, 0.5, alpha) / alpha ** half


def sphere_limit_constant(d, r=1.0):
    """Small-ball constant v^{(d-1)}(1) / a^{(d-1)}(r) shared by both certificates."""
    _check_sphere(d, r)
    return ball_volume(d - 1, 1.0) / sphere_area(d, r)


def sphere_cap_measure(d, r, delta, ambient=False):
    """Normalized surface mass of {x : ||x - y|| < delta}.

    For centers y on the sphere this is exact, (1/2) I_{(d-1)/2,1/2}(h(delta^2/r^2))
    with h(t) = t (1 - t/4), valid for delta <= sqrt(2) r.  With ``ambient``
    the center may be any point of R^d and the value (1/2) I(delta^2/r^2),
    valid for delta <= r, is an upper bound instead.
    """
    _check_sphere(d, r)
    half = (d - 1) / 2.0
    t = (delta / r) ** 2
    if ambient:
        if not (0.0 < delta <= r):
            raise ValueError("ambient cap bound needs 0 < delta <= r")
        return 0.5 * regularized_beta(half, 0.5, t)
    if not (0.0 < delta <= math.sqrt(2.0) * r * (1 + 1e-15)):
        raise ValueError("on-sphere cap mass needs 0 < delta <= sqrt(2) r")
    return 0.5 * regularized_beta(half, 0.5, min(t * (1.0 - t / 4.0), 1.0))


@dataclass(frozen=True)
class SphereCertificates:
    sub: RegularityCertificate
    super: Optional[RegularityCertificate]


def sphere_certificates(d, r, delta0, ambient=False):
    """Certificates for ||x - y|| (k = 2, dimension d - 1) with radius delta0.

    Sub constant: G(delta0^2/r^2) / a(r).  On the sphere radii up to sqrt(2) r
    are allowed; beyond delta0 = r the profile argument is capped at 1, which
    stays valid because the exact cap argument h(t) never exceeds 1.
    Super constant (sphere only): v(1)/a(r) * (1 - delta0^2/(4 r^2))^((d-1)/2).
    """
    _check_sphere(d, r)
    limit = r if ambient else math.sqrt(2.0) * r
    if not (0.0 < delta0 <= limit * (1 + 1e-15)):
        raise ValueError(f"delta0 must lie in (0, {limit}] for this configuration")
    m = float(d - 1)
    t = min((delta0 / r) ** 2, 1.0)
    c = cap_profile(d, t) / sphere_area(d, r)
    sub = RegularityCertificate("sub", m, c, float(delta0), 2.0)
    sup = None
    if not ambient:
        b = sphere_limit_constant(d, r) * (1.0 - delta0 ** 2 / (4.0 * r * r)) ** ((d - 1) / 2.0)
        sup = RegularityCertificate("super", m, b, float(delta0), 2.0)
    return SphereCertificates(sub, sup)


def sphere_kd(d):
    """k_d = (2 sqrt(pi) Gamma((d+1)/2) / Gamma(d/2)) ** (2/(d-1))."""
    if d < 2:
        raise ValueError("d must be >= 2")
    log_inner = math.log(2.0 * math.sqrt(math.pi)) + log_gamma((d + 1) / 2.0) - log_gamma(d / 2.0)
    return math.exp(2.0 / (d - 1) * log_inner)


def sphere_bounds(d, r, n, p=1.0, sigma_p=1.0, alpha=0.5):
    """(L_n, U_n) for squared-Euclidean quantization on S^{d-1}(r).

    L_n is None when n is below n0 = 2^(1/p) / sigma_p.
    """
    _check_sphere(d, r)
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    m = d - 1.0
    log_u = math.log(2.0) - p * (math.log(n) + math.log(sigma_p))
    lower = None
    if log_u <= 0.0:
        s = inverse_regularized_beta(m / 2.0, 0.5, math.exp(log_u))
        lower = m / (m + 2.0 * p) * r * r * s
    delta_n = math.sqrt(2.0) * r * n ** (-alpha / m)
    b = sphere_limit_constant(d, r) * (1.0 - delta_n ** 2 / (4.0 * r * r)) ** (m / 2.0)
    upper = gamma((d + 1.0) / (d - 1.0)) * (b * n) ** (-2.0 / m)
    upper += (4.0 * r * r - delta_n ** 2) * math.exp(-b * n * delta_n ** m)
    return lower, upper


def sphere_rd_lower(d, r, entropy, D, alpha=0.25):
    """R^L(D) for a source on S^{d-1}(r) under squared Euclidean distortion.

    Uses the certificate at radius delta_D = min(D^alpha, r), alpha in (0, 1/2).
    """
    if not (0.0 < alpha < 0.5):
        raise ValueError("alpha must lie in (0, 1/2)")
    delta = min(D ** alpha, r)
    cert = sphere_certificates(d, r, delta, ambient=True).sub
    return rd_lower_explicit(RDQuery(entropy, cert, D, unit_mass=True))


def circle_closed_forms(r, n):
    """(equally spaced codebook distortion 2 r^2 (1 - sinc(1/n)), limit coefficient r^2 pi^2 / 3)."""
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    return 2.0 * r * r * (1.0 - sinc(1.0 / n)), r * r * math.pi ** 2 / 3.0


class Hypersphere(SpaceModel):
    """X = Y = S^{d-1}(r) with rho(x, y) = ||x - y||^2."""

    k = 2.0

    def __init__(self, d, r=1.0, delta0=None):
        _check_sphere(d, r)
        self.d = int(d)
        self.r = float(r)
        self.space_id = f"sphere-d{self.d}"
        self.beta = 2.0 * self.r
        self.delta0 = math.sqrt(2.0) * self.r if delta0 is None else float(delta0)

    def distance(self, points, center):
        diff = np.asarray(points, dtype=float) - np.asarray(center, dtype=float).reshape(1, -1)
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def contains(self, points, tol=1e-12):
        norms = np.linalg.norm(np.asarray(points, dtype=float), axis=1)
        return bool(np.all(np.abs(norms - self.r) <= tol * max(1.0, self.r)))

    def sample_reference(self, n, rng):
        g = rng.standard_normal((n, self.d))
        return self.r * g / np.linalg.norm(g, axis=1, keepdims=True)

    def project(self, embedded):
        pts = np.asarray(embedded, dtype=float).reshape(-1, self.d)
        norms = np.linalg.norm(pts, axis=1, keepdims=True)
        out = pts.copy()
        ok = norms[:, 0] > 1e-300
        out[ok] = self.r * pts[ok] / norms[ok]
        # a zero centroid has no preferred direction; fall back to a pole
        out[~ok] = 0.0
        out[~ok, 0] = self.r
        return out

    def certificates(self):
        certs = sphere_certificates(self.d, self.r, self.delta0, ambient=False)
        return certs.sub, certs.super

    def quant_bounds(self, n, p=1.0, sigma_p=1.0, alpha=0.5):
        return sphere_bounds(self.d, self.r, n, p, sigma_p, alpha)

    def ball_law(self, delta):
        mass = sphere_cap_measure(self.d, self.r, delta)
        return mass, mass

    def special_codebooks(self, n):
        if self.d != 2:
            return []
        angles = 2.0 * math.pi * np.arange(n) / n
        return [self.r * np.column_stack([np.cos(angles), np.sin(angles)])]

    def rd_lower(self, entropy, D, alpha=0.25):
        return sphere_rd_lower(self.d, self.r, entropy, D, alpha)

    def rd_limit_constant(self):
        return RegularityCertificate("sub", self.d - 1.0, sphere_limit_constant(self.d, self.r), math.inf, 2.0)

    def describe(self):
        return {"type": "sphere", "d": self.d, "r": self.r}


# von Mises-Fisher ----------------------------------------------------------

def vmf_log_normalizer(d, kappa):
    """log c_d(kappa), the vMF density constant w.r.t. the normalized surface measure."""
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    if kappa == 0.0:
        return 0.0
    nu = d / 2.0 - 1.0
    return (
        nu * math.log(kappa)
        - log_gamma(d / 2.0)
        - nu * math.log(2.0)
        - log_bessel_i(nu, kappa)
    )


def vmf_mean_resultant(d, kappa):
    """A_d(kappa) = I_{d/2}(kappa) / I_{d/2-1}(kappa) = E[mu^T X]."""
    if kappa == 0.0:
        return 0.0
    return math.exp(log_bessel_i(d / 2.0, kappa) - log_bessel_i(d / 2.0 - 1.0, kappa))


@dataclass(frozen=True)
class VMFFunctionals:
    normalizer: float
    entropy: float
    sigma_1: float
    omega: Optional[float]


def vmf_functionals(kappa, d, want_omega=None):
    """(c_d, entropy, Sigma_1, Omega_{2/(d-1)}) of a von Mises-Fisher source.

    Omega is only defined for d >= 4; requesting it for smaller d raises.
    """
    if int(d) != d or d < 2:
        raise ValueError("d must be an integer >= 2")
    if want_omega and d < 4:
        raise ValueError("Omega_{2/(d-1)} is only available for d >= 4")
    log_c = vmf_log_normalizer(d, kappa)
    entropy = -log_c - kappa * vmf_mean_resultant(d, kappa)
    sigma_1 = math.exp(log_c + kappa)
    omega = None
    if d >= 4 and want_omega is not False:
        q = (d - 3.0) / (d - 1.0)
        omega = math.exp(q * log_c - vmf_log_normalizer(d, q * kappa))
    return VMFFunctionals(math.exp(log_c), entropy, sigma_1, omega)


class VonMisesFisher:
    """Density c_d(kappa) exp(kappa mu^T x / r) w.r.t. the surface measure of S^{d-1}(r)."""

    name = "vmf"

    def __init__(self, space, kappa, mean_direction=None):
        if not isinstance(space, Hypersphere):
            raise TypeError("von Mises-Fisher sources live on a Hypersphere")
        if not (kappa >= 0):
            raise ValueError("kappa must be nonnegative")
        self.space = space
        self.d = space.d
        self.kappa = float(kappa)
        mu = np.zeros(self.d)
        mu[0] = 1.0
        if mean_direction is not None:
            mu = np.asarray(mean_direction, dtype=float).reshape(self.d)
            norm = np.linalg.norm(mu)
            if abs(norm - 1.0) > 1e-9:
                raise ValueError("mean direction must be a unit vector")
            mu = mu / norm
        self.mean_direction = mu
        self._log_c = vmf_log_normalizer(self.d, self.kappa)

    @property
    def normalizer(self):
        return math.exp(self._log_c)

    def log_density(self, points):
        pts = np.asarray(points, dtype=float) / self.space.r
        return self._log_c + self.kappa * (pts @ self.mean_direction)

    def sample(self, n, rng):
        d, kappa = self.d, self.kappa
        if kappa == 0.0:
            return self.space.sample_reference(n, rng)
        # rejection sampler for the cosine w = mu^T x
        b = (d - 1.0) / (2.0 * kappa + math.sqrt(4.0 * kappa * kappa + (d - 1.0) ** 2))
        x0 = (1.0 - b) / (1.0 + b)
        c = kappa * x0 + (d - 1.0) * math.log(1.0 - x0 * x0)
        w = np.empty(n)
        filled = 0
        while filled < n:
            want = n - filled
            batch = int(want * 1.25) + 16
            z = rng.beta((d - 1.0) / 2.0, (d - 1.0) / 2.0, batch)
            cand = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z)
            u = rng.random(batch)
            ok = kappa * cand + (d - 1.0) * np.log1p(-x0 * cand) - c >= np.log(u)
            got = cand[ok][:want]
            w[filled:filled + got.size] = got
            filled += got.size
        v = rng.standard_normal((n, d))
        v -= np.outer(v @ self.mean_direction, self.mean_direction)
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        x = w[:, None] * self.mean_direction[None, :] + np.sqrt(np.maximum(1.0 - w * w, 0.0))[:, None] * v
        return self.space.r * x

    def entropy(self):
        return vmf_functionals(self.kappa, self.d, want_omega=False).entropy

    def sigma_p(self, p=1.0):
        """L^{p/(p-1)} norm of the density (sup-norm for p = 1)."""
        if p == 1.0:
            return math.exp(self._log_c + self.kappa)
        q = p / (p - 1.0)
        return math.exp(self._log_c - vmf_log_normalizer(self.d, q * self.kappa) / q)

    def omega(self, alpha):
        """E[f(X)^(-alpha)] for alpha in (0, 1]."""
        if not (0.0 < alpha <= 1.0):
            raise ValueError("alpha must lie in (0, 1]")
        q = 1.0 - alpha
        return math.exp(q * self._log_c - vmf_log_normalizer(self.d, q * self.kappa))

    def describe(self):
        return {"type": "vmf", "kappa": self.kappa, "mean_direction": self.mean_direction.tolist()}
