"""Grassmannians G(r, d) over R or C with the chordal distance."""
import math
from dataclasses import dataclass

import numpy as np

from ..rd_bounds import RDQuery, rd_lower_explicit
from ..regularity import RegularityCertificate
from ..special import log_gamma
from .base import SpaceModel

FIELDS = {"R": 1, "C": 2}


def _field_beta(field):
    try:
        return FIELDS[str(field).upper()]
    except KeyError:
        raise ValueError(f"field must be 'R' or 'C', got {field!r}") from None


@dataclass(frozen=True)
class GrassmannShape:
    field: str
    r: int
    s: int
    d: int

    def __post_init__(self):
        _field_beta(self.field)
        for name in ("r", "s", "d"):
            if int(getattr(self, name)) != getattr(self, name) or getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if self.r > self.d or self.s > self.d:
            raise ValueError("need 1 <= r, s <= d")

    @property
    def beta(self):
        return _field_beta(self.field)

    @property
    def a(self):
        return min(self.r, self.s)

    @property
    def b(self):
        return max(self.r, self.s)

    @property
    def m(self):
        return self.beta * self.a * (self.d - self.b)

    @property
    def case(self):
        """1: exact volume law, 2: real equal dimensions, 3: everything else."""
        if (self.beta == 1 and self.b == self.a + 1) or (self.beta == 2 and self.b == self.a):
            return 1
        if self.beta == 1 and self.a == self.b:
            return 2
        return 3

    @property
    def sandwich_exponent(self):
        return self.beta / 2.0 * self.a * (self.b - self.a + 1) - self.a


def grassmann_constant(a, b, d, beta):
    """Small-ball constant c_{a,b,d,beta} of the chordal distance."""
    half = beta / 2.0
    log_c = -log_gamma(beta * a * (d - b) / 2.0 + 1.0)
    if a + b <= d:
        for i in range(1, a + 1):
            log_c += log_gamma(half * (d - i + 1)) - log_gamma(half * (b - i + 1))
    else:
        for i in range(1, d - b + 1):
            log_c += log_gamma(half * (d - i + 1)) - log_gamma(half * (d - a - i + 1))
    return math.exp(log_c)


def _shape(field, r, s, d):
    shape = GrassmannShape(str(field).upper(), int(r), int(s), int(d))
    if shape.m <= 0:
        raise ValueError("degenerate configuration: max(r, s) = d leaves no room")
    return shape


@dataclass(frozen=True)
class VolumeLaw:
    lower: float
    upper: float
    exact: bool


def grassmann_volume(field, r, s, d, delta, delta0=None):
    """Mass of a chordal ball of radius delta, exactly or as a (lower, upper) pair.

    ``delta0`` (default: delta itself, the tightest choice) is the radius
    used in the sandwich factors of the inexact cases.
    """
    shape = _shape(field, r, s, d)
    if not (0.0 < delta <= 1.0):
        raise ValueError("delta must lie in (0, 1]")
    delta0 = delta if delta0 is None else float(delta0)
    if delta0 < delta or delta0 > 1.0:
        raise ValueError("need delta <= delta0 <= 1")
    c = grassmann_constant(shape.a, shape.b, shape.d, shape.beta)
    base = c * delta ** shape.m
    if shape.case == 1:
        return VolumeLaw(base, base, True)
    if shape.case == 2:
        shrink = (1.0 - delta0 * delta0) ** (shape.a / 2.0)
        return VolumeLaw(base, base / shrink if shrink > 0 else math.inf, False)
    return VolumeLaw(base * (1.0 - delta0 * delta0) ** shape.sandwich_exponent, base, False)


def _check_orthonormal(x, tol=1e-8):
    x = np.asarray(x)
    gram = np.swapaxes(x.conj(), -1, -2) @ x
    eye = np.eye(x.shape[-1])
    if np.max(np.abs(gram - eye)) > tol:
        raise ValueError("basis columns are not orthonormal")


def principal_angles(x, y):
    """Principal angles between span(x) and span(y), ascending."""
    _check_orthonormal(x)
    _check_orthonormal(y)
    sv = np.linalg.svd(np.asarray(x).conj().T @ np.asarray(y), compute_uv=False)
    return np.sort(np.arccos(np.clip(sv, 0.0, 1.0)))


def chordal_distance(x, y):
    """sqrt(sum sin^2 theta_i) over the principal angles of two subspaces."""
    theta = principal_angles(x, y)
    return float(math.sqrt(np.sum(np.sin(theta) ** 2)))


def chordal_distance_batch(xs, y):
    """Chordal distances from each basis in ``xs`` (N, d, r) to the basis ``y``."""
    xs = np.asarray(xs)
    y = np.asarray(y)
    prod = np.swapaxes(xs.conj(), -1, -2) @ y
    a = min(xs.shape[-1], y.shape[-1])
    sq = a - np.sum(np.abs(prod) ** 2, axis=(-2, -1))
    return np.sqrt(np.maximum(sq, 0.0))


def sample_grassmann(field, d, r, n, rng):
    """Uniform samples via orthonormalized Gaussian matrices, shape (n, d, r)."""
    beta = _field_beta(field)
    g = rng.standard_normal((n, d, r))
    if beta == 2:
        g = (g + 1j * rng.standard_normal((n, d, r))) / math.sqrt(2.0)
    if r == 1:
        return g / np.linalg.norm(g, axis=1, keepdims=True)
    q, _ = np.linalg.qr(g)
    return q


def _h_inverse(c, m, a, target):
    """Solve c u^m / (1 - u^2)^(a/2) = target for u in (0, 1) by bisection."""
    log_t = math.log(target)

    def log_h(u):
        return math.log(c) + m * math.log(u) - a / 2.0 * math.log1p(-u * u)

    # h(u) >= c u^m brackets the root from above; the shrink factor from below
    u0 = math.exp((log_t - math.log(c)) / m)
    if u0 < 1.0:
        lo, hi = u0 * (1.0 - u0 * u0) ** (a / (2.0 * m)), u0
    else:
        lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if log_h(mid) > log_t:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def grassmann_h(field, r, d, u):
    """h(u) = c u^m / (1 - u^2)^(a/2) for the real equal-dimension case."""
    shape = _shape(field, r, r, d)
    c = grassmann_constant(shape.a, shape.b, shape.d, shape.beta)
    return c * u ** shape.m / (1.0 - u * u) ** (shape.a / 2.0)


def grassmann_h_inverse(field, r, d, value):
    shape = _shape(field, r, r, d)
    c = grassmann_constant(shape.a, shape.b, shape.d, shape.beta)
    return _h_inverse(c, shape.m, shape.a, value)


def grassmann_bounds(field, r, s, d, n, p=1.0, sigma_p=1.0, alpha=0.5, exact_inversion=False):
    """(L_n, U_n) for quantizing G(r, d) with codewords in G(s, d).

    L_n is None below the stated threshold on n.  U_n is infinite for n = 1
    in the schedule case (delta_1 = 1 leaves no certified ball).
    """
    shape = _shape(field, r, s, d)
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    m, a = shape.m, shape.a
    c = grassmann_constant(shape.a, shape.b, shape.d, shape.beta)
    scale = m / (m + 2.0 * p)
    load = p * (math.log(n) + math.log(sigma_p))  # log(n^p sigma^p)
    lower = None
    if shape.beta == 1 and shape.a == shape.b:
        if exact_inversion:
            u = _h_inverse(c, m, a, math.exp(-load))
            lower = scale * u * u
        elif load + math.log(c) > 0.0:
            x = math.exp(-2.0 / m * (math.log(c) + load))
            lower = scale * x * (1.0 - x) ** (1.0 / (d - a))
    elif load + math.log(c) >= 0.0:
        lower = scale * math.exp(-2.0 / m * (math.log(c) + load))
    head = math.exp(log_gamma(1.0 + 2.0 / m))
    if shape.case in (1, 2):
        upper = head * (c * n) ** (-2.0 / m) + (a - 1.0) * math.exp(-n * c)
    else:
        delta_n = n ** (-alpha / m)
        b_n = c * (1.0 - delta_n * delta_n) ** shape.sandwich_exponent
        if b_n <= 0.0:
            upper = math.inf
        else:
            upper = head * (n * b_n) ** (-2.0 / m) + (a - delta_n * delta_n) * math.exp(-n * b_n * delta_n ** m)
    return lower, upper


def grassmann_projection_cert(p, d, r=1.0):
    """Certificate for rho(x, y) = ||P_x^perp y|| between G^R(p, d) and S^{d-1}(r)."""
    if not (1 <= p < d):
        raise ValueError("need 1 <= p < d")
    log_c = log_gamma(1.0 + d / 2.0) - (d - p) * math.log(r) - log_gamma(1.0 + p / 2.0) - log_gamma(1.0 + (d - p) / 2.0)
    return RegularityCertificate("sub", float(d - p), math.exp(log_c), math.inf, 1.0)


def grassmann_rd_lower(field, r, s, d, entropy, D, alpha=0.25):
    """R^L(D) for a source on G(r, d), D in (0, 1)."""
    shape = _shape(field, r, s, d)
    if not (0.0 < D < 1.0):
        raise ValueError("D must lie in (0, 1)")
    c = grassmann_constant(shape.a, shape.b, shape.d, shape.beta)
    if shape.case == 2:
        delta = D ** alpha
        cert = RegularityCertificate("sub", shape.m, c / (1.0 - delta * delta) ** (shape.a / 2.0), delta, 2.0)
    else:
        cert = RegularityCertificate("sub", shape.m, c, 1.0, 2.0)
    return rd_lower_explicit(RDQuery(entropy, cert, D, unit_mass=True))


class Grassmannian(SpaceModel):
    """X = G(r, d), Y = G(s, d) with rho = chordal distance squared.

    Points are (d, r) bases; the Euclidean embedding is the projection
    matrix x x^H, whose squared Frobenius distances are (r + s - 2 ||x^H y||^2).
    """

    k = 2.0

    def __init__(self, field, r, s, d, delta0=0.5):
        self.shape = _shape(field, r, s, d)
        self.field = self.shape.field
        self.r, self.s, self.d = self.shape.r, self.shape.s, self.shape.d
        self.space_id = f"grassmann-{self.field}-{self.r}-{self.s}-{self.d}"
        self.beta = math.sqrt(self.shape.a)
        self.symmetric = self.r == self.s
        self.delta0 = float(delta0)

    @property
    def constant(self):
        sh = self.shape
        return grassmann_constant(sh.a, sh.b, sh.d, sh.beta)

    def distance(self, points, center):
        return chordal_distance_batch(points, center)

    def contains(self, points, tol=1e-9):
        pts = np.asarray(points)
        gram = np.swapaxes(pts.conj(), -1, -2) @ pts
        return bool(np.max(np.abs(gram - np.eye(pts.shape[-1]))) <= tol)

    def sample_reference(self, n, rng):
        return sample_grassmann(self.field, self.d, self.r, n, rng)

    def sample_codewords(self, n, rng):
        return sample_grassmann(self.field, self.d, self.s, n, rng)

    def embed(self, points):
        pts = np.asarray(points)
        proj = pts @ np.swapaxes(pts.conj(), -1, -2)
        flat = proj.reshape(len(pts), -1)
        if self.shape.beta == 2:
            flat = np.concatenate([flat.real, flat.imag], axis=1)
        return np.ascontiguousarray(flat, dtype=float)

    def distortion_from_sqdist(self, sqdist):
        return np.maximum((sqdist - abs(self.r - self.s)) / 2.0, 0.0)

    def project(self, embedded):
        emb = np.asarray(embedded, dtype=float)
        dd = self.d * self.d
        if self.shape.beta == 2:
            mats = (emb[:, :dd] + 1j * emb[:, dd:]).reshape(-1, self.d, self.d)
        else:
            mats = emb.reshape(-1, self.d, self.d)
        mats = 0.5 * (mats + np.swapaxes(mats.conj(), -1, -2))
        _, vecs = np.linalg.eigh(mats)
        # eigenvalues ascend: the last s eigenvectors span the best codeword
        return vecs[..., -self.s:]

    def certificates(self):
        sh = self.shape
        c = self.constant
        if sh.case == 1:
            sub = RegularityCertificate("sub", sh.m, c, 1.0, 2.0)
            sup = RegularityCertificate("super", sh.m, c, 1.0, 2.0)
        elif sh.case == 2:
            sub = RegularityCertificate("sub", sh.m, c / (1.0 - self.delta0 ** 2) ** (sh.a / 2.0), self.delta0, 2.0)
            sup = RegularityCertificate("super", sh.m, c, 1.0, 2.0)
        else:
            sub = RegularityCertificate("sub", sh.m, c, 1.0, 2.0)
            b = c * (1.0 - self.delta0 ** 2) ** sh.sandwich_exponent
            sup = RegularityCertificate("super", sh.m, b, self.delta0, 2.0)
        return sub, sup

    def ball_law(self, delta):
        law = grassmann_volume(self.field, self.r, self.s, self.d, delta)
        return law.lower, law.upper

    def quant_bounds(self, n, p=1.0, sigma_p=1.0, alpha=0.5):
        return grassmann_bounds(self.field, self.r, self.s, self.d, n, p, sigma_p, alpha)

    def rd_lower(self, entropy, D, alpha=0.25):
        return grassmann_rd_lower(self.field, self.r, self.s, self.d, entropy, D, alpha)

    def rd_limit_constant(self):
        return RegularityCertificate("sub", self.shape.m, self.constant, math.inf, 2.0)

    def describe(self):
        return {"type": "grassmann", "field": self.field, "r": self.r, "s": self.s, "d": self.d}
