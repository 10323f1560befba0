"""Self-similar attractors of iterated function systems, with a Cantor preset."""
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..regularity import RegularityCertificate
from .base import SpaceModel

CANTOR_DIM = math.log(2.0) / math.log(3.0)
CANTOR_DEPTH = 52


@dataclass(frozen=True)
class Similarity:
    ratio: float
    orthogonal: np.ndarray
    translation: np.ndarray

    def apply(self, points):
        return self.ratio * points @ self.orthogonal.T + self.translation


@dataclass(frozen=True)
class SelfSimilarSet:
    maps: Tuple[Similarity, ...]
    m: float
    diam: float
    kappa_min: float
    c_sub: Optional[float] = None
    diam_estimated: bool = False
    preset: Optional[str] = None
    extra: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.maps[0].translation.size


def similarity_dimension(ratios, tol=1e-12):
    """Solve sum(ratios ** m) = 1 by bisection; the left side decreases in m."""
    ratios = [float(k) for k in ratios]
    if not ratios:
        raise ValueError("need at least one similarity")
    if any(not (0.0 < k < 1.0) for k in ratios):
        raise ValueError("contraction ratios must lie in (0, 1)")

    def excess(m):
        return math.fsum(k ** m for k in ratios) - 1.0

    lo, hi = 0.0, 1.0
    while excess(hi) > 0.0:
        hi *= 2.0
    if excess(lo) <= 0.0:
        return 0.0
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _attractor_cloud(maps, depth_points=4096):
    dim = maps[0].translation.size
    # start from the fixed point of the first map
    first = maps[0]
    a = np.eye(dim) - first.ratio * first.orthogonal
    cloud = np.linalg.solve(a, first.translation).reshape(1, dim)
    if len(maps) == 1:
        return cloud
    while len(cloud) * len(maps) <= depth_points:
        cloud = np.concatenate([s.apply(cloud) for s in maps])
    return cloud


def estimate_diameter(maps):
    """Diameter of a finite-depth image of a fixed point (a lower estimate)."""
    cloud = _attractor_cloud(maps)
    diff = cloud[:, None, :] - cloud[None, :, :]
    return float(np.sqrt((diff ** 2).sum(axis=-1)).max())


def selfsimilar_build(similarities, diam=None, c_sub=None):
    """Build a SelfSimilarSet from (ratio, orthogonal, translation) triples."""
    maps = []
    for item in similarities:
        ratio, orth, trans = item
        trans = np.atleast_1d(np.asarray(trans, dtype=float))
        orth = np.asarray(orth, dtype=float).reshape(trans.size, trans.size)
        if not np.allclose(orth @ orth.T, np.eye(trans.size), atol=1e-10):
            raise ValueError("the linear part must be orthogonal")
        maps.append(Similarity(float(ratio), orth, trans))
    m = similarity_dimension([s.ratio for s in maps])
    estimated = diam is None
    if estimated:
        diam = estimate_diameter(maps)
    return SelfSimilarSet(
        tuple(maps), m, float(diam), min(s.ratio for s in maps), c_sub, estimated
    )


def cantor_set():
    """The middle-thirds Cantor set with its standard constants."""
    one = np.eye(1)
    maps = (
        Similarity(1.0 / 3.0, one, np.array([0.0])),
        Similarity(1.0 / 3.0, one, np.array([2.0 / 3.0])),
    )
    return SelfSimilarSet(maps, CANTOR_DIM, 1.0, 1.0 / 3.0, None, False, "cantor")


def selfsimilar_certs(sset, c_sub=None, ambient=True, k=2.0):
    """(sub, super) certificates for ||x - y||, stated for rho = ||x - y||^k.

    The Cantor preset uses c = 3 for codewords anywhere on the line and c = 2
    for codewords on the set; other sets need a user-supplied constant.
    """
    if sset.m <= 0.0:
        raise ValueError("the attractor has dimension 0; no bounds are available")
    if c_sub is None:
        c_sub = sset.c_sub
    if c_sub is None and sset.preset == "cantor":
        c_sub = 3.0 if ambient else 2.0
    if c_sub is None:
        raise ValueError("a subregularity constant must be supplied for this set")
    if not math.isfinite(sset.diam):
        raise ValueError("diameter must be finite")
    sub = RegularityCertificate("sub", sset.m, float(c_sub), math.inf, k)
    b = (sset.kappa_min / sset.diam) ** sset.m
    sup = RegularityCertificate("super", sset.m, b, sset.diam, k)
    return sub, sup


def cantor_exact_vn(n):
    """Exact squared-error quantization error of the Cantor distribution."""
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    level = n.bit_length() - 1
    return (2.0 ** (level + 1) - n + (n - 2.0 ** level) / 9.0) / (8.0 * 18.0 ** level)


def cantor_accumulation_interval():
    """Endpoints of the set of limit points of n^{2/m} V_n; C_2 does not exist."""
    s = 17.0 / (8.0 + 4.0 * CANTOR_DIM)
    upper = s ** (2.0 / CANTOR_DIM) * (17.0 - 8.0 * s) / 72.0
    return {"lower": 0.125, "upper": upper, "coefficient_exists": False}


def cantor_digits_to_points(bits):
    """Map rows of {0, 1} digits to points sum 2 b_j 3^-j (deepest first)."""
    bits = np.asarray(bits)
    depth = bits.shape[1]
    x = np.zeros(bits.shape[0])
    for j in range(depth - 1, -1, -1):
        x = (x + 2.0 * bits[:, j]) / 3.0
    return x


def sample_cantor(n, rng, depth=CANTOR_DEPTH):
    words = rng.integers(0, 2 ** depth, size=n, dtype=np.uint64)
    shifts = np.arange(depth, dtype=np.uint64)
    bits = (words[:, None] >> shifts[None, :]) & np.uint64(1)
    return cantor_digits_to_points(bits.astype(np.float64))


def nearest_cantor_point(x, depth=40):
    """Closest point of the Cantor set, found by rounding ternary digits."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    left_end = np.zeros_like(x)
    width = 1.0
    rest = x.copy()
    snapped = np.full(x.shape, np.nan)
    for _ in range(depth):
        live = np.isnan(snapped)
        gap = live & (rest > 1.0 / 3.0) & (rest < 2.0 / 3.0)
        # inside a removed middle third: snap to the nearer edge
        snapped[gap] = np.where(rest[gap] < 0.5, left_end[gap] + width / 3.0, left_end[gap] + 2.0 * width / 3.0)
        right = live & ~gap & (rest >= 2.0 / 3.0)
        left_end[right] += 2.0 * width / 3.0
        rest = np.where(right, 3.0 * rest - 2.0, 3.0 * rest)
        width /= 3.0
    live = np.isnan(snapped)
    snapped[live] = left_end[live] + width * np.clip(rest[live], 0.0, 1.0)
    return snapped


def is_cantor_point(x, depth=30, tol=1e-9):
    x = np.asarray(x, dtype=float)
    rest = x.copy()
    ok = (x >= -tol) & (x <= 1.0 + tol)
    for _ in range(depth):
        gap = (rest > 1.0 / 3.0 + tol) & (rest < 2.0 / 3.0 - tol)
        ok &= ~gap
        rest = np.where(rest >= 2.0 / 3.0 - tol, 3.0 * rest - 2.0, 3.0 * rest)
        tol *= 3.0
        if tol > 0.1:
            break
    return ok


def cantor_cell_codebook(n):
    """Optimal codebook: midpoints of level-l cells, splitting the first n - 2^l of them."""
    if n < 1:
        raise ValueError("n must be positive")
    level = int(n).bit_length() - 1
    width = 3.0 ** -level
    lefts = np.sort(sample_left_ends(level))
    points = []
    split = n - 2 ** level
    for i, left in enumerate(lefts):
        if i < split:
            points.append(left + width / 6.0)
            points.append(left + width * 5.0 / 6.0)
        else:
            points.append(left + width / 2.0)
    return np.array(points).reshape(-1, 1)


def sample_left_ends(level):
    """Left endpoints of the 2^level construction intervals of the given level."""
    ends = np.array([0.0])
    width = 1.0
    for _ in range(level):
        width /= 3.0
        ends = np.concatenate([ends, ends + 2.0 * width])
    return ends


class SelfSimilarSpace(SpaceModel):
    """X = attractor K with its natural measure, rho = ||x - y||^k.

    With ``ambient`` the codewords may be anywhere in R^dim, otherwise they
    are restricted to K (only supported for the Cantor preset).
    """

    def __init__(self, sset, k=2.0, ambient=True, c_sub=None):
        self.sset = sset
        self.k = float(k)
        self.ambient = bool(ambient)
        self.c_sub = c_sub
        self.beta = sset.diam
        name = sset.preset or "selfsimilar"
        self.space_id = f"{name}-{'ambient' if ambient else 'onset'}"
        if not ambient and sset.preset != "cantor":
            raise ValueError("on-set codewords are only implemented for the Cantor preset")
        ratios = np.array([s.ratio for s in sset.maps])
        self._weights = ratios ** sset.m / np.sum(ratios ** sset.m)

    def distance(self, points, center):
        pts = np.asarray(points, dtype=float).reshape(len(points), -1)
        diff = pts - np.asarray(center, dtype=float).reshape(1, -1)
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def contains(self, points, tol=1e-9):
        if self.sset.preset == "cantor":
            return bool(np.all(is_cantor_point(np.asarray(points).reshape(-1), tol=tol)))
        return True

    def sample_reference(self, n, rng):
        if self.sset.preset == "cantor":
            return sample_cantor(n, rng).reshape(-1, 1)
        maps = self.sset.maps
        depth = max(1, int(math.ceil(math.log(1e-17) / math.log(max(s.ratio for s in maps)))))
        choice = rng.choice(len(maps), size=(n, depth), p=self._weights)
        x = np.zeros((n, self.sset.dim))
        for j in range(depth - 1, -1, -1):
            col = choice[:, j]
            nxt = np.empty_like(x)
            for i, s in enumerate(maps):
                sel = col == i
                nxt[sel] = s.apply(x[sel])
            x = nxt
        return x

    def project(self, embedded):
        pts = np.asarray(embedded, dtype=float).reshape(-1, self.sset.dim)
        if self.ambient:
            return pts
        return nearest_cantor_point(pts[:, 0]).reshape(-1, 1)

    def certificates(self):
        return selfsimilar_certs(self.sset, self.c_sub, self.ambient, self.k)

    def special_codebooks(self, n):
        if self.sset.preset != "cantor":
            return []
        book = cantor_cell_codebook(n)
        return [book if self.ambient else self.project(book)]

    def initial_codebooks(self, n, samples, rng):
        if self.sset.dim == 1:
            qs = np.quantile(np.asarray(samples).reshape(-1), (np.arange(n) + 0.5) / n)
            return [self.project(qs.reshape(-1, 1))] + super().initial_codebooks(n, samples, rng)
        return super().initial_codebooks(n, samples, rng)

    def exact_vn(self, n):
        if self.sset.preset == "cantor" and self.ambient and self.k == 2.0:
            return cantor_exact_vn(n)
        return None

    def describe(self):
        return {"type": "selfsimilar", "preset": self.sset.preset, "m": self.sset.m, "ambient": self.ambient}
