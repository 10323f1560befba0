"""Shannon-type lower bounds on the rate-distortion function."""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .mc import stream
from .special import gamma_family, log_gamma
from .regularity import RegularityCertificate


def f_shannon(m, k, c, D):
    """log((m/(kD))**(m/k) / (c * Gamma(1 + m/k))) - m/k."""
    if not (m > 0 and k > 0 and c > 0 and D > 0):
        raise ValueError("m, k, c and D must all be positive")
    ratio = m / k
    return ratio * math.log(ratio / D) - math.log(c) - log_gamma(1.0 + ratio) - ratio


@dataclass(frozen=True)
class RDQuery:
    entropy: float
    cert: RegularityCertificate
    D: float
    unit_mass: bool = False


def rd_lower_explicit(query):
    """Explicit lower bound on R(D) from a subregularity certificate.

    With delta0 = inf this is h + F_{m,k,c}(D).  A finite delta0 adds the
    term exp(-m delta0**k / (k D)) inside the logarithm and needs the caller
    to confirm the reference measure has total mass one.
    """
    cert = query.cert
    D = float(query.D)
    if cert.kind != "sub":
        raise ValueError("rate-distortion lower bounds need a subregularity certificate")
    if not (D > 0.0):
        raise ValueError("distortion D must be positive")
    h = float(query.entropy)
    if not math.isfinite(h):
        raise ValueError("differential entropy must be finite")
    base = h + f_shannon(cert.m, cert.k, cert.constant, D)
    if math.isinf(cert.delta0):
        return base
    if not query.unit_mass:
        raise ValueError("a finite delta0 requires a reference measure of total mass one")
    ratio = cert.m / cert.k
    # tail term relative to the main term, both inside the logarithm
    log_tail = -ratio * cert.delta0 ** cert.k / D
    log_main = math.log(cert.constant) - ratio * math.log(ratio / D) + log_gamma(1.0 + ratio)
    gap = log_tail - log_main
    if gap > 700.0:
        return h - ratio - log_tail - math.log1p(math.exp(-gap))
    return base - math.log1p(math.exp(gap))


def subregular_nu_majorant(cert):
    """Upper bound on s -> sup_y E exp(-s rho(X, y)) implied by a certificate.

    c * s**(-m/k) * lower_gamma(1 + m/k, s delta0**k) + exp(-s delta0**k),
    which reduces to c Gamma(1 + m/k) s**(-m/k) when delta0 is infinite.
    """
    ratio = cert.m / cert.k

    def nu(s):
        if math.isinf(cert.delta0):
            return cert.constant * math.exp(log_gamma(1.0 + ratio) - ratio * math.log(s))
        cut = s * cert.delta0 ** cert.k
        lower = gamma_family(1.0 + ratio, cut)[1]
        return cert.constant * s ** (-ratio) * lower + math.exp(-cut)

    return nu


@dataclass(frozen=True)
class NumericSLB:
    rate: float
    s_opt: float
    converged: bool
    heuristic: bool = True


def rd_slb_numeric(entropy, nu_estimator, D, s_bounds=None, grid=121, tol=1e-10):
    """h - inf_s (s D + log nu(s)), minimized numerically over s > 0.

    A coarse log-spaced scan locates the basin, then golden-section search
    refines it in log s.  The result is flagged heuristic because nu is
    usually itself an estimate; ``converged`` is False when the minimum sits
    on the edge of the search range.
    """
    D = float(D)
    if not (D > 0.0):
        raise ValueError("distortion D must be positive")
    lo, hi = s_bounds if s_bounds is not None else (1e-6 / D, 1e6 / D)
    a, b = math.log(lo), math.log(hi)

    def objective(log_s):
        s = math.exp(log_s)
        value = nu_estimator(s)
        if not (value > 0.0):
            return math.inf
        return s * D + math.log(value)

    xs = np.linspace(a, b, grid)
    vals = [objective(x) for x in xs]
    best = int(np.argmin(vals))
    left = xs[max(best - 1, 0)]
    right = xs[min(best + 1, grid - 1)]
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = right - inv_phi * (right - left)
    x2 = left + inv_phi * (right - left)
    f1, f2 = objective(x1), objective(x2)
    while right - left > tol:
        if f1 <= f2:
            right, x2, f2 = x2, x1, f1
            x1 = right - inv_phi * (right - left)
            f1 = objective(x1)
        else:
            left, x1, f1 = x1, x2, f2
            x2 = left + inv_phi * (right - left)
            f2 = objective(x2)
    candidates = [(vals[best], xs[best]), (f1, x1), (f2, x2)]
    value, x_best = min(candidates)
    converged = 0 < best < grid - 1
    return NumericSLB(float(entropy) - value, math.exp(x_best), converged)


def sampled_nu_estimator(space, measure, candidates, samples, seed, extra_centers=0):
    """Monte Carlo estimate of s -> sup_y E exp(-s rho(X, y)).

    The supremum runs over ``candidates`` plus ``extra_centers`` codewords
    drawn from the space.  One fixed sample set is reused for every s (common
    random numbers) so the estimate is a smooth function of s.
    """
    rng = stream(seed, 0)
    points = measure(samples, rng)
    centers = list(candidates)
    if extra_centers:
        centers.extend(list(space.sample_codewords(extra_centers, stream(seed, 1))))
    if not centers:
        raise ValueError("need at least one candidate center")
    distortions = [space.distortion(points, y) for y in centers]

    def nu(s):
        return max(float(np.mean(np.exp(-s * rho))) for rho in distortions)

    return nu


def rd_dimension_lower(cert):
    """Lower bound on the rate-distortion dimension: the certificate's m."""
    if cert.kind != "sub":
        raise ValueError("needs a subregularity certificate")
    return cert.m


@dataclass(frozen=True)
class MultiLetterQuery:
    ell: int
    p: float
    sigma_p: float
    m: float
    c: float
    delta0: float
    k: float
    D: float


@dataclass(frozen=True)
class MultiLetterBound:
    rate: Optional[float]
    d_max: float
    limit: float
    valid: bool


def multi_letter_lower(query):
    """Block-length-ell lower bound for an i.i.d. source.

    Returns the bound itself (None when D is at or above the admissible
    threshold), the threshold and the ell -> infinity limit.
    """
    q = query
    if int(q.ell) != q.ell or q.ell < 1:
        raise ValueError("block length must be a positive integer")
    if not (q.p >= 1.0):
        raise ValueError("p must be >= 1")
    for name in ("sigma_p", "m", "c", "k", "D"):
        if not (getattr(q, name) > 0.0):
            raise ValueError(f"{name} must be positive")
    ell = int(q.ell)
    x = q.m / (q.p * q.k)
    log_d = (
        log_gamma(1.0 + x)
        + x * math.log(ell)
        - log_gamma(1.0 + ell * x) / ell
        + math.log(q.c) / q.p
        + math.log(q.sigma_p)
    )
    total = ell * q.m
    rate = x * math.log(total / ((total + q.p * q.k) * q.D)) - log_d
    if math.isinf(q.delta0):
        d_max = math.inf
    else:
        d_max = q.delta0 ** q.k / ell * total / (total + q.p * q.k)
    limit = -math.log(q.sigma_p) + f_shannon(q.m / q.p, q.k, q.c ** (1.0 / q.p), q.D)
    valid = q.D < d_max
    return MultiLetterBound(rate if valid else None, d_max, limit, valid)


def clamp_rate(value):
    """Rates are nonnegative; negative lower bounds carry no information."""
    return max(0.0, value)

