"""Non-asymptotic bounds on the n-th quantization error V_n."""
import math
from dataclasses import dataclass
from typing import Optional

from .regularity import RegularityCertificate
from .special import gamma, log_gamma


@dataclass(frozen=True)
class QuantQuery:
    n: int
    cert_sub: Optional[RegularityCertificate] = None
    cert_super: Optional[RegularityCertificate] = None
    p: float = 1.0
    sigma_p: float = 1.0
    beta: float = math.inf
    omega: Optional[float] = None


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"codebook size must be a positive integer, got {n!r}")


def lower_bound_ln(query):
    """L_n = min(c^{-k/m} sigma_p^{-pk/m} n^{-pk/m}, delta0^k) * m / (m + pk)."""
    q = query
    _check_n(q.n)
    cert = q.cert_sub
    if cert is None or cert.kind != "sub":
        raise ValueError("L_n needs a subregularity certificate")
    if not (q.p >= 1.0 and q.sigma_p > 0.0):
        raise ValueError("need p >= 1 and a positive density norm")
    m, k = cert.m, cert.k
    log_main = -(k / m) * (math.log(cert.constant) + q.p * math.log(q.sigma_p) + q.p * math.log(q.n))
    main = math.exp(log_main)
    if not math.isinf(cert.delta0):
        main = min(main, cert.delta0 ** k)
    return main * m / (m + q.p * k)


def upper_bound_un(query):
    """Gamma(1 + k/m) (b n)^{-k/m}, plus (beta^k - delta0^k) exp(-b n delta0^m) if beta > delta0."""
    q = query
    _check_n(q.n)
    cert = q.cert_super
    if cert is None or cert.kind != "super":
        raise ValueError("U_n needs a superregularity certificate")
    m, k, b = cert.m, cert.k, cert.constant
    if not math.isinf(cert.delta0) and math.isinf(q.beta):
        raise ValueError("a finite delta0 needs a bounded distortion (finite beta)")
    value = math.exp(log_gamma(1.0 + k / m) - (k / m) * math.log(b * q.n))
    if q.beta > cert.delta0:
        value += (q.beta ** k - cert.delta0 ** k) * math.exp(-b * q.n * cert.delta0 ** m)
    return value


@dataclass(frozen=True)
class QuantDimension:
    lower: Optional[float]
    upper: Optional[float]
    exact: Optional[float]


def quant_dimension_bounds(cert_sub=None, cert_super=None, p=1.0, entropy_finite=False):
    """Bracket the quantization dimension: m_sub / p <= D <= m_super.

    With p = 1 the lower bound needs bounded density; the caller signals a
    finite-entropy situation through ``entropy_finite``, which also covers
    p = 1 for sources that are not bounded in density.
    """
    lower = None
    if cert_sub is not None:
        if cert_sub.kind != "sub":
            raise ValueError("cert_sub must be a subregularity certificate")
        lower = cert_sub.m / p
    upper = None
    if cert_super is not None:
        if cert_super.kind != "super":
            raise ValueError("cert_super must be a superregularity certificate")
        upper = cert_super.m
    exact = None
    if lower is not None and upper is not None and math.isclose(lower, upper, rel_tol=1e-12):
        exact = upper
    return QuantDimension(lower, upper, exact)


@dataclass(frozen=True)
class CoefficientBounds:
    lower: Optional[float]
    upper: Optional[float]
    improved_upper: Optional[float]


def coefficient_bounds(query, D_k):
    """Bounds on the lower/upper quantization coefficients of order k.

    The lower one applies when D_k equals m_sub / p, the upper one when D_k
    equals m_super; ``omega`` (an L^{k/m} norm of the density) tightens the
    upper bound when k < m.
    """
    q = query
    lower = upper = improved = None
    if q.cert_sub is not None:
        cert = q.cert_sub
        if math.isclose(D_k, cert.m / q.p, rel_tol=1e-12):
            m, k = cert.m, cert.k
            lower = (m / (m + q.p * k)) * math.exp(
                -(k / m) * (math.log(cert.constant) + q.p * math.log(q.sigma_p))
            )
    if q.cert_super is not None:
        cert = q.cert_super
        if math.isclose(D_k, cert.m, rel_tol=1e-12):
            m, k = cert.m, cert.k
            upper = gamma(1.0 + k / m) * cert.constant ** (-k / m)
            if q.omega is not None and k < m:
                improved = q.omega * upper
    return CoefficientBounds(lower, upper, improved)


def dimension_from_sequence(seq, k, tail_fraction=0.5, cap=50.0):
    """Estimate (lower, upper) quantization dimension from (n, v_n) pairs.

    Uses the ratios k log n / log(1/v_n) over the trailing part of the
    sequence; estimates above ``cap`` are reported as infinity.
    """
    pairs = sorted((int(n), float(v)) for n, v in seq)
    if not pairs:
        raise ValueError("empty sequence")
    if not (0.0 < tail_fraction <= 1.0):
        raise ValueError("tail_fraction must lie in (0, 1]")
    start = min(int(len(pairs) * (1.0 - tail_fraction)), len(pairs) - 1)
    tail = [(n, v) for n, v in pairs[start:] if n > 1]
    if not tail:
        raise ValueError("the tail must contain some n > 1")
    ratios = []
    for n, v in tail:
        if not (0.0 < v < 1.0):
            raise ValueError(f"v_n must lie in (0, 1) on the tail, got {v!r} at n={n}")
        ratios.append(k * math.log(n) / -math.log(v))
    lower, upper = min(ratios), max(ratios)
    lower = math.inf if lower > cap else lower
    upper = math.inf if upper > cap else upper
    return lower, upper
