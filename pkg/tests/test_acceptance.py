"""Acceptance criteria, one marked group per criterion.

Run ``pytest tests/test_acceptance.py`` (or this file directly); the
terminal summary prints one PASS/FAIL line per criterion.
"""
import math
import random
import sys

import numpy as np
import pytest

from lossybounds.mc import proportion_interval, stream
from lossybounds.quant_bounds import QuantQuery, coefficient_bounds, dimension_from_sequence
from lossybounds.quantizer import vn_estimate
from lossybounds.rd_bounds import MultiLetterQuery, RDQuery, multi_letter_lower, rd_lower_explicit
from lossybounds.regularity import RegularityCertificate, product_certificate
from lossybounds.spaces import (
    Grassmannian,
    Hypersphere,
    SelfSimilarSpace,
    UnitInterval,
    VonMisesFisher,
    cantor_accumulation_interval,
    cantor_exact_vn,
    cantor_set,
    circle_closed_forms,
    grassmann_volume,
    sphere_bounds,
    sphere_cap_measure,
    vmf_functionals,
)

from oracles import cantor_cell_centers, optimal_1d_quantization

CANTOR_DIM = math.log(2) / math.log(3)
MC_SAMPLES = 10 ** 6
SIGMAS = 3.0

SLB_REL_TOL = 1e-12
INTERVAL_REL_TOL = 0.02
CIRCLE_UPPER_REL_TOL = 1e-4
CIRCLE_COEF_REL_TOL = 1e-12
CANTOR_BRUTE_REL_TOL = 1e-3
VMF_NORMALIZER_REL_TOL = 1e-10
PRODUCT_REL_TOL = 1e-12
MULTI_LETTER_LIMIT_TOL = 1e-3
CANTOR_DIM_TOL = 0.05
SPHERE_DIM_TOL = 0.02


def criterion(number, title):
    return pytest.mark.criterion(number, title)


# 1 ---------------------------------------------------------------------------

@criterion(1, "explicit bound reproduces the Gaussian-form SLB -(1/2)ln(2 pi e D)")
@pytest.mark.parametrize("exponent", range(-6, 1))
def test_classical_slb(exponent):
    D = 10.0 ** exponent
    cert = RegularityCertificate("sub", 1.0, 2.0, math.inf, 2.0)
    ref = -0.5 * math.log(2 * math.pi * math.e * D)
    assert rd_lower_explicit(RDQuery(0.0, cert, D)) == pytest.approx(ref, rel=SLB_REL_TOL)


# 2 ---------------------------------------------------------------------------

@criterion(2, "uniform interval: L_n = 1/(12 n^2) and Lloyd V_n within 2%")
@pytest.mark.parametrize("n", [1, 2, 4, 8, 16, 32])
def test_interval_tightness(n):
    space = UnitInterval()
    target = 1.0 / (12 * n * n)
    assert space.quant_bounds(n)[0] == pytest.approx(target, rel=1e-14)
    est = vn_estimate(space, None, n, MC_SAMPLES, seed=2000 + n)
    assert est.mean == pytest.approx(target, rel=INTERVAL_REL_TOL)


# 3 ---------------------------------------------------------------------------

@criterion(3, "circle coefficient pi^2/3 from the codebook and from the lower coefficient")
def test_circle_coefficient():
    upper, target = circle_closed_forms(1.0, 256)
    assert target == pytest.approx(math.pi ** 2 / 3, rel=1e-15)
    assert 256 ** 2 * upper == pytest.approx(math.pi ** 2 / 3, rel=CIRCLE_UPPER_REL_TOL)
    cert = Hypersphere(2).rd_limit_constant()
    coef = coefficient_bounds(QuantQuery(1, cert_sub=cert, p=1.0, sigma_p=1.0), 1.0)
    assert coef.lower == pytest.approx(math.pi ** 2 / 3, rel=CIRCLE_COEF_REL_TOL)


# 4 ---------------------------------------------------------------------------

@criterion(4, "Cantor exact V_n, brute-force cross-check, sandwich to 2^12, accumulation interval")
def test_cantor_exact_values():
    for n, value in zip((1, 2, 3, 4), (1 / 8, 1 / 72, 5 / 648, 1 / 648)):
        assert cantor_exact_vn(n) == pytest.approx(value, rel=1e-15)


@criterion(4, "Cantor exact V_n, brute-force cross-check, sandwich to 2^12, accumulation interval")
def test_cantor_brute_force():
    centers = cantor_cell_centers(10)
    assert len(centers) == 1024
    for n in (1, 2, 3, 4):
        assert optimal_1d_quantization(centers, n) == pytest.approx(cantor_exact_vn(n), rel=CANTOR_BRUTE_REL_TOL)


@criterion(4, "Cantor exact V_n, brute-force cross-check, sandwich to 2^12, accumulation interval")
def test_cantor_sandwich_and_interval():
    space = SelfSimilarSpace(cantor_set(), ambient=True)
    interval = cantor_accumulation_interval()
    violations = 0
    outside = 0
    for n in range(1, 2 ** 12 + 1):
        v = cantor_exact_vn(n)
        lower, upper = space.quant_bounds(n)
        violations += not (lower <= v <= upper)
        scaled = n ** (2 / CANTOR_DIM) * v
        outside += not (interval["lower"] * (1 - 1e-12) <= scaled <= interval["upper"] * (1 + 1e-12))
    assert violations == 0 and outside == 0


# 5 ---------------------------------------------------------------------------

@criterion(5, "sphere cap law matches Monte Carlo within 3 sigma")
@pytest.mark.parametrize("d", [2, 3, 5])
def test_sphere_cap_law(d):
    space = Hypersphere(d)
    pts = space.sample_reference(MC_SAMPLES, stream(5000, d))
    center = np.zeros(d)
    center[-1] = 1.0
    dist = space.distance(pts, center)
    for ratio in (0.2, 0.5, 1.0):
        est, half = proportion_interval(int(np.count_nonzero(dist < ratio)), MC_SAMPLES)
        assert abs(est - sphere_cap_measure(d, 1.0, ratio)) <= SIGMAS * half


# 6 ---------------------------------------------------------------------------

@criterion(6, "Grassmann volume law (exact and sandwich) matches Monte Carlo within 3 sigma")
@pytest.mark.parametrize("field,r,d", [("C", 1, 2), ("R", 1, 2), ("R", 1, 3)])
def test_grassmann_volume_law(field, r, d):
    space = Grassmannian(field, r, r, d)
    rng = stream(6000, d, field == "C")
    center = space.sample_codewords(1, rng)[0]
    dist = space.distance(space.sample_reference(MC_SAMPLES, rng), center)
    for delta in (0.2, 0.5, 0.9):
        law = grassmann_volume(field, r, r, d, delta)
        est, half = proportion_interval(int(np.count_nonzero(dist < delta)), MC_SAMPLES)
        if field == "C":
            assert law.exact and law.lower == pytest.approx(delta ** 2, rel=1e-14)
        assert law.lower - SIGMAS * half <= est <= law.upper + SIGMAS * half


# 7 ---------------------------------------------------------------------------

@criterion(7, "von Mises-Fisher entropy and normalizer")
@pytest.mark.parametrize("kappa", [0.5, 2.0, 10.0])
def test_vmf_functionals(kappa):
    fun = vmf_functionals(kappa, 3)
    assert fun.normalizer == pytest.approx(kappa / math.sinh(kappa), rel=VMF_NORMALIZER_REL_TOL)
    model = VonMisesFisher(Hypersphere(3), kappa)
    logf = model.log_density(model.sample(MC_SAMPLES, stream(7000, int(kappa * 10))))
    se = logf.std(ddof=1) / math.sqrt(MC_SAMPLES)
    assert abs(-logf.mean() - fun.entropy) <= SIGMAS * se


# 8 ---------------------------------------------------------------------------

@criterion(8, "product of 1-D Lebesgue certificates recovers the Euclidean ball constant")
@pytest.mark.parametrize("ell", range(1, 7))
def test_product_certificate(ell):
    cert = RegularityCertificate("sub", 1.0, 2.0, math.inf, 2.0)
    out = product_certificate([cert] * ell, [1.0] * ell, 2.0)
    assert out.m == ell
    assert out.constant == pytest.approx(math.pi ** (ell / 2) / math.gamma(1 + ell / 2), rel=PRODUCT_REL_TOL)


# 9 ---------------------------------------------------------------------------

def _random_query(rng):
    m, k, p = rng.uniform(0.3, 4.0), rng.uniform(0.5, 3.0), rng.uniform(1.0, 3.0)
    delta0 = rng.choice([math.inf, rng.uniform(0.5, 3.0)])
    cap = 0.5 if math.isinf(delta0) else min(0.5, 0.9 * delta0 ** k * m / (50 * m + p * k))
    return dict(p=p, sigma_p=rng.uniform(0.5, 3.0), m=m, c=rng.uniform(0.2, 5.0),
                delta0=delta0, k=k, D=rng.uniform(1e-4, 1.0) * cap)


@criterion(9, "multi-letter bound decreases strictly in block length and reaches its limit")
def test_multi_letter_monotone():
    rng = random.Random(9)
    for _ in range(100):
        query = _random_query(rng)
        rates = [multi_letter_lower(MultiLetterQuery(ell, **query)) for ell in range(1, 51)]
        assert all(r.valid for r in rates)
        assert all(a.rate > b.rate for a, b in zip(rates, rates[1:]))


@criterion(9, "multi-letter bound decreases strictly in block length and reaches its limit")
def test_multi_letter_limit():
    res = multi_letter_lower(MultiLetterQuery(10 ** 4, 1.0, 1.0, 1.0, 2.0, math.inf, 2.0, 1e-3))
    assert abs(res.rate - res.limit) < MULTI_LETTER_LIMIT_TOL


# 10 --------------------------------------------------------------------------

@criterion(10, "dimension recovery from Cantor V_n and sphere L_n/U_n")
def test_cantor_dimension_recovery():
    seq = [(n, cantor_exact_vn(n)) for n in range(1, 2 ** 14 + 1)]
    lower, upper = dimension_from_sequence(seq, 2.0)
    assert abs(lower - CANTOR_DIM) < CANTOR_DIM_TOL and abs(upper - CANTOR_DIM) < CANTOR_DIM_TOL


@criterion(10, "dimension recovery from Cantor V_n and sphere L_n/U_n")
def test_sphere_dimension_recovery():
    # log n must be large before the constant terms stop biasing the ratio
    grid = [2 ** j for j in range(1, 801)]
    bounds = [(n, sphere_bounds(3, 1.0, n)) for n in grid]
    for side in (0, 1):
        seq = [(n, b[side]) for n, b in bounds if b[side] is not None]
        lower, upper = dimension_from_sequence(seq, 2.0)
        assert abs(lower - 2.0) < SPHERE_DIM_TOL and abs(upper - 2.0) < SPHERE_DIM_TOL


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
