import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lossybounds.mc import proportion_interval, stream
from lossybounds.spaces import (
    Hypersphere,
    VonMisesFisher,
    circle_closed_forms,
    sphere_bounds,
    sphere_cap_measure,
    sphere_certificates,
    vmf_functionals,
)
from lossybounds.spaces.sphere import sphere_kd, sphere_limit_constant


def test_limit_constants():
    assert sphere_limit_constant(2) == pytest.approx(1 / math.pi, rel=1e-14)
    certs = sphere_certificates(2, 1.0, 1e-8)
    assert certs.sub.constant == pytest.approx(1 / math.pi, rel=1e-12)
    assert certs.super.constant == pytest.approx(1 / math.pi, rel=1e-12)
    certs = sphere_certificates(3, 1.0, math.sqrt(2.0))
    assert certs.super.constant == pytest.approx(0.5 * math.pi / (4 * math.pi), rel=1e-14)
    assert sphere_certificates(3, 1.0, 0.5, ambient=True).super is None


@pytest.mark.parametrize("delta", [0.05, 0.4, 1.0, 1.3, math.sqrt(2.0)])
def test_cap_measure_on_circle_by_arc_length(delta):
    # chord delta subtends the half-angle 2 arcsin(delta / 2)
    arc = 2.0 * math.asin(delta / 2.0) / math.pi
    assert sphere_cap_measure(2, 1.0, delta) == pytest.approx(arc, rel=1e-12)


@pytest.mark.parametrize("r", [1.0, 2.5])
@pytest.mark.parametrize("delta_over_r", [0.1, 0.7, 1.2])
def test_cap_measure_on_two_sphere(r, delta_over_r):
    # the cap of chord radius delta has area pi delta^2 on any 2-sphere
    assert sphere_cap_measure(3, r, delta_over_r * r) == pytest.approx(delta_over_r ** 2 / 4, rel=1e-12)


def test_cap_measure_small_radius_limit():
    for d in (3, 5, 8):
        delta = 1e-4
        ratio = sphere_cap_measure(d, 1.0, delta) / (sphere_limit_constant(d) * delta ** (d - 1))
        assert ratio == pytest.approx(1.0, rel=1e-6)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.floats(0.05, 1.41))
def test_certificates_bound_the_cap(d, delta0):
    certs = sphere_certificates(d, 1.0, delta0)
    for delta in (0.3 * delta0, delta0):
        mass = sphere_cap_measure(d, 1.0, min(delta, math.sqrt(2)))
        assert mass <= certs.sub.bound(delta) * (1 + 1e-12)
        assert mass >= certs.super.bound(delta) * (1 - 1e-12)


def test_cap_measure_monte_carlo():
    space = Hypersphere(5)
    pts = space.sample_reference(300_000, stream(4, 0))
    center = np.zeros(5)
    center[0] = 1.0
    for delta in (0.4, 1.0):
        est, half = proportion_interval(int(np.sum(space.distance(pts, center) < delta)), len(pts))
        assert abs(est - sphere_cap_measure(5, 1.0, delta)) < 3 * half


def test_sphere_bounds_circle_coefficient():
    lower, upper = sphere_bounds(2, 1.0, 10 ** 6)
    assert lower * 1e12 == pytest.approx(math.pi ** 2 / 3, rel=1e-5)
    assert sphere_kd(2) == pytest.approx(math.pi ** 2, rel=1e-14)


@pytest.mark.parametrize("d", [2, 3, 4, 7])
def test_sphere_lower_below_upper(d):
    for n in [2 ** j for j in range(1, 16)]:
        lower, upper = sphere_bounds(d, 1.0, n)
        assert lower is None or lower <= upper
    assert sphere_bounds(3, 1.0, 1)[0] is None


def test_circle_closed_forms():
    assert circle_closed_forms(1.0, 1)[0] == pytest.approx(2.0, rel=1e-15)
    value, target = circle_closed_forms(1.0, 64)
    assert 64 ** 2 * value == pytest.approx(target, rel=1e-3)
    value, target = circle_closed_forms(1.0, 256)
    assert 256 ** 2 * value == pytest.approx(math.pi ** 2 / 3, rel=1e-4)
    assert circle_closed_forms(2.0, 8)[1] == pytest.approx(4 * math.pi ** 2 / 3)


def test_sphere_rate_bound_approaches_limit():
    space = Hypersphere(3)
    lim = space.rd_limit_constant()
    from lossybounds.rd_bounds import f_shannon
    for D in (1e-2, 1e-4, 1e-6):
        assert space.rd_lower(0.0, D) <= f_shannon(lim.m, lim.k, lim.constant, D) + 1e-12
    gap = f_shannon(lim.m, lim.k, lim.constant, 1e-8) - space.rd_lower(0.0, 1e-8)
    assert gap < 1e-2


def test_vmf_normalizer_closed_form():
    for kappa in (0.1, 1.0, 10.0, 300.0):
        fun = vmf_functionals(kappa, 3)
        assert fun.normalizer == pytest.approx(kappa / math.sinh(kappa) if kappa < 700 else 0.0, rel=1e-10)
    assert vmf_functionals(1.0, 3).normalizer == pytest.approx(1 / math.sinh(1.0), rel=1e-12)


def test_vmf_uniform_limit():
    fun = vmf_functionals(1e-9, 5)
    assert fun.normalizer == pytest.approx(1.0, abs=1e-8)
    assert fun.entropy == pytest.approx(0.0, abs=1e-8)
    assert fun.sigma_1 == pytest.approx(1.0, abs=1e-8)


def test_vmf_entropy_closed_form_d3():
    kappa = 1.0
    ref = -math.log(1 / math.sinh(1.0)) - (1 / math.tanh(1.0) - 1.0)
    assert vmf_functionals(kappa, 3).entropy == pytest.approx(ref, rel=1e-12)


def test_vmf_omega_below_one():
    fun = vmf_functionals(2.0, 4)
    assert fun.omega is not None and fun.omega < 1.0
    with pytest.raises(ValueError):
        vmf_functionals(2.0, 3, want_omega=True)


def test_vmf_sampler_mean_cosine():
    space = Hypersphere(4)
    model = VonMisesFisher(space, 3.0)
    pts = model.sample(200_000, stream(8, 0))
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0)
    cos = pts @ model.mean_direction
    se = cos.std() / math.sqrt(len(cos))
    from lossybounds.spaces.sphere import vmf_mean_resultant
    assert abs(cos.mean() - vmf_mean_resultant(4, 3.0)) < 4 * se


def test_vmf_entropy_monte_carlo():
    model = VonMisesFisher(Hypersphere(3), 2.0)
    logf = model.log_density(model.sample(200_000, stream(2, 0)))
    assert abs(-logf.mean() - model.entropy()) < 3 * logf.std() / math.sqrt(len(logf))


def test_vmf_sigma_and_omega_consistency():
    model = VonMisesFisher(Hypersphere(4), 2.0)
    assert model.sigma_p(1.0) == pytest.approx(vmf_functionals(2.0, 4).sigma_1, rel=1e-12)
    assert model.omega(2.0 / 3.0) == pytest.approx(vmf_functionals(2.0, 4).omega, rel=1e-12)
    # sigma_p decreases towards 1 as p grows
    assert model.sigma_p(1.0) > model.sigma_p(2.0) > model.sigma_p(8.0) > 1.0
