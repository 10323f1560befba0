import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lossybounds.mc import proportion_interval, stream
from lossybounds.spaces import (
    Grassmannian,
    chordal_distance,
    grassmann_bounds,
    grassmann_constant,
    grassmann_projection_cert,
    grassmann_volume,
    principal_angles,
)
from lossybounds.spaces.grassmann import (
    GrassmannShape,
    chordal_distance_batch,
    grassmann_h,
    grassmann_h_inverse,
    sample_grassmann,
)


def test_complex_line_constant_and_volume():
    assert grassmann_constant(1, 1, 2, 2) == pytest.approx(1.0, rel=1e-14)
    for delta in (0.1, 0.5, 1.0):
        law = grassmann_volume("C", 1, 1, 2, delta)
        assert law.exact and law.lower == pytest.approx(delta ** 2, rel=1e-14)


def test_cases():
    assert GrassmannShape("C", 1, 1, 2).case == 1
    assert GrassmannShape("R", 1, 2, 4).case == 1
    assert GrassmannShape("R", 1, 1, 3).case == 2
    assert GrassmannShape("R", 1, 3, 5).case == 3


def test_real_lines_in_plane_constant():
    # lines in R^2: the angle is uniform on [0, pi/2], sin(theta) < delta has mass 2 arcsin(delta)/pi
    c = grassmann_constant(1, 1, 2, 1)
    assert c == pytest.approx(2 / math.pi, rel=1e-14)
    for delta in (0.2, 0.6):
        law = grassmann_volume("R", 1, 1, 2, delta)
        exact = 2 * math.asin(delta) / math.pi
        assert law.lower <= exact <= law.upper


def test_chordal_distance_basics():
    x = np.array([[1.0], [0.0]])
    y = np.array([[0.0], [1.0]])
    assert chordal_distance(x, x) == pytest.approx(0.0, abs=1e-12)
    assert chordal_distance(x, y) == pytest.approx(1.0, rel=1e-14)
    assert principal_angles(x, y)[0] == pytest.approx(math.pi / 2)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["R", "C"]), st.integers(2, 6), st.integers(1, 3), st.integers(0, 2 ** 32 - 1))
def test_chordal_routes_agree(field, d, r, seed):
    r = min(r, d)
    rng = np.random.default_rng(seed)
    xs = sample_grassmann(field, d, r, 5, rng)
    y = sample_grassmann(field, d, r, 1, rng)[0]
    batch = chordal_distance_batch(xs, y)
    svd = [chordal_distance(x, y) for x in xs]
    # squared distances: near zero the square root magnifies rounding
    assert np.allclose(batch ** 2, np.square(svd), atol=1e-12)


def test_projection_embedding_matches_distortion():
    space = Grassmannian("C", 2, 2, 4)
    rng = stream(1, 0)
    xs = space.sample_reference(20, rng)
    y = space.sample_codewords(1, rng)
    sq = ((space.embed(xs) - space.embed_codewords(y)) ** 2).sum(axis=1)
    assert np.allclose(space.distortion_from_sqdist(sq), space.distortion(xs, y[0]), atol=1e-12)


def test_projection_returns_orthonormal_codeword():
    space = Grassmannian("R", 2, 2, 5)
    xs = space.sample_reference(50, stream(2, 0))
    centroid = space.embed(xs).mean(axis=0, keepdims=True)
    y = space.project(centroid)
    assert space.contains(y)


def test_complex_line_lower_bound_value():
    lower, _ = grassmann_bounds("C", 1, 1, 2, 16)
    assert lower == pytest.approx(0.5 / 16, rel=1e-14)


def test_projection_certificate_constant():
    assert grassmann_projection_cert(1, 2).constant == pytest.approx(4 / math.pi, rel=1e-14)


@pytest.mark.parametrize("field,r,s,d", [("C", 1, 1, 2), ("R", 1, 1, 3), ("R", 1, 2, 4), ("R", 2, 3, 6)])
def test_upper_bound_coefficient(field, r, s, d):
    shape = GrassmannShape(field, r, s, d)
    c = grassmann_constant(shape.a, shape.b, d, shape.beta)
    n = 10 ** 12
    _, upper = grassmann_bounds(field, r, s, d, n)
    target = math.gamma(1 + 2 / shape.m) * c ** (-2 / shape.m)
    assert upper * n ** (2 / shape.m) == pytest.approx(target, rel=0.05)


@pytest.mark.parametrize("field,r,s,d", [("C", 1, 1, 2), ("R", 1, 1, 3), ("R", 2, 2, 4), ("C", 1, 2, 4)])
def test_lower_below_upper(field, r, s, d):
    for n in [2 ** j for j in range(1, 20)]:
        lower, upper = grassmann_bounds(field, r, s, d, n)
        assert lower is None or lower <= upper


def test_h_inverse_round_trip():
    for value in (1e-6, 1e-3, 0.2):
        u = grassmann_h_inverse("R", 2, 5, value)
        assert grassmann_h("R", 2, 5, u) == pytest.approx(value, rel=1e-10)


@pytest.mark.parametrize("field,r,s,d", [("R", 1, 1, 2), ("R", 1, 1, 3), ("C", 1, 1, 3), ("R", 1, 2, 3)])
def test_volume_law_monte_carlo(field, r, s, d):
    space = Grassmannian(field, r, s, d)
    rng = stream(21, 0)
    y = space.sample_codewords(1, rng)[0]
    pts = space.sample_reference(200_000, rng)
    dist = space.distance(pts, y)
    for delta in (0.3, 0.8):
        est, half = proportion_interval(int(np.sum(dist < delta)), len(pts))
        law = grassmann_volume(field, r, s, d, delta)
        assert law.lower - 3 * half <= est <= law.upper + 3 * half
