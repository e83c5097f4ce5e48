import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankelscope import (
    Ball,
    Bidisk,
    DomainError,
    Egg,
    IncompleteDomainError,
    PolygonShadow,
    check_complete,
    check_convex,
    detect_gamma,
    profile_sigma,
    profile_tau,
)

# roots of x^2 + y^4 = 1 at x = 0.5 and y = 0.5 (scipy brentq, xtol 1e-15)
EGG_TAU_HALF = 0.9306048591020996
EGG_SIGMA_HALF = 0.9682458365518543


@pytest.mark.parametrize(
    "domain, x, expected",
    [
        (Bidisk(1, 1), 0.5, 1.0),
        (Ball(1), 0.6, 0.8),
        (Egg(2, 4), 0.5, EGG_TAU_HALF),
    ],
)
def test_profile_tau(domain, x, expected):
    assert profile_tau(domain, x) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize(
    "domain, y, expected",
    [
        (Bidisk(1, 1), 0.3, 1.0),
        (Ball(1), 1.0, 0.0),
        (Egg(2, 4), 0.5, EGG_SIGMA_HALF),
    ],
)
def test_profile_sigma(domain, y, expected):
    assert profile_sigma(domain, y) == pytest.approx(expected, rel=1e-14, abs=1e-300)


def test_profile_out_of_range():
    with pytest.raises(DomainError):
        profile_tau(Ball(1), 1.5)
    with pytest.raises(DomainError):
        profile_sigma(Bidisk(1, 2), -0.1)


def test_profiles_vanish_at_range_end(preset):
    assert profile_tau(preset, preset.R1_max) == 0.0
    assert profile_sigma(preset, preset.R2_max) == 0.0
    assert profile_tau(preset, 0.0) == preset.R2_max


def test_polygon_profile_interpolates(flat_top):
    assert profile_tau(flat_top, 0.25) == 1.0
    assert profile_tau(flat_top, 0.75) == pytest.approx(0.5)
    assert profile_sigma(flat_top, 0.5) == pytest.approx(0.75)
    assert profile_sigma(flat_top, 0.0) == 1.0


def test_polygon_vertical_last_edge_acts_like_bidisk():
    square = PolygonShadow(((0, 1), (1, 1), (1, 0)))
    assert profile_tau(square, 0.999) == 1.0
    assert profile_sigma(square, 0.999) == 1.0
    g = detect_gamma(square)
    assert g.gamma1 == pytest.approx((1.0, 1.0))
    assert g.gamma2 == pytest.approx((1.0, 1.0))


@pytest.mark.parametrize(
    "verts",
    [
        ((0, 1),),
        ((0.1, 1), (1, 0)),
        ((0, 1), (1, 0.2)),
        ((0, 1), (0.5, 0.5), (0.5, 0.5), (1, 0)),
        ((0, 1), (0.6, 0.5), (0.4, 0.2), (1, 0)),
        ((0, 1), (0.5, 1), (0.5, 0.5), (1, 0)),
        ((0, -1), (1, 0)),
    ],
)
def test_polygon_rejects_bad_vertices(verts):
    with pytest.raises(DomainError):
        PolygonShadow(verts)


def test_egg_requires_convex_exponents():
    with pytest.raises(DomainError):
        Egg(0.5, 2)


@pytest.mark.parametrize(
    "domain, expected",
    [
        (Bidisk(1, 1), True),
        (Ball(1), True),
        (Egg(2, 4), True),
        (PolygonShadow(((0, 1), (0.5, 1.2), (1, 0))), False),
        (PolygonShadow(((0, 1), (0.2, 0.3), (1, 0.25), (1.05, 0))), True),
    ],
)
def test_check_complete(domain, expected):
    assert bool(check_complete(domain)) is expected


@pytest.mark.parametrize(
    "domain, expected",
    [
        (Ball(1), True),
        (Bidisk(1, 1), True),
        (Egg(2, 4), True),
        (Egg(1, 1), True),
        (PolygonShadow(((0, 1), (0.5, 1), (1, 0))), True),
        (PolygonShadow(((0, 1), (0.2, 0.3), (1, 0.25), (1.05, 0))), False),
        (PolygonShadow(((0, 1), (0.5, 1.2), (1, 0))), False),
    ],
)
def test_check_convex(domain, expected):
    report = check_convex(domain)
    assert bool(report) is expected
    if not expected:
        assert report.reason


def test_detect_gamma_presets():
    g = detect_gamma(Bidisk(1, 1))
    assert g.gamma1 == (1.0, 1.0) and g.gamma2 == (1.0, 1.0)
    assert g.exact
    g = detect_gamma(Bidisk(2, 3))
    assert g.gamma1 == (2.0, 3.0)  # closed disk(2) x circle(3)
    assert g.gamma2 == (2.0, 3.0)  # circle(2) x closed disk(3)
    for domain in (Ball(1), Egg(2, 4), Egg(1, 7), Egg(9, 1)):
        g = detect_gamma(domain)
        assert g.gamma1 is None and g.gamma2 is None


def test_detect_gamma_flat_top(flat_top):
    g = detect_gamma(flat_top)
    assert g.gamma2 is None
    r1, s1 = g.gamma1
    assert s1 == 1.0
    assert r1 == 0.5
    # directly inspect the profile over the detected flat
    t = np.linspace(0, r1, 101)
    assert np.all(flat_top.tau(t) >= s1 - g.flat_eps)


def test_detect_gamma_requires_complete():
    with pytest.raises(IncompleteDomainError):
        detect_gamma(PolygonShadow(((0, 1), (0.5, 1.2), (1, 0))))


def test_detect_gamma_tolerances_matter():
    nearly_flat = PolygonShadow(((0, 1), (0.5, 1 - 1e-7), (1, 0)))
    assert detect_gamma(nearly_flat).gamma1 is None
    g = detect_gamma(nearly_flat, flat_eps=1e-6)
    assert g.gamma1 == (0.5, 1.0)


@pytest.mark.parametrize("flat_eps", [1e-6, 1e-9, 1e-12])
def test_strictly_decreasing_presets_have_no_flats(flat_eps):
    for domain in (Ball(1), Ball(3), Egg(2, 4), Egg(1.5, 3, 0.5)):
        g = detect_gamma(domain, flat_eps=flat_eps)
        assert g.gamma1 is None and g.gamma2 is None


def test_gamma1_height_is_r2_max():
    for domain in (Bidisk(0.7, 1.3), PolygonShadow(((0, 2), (0.3, 2), (1, 1), (1.5, 0)))):
        g = detect_gamma(domain)
        assert g.gamma1[1] == domain.R2_max


@pytest.mark.parametrize("c", [0.5, 2.0, 3.7])
def test_gamma_scaling_covariance(c):
    square = PolygonShadow(((0, 1), (0.4, 1), (0.9, 0.7), (1.2, 0.6), (1.2, 0)))
    for domain in (Bidisk(1, 2), square, PolygonShadow(((0, 1), (0.5, 1), (1, 0)))):
        base, scaled = detect_gamma(domain), detect_gamma(domain.scaled(c))
        for a, b in ((base.gamma1, scaled.gamma1), (base.gamma2, scaled.gamma2)):
            assert (a is None) == (b is None)
            if a is not None:
                assert np.allclose(np.array(b), c * np.array(a), rtol=1e-12, atol=0)


@pytest.mark.parametrize("domain", [Ball(1), Egg(2, 4), Egg(1.3, 2.5, 2.0),
                                    PolygonShadow(((0, 1), (0.3, 0.9), (0.8, 0.5), (1, 0)))])
def test_sigma_inverts_tau_on_decreasing_profiles(domain):
    x = np.linspace(0.0, domain.R1_max, 401)[1:-1]
    y = domain.tau(x)
    back = np.array([profile_sigma(domain, float(v)) for v in y])
    assert np.max(np.abs(back - x)) <= 1e-9


@st.composite
def decreasing_polygons(draw):
    n = draw(st.integers(1, 6))
    xs = sorted(draw(st.lists(st.floats(0.01, 0.99), min_size=n, max_size=n, unique=True)))
    ys = sorted(draw(st.lists(st.floats(0.01, 0.99), min_size=n, max_size=n, unique=True)), reverse=True)
    return PolygonShadow(((0.0, 1.0), *zip(xs, ys), (1.0, 0.0)))


@settings(max_examples=60, deadline=None)
@given(decreasing_polygons())
def test_sigma_matches_transposed_polygon(poly):
    mirror = poly.transposed()
    y = np.linspace(0, poly.R2_max, 57)[:-1]
    assert np.allclose(poly.sigma(y), mirror.tau(y), atol=1e-12)
    assert check_complete(poly)


@settings(max_examples=60, deadline=None)
@given(decreasing_polygons(), st.floats(0.1, 10))
def test_scaled_profile(poly, c):
    x = np.linspace(0, poly.R1_max, 33)
    assert np.allclose(poly.scaled(c).tau(c * x), c * poly.tau(x), rtol=1e-12, atol=1e-12)
    assert math.isclose(poly.scaled(c).R1_max, c * poly.R1_max)
