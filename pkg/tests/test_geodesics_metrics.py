"""Catalogued geodesics, the distance engine, and asymptoticity."""

import math

import numpy as np
import pytest

from pluripot import (
    asymptoticity_gap,
    ball_geodesic,
    boundary_point,
    caratheodory_lower_bound,
    cayley_inverse,
    disc_distance,
    egg_geodesic,
    egg_invert,
    kobayashi_distance,
    make_domain,
    minkowski_gauge,
    angular_derivative,
    poisson_kernel,
    slice_upper_bound,
)


def _random_interior(dom, rng, lo=0.1, hi=0.8):
    raw = rng.standard_normal(2 * dom.n)
    v = raw[: dom.n] + 1j * raw[dom.n :]
    return v / minkowski_gauge(dom, v) * rng.uniform(lo, hi)


def test_egg_geodesic_axis():
    phi = egg_geodesic(4, 0.0)
    z = phi(0.3 + 0.1j)
    assert abs(z[0] - (0.3 + 0.1j)) < 1e-14
    assert abs(z[1]) < 1e-14
    assert abs(phi.normal_derivative - 1.0) < 1e-14


def test_egg_geodesic_m2_formula():
    phi = egg_geodesic(2, 1.0)
    for zeta in (0.0, 0.4, -0.3 + 0.2j):
        z = phi(zeta)
        assert abs(z[0] - (zeta + 1.0) / 2.0) < 1e-13
        assert abs(z[1] - (1.0 - zeta) / 2.0) < 1e-13
    assert abs(phi.normal_derivative - 0.5) < 1e-14


def test_egg_geodesic_kernel_value():
    # two independent kernel routes at the geodesic center
    dom = make_domain("egg4")
    xi = boundary_point(dom, [1.0, 0.0])
    phi = egg_geodesic(4, 1.0)
    closed = poisson_kernel(dom, xi, phi(0.0), method="closed_form").value
    geo = poisson_kernel(dom, xi, phi(0.0), method="geodesic_formula").value
    assert abs(closed - (-2.0)) < 1e-12
    assert abs(geo - (-2.0)) < 1e-12


def test_egg_geodesic_radial_limit():
    # the tangential component decays like sqrt( 1 - t ), so the ladder
    # must go to 1e-8 before the gap drops below 1e-4
    phi = egg_geodesic(4, 0.6)
    xi = phi.endpoint
    gaps = [np.linalg.norm(phi(1.0 - 10.0 ** (-j)) - xi) for j in range(1, 9)]
    assert all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-4


def test_egg_geodesic_isometry():
    dom = make_domain("egg4")
    rng = np.random.default_rng(17)
    phi = egg_geodesic(4, 0.45 - 0.2j)
    for _ in range(50):
        z1 = complex(*rng.uniform(-0.6, 0.6, 2))
        z2 = complex(*rng.uniform(-0.6, 0.6, 2))
        bound = kobayashi_distance(dom, phi(z1), phi(z2))
        assert bound.exact
        assert abs(bound.value - disc_distance(z1, z2)) < 1e-10


def test_egg_invert_round_trip():
    rng = np.random.default_rng(19)
    dom = make_domain("egg4")
    for _ in range(40):
        z = _random_interior(dom, rng)
        a, zeta = egg_invert(4, z)
        assert abs(zeta) < 1.0
        assert np.linalg.norm(egg_geodesic(4, a)(zeta) - z) < 1e-9


def test_ball_geodesic_diameter():
    phi = ball_geodesic(np.zeros(2), np.array([1.0, 0.0]))
    z = phi(0.7)
    assert abs(z[0] - 0.7) < 1e-13 and abs(z[1]) < 1e-13
    assert abs(phi.normal_derivative - 1.0) < 1e-12


def test_ball_geodesic_normal_derivative():
    phi = ball_geodesic(np.array([0.5, 0.0]), np.array([1.0, 0.0]))
    assert abs(phi.normal_derivative - 1.0 / 3.0) < 1e-12
    dom = make_domain("ball2")
    xi = boundary_point(dom, [1.0, 0.0])
    assert abs(poisson_kernel(dom, xi, [0.5, 0.0]).value - (-3.0)) < 1e-12


def test_ball_geodesic_isometry():
    dom = make_domain("ball2")
    rng = np.random.default_rng(23)
    phi = ball_geodesic(np.array([0.2, 0.3j]), np.array([0.6, 0.8]))
    for _ in range(20):
        z1 = complex(*rng.uniform(-0.7, 0.7, 2))
        z2 = complex(*rng.uniform(-0.7, 0.7, 2))
        bound = kobayashi_distance(dom, phi(z1), phi(z2))
        assert bound.exact
        assert abs(bound.value - disc_distance(z1, z2)) < 1e-10


def test_normal_derivative_is_half_the_angular_derivative():
    # the normal component of the geodesic, pushed to the disc through
    # the inverse Cayley transform, has angular derivative 2 phi_N'(1)
    egg4 = make_domain("egg4")
    xi = boundary_point(egg4, [1.0, 0.0])
    for a in (0.0, 0.5, 0.3 + 0.2j, 0.9):
        phi = egg_geodesic(4, a)
        g = lambda zeta: cayley_inverse(complex(np.sum((phi(zeta) - phi.endpoint) * np.conj(xi.normal))))
        ad = angular_derivative(g, 1.0)
        assert abs(ad.real / 2.0 - phi.normal_derivative) < 1e-6


def test_ball_distance_closed_form():
    dom = make_domain("ball3")
    rng = np.random.default_rng(29)
    for _ in range(20):
        z = _random_interior(dom, rng)
        s = np.linalg.norm(z)
        bound = kobayashi_distance(dom, np.zeros(3), z)
        assert bound.exact
        assert abs(bound.value - math.log((1 + s) / (1 - s))) < 1e-12


def test_egg_distance_on_geodesic():
    dom = make_domain("egg4")
    phi = egg_geodesic(4, 1.0)
    bound = kobayashi_distance(dom, phi(0.0), phi(0.5))
    assert bound.exact
    assert abs(bound.value - math.log(3.0)) < 1e-12


def test_general_convex_sandwich_brackets_ball():
    gen = make_domain(
        {"kind": "general_convex", "n": 2},
        rho=lambda z: np.sum(np.abs(z) ** 2, axis=-1) - 1.0,
    )
    ball = make_domain("ball2")
    rng = np.random.default_rng(31)
    for _ in range(10):
        z = _random_interior(ball, rng, hi=0.7)
        w = _random_interior(ball, rng, hi=0.7)
        exact = kobayashi_distance(ball, z, w).value
        bound = kobayashi_distance(gen, z, w)
        assert not bound.exact
        assert bound.lower <= exact + 1e-9
        assert exact <= bound.upper + 1e-9


def test_sandwich_soundness_random_pairs():
    rng = np.random.default_rng(37)
    ball = make_domain("ball2")
    egg = make_domain("egg4")
    for _ in range(100):
        z = _random_interior(ball, rng)
        w = _random_interior(ball, rng)
        exact = kobayashi_distance(ball, z, w).value
        lo = caratheodory_lower_bound(ball, z, w)
        hi = slice_upper_bound(ball, z, w)
        assert lo <= exact + 1e-9
        assert exact <= hi + 1e-9
    for _ in range(100):
        z = _random_interior(egg, rng)
        w = _random_interior(egg, rng)
        lo = caratheodory_lower_bound(egg, z, w)
        hi = slice_upper_bound(egg, z, w)
        assert lo <= hi + 1e-9
        bound = kobayashi_distance(egg, z, w)
        if bound.exact:
            assert lo <= bound.value + 1e-9
            assert bound.value <= hi + 1e-9


def test_caratheodory_bound_cases():
    ball = make_domain("ball2")
    assert caratheodory_lower_bound(ball, np.zeros(2), np.zeros(2)) == 0.0
    # supporting point e1 gives the half-plane pair (-1, -0.1)
    lb = caratheodory_lower_bound(ball, np.zeros(2), np.array([0.9, 0.0]))
    assert lb >= math.log(10.0) - 1e-9
    assert lb <= math.log(19.0) + 1e-9
    disc = make_domain("disc")
    for t1, t2 in ((0.0, 0.5), (-0.3, 0.7)):
        lb = caratheodory_lower_bound(disc, [t1], [t2])
        assert lb <= disc_distance(t1, t2) + 1e-9


def test_slice_upper_bound_cases():
    # diameter slices of the ball are totally geodesic; the numerically
    # detected slice region makes the bound accurate only to the ray
    # resolution, but it must stay a true upper bound
    ball = make_domain("ball2")
    z, w = np.array([0.3, 0.0]), np.array([-0.5, 0.0])
    exact = kobayashi_distance(ball, z, w).value
    hi = slice_upper_bound(ball, z, w)
    assert hi >= exact - 1e-12
    assert abs(hi - exact) < 1e-3
    assert slice_upper_bound(ball, z, z) == 0.0


def test_asymptoticity_gap_same_geodesic():
    phi = egg_geodesic(4, 0.5)
    for t in (1.0, 5.0, 10.0):
        assert abs(asymptoticity_gap(phi, phi, t)) < 1e-12


def test_asymptoticity_gap_decreases():
    phi = egg_geodesic(2, 0.0)
    psi = egg_geodesic(2, 1.0)
    gaps = [asymptoticity_gap(phi, psi, t) for t in (5.0, 10.0, 15.0, 20.0)]
    assert all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3


def test_asymptoticity_gap_ball_diameters():
    # transverse separation shrinks like exp(-t/2) in this normalization
    xi = np.array([1.0, 0.0])
    phi = ball_geodesic(np.zeros(2), xi)
    psi = ball_geodesic(np.array([0.0, 0.4]), xi)
    gaps = [asymptoticity_gap(phi, psi, t) for t in (5.0, 10.0, 20.0)]
    assert all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3


def test_asymptoticity_requires_shared_endpoint():
    phi = ball_geodesic(np.zeros(2), np.array([1.0, 0.0]))
    psi = ball_geodesic(np.zeros(2), np.array([0.0, 1.0]))
    with pytest.raises(Exception):
        asymptoticity_gap(phi, psi, 5.0)
