"""Green function, Poisson kernel, horofunctions, horospheres."""

import math

import numpy as np
import pytest

from pluripot import (
    GREEN_POLE,
    ConvergenceError,
    boundary_distance_asymptotic,
    boundary_point,
    disc_distance,
    egg_geodesic,
    green_function,
    green_normal_derivative,
    horofunction,
    horosphere_contains,
    k_region_contains,
    make_domain,
    minkowski_gauge,
    poisson_disc,
    poisson_halfplane,
    poisson_kernel,
)


def _random_interior(dom, rng, lo=0.1, hi=0.8):
    raw = rng.standard_normal(2 * dom.n)
    v = raw[: dom.n] + 1j * raw[dom.n :]
    return v / minkowski_gauge(dom, v) * rng.uniform(lo, hi)


def test_green_function_ball_origin():
    dom = make_domain("ball2")
    kv = green_function(dom, np.zeros(2), np.array([0.5, 0.0]))
    assert abs(kv.value - math.log(0.5)) < 1e-12
    # G_0 = log ||z||
    rng = np.random.default_rng(41)
    for _ in range(10):
        z = _random_interior(dom, rng)
        kv = green_function(dom, np.zeros(2), z)
        assert abs(kv.value - math.log(np.linalg.norm(z))) < 1e-12


def test_green_function_pole_sentinel():
    dom = make_domain("ball2")
    z = np.array([0.3, 0.1j])
    assert green_function(dom, z, z).value == GREEN_POLE


def test_green_function_symmetry():
    dom = make_domain("ball2")
    rng = np.random.default_rng(43)
    for _ in range(50):
        z = _random_interior(dom, rng)
        w = _random_interior(dom, rng)
        if np.linalg.norm(z - w) < 1e-6:
            continue
        gzw = green_function(dom, w, z).value
        gwz = green_function(dom, z, w).value
        assert abs(gzw - gwz) < 1e-10


def test_poisson_kernel_closed_forms():
    ball2 = make_domain("ball2")
    xi = boundary_point(ball2, [1.0, 0.0])
    kv = poisson_kernel(ball2, xi, np.zeros(2))
    assert kv.method == "closed_form"
    assert kv.uncertainty == 0.0
    assert abs(kv.value - (-1.0)) < 1e-14

    disc = make_domain("disc")
    kv = poisson_kernel(disc, boundary_point(disc, [1.0]), [0.5])
    assert abs(kv.value - (-3.0)) < 1e-14

    hp = make_domain("half_plane")
    kv = poisson_kernel(hp, boundary_point(hp, [0.0]), [-1.0])
    assert abs(kv.value - (-2.0)) < 1e-14


def test_poisson_kernel_egg_on_geodesics():
    egg = make_domain("egg4")
    xi = boundary_point(egg, [1.0, 0.0])
    for a in (0.0, 0.5, 0.8j, 1.0):
        z = egg_geodesic(4, a)(0.0)
        kv = poisson_kernel(egg, xi, z)
        assert abs(kv.value - (-(1.0 + abs(a) ** 4))) < 1e-12


def test_poisson_kernel_methods_agree():
    egg = make_domain("egg4")
    xi = boundary_point(egg, [1.0, 0.0])
    rng = np.random.default_rng(47)
    for _ in range(20):
        z = _random_interior(egg, rng)
        closed = poisson_kernel(egg, xi, z, method="closed_form").value
        geo = poisson_kernel(egg, xi, z, method="geodesic_formula").value
        assert abs(closed - geo) < 1e-8 * (1.0 + abs(closed))


def test_poisson_kernel_rotated_pole():
    egg = make_domain("egg4")
    rot = np.exp(0.7j)
    xi = boundary_point(egg, [rot, 0.0])
    z = np.array([0.2, 0.3j])
    expected = poisson_kernel(egg, boundary_point(egg, [1.0, 0.0]), z * np.array([np.conj(rot), 1.0])).value
    assert abs(poisson_kernel(egg, xi, z).value - expected) < 1e-12


def test_poisson_geodesic_restriction():
    # Omega(phi(zeta)) * phi_N'(1) is the disc kernel at zeta
    egg = make_domain("egg4")
    xi = boundary_point(egg, [1.0, 0.0])
    rng = np.random.default_rng(53)
    for a in (0.3, 0.6j):
        phi = egg_geodesic(4, a)
        for _ in range(10):
            zeta = complex(*rng.uniform(-0.6, 0.6, 2))
            lhs = poisson_kernel(egg, xi, phi(zeta)).value * phi.normal_derivative
            assert abs(lhs - poisson_disc(zeta, 1.0)) < 1e-8


def test_poisson_kernel_halfplane_comparison():
    # Omega_xi(z) / Omega_0^H(<z - xi, n>) -> 1 along the normal ladder
    for spec in ("ball2", "egg4"):
        dom = make_domain(spec)
        e1 = np.zeros(dom.n, dtype=complex)
        e1[0] = 1.0
        xi = boundary_point(dom, e1)
        ratios = []
        for j in range(2, 8):
            z = xi.position - 10.0 ** (-j) * xi.normal
            w = complex(np.sum((z - xi.position) * np.conj(xi.normal)))
            ratios.append(poisson_kernel(dom, xi, z).value / poisson_halfplane(w))
        assert abs(ratios[-1] - 1.0) < 1e-6


def test_horofunction_basics():
    dom = make_domain("ball2")
    xi = boundary_point(dom, [1.0, 0.0])
    p = np.zeros(2)
    assert abs(horofunction(dom, xi, p, p).value) < 1e-14
    kv = horofunction(dom, xi, p, np.array([0.5, 0.0]))
    assert abs(kv.value - (-math.log(3.0))) < 1e-12


def test_horofunction_ladder_matches_closed_form():
    dom = make_domain("egg4")
    xi = boundary_point(dom, [1.0, 0.0])
    p = np.array([0.1, 0.2j])
    z = np.array([-0.3, 0.25])
    closed = horofunction(dom, xi, p, z, method="kernel")
    ladder = horofunction(dom, xi, p, z, method="ladder")
    assert closed.method == "closed_form"
    assert ladder.method == "limit_ladder"
    assert abs(closed.value - ladder.value) < 1e-5


def test_horofunction_cocycle():
    dom = make_domain("ball2")
    xi = boundary_point(dom, [0.6, 0.8])
    rng = np.random.default_rng(59)
    for _ in range(10):
        p = _random_interior(dom, rng)
        q = _random_interior(dom, rng)
        z = _random_interior(dom, rng)
        lhs = horofunction(dom, xi, p, z).value
        rhs = horofunction(dom, xi, q, z).value + horofunction(dom, xi, p, q).value
        assert abs(lhs - rhs) < 1e-8


def test_green_normal_derivative_values():
    ball2 = make_domain("ball2")
    xi = boundary_point(ball2, [1.0, 0.0])
    kv = green_normal_derivative(ball2, xi, np.zeros(2))
    assert abs(kv.value - 1.0) < 1e-6

    egg = make_domain("egg4")
    xi = boundary_point(egg, [1.0, 0.0])
    kv = green_normal_derivative(egg, xi, egg_geodesic(4, 1.0)(0.0))
    assert abs(kv.value - 2.0) < 1e-6


def test_green_normal_derivative_gives_horofunction():
    # h_{xi,w}(z) = log dG_w - log dG_z
    dom = make_domain("ball2")
    xi = boundary_point(dom, [1.0, 0.0])
    w = np.array([0.2, 0.1])
    z = np.array([-0.1, 0.3j])
    dw = green_normal_derivative(dom, xi, w).value
    dz = green_normal_derivative(dom, xi, z).value
    h = horofunction(dom, xi, w, z).value
    assert abs(h - (math.log(dw) - math.log(dz))) < 1e-4


def test_horosphere_membership():
    dom = make_domain("ball2")
    xi = boundary_point(dom, [1.0, 0.0])
    p = np.zeros(2)
    assert horosphere_contains(dom, xi, p, 2.0, p) is True
    # ball horosphere E_0(e1, 1) = {|1-z1|^2 < 1 - ||z||^2}
    assert horosphere_contains(dom, xi, p, 1.0, np.array([0.5, 0.0])) is True
    assert horosphere_contains(dom, xi, p, 0.25, np.array([0.5, 0.0])) is False


def test_horosphere_touches_boundary_only_at_pole():
    # points of E_0(e1, 1) in a thin boundary shell cluster at e1
    dom = make_domain("ball2")
    xi = boundary_point(dom, [1.0, 0.0])
    p = np.zeros(2)
    # tangential reach of the horosphere at depth delta is about
    # sqrt(2) (2 delta)^(1/4), so this shell keeps members within 0.1
    delta = 1e-5
    found = 0
    for theta in np.linspace(0.0, math.pi, 200):
        z = (1.0 - delta) * np.array([math.cos(theta), math.sin(theta)])
        if horosphere_contains(dom, xi, p, 1.0, z):
            found += 1
            assert np.linalg.norm(z - xi.position) < 0.1
    assert found > 0


def test_k_region_membership():
    dom = make_domain("ball2")
    xi = boundary_point(dom, [1.0, 0.0])
    p = np.zeros(2)
    assert k_region_contains(dom, xi, p, 2.0, p) is True
    # far-side points exit every moderate approach region
    assert k_region_contains(dom, xi, p, 1.5, np.array([-0.9, 0.0])) is False


def test_boundary_distance_asymptotic():
    ball2 = make_domain("ball2")
    xi = boundary_point(ball2, [1.0, 0.0])
    approach = [xi.position - 10.0 ** (-j) * xi.normal for j in range(1, 8)]
    kv = boundary_distance_asymptotic(ball2, xi, np.zeros(2), approach)
    assert abs(kv.value - math.log(2.0)) < 1e-6

    egg = make_domain("egg4")
    xi = boundary_point(egg, [1.0, 0.0])
    p = egg_geodesic(4, 1.0)(0.0)
    approach = [xi.position - 10.0 ** (-j) * xi.normal for j in range(1, 8)]
    kv = boundary_distance_asymptotic(egg, xi, p, approach)
    assert abs(kv.value - 0.0) < 1e-6


def test_boundary_distance_asymptotic_slanted():
    # slanted approaches share the normal limit
    dom = make_domain("ball2")
    xi = boundary_point(dom, [1.0, 0.0])
    tau = xi.tangent_frame[0]
    approach = [
        xi.position - d * xi.normal + (d ** 0.6) * 0.2 * tau
        for d in (10.0 ** (-j) for j in range(2, 9))
    ]
    kv = boundary_distance_asymptotic(dom, xi, np.zeros(2), approach)
    assert abs(kv.value - math.log(2.0)) < 1e-3


def test_poisson_vanishes_at_other_boundary_points():
    egg = make_domain("egg4")
    xi = boundary_point(egg, [1.0, 0.0])
    for eta_pos in ([np.exp(0.5j), 0.0], [0.0, 1.0], [0.0, 1j]):
        eta = boundary_point(egg, eta_pos)
        vals = [
            abs(poisson_kernel(egg, xi, eta.position - 10.0 ** (-j) * eta.normal).value)
            for j in range(2, 7)
        ]
        assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))
        assert vals[-1] < 1e-3


def test_poisson_curve_limit():
    # Omega(phi(t)) (1 - t) -> -2 / phi_N'(1) on catalogued geodesics
    egg = make_domain("egg4")
    xi = boundary_point(egg, [1.0, 0.0])
    for a in (0.0, 0.5, 0.3 + 0.4j):
        phi = egg_geodesic(4, a)
        t = 1.0 - 1e-6
        got = poisson_kernel(egg, xi, phi(t)).value * (1.0 - t)
        assert abs(got - (-2.0 / phi.normal_derivative)) < 1e-3


def test_pole_continuity_modulus():
    # record a local continuity modulus near the pole axis; no blowup
    egg = make_domain("egg4")
    xi = boundary_point(egg, [1.0, 0.0])
    xi2 = boundary_point(egg, [np.exp(1e-4j), 0.0])
    z = np.array([0.2, 0.3])
    z2 = z + 1e-4
    v = poisson_kernel(egg, xi, z).value
    v2 = poisson_kernel(egg, xi2, z2).value
    assert abs(v2 - v) < 1.0  # crude Lipschitz-type bound at interior scale


def test_kernel_value_contract():
    with pytest.raises(ConvergenceError):
        from pluripot import KernelValue

        KernelValue(1.0, "closed_form", 0.5)
