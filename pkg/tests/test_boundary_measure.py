"""Boundary measure density, quadrature, and reproducing property."""

import io
import math

import numpy as np

from pluripot import (
    boundary_form_density,
    boundary_point,
    build_quadrature,
    calibrate_quadrature,
    egg_geodesic,
    green_ratio,
    make_domain,
    montecarlo_surface_measure,
    poisson_kernel,
    reproduce_pluriharmonic,
)


def test_density_reference_values():
    ball2 = make_domain("ball2")
    assert abs(boundary_form_density(ball2, [1.0, 0.0]) - 2.0) < 1e-6
    assert abs(boundary_form_density(ball2, [0.6, 0.8]) - 2.0) < 1e-6

    egg4 = make_domain("egg4")
    # Levi determinant vanishes at the weakly pseudoconvex pole
    assert abs(boundary_form_density(egg4, [1.0, 0.0])) < 1e-6
    # and is positive elsewhere
    assert boundary_form_density(egg4, [0.0, 1.0]) > 0.1

    # n = 1: the density convention is identically 1
    assert boundary_form_density(make_domain("ball1"), [1.0]) == 1.0
    assert boundary_form_density(make_domain("half_plane"), [0.0]) == 1.0


def test_density_defining_function_invariance():
    # density normalizes out the choice of defining function
    rho_a = lambda z: np.sum(np.abs(z) ** 2, axis=-1) - 1.0
    rho_b = lambda z: 5.0 * (np.sum(np.abs(z) ** 2, axis=-1) - 1.0)
    dom_a = make_domain("general_convex", n=2, rho=rho_a)
    dom_b = make_domain("general_convex", n=2, rho=rho_b)
    xi = np.array([0.6, 0.8])
    da = boundary_form_density(dom_a, xi)
    db = boundary_form_density(dom_b, xi)
    assert abs(da - db) < 1e-8
    assert abs(da - 2.0) < 1e-5


def test_quadrature_total_ball():
    # total mass of the density form on the unit 3-sphere is 2 pi^2
    quad = build_quadrature(make_domain("ball2"), 64)
    assert abs(quad.total_weight - 2.0 * math.pi ** 2) < 1e-3 * 2.0 * math.pi ** 2
    assert np.all(quad.weights > 0.0)


def test_quadrature_total_disc():
    quad = build_quadrature(make_domain("ball1"), 256)
    assert abs(quad.total_weight - 2.0 * math.pi) < 1e-8


def test_quadrature_total_egg_vs_montecarlo():
    egg4 = make_domain("egg4")
    quad = build_quadrature(egg4, 32)
    mc = montecarlo_surface_measure(egg4, n_samples=10_000_000)
    assert abs(quad.total_weight - mc) / mc < 5e-3


def test_reproduce_pluriharmonic_values():
    dom = make_domain("ball2")
    quad = build_quadrature(dom, 48)

    one = lambda pts: np.ones(pts.shape[0])
    assert abs(reproduce_pluriharmonic(dom, one, np.zeros(2), quad) - 1.0) < 1e-6

    re_z1 = lambda pts: pts[:, 0].real
    assert abs(reproduce_pluriharmonic(dom, re_z1, np.zeros(2), quad)) < 1e-8
    assert abs(reproduce_pluriharmonic(dom, re_z1, np.array([0.3, 0.0]), quad) - 0.3) < 1e-6


def test_reproduce_probability_normalization():
    # the kernel-weighted measure has unit mass from every interior point
    dom = make_domain("ball2")
    quad = build_quadrature(dom, 32)
    one = lambda pts: np.ones(pts.shape[0])
    rng = np.random.default_rng(83)
    for _ in range(10):
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        z = v / np.linalg.norm(v) * rng.uniform(0.1, 0.6)
        assert abs(reproduce_pluriharmonic(dom, one, z, quad) - 1.0) < 1e-3


def test_calibrate_quadrature_converges():
    dom = make_domain("ball2")
    re_z1 = lambda pts: pts[:, 0].real
    value, res, history = calibrate_quadrature(dom, re_z1, np.array([0.3, 0.0]))
    assert abs(value - 0.3) < 1e-3
    assert res >= 16
    assert len(history) >= 1


def test_green_ratio_matches_kernel():
    ball2 = make_domain("ball2")
    xi = boundary_point(ball2, [1.0, 0.0])
    assert abs(green_ratio(ball2, np.zeros(2), xi) - 1.0) < 1e-6
    z = np.array([0.5, 0.0])
    om = poisson_kernel(ball2, xi, z).value
    assert abs(green_ratio(ball2, z, xi) - abs(om)) < 1e-5

    egg4 = make_domain("egg4")
    xi = boundary_point(egg4, [1.0, 0.0])
    z = egg_geodesic(4, 0.5)(0.0)
    om = poisson_kernel(egg4, xi, z).value
    assert abs(green_ratio(egg4, z, xi) - abs(om)) < 1e-4

    ball1 = make_domain("ball1")
    assert abs(green_ratio(ball1, [0.0], [1.0]) - 1.0) < 1e-6


def test_quadrature_csv_roundtrip():
    quad = build_quadrature(make_domain("ball2"), 8)
    buf = io.StringIO()
    quad.to_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "re0,im0,re1,im1,weight,density"
    assert len(lines) == 1 + len(quad.weights)
    first = [float(x) for x in lines[1].split(",")]
    assert len(first) == 6
