"""Named verification suites behind the command-line verify command.

Each suite is a function config -> list[VerificationReport].  Sampling
is seeded, iteration order fixed, and independent checks may run on a
thread pool capped by PLURIPOT_THREADS, so identical configs produce
identical bundles.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from . import boundary_measure, dilation_jwc, domain_core, geodesics_metrics, kernels
from .domain_core import Domain, boundary_distance, boundary_point, make_domain, minkowski_gauge
from .errors import DomainError, UnsupportedDomainError
from .hyperbolic_models import annulus_horofunction, horofunction_disc
from .pluripotential_verify import (VerificationReport, _verdict, harmonic_along_geodesic,
                                    laplacian_1d, laplacian_noise_floor,
                                    monge_ampere_residual, phragmen_lindelof_compare, psh_check)

_DEFAULT_SEED = 20240519


def _thread_count() -> int:
    raw = os.environ.get("PLURIPOT_THREADS", "")
    try:
        return max(0, int(raw))
    except ValueError:
        return 0


def _run_checks(checks):
    """Run report-producing callables, in order, optionally on a pool."""
    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(c) for c in checks]
            return [f.result() for f in futures]
    return [c() for c in checks]


def _seed(config) -> int:
    return int(config.get("seed", _DEFAULT_SEED))


def _tol(config, default: float) -> float:
    if config.get("tol") is not None:
        t = float(config["tol"])
        if not t > 0:
            raise DomainError("tolerance must be positive")
        return t
    return default


def _domains(config, default_specs) -> list:
    spec = config.get("domain")
    if spec:
        return [spec if isinstance(spec, Domain) else make_domain(spec)]
    return [make_domain(s) for s in default_specs]


def _axis_boundary(dom: Domain):
    e1 = np.zeros(dom.n, dtype=complex)
    e1[0] = 1.0
    return boundary_point(dom, e1)


def _interior_samples(dom: Domain, count, rng, gauge_lo=0.15, gauge_hi=0.7,
                      min_axis_gap=0.0, min_tangential=0.0):
    """Random interior points of a balanced domain, scaled by gauge.

    min_axis_gap excludes points too close to the boundary point e1,
    where kernel-sized features fall under the stencil scale.
    min_tangential excludes the tube around the z1-axis disc, where the
    kernel's complex Hessian vanishes to high order in every entry and
    scale-free residuals are pure stencil noise.
    """
    out = []
    while len(out) < count:
        raw = rng.standard_normal(2 * dom.n)
        v = raw[:dom.n] + 1j * raw[dom.n:]
        g = minkowski_gauge(dom, v)
        if not g > 0:
            continue
        z = v / g * rng.uniform(gauge_lo, gauge_hi)
        if min_axis_gap and abs(1.0 - z[0]) < min_axis_gap:
            continue
        if min_tangential and dom.n >= 2 and min(abs(c) for c in z[1:]) < min_tangential:
            continue
        out.append(z)
    return out


def _kernel_callable(dom: Domain, xi, scale=1.0):
    return lambda z: scale * kernels.poisson_kernel(dom, xi, np.asarray(z, dtype=complex),
                                                    method="closed_form").value


# ---------------------------------------------------------------------------
# Suite: Poisson-horofunction formula.
# ---------------------------------------------------------------------------

def suite_poisson_horofunction(config) -> list:
    tol = _tol(config, 1e-5)

    def check(dom):
        rng = np.random.default_rng(_seed(config))
        xi = _axis_boundary(dom)
        worst = 0.0
        unc_max = 0.0
        for _ in range(20):
            p = _interior_samples(dom, 1, rng)[0]
            z = _interior_samples(dom, 1, rng)[0]
            ladder = kernels.horofunction(dom, xi, p, z, method="ladder")
            kernel = kernels.horofunction(dom, xi, p, z, method="kernel")
            worst = max(worst, abs(ladder.value - kernel.value))
            unc_max = max(unc_max, ladder.uncertainty)
        return VerificationReport(
            check=f"poisson_horofunction[{dom.label}]",
            samples=20, max_residual=worst, tolerance=tol,
            verdict=_verdict(worst, tol, uncertainty=unc_max),
            details={"ladder_uncertainty_max": unc_max},
        )

    doms = _domains(config, ("ball2", "egg4"))
    return _run_checks([lambda d=d: check(d) for d in doms])


# ---------------------------------------------------------------------------
# Suite: boundary distance asymptotics of the Kobayashi distance.
# ---------------------------------------------------------------------------

def _point_at_delta(dom: Domain, curve, delta: float):
    """Point on the curve where the boundary distance equals delta."""
    from scipy.optimize import brentq

    def f(t):
        return boundary_distance(dom, np.asarray(curve(t))) - delta

    t_star = brentq(f, 0.5, 1.0 - 1e-9, xtol=1e-15)
    return np.asarray(curve(t_star))


def suite_main2_estimate(config) -> list:
    tol = _tol(config, 1e-3)
    delta = 1e-6

    def check(dom):
        xi = _axis_boundary(dom)
        p = np.zeros(dom.n, dtype=complex)
        p[0] = 0.3
        omega_p = kernels.poisson_kernel(dom, xi, p).value
        shift = math.log(abs(omega_p) / 2.0)

        approaches = {
            "normal": lambda t: xi.position - (1.0 - t) * xi.normal,
            "slanted": lambda t: xi.position - (1.0 - t) * (xi.normal + 0.3 * xi.tangent_frame[0]),
        }
        if dom.kind == "ellipsoid":
            phi = geodesics_metrics.egg_geodesic(dom.m[0], 0.5)
            approaches["curved"] = lambda t: phi(complex(t))

        residuals = {}
        for name, curve in approaches.items():
            z = _point_at_delta(dom, curve, delta)
            k = geodesics_metrics.kobayashi_distance(dom, z, p)
            residuals[name] = abs(k.value + math.log(boundary_distance(dom, z)) + shift)
        worst = max(residuals.values())
        return VerificationReport(
            check=f"main2_estimate[{dom.label}]",
            samples=len(approaches), max_residual=worst, tolerance=tol,
            verdict=_verdict(worst, tol),
            details={"delta": delta, "residuals": residuals},
        )

    doms = _domains(config, ("ball2", "egg4"))
    return _run_checks([lambda d=d: check(d) for d in doms])


# ---------------------------------------------------------------------------
# Suite: Monge-Ampere degeneracy of the kernel.
# ---------------------------------------------------------------------------

def suite_monge_ampere(config) -> list:
    uname = config.get("u", "poisson")
    if uname != "poisson":
        raise UnsupportedDomainError(f"no catalogued test function named {uname!r}")
    n_samples = 200

    def checks_for(dom):
        xi = _axis_boundary(dom)
        u = _kernel_callable(dom, xi)
        rng = np.random.default_rng(_seed(config))
        # min_tangential: on the z1-axis disc of the ellipsoid the kernel
        # restricts to a harmonic function of z0 alone, so the full Hessian
        # degenerates (largest eigenvalue ~ 4|z1|^2) and the determinant
        # ratio turns into stencil noise divided by |z1|^4.
        samples = _interior_samples(dom, n_samples, rng,
                                    gauge_lo=0.15, gauge_hi=0.6,
                                    min_axis_gap=0.3, min_tangential=0.05)
        step = lambda z: 1e-3 * boundary_distance(dom, z)

        def psh():
            rep = psh_check(u, samples, step, tol=_tol(config, 1e-6))
            return replace(rep, check=f"psh[{dom.label}]")

        def ma():
            tol = _tol(config, 1e-5)
            worst = 0.0
            for z in samples:
                worst = max(worst, monge_ampere_residual(u, z, step(z)))
            return VerificationReport(
                check=f"monge_ampere[{dom.label}]",
                samples=n_samples, max_residual=worst, tolerance=tol,
                verdict=_verdict(worst, tol), details={},
            )

        def harmonic():
            tol = _tol(config, 1e-5)
            if dom.kind == "ellipsoid":
                curves = [geodesics_metrics.egg_geodesic(dom.m[0], a) for a in (0.0, 0.5, 0.25j)]
            else:
                bases = [np.zeros(dom.n, dtype=complex), 0.4 * xi.position,
                         0.2 * xi.position + 0.3 * xi.tangent_frame[0]]
                curves = [geodesics_metrics.ball_geodesic(b, xi) for b in bases]
            zetas = [0.0] + [rad * np.exp(2j * np.pi * l / 8)
                             for rad in (0.2, 0.45, 0.7) for l in range(8)]
            worst = 0.0
            count = 0
            for phi in curves:
                rep = harmonic_along_geodesic(u, phi, zetas, tol=tol)
                worst = max(worst, rep.max_residual)
                count += rep.samples
            return VerificationReport(
                check=f"harmonic_on_geodesics[{dom.label}]",
                samples=count, max_residual=worst, tolerance=tol,
                verdict=_verdict(worst, tol), details={"curves": len(curves)},
            )

        return [psh, ma, harmonic]

    checks = []
    for dom in _domains(config, ("ball2", "egg4")):
        checks.extend(checks_for(dom))
    return _run_checks(checks)


# ---------------------------------------------------------------------------
# Suite: reproducing formula on the ball.
# ---------------------------------------------------------------------------

_PLURIHARMONIC_TESTS = (
    ("one", lambda xs: np.ones(xs.shape[0])),
    ("re_z1", lambda xs: xs[:, 0].real),
    ("im_z1", lambda xs: xs[:, 0].imag),
    ("re_z1z2", lambda xs: (xs[:, 0] * xs[:, 1]).real),
    ("re_z1_sq", lambda xs: (xs[:, 0] ** 2).real),
)


def suite_reproducing(config) -> list:
    doms = _domains(config, ("ball2",))
    tol = _tol(config, 1e-3)
    resolution = int(config.get("resolution") or 24)
    points = [np.array([0.0, 0.0], dtype=complex),
              np.array([0.3, 0.0], dtype=complex),
              np.array([0.0, 0.4], dtype=complex),
              np.array([0.2, 0.1], dtype=complex),
              np.array([-0.25, 0.35j], dtype=complex)]

    def check(dom):
        quad = boundary_measure.build_quadrature(dom, resolution)
        worst = 0.0
        per_f = {}
        for name, F in _PLURIHARMONIC_TESTS:
            res_f = 0.0
            for z in points:
                true = float(F(z[None, :])[0])
                got = boundary_measure.reproduce_pluriharmonic(dom, F, z, quad)
                res_f = max(res_f, abs(got - true))
            per_f[name] = res_f
            worst = max(worst, res_f)
        return VerificationReport(
            check=f"reproducing[{dom.label}]",
            samples=len(points) * len(_PLURIHARMONIC_TESTS),
            max_residual=worst, tolerance=tol, verdict=_verdict(worst, tol),
            details={"resolution": resolution, "per_function": per_f},
        )

    def calibration(dom):
        name, F = _PLURIHARMONIC_TESTS[1]
        z = points[1]
        value, res, history = boundary_measure.calibrate_quadrature(
            dom, F, z, start_resolution=8, tol=tol)
        residual = abs(value - float(F(z[None, :])[0]))
        return VerificationReport(
            check=f"reproducing_calibration[{dom.label}]",
            samples=len(history), max_residual=residual, tolerance=tol,
            verdict=_verdict(residual, tol),
            details={"function": name, "final_resolution": res, "history": history},
        )

    checks = []
    for dom in doms:
        checks.append(lambda d=dom: check(d))
        checks.append(lambda d=dom: calibration(d))
    return _run_checks(checks)


# ---------------------------------------------------------------------------
# Suite: boundary dilation and the Julia inequalities.
# ---------------------------------------------------------------------------

def suite_dilation(config) -> list:
    tol_pullback = 1e-10
    tol_curve = _tol(config, 1e-3)
    e1_2 = np.array([1.0 + 0j, 0.0 + 0j])

    def pullback():
        mp = dilation_jwc.map_from_spec("egg_to_ball", m=4)
        rng = np.random.default_rng(_seed(config))
        samples = _interior_samples(mp.source, 100, rng)
        worst = dilation_jwc.omega_preserving_residual(mp, e1_2, e1_2, samples)
        return VerificationReport(
            check="dilation_pullback[egg4->ball2]",
            samples=100, max_residual=worst, tolerance=tol_pullback,
            verdict=_verdict(worst, tol_pullback), details={},
        )

    def alpha_egg():
        mp = dilation_jwc.map_from_spec("egg_to_ball", m=4)
        alpha = dilation_jwc.normalized_dilation(mp, e1_2, e1_2)
        residual = abs(alpha - 1.0)
        return VerificationReport(
            check="dilation_alpha[egg4->ball2]",
            samples=1, max_residual=residual, tolerance=1e-8,
            verdict=_verdict(residual, 1e-8), details={"alpha": alpha},
        )

    def julia_egg():
        mp = dilation_jwc.map_from_spec("egg_to_ball", m=4)
        rng = np.random.default_rng(_seed(config) + 1)
        samples = _interior_samples(mp.source, 25, rng)
        out = dilation_jwc.julia_checks(mp, e1_2, e1_2, samples)
        residual = out["consistency_residual"]
        if not (out["mj_holds"] and out["pj_holds"]):
            residual = 1.0
        return VerificationReport(
            check="julia_consistency[egg4->ball2]",
            samples=25, max_residual=residual, tolerance=1e-9,
            verdict=_verdict(residual, 1e-9), details=out,
        )

    def alpha_identity():
        mp = dilation_jwc.map_from_spec("identity", n=2)
        alpha = dilation_jwc.normalized_dilation(mp, e1_2, e1_2)
        residual = abs(alpha - 1.0)
        return VerificationReport(
            check="dilation_alpha[identity ball2]",
            samples=1, max_residual=residual, tolerance=1e-10,
            verdict=_verdict(residual, 1e-10), details={"alpha": alpha},
        )

    def projection():
        mp = dilation_jwc.map_from_spec("coordinate_projection", n=2)
        alpha = dilation_jwc.normalized_dilation(mp, e1_2, np.array([1.0 + 0j]))
        z = np.array([0.5, 0.3], dtype=complex)
        deficiency = dilation_jwc.omega_preserving_residual(
            mp, e1_2, np.array([1.0 + 0j]), [z])
        # The projection must NOT transport the kernel: a visible
        # deficiency at this witness point is the expected outcome.
        residual = max(0.0, 1e-3 - deficiency) + abs(alpha - 1.0)
        return VerificationReport(
            check="dilation_projection_deficiency[ball2->disc]",
            samples=1, max_residual=residual, tolerance=1e-6,
            verdict=_verdict(residual, 1e-6),
            details={"alpha": alpha, "pullback_deficiency": deficiency},
        )

    def curve(lam):
        out = dilation_jwc.special_curve_limit(lam)
        ratio = out["kernel_limit"] / -2.0
        expected_ratio = 1.0 - abs(lam) ** 2
        inv_delta = 1.0 / out["delta_ratio"]
        residual = max(abs(out["kernel_limit"] - out["expected"]),
                       abs(ratio - expected_ratio),
                       abs(inv_delta - 1.0 / expected_ratio))
        return VerificationReport(
            check=f"dilation_gamma_curve[lam={lam}]",
            samples=1, max_residual=residual, tolerance=tol_curve,
            verdict=_verdict(residual, tol_curve), details=out,
        )

    checks = [pullback, alpha_egg, julia_egg, alpha_identity, projection]
    checks += [lambda lam=lam: curve(lam) for lam in (0.0, 0.3, 0.6j)]
    return _run_checks(checks)


# ---------------------------------------------------------------------------
# Suite: annulus counterexample.
# ---------------------------------------------------------------------------

def suite_annulus(config) -> list:
    r = float(config.get("r") or 0.5)
    p = 0.7
    step = 1e-4
    thetas = np.linspace(np.pi / 5.0, 2.0 * np.pi - np.pi / 5.0, 29)

    def ratios_for(u):
        out = []
        for th in thetas:
            z = p * np.exp(1j * th)
            lap = abs(laplacian_1d(u, z, step))
            floor = laplacian_noise_floor(z, step, amplitude=abs(u(z)))
            out.append(lap / floor)
        return np.asarray(out)

    def annulus_check():
        u = lambda z: -math.exp(-annulus_horofunction(r, 1.0, p, complex(z)))
        ratios = ratios_for(u)
        max_ratio = float(ratios.max())
        # Non-harmonicity must be detected: some grid point at least
        # 100x above the stencil noise floor.
        residual = 100.0 / max_ratio
        return VerificationReport(
            check=f"annulus_nonharmonic[r={r:g}]",
            samples=len(thetas), max_residual=residual, tolerance=1.0,
            verdict=_verdict(residual, 1.0),
            details={"max_ratio": max_ratio,
                     "argmax_theta": float(thetas[int(ratios.argmax())]),
                     "step": step, "p": p},
        )

    def disc_check():
        u = lambda z: -math.exp(-horofunction_disc(1.0, p, complex(z)))
        ratios = ratios_for(u)
        max_ratio = float(ratios.max())
        # The same pipeline on the disc kernel must stay below 10x the
        # floor at every grid point.
        residual = max_ratio / 10.0
        return VerificationReport(
            check="disc_control_harmonic",
            samples=len(thetas), max_residual=residual, tolerance=1.0,
            verdict=_verdict(residual, 1.0),
            details={"max_ratio": max_ratio, "step": step, "p": p},
        )

    return _run_checks([annulus_check, disc_check])


# ---------------------------------------------------------------------------
# Suite: strong asymptoticity of geodesics with a shared endpoint.
# ---------------------------------------------------------------------------

def suite_asymptoticity(config) -> list:
    tol = _tol(config, 1e-3)
    times = (5.0, 10.0, 15.0, 20.0)

    def pairs_for(dom):
        if dom.kind == "ellipsoid":
            m = dom.m[0]
            return geodesics_metrics.egg_geodesic(m, 0.3), geodesics_metrics.egg_geodesic(m, 0.5j)
        xi = _axis_boundary(dom)
        phi = geodesics_metrics.ball_geodesic(np.array([0.2, 0.1], dtype=complex), xi)
        psi = geodesics_metrics.ball_geodesic(np.array([-0.3, 0.25j], dtype=complex), xi)
        return phi, psi

    def check(dom):
        phi, psi = pairs_for(dom)
        gaps = [geodesics_metrics.asymptoticity_gap(phi, psi, t) for t in times]
        monotone = all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))
        residual = gaps[-1] if monotone else max(gaps)
        return VerificationReport(
            check=f"asymptoticity[{dom.label}]",
            samples=len(times), max_residual=residual, tolerance=tol,
            verdict=_verdict(residual, tol),
            details={"times": list(times), "gaps": gaps, "monotone": monotone},
        )

    doms = _domains(config, ("egg2", "ball2"))
    return _run_checks([lambda d=d: check(d) for d in doms])


# ---------------------------------------------------------------------------
# Suite: Phragmen-Lindelof family membership and domination.
# ---------------------------------------------------------------------------

def suite_phragmen_lindelof(config) -> list:
    tol = _tol(config, 1e-3)
    variants = (("kernel", 1.0, True, True),
                ("kernel_twice", 2.0, True, True),
                ("kernel_half", 0.5, False, False))

    def check(dom, name, scale, exp_member, exp_dominated):
        xi = _axis_boundary(dom)
        u = _kernel_callable(dom, xi, scale=scale)
        rng = np.random.default_rng(_seed(config))
        samples = _interior_samples(dom, 30, rng)
        rep = phragmen_lindelof_compare(u, dom, xi, samples, tol=tol)
        details = dict(rep.details)
        details["expected_member"] = exp_member
        details["expected_dominated"] = exp_dominated
        rep = replace(rep, check=f"phragmen[{dom.label},{name}]", details=details)
        if details["member"] != exp_member or details["dominated"] != exp_dominated:
            rep = replace(rep, max_residual=1.0, verdict="fail")
        return rep

    checks = []
    for dom in _domains(config, ("ball2", "egg4")):
        for name, scale, em, ed in variants:
            checks.append(lambda d=dom, nm=name, sc=scale, a=em, b=ed: check(d, nm, sc, a, b))
    return _run_checks(checks)


SUITES = {
    "poisson_horofunction": suite_poisson_horofunction,
    "main2_estimate": suite_main2_estimate,
    "monge_ampere": suite_monge_ampere,
    "reproducing": suite_reproducing,
    "dilation": suite_dilation,
    "annulus": suite_annulus,
    "asymptoticity": suite_asymptoticity,
    "phragmen_lindelof": suite_phragmen_lindelof,
}


def run_suite(name: str, config=None) -> list:
    """Run a named suite; unknown names raise DomainError."""
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    return SUITES[name](dict(config or {}))
