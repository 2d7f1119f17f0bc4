"""Boundary dilation of holomorphic maps and Julia-type inequalities.

For a holomorphic map f between domains with distinguished boundary
points xi -> xi' and base points p -> p', the boundary dilation is
    log lambda = lim_j [ k(z_j, p) - k'(f(z_j), p') ]
along an inward ladder at xi.  The two Julia inequalities verified here:

  (MJ)  h'_{xi'}(f(z), p') <= h_xi(z, p) + log lambda
  (PJ)  Omega_xi(z) / Omega'_{xi'}(f(z)) <= alpha

with alpha = lambda * Omega_xi(p) / Omega'_{xi'}(p'), and both suprema
are attained in the limit at xi.  The two formulations are linked by
    exp(sup MJ gap) * |Omega_xi(p)| / |Omega'_{xi'}(p')| = sup PJ ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import domain_core, kernels
from ._extrap import aitken
from .domain_core import Domain, as_point, boundary_distance, defining_function, make_domain
from .errors import ConvergenceError, DomainError, UnsupportedDomainError
from .geodesics_metrics import kobayashi_distance


@dataclass(frozen=True, eq=False)
class MapUnderTest:
    """A holomorphic map between domains with chosen base points."""

    name: str
    source: Domain
    target: Domain
    fn: Callable
    source_base: np.ndarray
    target_base: np.ndarray

    def __call__(self, z):
        return np.asarray(self.fn(np.asarray(z, dtype=complex)), dtype=complex)


def map_from_spec(name: str, *, m=4, n=2, base=None) -> MapUnderTest:
    """Build one of the catalogued maps.

    identity: the identity of the n-ball.  coordinate_projection: the
    first coordinate, n-ball to disc.  egg_to_ball: (z0, z1) ->
    (z0, z1^{m/2}), the squaring map of a 2-dimensional egg onto the
    2-ball; it preserves the kernel at the axis boundary point.
    """
    if name == "identity":
        dom = make_domain("ball", n=n) if n > 1 else make_domain("disc")
        p = as_point(dom, np.zeros(dom.n) if base is None else base)
        return MapUnderTest(name=name, source=dom, target=dom,
                            fn=lambda z: z, source_base=p, target_base=p)
    if name == "coordinate_projection":
        src = make_domain("ball", n=n)
        tgt = make_domain("disc")
        p = as_point(src, np.zeros(n) if base is None else base)
        fn = lambda z: np.asarray(z, dtype=complex)[..., :1]
        return MapUnderTest(name=name, source=src, target=tgt,
                            fn=fn, source_base=p, target_base=fn(p))
    if name == "egg_to_ball":
        if m % 2 != 0 or m < 2:
            raise DomainError("egg exponent must be a positive even integer")
        src = make_domain("ellipsoid", m=(m,))
        tgt = make_domain("ball", n=2)
        half = m // 2

        def fn(z):
            z = np.asarray(z, dtype=complex)
            out = np.empty_like(z)
            out[..., 0] = z[..., 0]
            out[..., 1] = z[..., 1] ** half
            return out

        p = as_point(src, np.zeros(2) if base is None else base)
        return MapUnderTest(name=name, source=src, target=tgt,
                            fn=fn, source_base=p, target_base=fn(p))
    raise UnsupportedDomainError(f"unknown map name {name!r}")


def _check_map(mp: MapUnderTest) -> None:
    if not float(defining_function(mp.source, mp.source_base)) < 0.0:
        raise DomainError("source base point must be interior")
    if not float(defining_function(mp.target, mp.target_base)) < 0.0:
        raise DomainError("target base point must be interior")


def _ladder_points(dom: Domain, xi, js):
    bp = xi if isinstance(xi, domain_core.BoundaryPoint) else domain_core.boundary_point(dom, xi)
    pts = []
    for j in js:
        w = bp.position - (10.0 ** (-j)) * bp.normal
        if not float(defining_function(dom, w)) < 0.0:
            continue
        pts.append(w)
    if len(pts) < 3:
        raise ConvergenceError("normal ladder left the domain")
    return bp, pts


def dilation(mp: MapUnderTest, xi, xi_target, js=range(1, 9)):
    """Boundary dilation lambda of the map at xi -> xi'.

    Returns (lam, uncertainty).  The log-dilation is the limit of
    k(z_j, p) - k'(f(z_j), p') along the inward normal ladder at xi;
    the liminf is realized as the extrapolated ladder limit.
    """
    _check_map(mp)
    _, pts = _ladder_points(mp.source, xi, js)
    vals = []
    for z in pts:
        w = mp(z)
        if not float(defining_function(mp.target, w)) < 0.0:
            raise DomainError("map sent a ladder point outside the target")
        ks = kobayashi_distance(mp.source, z, mp.source_base)
        kt = kobayashi_distance(mp.target, w, mp.target_base)
        vals.append(ks.value - kt.value)
    est, unc = aitken(vals)
    if unc > 1e-4 * (1.0 + abs(est)):
        raise ConvergenceError(f"dilation ladder did not settle: uncertainty {unc:.3e}")
    lam = float(np.exp(est))
    return lam, float(lam * unc)


def normalized_dilation(mp: MapUnderTest, xi, xi_target, js=range(1, 9)) -> float:
    """alpha = lambda * Omega_xi(p) / Omega'_{xi'}(f-image base)."""
    lam, _ = dilation(mp, xi, xi_target, js=js)
    op = kernels.poisson_kernel(mp.source, xi, mp.source_base).value
    oq = kernels.poisson_kernel(mp.target, xi_target, mp.target_base).value
    return float(lam * op / oq)


def julia_checks(mp: MapUnderTest, xi, xi_target, samples, js=range(1, 9), slack=1e-8) -> dict:
    """Verify both Julia inequalities and their consistency identity.

    samples: interior points of the source domain.  Returns a dict with
    the per-formulation suprema, the dilation, and boolean verdicts.
    """
    _check_map(mp)
    lam, lam_unc = dilation(mp, xi, xi_target, js=js)
    log_lam = float(np.log(lam))
    alpha = normalized_dilation(mp, xi, xi_target, js=js)

    op = kernels.poisson_kernel(mp.source, xi, mp.source_base).value
    oq = kernels.poisson_kernel(mp.target, xi_target, mp.target_base).value

    mj_gaps = []
    pj_ratios = []
    for z in samples:
        z = as_point(mp.source, z)
        w = mp(z)
        hs = kernels.horofunction(mp.source, xi, mp.source_base, z).value
        ht = kernels.horofunction(mp.target, xi_target, mp.target_base, w).value
        mj_gaps.append(ht - hs)
        oz = kernels.poisson_kernel(mp.source, xi, z).value
        ow = kernels.poisson_kernel(mp.target, xi_target, w).value
        pj_ratios.append(oz / ow)

    # The suprema are attained in the boundary limit, so fold the ladder
    # points into the sample set before comparing.
    _, pts = _ladder_points(mp.source, xi, js)
    ladder_gaps = []
    for z in pts:
        w = mp(z)
        hs = kernels.horofunction(mp.source, xi, mp.source_base, z).value
        ht = kernels.horofunction(mp.target, xi_target, mp.target_base, w).value
        ladder_gaps.append(ht - hs)
    sup_est, sup_unc = aitken(ladder_gaps)

    mj_sup = max(max(mj_gaps), sup_est)
    pj_sup = max(max(pj_ratios), float(np.exp(sup_est)) * abs(op) / abs(oq))
    tol = slack * (1.0 + abs(log_lam)) + lam_unc / max(lam, 1e-300) + sup_unc

    mj_holds = mj_sup <= log_lam + tol
    pj_holds = pj_sup <= alpha * (1.0 + slack) + abs(alpha) * tol
    consistency = abs(np.exp(mj_sup) * abs(op) / abs(oq) - pj_sup) / max(abs(pj_sup), 1e-300)

    return {
        "lambda": lam,
        "log_lambda": log_lam,
        "alpha": alpha,
        "mj_sup": float(mj_sup),
        "pj_sup": float(pj_sup),
        "mj_holds": bool(mj_holds),
        "pj_holds": bool(pj_holds),
        "sup_attained_gap": float(abs(sup_est - log_lam)),
        "consistency_residual": float(consistency),
    }


def jwc_derivative_limit(mp: MapUnderTest, xi, xi_target, js=range(1, 9)):
    """Limit of the normal-component difference quotient at xi.

    Computes <f(z_j) - xi', n'> / <z_j - xi, n> along the inward ladder
    and extrapolates.  Returns (complex value, uncertainty).
    """
    _check_map(mp)
    bs, pts = _ladder_points(mp.source, xi, js)
    bt = xi_target if isinstance(xi_target, domain_core.BoundaryPoint) \
        else domain_core.boundary_point(mp.target, xi_target)
    quotients = []
    for z in pts:
        w = mp(z)
        num = complex(np.sum((w - bt.position) * np.conj(bt.normal)))
        den = complex(np.sum((z - bs.position) * np.conj(bs.normal)))
        quotients.append(num / den)
    re, ru = aitken([q.real for q in quotients])
    im, iu = aitken([q.imag for q in quotients])
    return complex(re, im), float(ru + iu)


def delta_ratio_limit(mp: MapUnderTest, xi, js=range(1, 9)):
    """Limit of boundary-distance ratios delta'(f(z_j)) / delta(z_j)."""
    _check_map(mp)
    _, pts = _ladder_points(mp.source, xi, js)
    vals = []
    for z in pts:
        w = mp(z)
        vals.append(boundary_distance(mp.target, w) / boundary_distance(mp.source, z))
    est, unc = aitken(vals)
    return float(est), float(unc)


def omega_preserving_residual(mp: MapUnderTest, xi, xi_target, samples) -> float:
    """max |Omega'_{xi'}(f(z)) - Omega_xi(z)| over the samples.

    Zero exactly when the map transports one kernel to the other, as the
    egg squaring map does at the axis point.
    """
    worst = 0.0
    for z in samples:
        z = as_point(mp.source, z)
        oz = kernels.poisson_kernel(mp.source, xi, z).value
        ow = kernels.poisson_kernel(mp.target, xi_target, mp(z)).value
        worst = max(worst, abs(ow - oz))
    return float(worst)


def gamma_lambda(lam: complex):
    """The curve t -> (t, lam sqrt(1-t^2)) in the 2-ball.

    For |lam| < 1 it lands at e1 but is only K'-convergent: the kernel
    limit along it is -2(1-|lam|^2) instead of the non-tangential -2.
    """
    lam = complex(lam)
    if abs(lam) >= 1.0:
        raise DomainError("the curve parameter must satisfy |lam| < 1")

    def curve(t):
        t = np.asarray(t, dtype=float)
        return np.stack([t + 0j, lam * np.sqrt(1.0 - t * t)], axis=-1)

    return curve


def special_curve_limit(lam: complex, js=range(1, 9)) -> dict:
    """Kernel and distance asymptotics along gamma_lambda in the 2-ball.

    Returns the extrapolated limit of Omega_{e1}(gamma(t)) (1-t), the
    predicted value -2(1-|lam|^2), and the limit of delta / (1-t).
    """
    dom = make_domain("ball", n=2)
    curve = gamma_lambda(lam)
    xi = np.array([1.0 + 0j, 0.0 + 0j])
    kvals = []
    dvals = []
    for j in js:
        t = 1.0 - 10.0 ** (-j)
        z = curve(t)
        kvals.append(kernels.poisson_kernel(dom, xi, z).value * (1.0 - t))
        dvals.append(boundary_distance(dom, z) / (1.0 - t))
    kest, kunc = aitken(kvals)
    dest, dunc = aitken(dvals)
    expected = -2.0 * (1.0 - abs(lam) ** 2)
    return {
        "kernel_limit": float(kest),
        "kernel_uncertainty": float(kunc),
        "expected": float(expected),
        "delta_ratio": float(dest),
        "delta_ratio_uncertainty": float(dunc),
    }
