"""Green function, boundary kernel, horofunctions, and horospheres.

The boundary kernel Omega_xi is negative on the domain, normalized so
that on the disc Omega_1(0) = -1 and on a geodesic disc phi ending at
xi it pulls back to Omega(phi(zeta)) = Omega_1(zeta) / phi'_N(1).  The
Green function with pole w is G_w = log tanh(k(., w)/2); its value at
the pole is the sentinel GREEN_POLE (minus infinity, never arithmetic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import domain_core, geodesics_metrics, hyperbolic_models
from ._extrap import aitken, is_converging
from .domain_core import Domain, BoundaryPoint, as_point, boundary_distance, defining_function
from .errors import ConvergenceError, DomainError, UnsupportedDomainError

GREEN_POLE = float("-inf")

_METHODS = ("closed_form", "geodesic_formula", "limit_ladder")


@dataclass(frozen=True)
class KernelValue:
    """A kernel evaluation with its provenance and uncertainty."""

    value: float
    method: str
    uncertainty: float

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ConvergenceError(f"unknown kernel method {self.method!r}")
        if self.method == "closed_form" and self.uncertainty != 0.0:
            raise ConvergenceError("closed-form values carry zero uncertainty")


def _as_boundary(dom: Domain, xi) -> BoundaryPoint:
    if isinstance(xi, BoundaryPoint):
        return xi
    return domain_core.boundary_point(dom, xi)


def _require_interior(dom: Domain, z, name="z"):
    pt = as_point(dom, z)
    if not float(defining_function(dom, pt)) < 0.0:
        raise DomainError(f"{name} must lie inside the domain")
    return pt


def _log_tanh_half(k: float) -> float:
    """log tanh(k/2) for k > 0, stable for both tiny and huge k."""
    return math.log1p(-math.exp(-k)) - math.log1p(math.exp(-k))


def _egg_axis_phase(dom: Domain, xi: BoundaryPoint):
    """Rotation phase when xi sits on the z0 axis of an egg, else None."""
    pos = xi.position
    if float(np.max(np.abs(pos[1:]), initial=0.0)) > 1e-12:
        return None
    if abs(abs(pos[0]) - 1.0) > 1e-12:
        return None
    return pos[0] / abs(pos[0])


def _poisson_closed(dom: Domain, xi: BoundaryPoint, z):
    k = dom.kind
    if k == "disc":
        return hyperbolic_models.poisson_disc(z[0], xi.position[0])
    if k == "half_plane":
        shifted = complex(z[0] - xi.position[0])
        return 2.0 * (1.0 / shifted).real
    if k == "ball":
        num = 1.0 - float(np.linalg.norm(z)) ** 2
        den = abs(1.0 - complex(np.sum(z * np.conj(xi.position)))) ** 2
        return -num / den
    if k == "ellipsoid":
        phase = _egg_axis_phase(dom, xi)
        if phase is None:
            return None
        z0 = complex(z[0]) * np.conj(phase)
        acc = 1.0 - abs(z0) ** 2
        for j, mj in enumerate(dom.m):
            acc -= abs(complex(z[j + 1])) ** mj
        return -acc / abs(1.0 - z0) ** 2
    return None


def _poisson_geodesic(dom: Domain, xi: BoundaryPoint, z):
    k = dom.kind
    if k in ("disc", "ball"):
        phi = geodesics_metrics.ball_geodesic(z, xi)
        return -1.0 / phi.normal_derivative
    if k == "ellipsoid" and dom.n == 2:
        phase = _egg_axis_phase(dom, xi)
        if phase is None:
            return None
        m = dom.m[0]
        zr = np.array([z[0] * np.conj(phase), z[1]])
        a, zeta = geodesics_metrics.egg_invert(m, zr)
        phi = geodesics_metrics.egg_geodesic(m, a)
        if np.linalg.norm(phi(zeta) - zr) > 1e-9 * (1.0 + np.linalg.norm(zr)):
            raise ConvergenceError("egg geodesic inversion failed to reconstruct the point")
        disc_val = -(1.0 - abs(zeta) ** 2) / abs(1.0 - zeta) ** 2
        return disc_val / phi.normal_derivative
    return None


def poisson_kernel(dom: Domain, xi, z, method="auto") -> KernelValue:
    """Boundary kernel Omega_xi(z).

    method picks the evaluation route: a closed form, the catalogued
    geodesic through z, or the normal-derivative ladder of the Green
    function.  "auto" uses the best available and cross-checks the
    first two when both exist; relative disagreement beyond 1e-7 is an
    error (the geodesic route loses a digit near the boundary, where
    the kernel grows like 1/delta).
    """
    xi = _as_boundary(dom, xi)
    z = _require_interior(dom, z)
    if method not in _METHODS + ("auto",):
        raise DomainError(f"unknown kernel method {method!r}")

    closed = _poisson_closed(dom, xi, z) if method in ("auto", "closed_form") else None
    geo = None
    if method in ("auto", "geodesic_formula"):
        geo = _poisson_geodesic(dom, xi, z)

    if method == "closed_form":
        if closed is None:
            raise UnsupportedDomainError(f"no closed-form kernel for {dom.label} at this point")
        return KernelValue(float(closed), "closed_form", 0.0)
    if method == "geodesic_formula":
        if geo is None:
            raise UnsupportedDomainError(f"no catalogued geodesic kernel for {dom.label} here")
        return KernelValue(float(geo), "geodesic_formula", 0.0)
    if method == "limit_ladder" or (closed is None and geo is None):
        gnd = green_normal_derivative(dom, xi, z)
        return KernelValue(-gnd.value, "limit_ladder", gnd.uncertainty)

    if closed is not None and geo is not None:
        if abs(closed - geo) > 1e-7 * (1.0 + abs(closed)):
            raise ConvergenceError(f"kernel methods disagree: closed {closed!r} vs geodesic {geo!r}")
    if closed is not None:
        return KernelValue(float(closed), "closed_form", 0.0)
    return KernelValue(float(geo), "geodesic_formula", 0.0)


def green_function(dom: Domain, w, z, tol=None) -> KernelValue:
    """Green function G_w(z) = log tanh(k(z, w)/2).

    Needs a convex domain; the annulus is rejected.  With only two-sided
    distance bounds the value is the midpoint and the uncertainty half
    the induced width; tol, when given, caps the acceptable width.
    """
    if dom.kind == "annulus":
        raise UnsupportedDomainError("the Green-from-distance formula needs a convex domain")
    w = _require_interior(dom, w, "w")
    z = _require_interior(dom, z, "z")
    if float(np.linalg.norm(z - w)) < 1e-15:
        return KernelValue(GREEN_POLE, "closed_form", 0.0)
    bound = geodesics_metrics.kobayashi_distance(dom, z, w)
    if bound.exact:
        return KernelValue(_log_tanh_half(bound.value), "closed_form", 0.0)
    glo = _log_tanh_half(bound.lower) if bound.lower > 0 else GREEN_POLE
    ghi = _log_tanh_half(bound.upper)
    if glo == GREEN_POLE:
        raise ConvergenceError("distance lower bound degenerate at the pole")
    width = ghi - glo
    if tol is not None and width > tol:
        raise ConvergenceError(f"Green value ambiguous: bound width {width:.3e} exceeds {tol:g}")
    return KernelValue(0.5 * (glo + ghi), "limit_ladder", 0.5 * width)


def _normal_ladder(dom: Domain, xi: BoundaryPoint, js):
    pts = []
    for j in js:
        w = xi.position - (10.0 ** (-j)) * xi.normal
        if not float(defining_function(dom, w)) < 0.0:
            raise DomainError("normal ladder left the domain; boundary too curved here")
        pts.append(w)
    return pts


def horofunction(dom: Domain, xi, p, z, method="auto") -> KernelValue:
    """Horofunction h_{xi, p}(z), the kernel-form or ladder limit.

    Kernel form: log|Omega_xi(p)| - log|Omega_xi(z)|.  Ladder:
    extrapolate k(z, w_j) - k(w_j, p) along w_j = xi - 10^-j n_xi.
    """
    xi = _as_boundary(dom, xi)
    p = _require_interior(dom, p, "p")
    z = _require_interior(dom, z)
    if method not in ("auto", "kernel", "ladder"):
        raise DomainError(f"unknown horofunction method {method!r}")

    if method in ("auto", "kernel"):
        try:
            om_p = poisson_kernel(dom, xi, p)
            om_z = poisson_kernel(dom, xi, z)
            return KernelValue(math.log(-om_p.value) - math.log(-om_z.value),
                               "closed_form", 0.0)
        except UnsupportedDomainError:
            if method == "kernel":
                raise

    js = range(4, 12) if dom.kind == "annulus" else range(1, 9)
    vals = []
    widths = 0.0
    for w in _normal_ladder(dom, xi, js):
        bz = geodesics_metrics.kobayashi_distance(dom, z, w)
        bp = geodesics_metrics.kobayashi_distance(dom, w, p)
        vals.append(bz.value - bp.value)
        widths = max(widths, bz.width + bp.width)
    # Distances to the deepest rungs carry ~1e-8 cancellation noise, so
    # gaps jittering at that scale do not count as divergence.
    if not is_converging(vals, floor=1e-7 * (1.0 + max(abs(v) for v in vals))):
        raise ConvergenceError("horofunction ladder diverges")
    est, unc = aitken(vals)
    return KernelValue(float(est), "limit_ladder", float(unc + 0.5 * widths))


def green_normal_derivative(dom: Domain, xi, z) -> KernelValue:
    """Inward normal derivative of the Green function G_z at xi.

    Extrapolates G_z(w_j) / (-delta(w_j)) along the normal ladder; the
    limit is positive and equals |Omega_xi(z)|.
    """
    xi = _as_boundary(dom, xi)
    z = _require_interior(dom, z)
    vals = []
    unc_extra = 0.0
    for w in _normal_ladder(dom, xi, range(2, 9)):
        delta = boundary_distance(dom, w)
        g = green_function(dom, w, z)
        vals.append(g.value / (-delta))
        unc_extra = max(unc_extra, g.uncertainty / delta)
    if not is_converging(vals, floor=1e-7 * (1.0 + max(abs(v) for v in vals))):
        raise ConvergenceError("Green normal-derivative ladder diverges")
    est, unc = aitken(vals)
    if not est > 0.0:
        raise ConvergenceError(f"Green normal derivative not positive: {est!r}")
    return KernelValue(float(est), "limit_ladder", float(unc + unc_extra))


def horosphere_contains(dom: Domain, xi, p, R, z):
    """Whether z lies in the horosphere {h_{xi, p} < log R}.

    Returns True/False, or None when the horofunction's uncertainty
    straddles the margin.
    """
    if not R > 0:
        raise DomainError("horosphere radius must be positive")
    h = horofunction(dom, xi, p, z)
    margin = math.log(R) - h.value
    if h.uncertainty > 0.0 and abs(margin) <= h.uncertainty:
        return None
    return margin > 0.0


def k_region_contains(dom: Domain, xi, p, M, z):
    """Whether z lies in the approach region {h + k(., p) < 2 log M}."""
    if not M > 1.0:
        raise DomainError("approach-region aperture must exceed 1")
    h = horofunction(dom, xi, p, z)
    b = geodesics_metrics.kobayashi_distance(dom, as_point(dom, z), as_point(dom, p))
    margin = 2.0 * math.log(M) - (h.value + b.value)
    unc = h.uncertainty + 0.5 * b.width
    if unc > 0.0 and abs(margin) <= unc:
        return None
    return margin > 0.0


def boundary_distance_asymptotic(dom: Domain, xi, p, approach) -> KernelValue:
    """Limit of k(z_j, p) + log delta(z_j) along an approach to xi.

    The limit equals -log(|Omega_xi(p)| / 2) whenever the approach is
    eventually inside an approach region at xi.
    """
    xi = _as_boundary(dom, xi)
    p = _require_interior(dom, p, "p")
    vals = []
    widths = 0.0
    for zj in approach:
        zj = _require_interior(dom, zj, "approach point")
        b = geodesics_metrics.kobayashi_distance(dom, zj, p)
        vals.append(b.value + math.log(boundary_distance(dom, zj)))
        widths = max(widths, 0.5 * b.width)
    if len(vals) < 3:
        raise DomainError("approach sequence needs at least 3 points")
    if not is_converging(vals, floor=1e-7 * (1.0 + max(abs(v) for v in vals))):
        raise ConvergenceError("boundary-distance ladder diverges; approach may be too tangential")
    est, unc = aitken(vals)
    return KernelValue(float(est), "limit_ladder", float(unc + widths))
