"""Complex geodesics, exact hyperbolic distances, and two-sided bounds.

Geodesic discs are holomorphic isometries of the unit disc into a
domain, parametrized so that the boundary point of interest is the
radial limit at 1.  Distances use the doubled normalization
k(0, t) = log((1+t)/(1-t)) throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import ndtri

from . import domain_core, hyperbolic_models
from .domain_core import Domain, BoundaryPoint, as_point, defining_function, minkowski_gauge
from .errors import ConvergenceError, DomainError, UnsupportedDomainError


@dataclass(frozen=True, eq=False)
class GeodesicDisc:
    """A complex geodesic of a domain, as a map from the unit disc.

    endpoint is the radial limit at 1 (a boundary position) and
    normal_derivative the positive number lim <phi'(t), n> along
    t -> 1-, which controls the boundary kernel on the geodesic.
    provenance is "closed_form" for catalogued families.
    """

    domain: Domain
    endpoint: np.ndarray
    normal_derivative: float
    provenance: str
    map_fn: Callable

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return self.map_fn(zeta)

    def __repr__(self):
        return (f"GeodesicDisc({self.domain.label}, endpoint="
                f"{np.array2string(self.endpoint, precision=4)}, "
                f"pN={self.normal_derivative:.6g})")


@dataclass(frozen=True)
class DistanceBound:
    """Two-sided bound on a hyperbolic distance; exact means lower == upper."""

    lower: float
    upper: float
    exact: bool

    def __post_init__(self):
        if self.lower > self.upper + 1e-12:
            raise ConvergenceError(f"inverted distance bound: [{self.lower}, {self.upper}]")
        if self.exact and self.upper - self.lower > 1e-10:
            raise ConvergenceError("exact distance with non-trivial width")

    @property
    def value(self) -> float:
        return self.upper if self.exact else 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower


def egg_geodesic(m: int, a) -> GeodesicDisc:
    """Catalogued geodesic of the egg |z0|^2 + |z1|^m < 1 ending at (1, 0).

    For any complex a the disc
        phi(zeta) = ((zeta+s)/(1+s), a ((1-zeta)/(1+s))^(2/m)),  s = |a|^m
    is a geodesic with radial endpoint (1, 0) and normal derivative
    1/(1+s); a = 0 gives the axis disc zeta -> (zeta, 0).
    """
    m = int(m)
    if m < 2 or m % 2 != 0:
        raise DomainError("egg exponent must be an even integer >= 2")
    a = complex(a)
    s = abs(a) ** m
    dom = domain_core.make_domain({"kind": "ellipsoid", "m": [m]})

    def phi(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        first = (zeta + s) / (1.0 + s)
        second = a * np.power((1.0 - zeta) / (1.0 + s), 2.0 / m)
        return np.stack([first, second], axis=-1)

    endpoint = np.array([1.0, 0.0], dtype=complex)
    return GeodesicDisc(domain=dom, endpoint=endpoint,
                        normal_derivative=1.0 / (1.0 + s),
                        provenance="closed_form", map_fn=phi)


def ball_geodesic(z, xi) -> GeodesicDisc:
    """Geodesic of the unit ball through the interior point z ending at xi.

    The affine slice through z and xi meets the ball in a round disc;
    in slice coordinates the geodesic is an explicit disc automorphism
    with phi(0) = z and radial limit xi at 1.
    """
    if isinstance(xi, BoundaryPoint):
        xi_pos = xi.position
    else:
        xi_pos = np.asarray(xi, dtype=complex)
        if xi_pos.ndim == 0:
            xi_pos = xi_pos.reshape(1)
    n = xi_pos.shape[0]
    dom = domain_core.make_domain({"kind": "ball", "n": n})
    if abs(np.linalg.norm(xi_pos) - 1.0) > 1e-9:
        raise DomainError("xi must lie on the unit sphere")
    z = as_point(dom, z)
    if np.linalg.norm(z) >= 1.0:
        raise DomainError("z must lie in the open ball")
    d = z - xi_pos
    dn2 = float(np.vdot(d, d).real)
    if dn2 < 1e-28:
        raise DomainError("z coincides with xi")
    # In the slice z + mu * d the ball is the disc |mu + conj(g)| < |g|.
    g = complex(np.sum(d * np.conj(xi_pos))) / dn2
    gb = np.conj(g)
    u = gb / abs(g)
    aa = (1.0 + gb) / abs(g)
    if abs(aa) >= 1.0:
        raise DomainError("z must lie in the open ball")
    c = (u - aa) / (1.0 - np.conj(aa) * u)

    def phi(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        B = (aa + c * zeta) / (1.0 + np.conj(aa) * c * zeta)
        mu = B * abs(g) - gb
        return xi_pos + mu[..., np.newaxis] * d

    deriv = abs(g) * c * (1.0 - abs(aa) ** 2) / (1.0 + np.conj(aa) * c) ** 2 * g * dn2
    pN = complex(deriv)
    if abs(pN.imag) > 1e-9 * max(1.0, abs(pN.real)) or pN.real <= 0:
        raise ConvergenceError(f"ball geodesic normal derivative not positive real: {pN}")
    return GeodesicDisc(domain=dom, endpoint=xi_pos.astype(complex),
                        normal_derivative=float(pN.real),
                        provenance="closed_form", map_fn=phi)


# ---------------------------------------------------------------------------
# Exact distances
# ---------------------------------------------------------------------------


def _ball_distance(z, w) -> float:
    """Hyperbolic distance of the unit ball in any dimension."""
    nz = float(np.linalg.norm(z))
    nw = float(np.linalg.norm(w))
    if nz >= 1.0 or nw >= 1.0:
        raise DomainError("points must lie in the open ball")
    zw = complex(np.sum(z * np.conj(w)))
    den = abs(1.0 - zw) ** 2
    if nw < 1e-14:
        rho = nz
    elif nz < 1e-14:
        rho = nw
    else:
        # Moebius automorphism sending w to 0, applied to z.
        pw = (zw / (nw * nw)) * w
        qw = z - pw
        sw = math.sqrt(max(0.0, 1.0 - nw * nw))
        vec = (w - pw - sw * qw) / (1.0 - zw)
        rho = float(np.linalg.norm(vec))
    s = (1.0 - nz * nz) * (1.0 - nw * nw) / den
    return hyperbolic_models._k_from_rho(min(rho, 1.0), s)


def egg_invert(m: int, z):
    """Parameters (a, zeta) of the catalogued egg geodesic through z.

    Every interior point of the egg lies on exactly one catalogued
    disc.  Returns (a, zeta) with phi_a(zeta) = z.
    """
    z0, z1 = complex(z[0]), complex(z[1])
    if abs(z1) < 1e-14:
        return 0.0 + 0.0j, z0
    a = z1 / np.power(1.0 - z0, 2.0 / m)
    s = abs(a) ** m
    zeta = z0 * (1.0 + s) - s
    return complex(a), complex(zeta)


def _egg_automorphism(dom: Domain, alpha, z):
    """Automorphism of the egg moving the axis point (alpha, 0, ...) to 0."""
    alpha = complex(alpha)
    z = np.asarray(z, dtype=complex)
    den = 1.0 - np.conj(alpha) * z[..., 0]
    out = np.empty_like(z)
    out[..., 0] = (z[..., 0] - alpha) / den
    fac = 1.0 - abs(alpha) ** 2
    for j, mj in enumerate(dom.m):
        out[..., j + 1] = z[..., j + 1] * np.power(fac, 1.0 / mj) / np.power(den, 2.0 / mj)
    return out


def _is_axis(z) -> bool:
    return bool(np.max(np.abs(np.asarray(z)[1:]), initial=0.0) < 1e-13)


def _egg_distance_exact(dom: Domain, z, w):
    """Exact egg distance when the pair is catalogued, else None."""
    if all(mj == 2 for mj in dom.m):
        return _ball_distance(z, w)
    z_axis, w_axis = _is_axis(z), _is_axis(w)
    if z_axis and w_axis:
        return hyperbolic_models.disc_distance(z[0], w[0])
    if dom.n == 2:
        m = dom.m[0]
        az, zz = egg_invert(m, z)
        aw, zw = egg_invert(m, w)
        if abs(az - aw) <= 1e-11 * (1.0 + abs(az)):
            phi = egg_geodesic(m, (az + aw) / 2.0)
            ok_z = np.linalg.norm(phi(zz) - z) <= 1e-10 * (1.0 + np.linalg.norm(z))
            ok_w = np.linalg.norm(phi(zw) - w) <= 1e-10 * (1.0 + np.linalg.norm(w))
            if ok_z and ok_w and abs(zz) < 1.0 and abs(zw) < 1.0:
                return hyperbolic_models.disc_distance(zz, zw)
    if z_axis or w_axis:
        axis_pt, other = (z, w) if z_axis else (w, z)
        moved = _egg_automorphism(dom, axis_pt[0], other)
        mu = minkowski_gauge(dom, moved)
        if mu >= 1.0:
            raise ConvergenceError("gauge evaluation left the domain")
        return math.log1p(mu) - math.log1p(-mu)
    return None


def kobayashi_distance(dom: Domain, z, w) -> DistanceBound:
    """Hyperbolic distance, exact where a catalogued method applies.

    Exact kinds: disc, half-plane, ball, annulus, and eggs for pairs on
    a common catalogued geodesic or with one point on the z0 axis.
    Everything else gets a supporting-function lower bound and an
    inscribed-slice upper bound.
    """
    z = as_point(dom, z)
    w = as_point(dom, w)
    for name, pt in (("z", z), ("w", w)):
        if not float(defining_function(dom, pt)) < 0.0:
            raise DomainError(f"{name} must lie inside the domain")
    if np.linalg.norm(z - w) < 1e-15:
        return DistanceBound(0.0, 0.0, True)

    k = dom.kind
    if k == "disc":
        val = hyperbolic_models.disc_distance(z[0], w[0])
    elif k == "half_plane":
        val = hyperbolic_models.halfplane_distance(z[0], w[0])
    elif k == "ball":
        val = _ball_distance(z, w)
    elif k == "annulus":
        val = hyperbolic_models.annulus_distance(dom.r, z[0], w[0])
    elif k == "ellipsoid":
        val = _egg_distance_exact(dom, z, w)
    else:
        val = None

    if val is not None:
        return DistanceBound(val, val, True)
    lo = caratheodory_lower_bound(dom, z, w)
    hi = slice_upper_bound(dom, z, w)
    if hi < lo:
        # Both bounds carry conservative safety margins; inversion
        # signals a genuine failure.
        raise ConvergenceError(f"distance bounds crossed: [{lo}, {hi}]")
    return DistanceBound(lo, hi, False)


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------


def _lattice_directions(n: int, count: int) -> np.ndarray:
    """Deterministic low-discrepancy unit vectors in C^n."""
    d = 2 * n
    # Root of x^(d+1) = x + 1 generalizes the plastic ratio.
    from scipy.optimize import brentq
    g = brentq(lambda x: x ** (d + 1) - x - 1.0, 1.0, 2.0, xtol=1e-15)
    alphas = np.array([(1.0 / g) ** (j + 1) for j in range(d)])
    idx = np.arange(1, count + 1)[:, None]
    u = np.mod(0.5 + idx * alphas[None, :], 1.0)
    u = np.clip(u, 1e-12, 1.0 - 1e-12)
    gauss = ndtri(u)
    vecs = gauss[:, :n] + 1j * gauss[:, n:]
    norms = np.linalg.norm(vecs, axis=1, keepdims=True)
    return vecs / norms


def _supporting_points(dom: Domain, z, w):
    """Boundary points whose tangent half-spaces contain the domain."""
    pts = []
    if dom.kind == "annulus":
        thetas = np.exp(2j * np.pi * np.arange(64) / 64.0)
        pts.extend(np.array([t]) for t in thetas)
        for base in (z, w):
            mag = abs(base[0])
            if 1.0 - mag <= mag - dom.r:
                pts.append(np.array([base[0] / mag]))
        return pts
    if dom.kind in ("disc", "ball", "ellipsoid"):
        dirs = _lattice_directions(dom.n, 64 * dom.n)
        for v in dirs:
            pts.append(v / minkowski_gauge(dom, v))
    else:
        dirs = _lattice_directions(dom.n, 64 * dom.n)
        for v in dirs:
            try:
                pts.append(domain_core._shoot_to_boundary(dom, z, v))
            except ConvergenceError:
                continue
    for base in (z, w):
        bp, _ = domain_core.boundary_project(dom, base)
        pts.append(bp.position)
    return pts


def caratheodory_lower_bound(dom: Domain, z, w) -> float:
    """Lower distance bound from supporting half-spaces.

    Each boundary point eta with outward normal n gives the holomorphic
    map zeta -> <zeta - eta, n> into {Re < 0}, hence the half-plane
    distance of the images bounds the domain distance from below.
    Requires the half-space containment, which holds for the convex
    kinds and for the annulus through its outer circle.
    """
    z = as_point(dom, z)
    w = as_point(dom, w)
    if np.linalg.norm(z - w) < 1e-15:
        return 0.0
    best = 0.0
    for eta in _supporting_points(dom, z, w):
        nrm = domain_core.unit_normal(dom, eta)
        pz = complex(np.sum((z - eta) * np.conj(nrm)))
        pw = complex(np.sum((w - eta) * np.conj(nrm)))
        if pz.real >= 0.0 or pw.real >= 0.0:
            continue
        best = max(best, hyperbolic_models.halfplane_distance(pz, pw))
    return best


_N_RAYS = 256
_N_CENTERS = 17


def _inscribed_disc_radius(dom: Domain, center, direction) -> float:
    """Certified radius of a round disc inside the slice through center.

    Marches _N_RAYS rays by bisection; the returned value shrinks the
    minimal certified-inside radius by cos(pi / _N_RAYS), the inradius
    factor of the inscribed polygon of a convex slice.
    """
    thetas = np.exp(2j * np.pi * np.arange(_N_RAYS) / _N_RAYS)
    offsets = thetas[:, None] * direction[None, :]

    def inside(t):
        pts = center[None, :] + t[:, None] * offsets
        return defining_function(dom, pts) < 0.0

    lo = np.zeros(_N_RAYS)
    hi = np.full(_N_RAYS, 0.5)
    for _ in range(16):
        mask = inside(hi)
        if not mask.any():
            break
        lo[mask] = hi[mask]
        hi[mask] *= 2.0
        if np.max(hi) > 64.0:
            raise UnsupportedDomainError("slice bound needs a bounded domain")
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        mask = inside(mid)
        lo[mask] = mid[mask]
        hi[~mask] = mid[~mask]
    return float(np.min(lo)) * math.cos(math.pi / _N_RAYS) - 1e-12


def slice_upper_bound(dom: Domain, z, w, _depth=0) -> float:
    """Upper distance bound from a round disc inside a complex slice.

    Tries inscribed discs centered along the segment [z, w]; when no
    center captures both points the segment is split and the bound
    chained by the triangle inequality.  Convex kinds only.
    """
    if dom.kind == "annulus":
        raise UnsupportedDomainError("slice bound requires a convex domain")
    if dom.kind == "half_plane":
        raise UnsupportedDomainError("slice bound requires a bounded domain")
    z = as_point(dom, z)
    w = as_point(dom, w)
    sep = float(np.linalg.norm(z - w))
    if sep < 1e-15:
        return 0.0
    direction = (w - z) / sep
    best = math.inf
    for sfrac in np.linspace(0.0, 1.0, _N_CENTERS):
        center = z + sfrac * (w - z)
        radius = _inscribed_disc_radius(dom, center, direction)
        if radius <= 0.0:
            continue
        tz = complex(np.sum((z - center) * np.conj(direction)))
        tw = complex(np.sum((w - center) * np.conj(direction)))
        if abs(tz) >= radius or abs(tw) >= radius:
            continue
        best = min(best, hyperbolic_models.disc_distance(tz / radius, tw / radius))
    if math.isinf(best):
        if _depth >= 6:
            raise ConvergenceError("slice bound subdivision failed to capture the pair")
        mid = 0.5 * (z + w)
        return (slice_upper_bound(dom, z, mid, _depth + 1)
                + slice_upper_bound(dom, mid, w, _depth + 1))
    return best


def asymptoticity_gap(phi: GeodesicDisc, psi: GeodesicDisc, t: float) -> float:
    """Distance between two geodesic rays at matched arc-length time t.

    Both geodesics must share the domain and the boundary endpoint; the
    time shift log(psi'_N / phi'_N) aligns the parametrizations
    s = tanh(t/2).  Raises when only non-exact bounds wider than the
    gap itself are available.
    """
    if phi.domain.label != psi.domain.label:
        raise DomainError("geodesics live in different domains")
    if np.linalg.norm(phi.endpoint - psi.endpoint) > 1e-9:
        raise DomainError("geodesics have different boundary endpoints")
    T = math.log(psi.normal_derivative / phi.normal_derivative)
    p = phi(math.tanh(0.5 * t))
    q = psi(math.tanh(0.5 * (t + T)))
    bound = kobayashi_distance(phi.domain, p, q)
    if not bound.exact and bound.width > max(1e-12, abs(bound.value)):
        raise ConvergenceError("asymptoticity gap inconclusive: distance bounds too wide")
    return bound.value
