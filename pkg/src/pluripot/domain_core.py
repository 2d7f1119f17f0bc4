"""Model domains, boundary geometry, and the line type probe.

Points of C^n are numpy complex vectors.  A domain carries a real-valued
defining function rho, negative inside and zero on the boundary.  The
real gradient of rho is encoded as the complex vector g = 2 drho/dzbar,
so that Re<v, g> differentiates rho along the real direction v and
||g|| equals the Euclidean norm of the real gradient.  The pairing
<z, w> = sum_j z_j conj(w_j) is Hermitian.

Supported kinds: disc, half_plane (Re z < 0 in C), ball, ellipsoid
(|z_0|^2 + sum_j |z_j|^{m_j} < 1 with even m_j), annulus (r < |z| < 1),
and general_convex (user-supplied defining function).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from . import _stencils
from .errors import ConvergenceError, DomainError, UnsupportedDomainError

_EPS = float(np.finfo(float).eps)

KINDS = ("disc", "half_plane", "ball", "ellipsoid", "annulus", "general_convex")


@dataclass(frozen=True, eq=False)
class Domain:
    """A model domain in C^n.

    The capability flags say which quantities admit closed forms:

    exact_distance_pairs   some pairs have exact hyperbolic distance
    closed_form_poisson    the boundary kernel has a closed form
    closed_form_green      the Green function has a closed form for
                           every interior pair
    """

    kind: str
    n: int
    m: tuple = ()
    r: float = 0.0
    rho_fn: Optional[Callable] = None
    grad_fn: Optional[Callable] = None

    @property
    def exact_distance_pairs(self) -> bool:
        return self.kind != "general_convex"

    @property
    def exact_distance_all(self) -> bool:
        if self.kind in ("disc", "half_plane", "ball", "annulus"):
            return True
        if self.kind == "ellipsoid":
            return all(mj == 2 for mj in self.m)
        return False

    @property
    def closed_form_poisson(self) -> bool:
        return self.kind in ("disc", "half_plane", "ball", "ellipsoid")

    @property
    def closed_form_green(self) -> bool:
        # The Green-from-distance formula needs convexity; the annulus
        # is excluded even though its distances are exact.
        if self.kind in ("disc", "half_plane", "ball"):
            return True
        if self.kind == "ellipsoid":
            return all(mj == 2 for mj in self.m)
        return False

    @property
    def label(self) -> str:
        if self.kind == "ball":
            return f"ball{self.n}"
        if self.kind == "ellipsoid":
            if self.n == 2:
                return f"egg{self.m[0]}"
            return "ellipsoid[" + ",".join(str(mj) for mj in self.m) + "]"
        if self.kind == "annulus":
            return f"annulus[r={self.r:g}]"
        return self.kind

    def __repr__(self):
        return f"Domain({self.label})"


@dataclass(frozen=True, eq=False)
class BoundaryPoint:
    """A boundary point with its outward unit normal and tangent frame.

    tangent_frame has shape (n-1, n); its rows complete the normal to a
    Hermitian-orthonormal basis of C^n.  line_type is filled in lazily.
    """

    position: np.ndarray
    normal: np.ndarray
    tangent_frame: np.ndarray
    line_type: Optional[int] = None

    def __repr__(self):
        pos = np.array2string(self.position, precision=6, separator=",")
        return f"BoundaryPoint({pos})"


def _shorthand(text: str) -> dict:
    t = text.strip().lower()
    if t == "disc":
        return {"kind": "disc"}
    if t == "half_plane":
        return {"kind": "half_plane"}
    if t.startswith("ball") and t[4:].isdigit():
        return {"kind": "ball", "n": int(t[4:])}
    if t.startswith("egg") and t[3:].isdigit():
        return {"kind": "ellipsoid", "m": [int(t[3:])]}
    if t in ("ellipsoid", "annulus", "ball", "general_convex"):
        return {"kind": t}
    raise DomainError(f"unrecognized domain shorthand: {text!r}")


def make_domain(spec, *, n=None, m=None, r=None, rho=None, gradient=None) -> Domain:
    """Build a Domain from a dict or shorthand string.

    Dict keys are restricted to kind, n, m, r; unknown keys are
    rejected.  Keyword arguments fill in missing entries (the CLI path).
    general_convex additionally needs a vectorized defining function via
    rho=, and optionally an analytic gradient via gradient=.
    """
    if isinstance(spec, str):
        spec = _shorthand(spec)
    if not isinstance(spec, dict):
        raise DomainError("domain spec must be a dict or shorthand string")
    unknown = set(spec) - {"kind", "n", "m", "r"}
    if unknown:
        raise DomainError(f"unknown domain spec fields: {sorted(unknown)}")
    kind = spec.get("kind")
    if kind not in KINDS:
        raise DomainError(f"unknown domain kind: {kind!r}")

    n_val = spec.get("n", n)
    m_val = spec.get("m", m)
    r_val = spec.get("r", r)

    if kind == "disc":
        if n_val not in (None, 1):
            raise DomainError("disc requires n = 1")
        return Domain(kind="disc", n=1)

    if kind == "half_plane":
        if n_val not in (None, 1):
            raise DomainError("half_plane requires n = 1")
        return Domain(kind="half_plane", n=1)

    if kind == "ball":
        if n_val is None:
            raise DomainError("ball requires n")
        n_val = int(n_val)
        if n_val < 1:
            raise DomainError("ball requires n >= 1")
        if n_val == 1:
            return Domain(kind="disc", n=1)
        return Domain(kind="ball", n=n_val)

    if kind == "ellipsoid":
        if m_val is None:
            raise DomainError("ellipsoid requires the exponent list m")
        if isinstance(m_val, (int, np.integer)):
            m_val = [int(m_val)]
        m_tuple = tuple(int(mj) for mj in m_val)
        if len(m_tuple) < 1:
            raise DomainError("ellipsoid requires at least one exponent")
        for mj in m_tuple:
            if mj < 2 or mj % 2 != 0:
                raise DomainError(f"ellipsoid exponents must be even and >= 2, got {mj}")
        expected_n = len(m_tuple) + 1
        if n_val is not None and int(n_val) != expected_n:
            raise DomainError(f"ellipsoid with {len(m_tuple)} exponents requires n = {expected_n}")
        return Domain(kind="ellipsoid", n=expected_n, m=m_tuple)

    if kind == "annulus":
        if r_val is None:
            raise DomainError("annulus requires the inner radius r")
        r_f = float(r_val)
        if not (0.0 < r_f < 1.0):
            raise DomainError("annulus radius must satisfy 0 < r < 1")
        return Domain(kind="annulus", n=1, r=r_f)

    # general_convex
    if rho is None:
        raise DomainError("general_convex requires a defining function via rho=")
    if n_val is None:
        raise DomainError("general_convex requires n")
    return Domain(kind="general_convex", n=int(n_val), rho_fn=rho, grad_fn=gradient)


def as_point(domain: Domain, z) -> np.ndarray:
    """Coerce z to a complex vector of the domain's dimension."""
    arr = np.asarray(z, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.shape != (domain.n,):
        raise DomainError(f"expected a point of C^{domain.n}, got shape {arr.shape}")
    return arr


def defining_function(domain: Domain, z):
    """Evaluate rho at one point or an array of points (shape (..., n))."""
    pts = np.asarray(z, dtype=complex)
    if pts.ndim == 0:
        pts = pts.reshape(1)
    if pts.shape[-1] != domain.n:
        raise DomainError(f"points must have last dimension {domain.n}")
    k = domain.kind
    if k in ("disc", "ball"):
        return np.sum(np.abs(pts) ** 2, axis=-1) - 1.0
    if k == "half_plane":
        return pts[..., 0].real
    if k == "annulus":
        mag = np.abs(pts[..., 0])
        return np.maximum(mag - 1.0, domain.r - mag)
    if k == "ellipsoid":
        acc = np.abs(pts[..., 0]) ** 2
        for j, mj in enumerate(domain.m):
            acc = acc + np.abs(pts[..., j + 1]) ** mj
        return acc - 1.0
    return domain.rho_fn(pts)


def gradient(domain: Domain, z):
    """The complex-encoded real gradient g = 2 drho/dzbar, vectorized."""
    pts = np.asarray(z, dtype=complex)
    if pts.ndim == 0:
        pts = pts.reshape(1)
    k = domain.kind
    if k in ("disc", "ball"):
        return 2.0 * pts
    if k == "half_plane":
        return np.ones_like(pts)
    if k == "annulus":
        mag = np.abs(pts[..., 0])
        if np.any(mag == 0):
            raise DomainError("annulus gradient undefined at the origin")
        sign = np.where(mag >= (1.0 + domain.r) / 2.0, 1.0, -1.0)
        return (sign * pts[..., 0] / mag)[..., np.newaxis]
    if k == "ellipsoid":
        out = np.empty_like(pts)
        out[..., 0] = 2.0 * pts[..., 0]
        for j, mj in enumerate(domain.m):
            w = pts[..., j + 1]
            out[..., j + 1] = mj * np.abs(w) ** (mj - 2) * w
        return out
    if domain.grad_fn is not None:
        return domain.grad_fn(pts)
    return _fd_gradient(domain, pts)


def _fd_gradient(domain: Domain, pts, h=1e-7):
    flat = pts.reshape(-1, domain.n)
    out = np.empty_like(flat)
    for i, z in enumerate(flat):
        for j in range(domain.n):
            e = np.zeros(domain.n, dtype=complex)
            e[j] = 1.0
            dx = (defining_function(domain, z + h * e) - defining_function(domain, z - h * e)) / (2 * h)
            dy = (defining_function(domain, z + 1j * h * e) - defining_function(domain, z - 1j * h * e)) / (2 * h)
            out[i, j] = complex(dx) + 1j * complex(dy)
    return out.reshape(pts.shape)


def contains(domain: Domain, z, margin=0.0) -> bool:
    """True when z lies inside the domain with the given clearance."""
    return bool(np.all(defining_function(domain, np.asarray(z, dtype=complex)) < -margin))


def minkowski_gauge(domain: Domain, z) -> float:
    """Gauge of the balanced kinds: the t > 0 with z / t on the boundary."""
    if domain.kind in ("disc", "ball"):
        return float(np.linalg.norm(as_point(domain, z)))
    if domain.kind != "ellipsoid":
        raise UnsupportedDomainError(f"gauge undefined for kind {domain.kind}")
    pt = as_point(domain, z)
    mags = np.abs(pt)
    top = float(mags.max())
    if top == 0.0:
        return 0.0
    ex = np.array([2.0] + [float(mj) for mj in domain.m])

    def excess(mu):
        return float(np.sum((mags / mu) ** ex)) - 1.0

    lo = top
    while excess(lo) < 0.0:
        lo *= 0.5
    hi = 2.0 * lo
    while excess(hi) > 0.0:
        hi *= 2.0
    return float(brentq(excess, lo, hi, xtol=1e-300, rtol=4 * _EPS))


def unit_normal(domain: Domain, position) -> np.ndarray:
    g = gradient(domain, as_point(domain, position))
    norm = float(np.linalg.norm(g))
    if norm == 0.0:
        raise DomainError("vanishing gradient; not a smooth boundary point")
    return g / norm


def _tangent_frame(normal: np.ndarray) -> np.ndarray:
    """Rows form a Hermitian-orthonormal basis of the complex tangent space."""
    n = normal.shape[0]
    if n == 1:
        return np.zeros((0, 1), dtype=complex)
    cols = np.concatenate([normal.reshape(n, 1), np.eye(n, dtype=complex)], axis=1)
    q, _ = np.linalg.qr(cols)
    return q[:, 1:n].T.copy()


def boundary_point(domain: Domain, position, compute_line_type=False, tol=1e-9) -> BoundaryPoint:
    """Package a boundary position with its normal and tangent frame."""
    pos = as_point(domain, position)
    resid = float(abs(defining_function(domain, pos)))
    if resid > tol:
        raise DomainError(f"not a boundary point: |rho| = {resid:.3e} exceeds {tol:g}")
    nrm = unit_normal(domain, pos)
    frame = _tangent_frame(nrm)
    bp = BoundaryPoint(position=pos, normal=nrm, tangent_frame=frame)
    if compute_line_type:
        bp = BoundaryPoint(position=pos, normal=nrm, tangent_frame=frame,
                           line_type=line_type(domain, bp))
    return bp


def boundary_distance(domain: Domain, z) -> float:
    """Euclidean distance from an interior point to the boundary."""
    pt = as_point(domain, z)
    k = domain.kind
    if k in ("disc", "ball"):
        return 1.0 - float(np.linalg.norm(pt))
    if k == "half_plane":
        return -float(pt[0].real)
    if k == "annulus":
        mag = float(abs(pt[0]))
        return min(1.0 - mag, mag - domain.r)
    _, delta = boundary_project(domain, pt)
    return delta


def boundary_project(domain: Domain, z):
    """Nearest boundary point of an interior z.

    Returns (BoundaryPoint, delta) with z = xi - delta * n_xi.  For the
    smooth convex kinds the projection is the fixed point of shooting
    along the current normal; non-convergence raises ConvergenceError.
    """
    pt = as_point(domain, z)
    if not float(defining_function(domain, pt)) < 0.0:
        raise DomainError("boundary_project requires an interior point")
    k = domain.kind

    if k in ("disc", "ball"):
        norm = float(np.linalg.norm(pt))
        if norm < 1e-12:
            xi = np.zeros(domain.n, dtype=complex)
            xi[0] = 1.0
            return boundary_point(domain, xi), 1.0
        return boundary_point(domain, pt / norm), 1.0 - norm

    if k == "half_plane":
        xi = np.array([1j * pt[0].imag], dtype=complex)
        return boundary_point(domain, xi), -float(pt[0].real)

    if k == "annulus":
        mag = float(abs(pt[0]))
        douter = 1.0 - mag
        dinner = mag - domain.r
        phase = pt[0] / mag
        if douter <= dinner:
            return boundary_point(domain, np.array([phase])), douter
        return boundary_point(domain, np.array([domain.r * phase])), dinner

    if k == "ellipsoid":
        g = minkowski_gauge(domain, pt)
        if g < 1e-12:
            xi = np.zeros(domain.n, dtype=complex)
            xi[0] = 1.0
            return boundary_point(domain, xi), 1.0
        xi = pt / g
    else:
        xi = _any_outward_seed(domain, pt)

    for _ in range(100):
        nrm = unit_normal(domain, xi)
        xi_new = _shoot_to_boundary(domain, pt, nrm)
        if float(np.linalg.norm(xi_new - xi)) <= 1e-14:
            xi = xi_new
            break
        xi = xi_new
    else:
        if float(np.linalg.norm(xi_new - xi)) > 1e-10:
            raise ConvergenceError("boundary projection did not converge")
    delta = float(np.linalg.norm(pt - xi))
    return boundary_point(domain, xi), delta


def _any_outward_seed(domain: Domain, pt):
    e = np.zeros(domain.n, dtype=complex)
    e[0] = 1.0
    return _shoot_to_boundary(domain, pt, e)


def _shoot_to_boundary(domain: Domain, pt, direction):
    """Root of rho along pt + t * direction, t > 0."""

    def f(t):
        return float(defining_function(domain, pt + t * direction))

    hi = 1.0
    for _ in range(60):
        if f(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise ConvergenceError("could not bracket the boundary along the ray")
    t = brentq(f, 0.0, hi, xtol=1e-15, rtol=4 * _EPS)
    return pt + t * direction


def levi_data(domain: Domain, xi, h=1e-4):
    """Levi form of rho at a boundary point, restricted to the tangent frame.

    Returns (L, grad_norm) with L of shape (n-1, n-1).  The full complex
    Hessian is estimated with step-halved stencils and Richardson
    extrapolation; a relative discrepancy above 1e-4 between the two raw
    estimates raises ConvergenceError.
    """
    bp = xi if isinstance(xi, BoundaryPoint) else boundary_point(domain, xi)
    gn = float(np.linalg.norm(gradient(domain, bp.position)))
    if domain.n == 1:
        return np.zeros((0, 0), dtype=complex), gn

    def u(w):
        return float(defining_function(domain, w))

    H, gap = _stencils.hessian_richardson(u, bp.position, h)
    if gap > 1e-4:
        raise ConvergenceError(f"Levi form stencil unstable: step-halving gap {gap:.3e}")
    frame = bp.tangent_frame
    L = frame @ H @ frame.conj().T
    return (L + L.conj().T) / 2.0, gn


def line_type(domain: Domain, xi, max_degree=8) -> int:
    """Order of boundary flatness along complex tangent lines at xi.

    Probes |rho| on circles of radii eps around xi inside sampled
    complex tangent lines, fits the growth exponent on a log-log ladder,
    and snaps it to an even integer (ties upward).  Returns the largest
    snapped order over the sampled directions, at least 2 and capped at
    max_degree (with a warning when the cap binds).
    """
    if domain.n < 2:
        raise UnsupportedDomainError("line type needs a domain in C^n with n >= 2")
    if domain.kind == "annulus":
        raise UnsupportedDomainError("line type undefined for the annulus")
    bp = xi if isinstance(xi, BoundaryPoint) else boundary_point(domain, xi)

    n_dirs = 128
    n_theta = 64
    eps_ladder = np.logspace(-1, -4, 7)

    rng = np.random.Generator(np.random.PCG64(20240517))
    raw = rng.standard_normal((n_dirs, domain.n - 1)) + 1j * rng.standard_normal((n_dirs, domain.n - 1))
    raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    dirs = raw @ bp.tangent_frame  # (n_dirs, n) unit tangent vectors

    thetas = np.exp(2j * np.pi * np.arange(n_theta) / n_theta)
    # points[d, e, t] = xi + eps_e * theta_t * dirs_d
    disp = dirs[:, None, None, :] * (eps_ladder[None, :, None] * thetas[None, None, :])[..., None]
    vals = np.abs(defining_function(domain, bp.position[None, None, None, :] + disp))
    M = vals.max(axis=2)  # (n_dirs, n_eps)

    best = 2
    saturated = False
    log_eps = np.log(eps_ladder)
    for d in range(n_dirs):
        mv = M[d]
        mask = mv > 1e-13
        if mask.sum() < 3:
            saturated = True
            continue
        x = log_eps[mask]
        y = np.log(mv[mask])
        slope = float(np.polyfit(x, y, 1)[0])
        pair_slopes = np.diff(y) / np.diff(x)
        if pair_slopes.size >= 2 and float(pair_slopes.max() - pair_slopes.min()) > 0.25:
            warnings.warn(f"line type probe unstable along a direction: slope {slope:.3f}, "
                          f"pairwise spread {pair_slopes.max() - pair_slopes.min():.3f}")
        order = int(2 * math.floor(slope / 2.0 + 0.5))
        order = max(order, 2)
        best = max(best, order)
    if best > max_degree or saturated:
        warnings.warn(f"line type saturates the probe: at least {max_degree}")
        return max_degree
    return best
