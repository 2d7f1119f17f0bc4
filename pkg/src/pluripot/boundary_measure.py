"""Boundary measure density, quadrature rules, and kernel reproduction.

The boundary form density at xi is
    4^{n-1} (n-1)! det(Levi form of rho) / ||grad rho||^{n-1},
which is invariant under rescaling the defining function.  Against this
weight the kernel power |Omega_xi(z)|^n reproduces pluriharmonic
functions from their boundary values, with total mass (2 pi)^n at every
interior point.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from . import domain_core, kernels
from ._extrap import aitken
from .domain_core import Domain, BoundaryPoint, as_point, boundary_distance, defining_function
from .errors import ConvergenceError, DomainError, UnsupportedDomainError


@dataclass(frozen=True, eq=False)
class BoundaryQuadrature:
    """Quadrature nodes on a domain boundary.

    points, normals: (K, n) complex arrays; weights: surface measure
    weights summing to the boundary volume; densities: the boundary
    form density at each node.
    """

    domain: Domain
    resolution: int
    points: np.ndarray
    normals: np.ndarray
    weights: np.ndarray
    densities: np.ndarray

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def to_csv(self, target) -> None:
        """Write nodes as CSV: 2n position columns, weight, density."""
        n = self.domain.n
        header = []
        for j in range(n):
            header += [f"re{j}", f"im{j}"]
        header += ["weight", "density"]
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        for i in range(self.points.shape[0]):
            row = []
            for j in range(n):
                row.append(format(self.points[i, j].real, ".17g"))
                row.append(format(self.points[i, j].imag, ".17g"))
            row.append(format(float(self.weights[i]), ".17g"))
            row.append(format(float(self.densities[i]), ".17g"))
            buf.write(",".join(row) + "\n")
        if hasattr(target, "write"):
            target.write(buf.getvalue())
        else:
            with open(target, "w") as fh:
                fh.write(buf.getvalue())


def boundary_form_density(dom: Domain, xi, h=1e-4) -> float:
    """Boundary form density at xi from the finite-difference Levi form.

    In one variable the determinant is empty and the density is 1.
    """
    bp = xi if isinstance(xi, BoundaryPoint) else domain_core.boundary_point(dom, xi)
    L, gn = domain_core.levi_data(dom, bp, h=h)
    n = dom.n
    if n == 1:
        return 1.0
    det = float(np.linalg.det(L).real)
    return 4.0 ** (n - 1) * math.factorial(n - 1) * det / gn ** (n - 1)


def _egg_density_analytic(dom: Domain, points) -> np.ndarray:
    """Closed-form density for 2-dimensional eggs (and the ball as m=2)."""
    m = dom.m[0] if dom.kind == "ellipsoid" else 2
    z0 = points[..., 0]
    z1 = points[..., 1]
    g0 = 2.0 * z0
    g1 = m * np.abs(z1) ** (m - 2) * z1
    gn2 = np.abs(g0) ** 2 + np.abs(g1) ** 2
    h11 = (m * m / 4.0) * np.abs(z1) ** (m - 2)
    levi = (np.abs(g1) ** 2 + h11 * np.abs(g0) ** 2) / gn2
    return 4.0 * levi / np.sqrt(gn2)


def build_quadrature(dom: Domain, resolution: int) -> BoundaryQuadrature:
    """Boundary quadrature with analytic charts.

    disc: uniform circle nodes.  ball (n = 2) and eggs: a single polar
    chart with Gauss-Legendre nodes in the latitude and uniform angles,
    using the exact chart Jacobian.
    """
    resolution = int(resolution)
    if resolution < 4:
        raise DomainError("resolution must be at least 4")

    if dom.kind == "disc":
        theta = 2.0 * np.pi * np.arange(resolution) / resolution
        pts = np.exp(1j * theta)[:, None]
        weights = np.full(resolution, 2.0 * np.pi / resolution)
        return BoundaryQuadrature(domain=dom, resolution=resolution,
                                  points=pts, normals=pts.copy(),
                                  weights=weights,
                                  densities=np.ones(resolution))

    if (dom.kind == "ball" and dom.n == 2) or (dom.kind == "ellipsoid" and dom.n == 2):
        m = dom.m[0] if dom.kind == "ellipsoid" else 2
        xg, wg = np.polynomial.legendre.leggauss(resolution)
        u = 0.25 * np.pi * (xg + 1.0)
        wu = wg * 0.25 * np.pi
        su, cu = np.sin(u), np.cos(u)
        radial1 = su ** (2.0 / m)
        # Gram determinant of the chart (u, theta0, theta1); the angular
        # tangent vectors are orthogonal to the latitude one.
        guu = su ** 2 + (2.0 / m) ** 2 * su ** (4.0 / m - 2.0) * cu ** 2
        sigma = cu * radial1 * np.sqrt(guu)

        th = 2.0 * np.pi * np.arange(resolution) / resolution
        e0 = np.exp(1j * th)
        K = resolution
        pts = np.empty((resolution * K * K, 2), dtype=complex)
        weights = np.empty(resolution * K * K)
        idx = 0
        ang_w = (2.0 * np.pi / K) ** 2
        for i in range(resolution):
            block = np.empty((K, K, 2), dtype=complex)
            block[..., 0] = cu[i] * e0[:, None]
            block[..., 1] = radial1[i] * e0[None, :]
            pts[idx:idx + K * K] = block.reshape(-1, 2)
            weights[idx:idx + K * K] = wu[i] * sigma[i] * ang_w
            idx += K * K
        grad = domain_core.gradient(dom, pts)
        normals = grad / np.linalg.norm(grad, axis=1, keepdims=True)
        densities = _egg_density_analytic(dom, pts)
        return BoundaryQuadrature(domain=dom, resolution=resolution,
                                  points=pts, normals=normals,
                                  weights=weights, densities=densities)

    raise UnsupportedDomainError(f"no quadrature chart for {dom.label}")


def reproduce_pluriharmonic(dom: Domain, F, z, quad: BoundaryQuadrature) -> float:
    """Reproduce a pluriharmonic F at z from boundary values.

    Computes (2 pi)^{-n} sum_i w_i density_i |Omega_{xi_i}(z)|^n F(xi_i).
    F must accept an array of boundary points with shape (K, n).
    Closed-form kernels at arbitrary boundary points exist for the disc
    and the ball, so those are the supported kinds.
    """
    if quad.domain.label != dom.label:
        raise DomainError("quadrature was built for a different domain")
    if dom.kind not in ("disc", "ball"):
        raise UnsupportedDomainError("kernel reproduction needs the disc or the ball")
    z = as_point(dom, z)
    if not float(defining_function(dom, z)) < 0.0:
        raise DomainError("z must lie inside the domain")
    n = dom.n
    inner = quad.points @ np.conj(z)
    omega_abs = (1.0 - float(np.linalg.norm(z)) ** 2) / np.abs(1.0 - inner) ** 2
    fvals = np.asarray(F(quad.points), dtype=float)
    total = np.sum(quad.weights * quad.densities * omega_abs ** n * fvals)
    return float(total / (2.0 * np.pi) ** n)


def calibrate_quadrature(dom: Domain, F, z, start_resolution=16, tol=1e-3, max_doublings=4):
    """Refine the quadrature until the reproduced value settles.

    Doubles the resolution until successive values differ by less than
    tol; returns (value, resolution, history).
    """
    res = int(start_resolution)
    history = []
    prev = None
    for _ in range(max_doublings + 1):
        quad = build_quadrature(dom, res)
        val = reproduce_pluriharmonic(dom, F, z, quad)
        history.append(val)
        if prev is not None and abs(val - prev) < tol:
            return val, res, history
        prev = val
        res *= 2
    raise ConvergenceError(f"quadrature refinement did not settle within {tol:g}")


def green_ratio(dom: Domain, z, xi, js=range(3, 10)) -> float:
    """Limit of G_z(w_j) / r(w_j) along the normal ladder at xi.

    r is the signed boundary distance (negative inside), so the ratio
    is positive and converges to |Omega_xi(z)|.
    """
    bp = xi if isinstance(xi, BoundaryPoint) else domain_core.boundary_point(dom, xi)
    z = as_point(dom, z)
    vals = []
    for j in js:
        w = bp.position - (10.0 ** (-j)) * bp.normal
        delta = boundary_distance(dom, w)
        g = kernels.green_function(dom, w, z)
        vals.append(g.value / (-delta))
    est, unc = aitken(vals)
    if unc > 1e-3 * (1.0 + abs(est)):
        raise ConvergenceError(f"Green ratio ladder did not settle: uncertainty {unc:.3e}")
    return float(est)


def montecarlo_surface_measure(dom: Domain, n_samples=10_000_000, eps=5e-3, seed=20240518) -> float:
    """Monte-Carlo estimate of the total boundary measure.

    Counts uniform box samples in the two-sided shell
    {|rho| / ||grad rho|| < eps}; the shell volume divided by 2 eps
    estimates the surface area, with O(eps^2) curvature bias.
    """
    if dom.kind not in ("ball", "ellipsoid"):
        raise UnsupportedDomainError("surface oracle implemented for balanced bounded kinds")
    n = dom.n
    rng = np.random.default_rng(seed)
    box_vol = 2.0 ** (2 * n)
    hits = 0
    chunk = 1_000_000
    done = 0
    while done < n_samples:
        take = min(chunk, n_samples - done)
        raw = rng.uniform(-1.0, 1.0, size=(take, 2 * n))
        pts = raw[:, :n] + 1j * raw[:, n:]
        rho = defining_function(dom, pts)
        grad = domain_core.gradient(dom, pts)
        gn = np.linalg.norm(grad, axis=1)
        ok = gn > 1e-12
        hits += int(np.count_nonzero(np.abs(rho[ok]) / gn[ok] < eps))
        done += take
    return hits / n_samples * box_vol / (2.0 * eps)
