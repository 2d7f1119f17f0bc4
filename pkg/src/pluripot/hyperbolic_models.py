"""One-variable hyperbolic geometry: disc, half-plane, strip, annulus.

Distances use the doubled normalization k(0, t) = log((1+t)/(1-t)) on
the unit disc, so k(0, 0.5) = log 3.  The reference half-plane is
H = {Re w < 0}; its boundary kernel is normalized by value -2 at w = -1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._extrap import aitken
from .errors import ConvergenceError, DomainError, UnsupportedDomainError


def _require_disc(z, name="point"):
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError(f"{name} must lie in the open unit disc, got |z| = {abs(z):.6g}")
    return z


def _k_from_rho(rho, one_minus_rho_sq):
    """Hyperbolic distance from the pseudo-distance rho, stably.

    For rho near 1 the value log((1+rho)^2 / (1-rho^2)) avoids the
    cancellation in 1 - rho.
    """
    if rho < 0.9:
        return 2.0 * math.atanh(rho)
    return math.log((1.0 + rho) ** 2 / one_minus_rho_sq)


def disc_distance(z1, z2) -> float:
    """Hyperbolic distance between two points of the unit disc."""
    z1 = _require_disc(z1, "z1")
    z2 = _require_disc(z2, "z2")
    den = abs(1.0 - np.conj(z2) * z1) ** 2
    rho = abs(z1 - z2) / math.sqrt(den)
    s = (1.0 - abs(z1) ** 2) * (1.0 - abs(z2) ** 2) / den
    return _k_from_rho(rho, s)


def _upper_distance(u1, u2) -> float:
    """Hyperbolic distance on the upper half-plane, doubled normalization."""
    if u1.imag <= 0 or u2.imag <= 0:
        raise DomainError("points must lie in the upper half-plane")
    den = abs(u1 - np.conj(u2)) ** 2
    rho = abs(u1 - u2) / math.sqrt(den)
    s = 4.0 * u1.imag * u2.imag / den
    return _k_from_rho(rho, s)


def halfplane_distance(w1, w2) -> float:
    """Hyperbolic distance on {Re w < 0}."""
    w1, w2 = complex(w1), complex(w2)
    if w1.real >= 0 or w2.real >= 0:
        raise DomainError("points must satisfy Re w < 0")
    return _upper_distance(-1j * w1, -1j * w2)


def cayley(zeta) -> complex:
    """Cayley transform of the disc onto {Re w < 0}; 0 maps to -1."""
    zeta = complex(zeta)
    if zeta == -1.0:
        raise DomainError("the Cayley transform has a pole at -1")
    return (zeta - 1.0) / (zeta + 1.0)


def cayley_inverse(w) -> complex:
    w = complex(w)
    if w == 1.0:
        raise DomainError("the inverse Cayley transform has a pole at 1")
    return (1.0 + w) / (1.0 - w)


def poisson_disc(zeta, xi=1.0) -> float:
    """Boundary kernel of the disc at boundary point xi: -(1-|z|^2)/|xi-z|^2."""
    zeta = _require_disc(zeta)
    xi = complex(xi)
    if abs(abs(xi) - 1.0) > 1e-9:
        raise DomainError("xi must lie on the unit circle")
    return -(1.0 - abs(zeta) ** 2) / abs(xi - zeta) ** 2


def poisson_halfplane(zeta) -> float:
    """Boundary kernel of {Re w < 0} at the boundary point 0: 2 Re(1/w)."""
    zeta = complex(zeta)
    if zeta.real >= 0:
        raise DomainError("point must satisfy Re w < 0")
    return 2.0 * (1.0 / zeta).real


def horofunction_disc(xi, p, zeta) -> float:
    """Horofunction of the disc at xi, based at p, evaluated at zeta."""
    xi = complex(xi)
    if abs(abs(xi) - 1.0) > 1e-9:
        raise DomainError("xi must lie on the unit circle")
    p = _require_disc(p, "p")
    zeta = _require_disc(zeta)
    num = (1.0 - abs(p) ** 2) * abs(xi - zeta) ** 2
    den = abs(xi - p) ** 2 * (1.0 - abs(zeta) ** 2)
    return math.log(num) - math.log(den)


@dataclass(frozen=True)
class AngularApproach:
    """A non-tangential approach ladder t_k = 1 - 2^{-k} toward xi.

    M is the Stolz-region aperture the ladder is certified for; the
    radial ladder used here lies in every aperture M > 1.
    """

    xi: complex
    aperture: float = 2.0
    count: int = 40

    def __post_init__(self):
        if abs(abs(complex(self.xi)) - 1.0) > 1e-9:
            raise DomainError("approach target must lie on the unit circle")
        if self.aperture <= 1.0:
            raise DomainError("Stolz aperture must exceed 1")
        if self.count < 4:
            raise DomainError("approach ladder needs at least 4 rungs")

    @property
    def M(self) -> float:
        return self.aperture

    def parameters(self):
        return 1.0 - 0.5 ** np.arange(1, self.count + 1)

    def points(self):
        return self.parameters() * complex(self.xi)


def angular_derivative(f, xi, approach=None) -> complex:
    """Angular derivative of a holomorphic self-map of the disc at xi.

    Extrapolates the difference quotients (sigma - f(z_k)) / (xi - z_k)
    along the approach ladder, where sigma is the extrapolated boundary
    value of f.  A mismatch above 1e-4 between |result| and the Julia
    modulus ladder (1-|f(z)|)/(1-|z|) triggers a warning.
    """
    xi = complex(xi)
    if approach is None:
        approach = AngularApproach(xi=xi)
    pts = approach.points()
    fv = np.array([complex(f(z)) for z in pts])
    # Ladder values converge geometrically until they hit the roundoff
    # plateau; the boundary value must be extrapolated from clean rungs.
    fgaps = np.abs(np.diff(fv))
    fcut = len(fv)
    for i in range(3, len(fgaps)):
        if fgaps[i] > 0.8 * fgaps[i - 1] and fgaps[i - 1] > 0.0:
            fcut = i + 1
            break
    sigma, _ = aitken(fv[:fcut])
    quotients = (sigma - fv) / (xi - pts)
    # The boundary-value estimate's error is amplified by 1/(1 - t_k), so
    # the deepest rungs are noise; keep the prefix where successive gaps
    # still shrink and extrapolate that.
    gaps = np.abs(np.diff(quotients))
    cut = len(quotients)
    for i in range(3, len(gaps)):
        if gaps[i] > 1.25 * gaps[i - 1] and gaps[i - 1] > 0.0:
            # Back off one more rung so the kept tail is still dominated
            # by the decaying mode rather than the amplified one.
            cut = max(4, i - 1)
            break
    value, unc = aitken(quotients[:cut])
    moduli = ((1.0 - np.abs(fv)) / (1.0 - np.abs(pts)))[:cut]
    mod_est, _ = aitken(moduli)
    if abs(abs(value) - mod_est) > 1e-4 * (1.0 + abs(value)):
        warnings.warn(f"angular derivative modulus check off by "
                      f"{abs(abs(value) - mod_est):.3e}; the boundary point may be irregular")
    if unc > 1e-3 * (1.0 + abs(value)):
        raise ConvergenceError(f"angular derivative ladder did not settle: uncertainty {unc:.3e}")
    return complex(value)


# ---------------------------------------------------------------------------
# Annulus A_r = {r < |z| < 1} via the strip covering.
#
# The strip S = {log r < Re zeta < 0} covers A_r by zeta -> exp(zeta),
# with deck group zeta -> zeta + 2 pi i k.  E below maps S conformally
# onto the upper half-plane, sending the boundary line Re zeta = 0 to
# the negative real axis with E(0) = -1.
# ---------------------------------------------------------------------------


def _strip_exp(r, zeta):
    W = -math.log(r)
    return np.exp(1j * math.pi * (zeta - math.log(r)) / W)


def _check_annulus(r, z, name="z"):
    if not (0.0 < r < 1.0):
        raise DomainError("annulus radius must satisfy 0 < r < 1")
    z = complex(z)
    if not (r < abs(z) < 1.0):
        raise DomainError(f"{name} must satisfy r < |{name}| < 1, got |{name}| = {abs(z):.6g}")
    return z


def strip_distance(r, a, b) -> float:
    """Hyperbolic distance on the strip {log r < Re < 0}."""
    return _upper_distance(complex(_strip_exp(r, a)), complex(_strip_exp(r, b)))


def annulus_distance(r, z, w) -> float:
    """Hyperbolic distance on the annulus {r < |z| < 1}.

    Minimizes the strip distance over deck translates of one lift.  The
    translate k multiplies the half-plane image by exp(-2 pi^2 k / W),
    which gives the lower bound |log(Im ratio) + 2 pi^2 k / W| used to
    stop the search.
    """
    z = _check_annulus(r, z, "z")
    w = _check_annulus(r, w, "w")
    if z == w:
        return 0.0
    W = -math.log(r)
    a = np.log(z)
    b = np.log(w)
    ua = complex(_strip_exp(r, a))
    ub0 = complex(_strip_exp(r, b))
    la = math.log(ua.imag)
    lb = math.log(ub0.imag)
    step = 2.0 * math.pi ** 2 / W

    best = _upper_distance(ua, ub0)
    for sign in (1, -1):
        k = sign
        while abs(la - lb + step * k) <= best:
            scale = math.exp(-step * k)
            cand = _upper_distance(ua, ub0 * scale)
            best = min(best, cand)
            k += sign
            if abs(k) > 64:
                break
    return best


def _log_poisson_upper(w) -> float:
    """log of the upper half-plane kernel magnitude at boundary point -1."""
    return math.log(w.imag) - 2.0 * math.log(abs(w + 1.0))


def annulus_horofunction(r, xi, p, z, method="auto") -> float:
    """Horofunction of the annulus at an outer-circle point xi, base p.

    p must be real with r < p < 1.  The closed form minimizes the strip
    horofunction over deck lifts of z; the ladder method extrapolates
    k(z, w_j) - k(w_j, p) along w_j = (1 - 10^-j) xi and errors when the
    final two rungs differ by more than 1e-6.
    """
    xi = complex(xi)
    if abs(abs(xi) - 1.0) > 1e-9:
        raise UnsupportedDomainError("horofunction target must lie on the outer circle")
    if abs(complex(p).imag) > 1e-15:
        raise DomainError("base point p must be real")
    p = float(complex(p).real)
    if not (r < p < 1.0):
        raise DomainError("base point must satisfy r < p < 1")
    z = _check_annulus(r, z, "z")
    phase = xi / abs(xi)
    zr = z * np.conj(phase)

    if method not in ("auto", "strip", "ladder"):
        raise DomainError(f"unknown annulus horofunction method {method!r}")

    if method in ("auto", "strip"):
        base = _log_poisson_upper(complex(_strip_exp(r, math.log(p))))
        lift0 = np.log(zr)
        best = -math.inf
        for k in range(-2, 3):
            w = complex(_strip_exp(r, lift0 + 2j * math.pi * k))
            if w.imag <= 0:
                continue
            best = max(best, _log_poisson_upper(w))
        return base - best

    vals = []
    for j in range(4, 12):
        wj = 1.0 - 10.0 ** (-j)
        vals.append(annulus_distance(r, zr, wj) - annulus_distance(r, wj, p))
    if abs(vals[-1] - vals[-2]) > 1e-6:
        raise ConvergenceError(f"annulus horofunction ladder did not settle: "
                               f"final gap {abs(vals[-1] - vals[-2]):.3e}")
    est, _ = aitken(vals)
    return float(est)
