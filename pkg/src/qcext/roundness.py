"""Roundness of Jordan curves and of germs.

For a curve gamma in the disk with interior Omega and a center a in Omega,
let ell_a <= L_a be the smallest and largest |phi_{-a}(z)| over z on gamma.
With m = mod(D \\ closure(Omega)),

    nu(gamma) = inf over a of max( log(1/ell_a) / m,  m / log(1/L_a) ) >= 1,

and nu = 1 exactly for hyperbolic circles.  ``annulus_ratio`` in the report
is log(1/ell_a) / log(1/L_a) at the optimal center, which compares the two
enclosing circles with each other rather than with the curve.
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import (
    DegenerateRingError,
    InvalidCenterError,
    InvalidInputError,
    InvalidParameterError,
    NoCenterError,
    NotBilipschitzError,
)
from .geometry import JordanCurve, winding_number
from .modulus import CircleBoundary, RingDomain, curve_modulus_estimate, quasi_modulus_bounds, ring_modulus


@dataclass
class Germ:
    """A ring U with outer boundary the unit circle and a Beltrami field on it.

    ``m_g`` is the modulus of the image ring, if known.
    """

    ring: RingDomain
    mu: object = None
    k_g: float = 0.0
    m_g: float = None
    mod_U: float = None

    def __post_init__(self):
        outer = self.ring.outer
        if not (isinstance(outer, CircleBoundary) and outer.center == 0 and outer.radius == 1):
            raise InvalidInputError("a germ's ring must have the unit circle as outer boundary")
        if self.mu is not None:
            self.k_g = float(np.max(np.abs(self.mu.mu)))
        if not 0 <= self.k_g < 1:
            raise InvalidParameterError(f"germ needs sup|mu| < 1, got {self.k_g}")
        if self.m_g is not None:
            if self.mod_U is None:
                self.mod_U = ring_modulus(self.ring, grid_n=256).value
            lo, hi = quasi_modulus_bounds(self.mod_U, self.k_g)
            slack = 1e-3 * hi
            if not lo - slack <= self.m_g <= hi + slack:
                raise InvalidParameterError(
                    f"m_g = {self.m_g} outside the admissible range [{lo:.6g}, {hi:.6g}]"
                )


@dataclass
class RoundnessReport:
    nu: float
    center: complex
    ell: float
    L: float
    mod_gamma: float
    annulus_ratio: float

    def to_dict(self):
        return {
            "nu": self.nu,
            "center": [self.center.real, self.center.imag],
            "ell": self.ell,
            "L": self.L,
            "mod_gamma": self.mod_gamma,
            "annulus_ratio": self.annulus_ratio,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def _radii(v, a):
    w = np.abs((v - a) / (1 - np.conj(a) * v))
    return w.min(), w.max()


def enclosing_radii(gamma, a):
    """(ell_a, L_a): extreme moduli of the vertices of phi_{-a}(gamma)."""
    a = complex(a)
    if abs(a) >= 1 or abs(winding_number(gamma, a)) != 1:
        raise InvalidCenterError(f"center {a} is not inside the curve")
    lo, hi = _radii(gamma.vertices, a)
    return float(lo), float(hi)


def curve_modulus(gamma, grid_n=512):
    """mod(D \\ closure(Omega_gamma))."""
    if 1 - np.max(np.abs(gamma.vertices)) < 1e-9:
        raise DegenerateRingError("curve touches the unit circle")
    return curve_modulus_estimate(gamma, grid_n=grid_n).value


def _hex_grid(gamma, spacing):
    v = gamma.vertices
    x0, x1, y0, y1 = v.real.min(), v.real.max(), v.imag.min(), v.imag.max()
    dy = spacing * np.sqrt(3) / 2
    pts = []
    for i, y in enumerate(np.arange(y0, y1 + dy, dy)):
        off = 0.5 * spacing * (i % 2)
        xs = np.arange(x0 + off, x1 + spacing, spacing)
        pts.append(xs + 1j * y)
    pts = np.concatenate(pts)
    pts = pts[np.abs(pts) < 1]
    if pts.size == 0:
        return pts
    try:
        w = winding_number(gamma, pts)
    except Exception:
        # a grid point on the polyline; jiggle the whole grid
        pts = pts + 1e-9 * spacing * (1 + 1j)
        w = winding_number(gamma, pts)
    return pts[np.abs(w) == 1]


def roundness(gamma, mod_gamma=None, grid_n=512):
    """Roundness nu(gamma) with the optimal center.

    The modulus is computed once.  Centers are searched on a hexagonal grid
    over Omega (spacing 5% of the curve's diameter) and the best one is
    refined by Nelder-Mead.
    """
    if not isinstance(gamma, JordanCurve):
        gamma = JordanCurve(gamma)
    m = curve_modulus(gamma, grid_n) if mod_gamma is None else float(mod_gamma)
    v = gamma.vertices

    def objective(a):
        lo, hi = _radii(v, a)
        return max(np.log(1 / lo) / m, m / np.log(1 / hi))

    cands = _hex_grid(gamma, 0.05 * gamma.diameter)
    cands = np.concatenate([cands, [v.mean()]])
    inside = np.abs(winding_number(gamma, cands)) == 1
    cands = cands[inside]
    if cands.size == 0:
        raise NoCenterError("no admissible center found inside the curve")
    scores = np.array([objective(c) for c in cands])
    order = np.argsort(scores)

    def penalized(x):
        a = complex(x[0], x[1])
        if abs(a) >= 1:
            return np.inf
        try:
            if abs(winding_number(gamma, a)) != 1:
                return np.inf
        except Exception:
            return np.inf
        return objective(a)

    best_a, best = complex(cands[order[0]]), scores[order[0]]
    for idx in order[:3]:
        c = cands[idx]
        res = minimize(
            penalized,
            [c.real, c.imag],
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 2000,
                     "initial_simplex": [[c.real, c.imag],
                                         [c.real + 0.02 * gamma.diameter, c.imag],
                                         [c.real, c.imag + 0.02 * gamma.diameter]]},
        )
        if np.isfinite(res.fun) and res.fun < best:
            best, best_a = float(res.fun), complex(res.x[0], res.x[1])
    if not np.isfinite(best):
        raise NoCenterError("center optimization failed")
    lo, hi = _radii(v, best_a)
    return RoundnessReport(
        nu=float(best),
        center=best_a,
        ell=float(lo),
        L=float(hi),
        mod_gamma=m,
        annulus_ratio=float(np.log(1 / lo) / np.log(1 / hi)),
    )


def _boundary_derivative(g0, a, theta):
    """Derivative of the circle map induced by g0 o phi_a at e^{i theta}."""
    zeta = np.exp(1j * theta)
    w = (zeta + a) / (1 + np.conj(a) * zeta)
    return g0.derivative(np.angle(w)) * (1 - abs(a) ** 2) / np.abs(1 + np.conj(a) * zeta) ** 2


def germ_roundness_conformal(g0, return_center=False):
    """inf over a of max(sup D_a, 1 / inf D_a), D_a the derivative of g0 o phi_a on the circle."""
    if np.any(g0.fprime <= 0):
        raise NotBilipschitzError("boundary map must have positive derivative samples")
    theta = g0.theta

    def objective(a):
        d = _boundary_derivative(g0, a, theta)
        return max(d.max(), 1 / d.min())

    g = np.arange(-0.9, 0.91, 0.1)
    X, Y = np.meshgrid(g, g)
    cands = (X + 1j * Y).ravel()
    cands = cands[np.abs(cands) < 0.95]
    scores = np.array([objective(c) for c in cands])
    c = cands[np.argmin(scores)]

    def penalized(x):
        a = complex(x[0], x[1])
        return objective(a) if abs(a) < 0.999 else np.inf

    res = minimize(penalized, [c.real, c.imag], method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 2000})
    best, a = (res.fun, complex(*res.x)) if res.fun < scores.min() else (scores.min(), c)
    return (float(best), a) if return_center else float(best)


@dataclass
class GermRoundness:
    value: float
    family: list
    s: list
    extrapolated: float


def germ_roundness(g, curve_family, details=False):
    """Infimum of nu over a family of level curves gamma_r.

    A level curve of a conformal germ has mod(gamma_r) = log(1/r).  When nu
    decreases monotonically as that modulus shrinks, the r -> 1 limit is
    extrapolated with a polynomial in s = log(1/r) through the three curves
    closest to the circle, and it joins the infimum.
    """
    if not curve_family:
        raise InvalidInputError("empty curve family")
    reports = [roundness(c) for c in curve_family]
    nu = np.array([r.nu for r in reports])
    s = np.array([r.mod_gamma for r in reports])
    order = np.argsort(s)
    nu_s, s_s = nu[order], s[order]
    extrap = np.nan
    if nu.size >= 3 and np.all(np.diff(nu_s) >= -1e-12) and nu_s[-1] - nu_s[0] > 1e-9:
        coef = np.polyfit(s_s[:3], nu_s[:3], 2)
        extrap = float(np.polyval(coef, 0.0))
    value = float(np.nanmin(np.concatenate([nu, [extrap]])))
    if details:
        return GermRoundness(value, [float(x) for x in nu_s], [float(x) for x in s_s], extrap)
    return value
