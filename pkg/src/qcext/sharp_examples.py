"""Closed-form examples: the elliptic germ, the optimal linear ellipse map, the wedge map.

The elliptic germ for 0 < a < 1 is the conformal map

    g = g3 o g2 o g1 : D \\ [-a, a] -> A(r0, 1)
    g1(z) = (pi / (2 K)) arcsn(z / a)     elliptic modulus k = a^2, so m = a^4
    g2(z) = sin z
    g3(w) = r0 (w + s),  s^2 = w^2 - 1,  root chosen so |w + s| >= 1

g1 sends the slit domain onto a half-strip of width pi, g2 folds it onto the
plane minus [-1, 1], and the Joukowski inverse g3 opens that onto the
exterior of the unit disk, scaled by r0 so that the unit circle is fixed.
Consequently r0 = exp(-mu(a^2) / 2) with mu the Groetzsch modulus, and the
level curves of |g| are hyperbolic ellipses with foci +-a.
"""

import json

import numpy as np

from .errors import InvalidInputError, InvalidParameterError, SolverError
from .extensions import CircleMap, DiskMap
from .geometry import JordanCurve
from .special import complete_elliptic_K, jacobi_arcsn, sn_cn_dn


def _joukowski_inverse(w):
    """Both roots of J(zeta) = (zeta + 1/zeta)/2 = w, returning the one with |zeta| >= 1."""
    s = np.sqrt(w * w - 1)
    plus = w + s
    flip = np.abs(plus) < 1
    s = np.where(flip, -s, s)
    return w + s, s


class EllipticGerm:
    def __init__(self, a, tol=1e-12):
        if not 0 < a < 1:
            raise InvalidParameterError("elliptic germ needs 0 < a < 1")
        self.a = float(a)
        self.m = self.a**4
        self.K_a = float(complete_elliptic_K(self.m))
        self.Kp_a = float(complete_elliptic_K(1 - self.m))
        self.r0 = self._solve_r0(tol)

    def __repr__(self):
        return f"EllipticGerm(a={self.a}, r0={self.r0:.12g})"

    def _unscaled(self, z):
        u = jacobi_arcsn(np.asarray(z, dtype=complex) / self.a, self.m)
        w = np.sin(np.pi / (2 * self.K_a) * u)
        zeta, _ = _joukowski_inverse(w)
        return zeta

    def _solve_r0(self, tol):
        """Bisection for g(1) = 1 on [a/4, a]."""
        j1 = abs(complex(self._unscaled(1.0)))
        lo, hi = self.a / 4, self.a
        f = lambda r: r * j1 - 1
        if f(lo) * f(hi) > 0:
            raise SolverError(f"r0 not bracketed by [a/4, a] for a = {self.a}")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if f(lo) * f(mid) <= 0:
                hi = mid
            else:
                lo = mid
            if abs(f(mid)) < tol and hi - lo < tol * self.a:
                break
        return 0.5 * (lo + hi)

    def __call__(self, z):
        return self.r0 * self._unscaled(z)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        u = jacobi_arcsn(z / self.a, self.m)
        _, cn, dn = sn_cn_dn(u, self.m)
        c = np.pi / (2 * self.K_a)
        w1 = c * u
        w = np.sin(w1)
        zeta, s = _joukowski_inverse(w)
        return self.r0 * (zeta / s) * np.cos(w1) * c / (self.a * cn * dn)

    def inverse(self, w):
        """z with g(z) = w for r0 < |w| <= 1; upper half of w gives upper half of z."""
        w = np.asarray(w, dtype=complex)
        up = np.where(w.imag < 0, np.conj(w), w)
        zeta = up / self.r0
        t = 0.5 * (zeta + 1 / zeta)
        v = np.arcsin(t)
        u = 2 * self.K_a * v / np.pi
        z = self.a * sn_cn_dn(u, self.m)[0]
        return np.where(w.imag < 0, np.conj(z), z)

    def level_curve(self, r, n=1024):
        """gamma_r = g^{-1}(circle of radius r), sampled uniformly in arg g."""
        if not self.r0 < r < 1:
            raise InvalidParameterError(f"level needs r0 < r < 1 (r0 = {self.r0:.6g})")
        phi = 2 * np.pi * np.arange(n) / n
        return JordanCurve(self.inverse(r * np.exp(1j * phi)))

    def boundary_map(self, n=1024):
        """Circle map t -> arg g(e^{it}), with exact derivative |g'(e^{it})|."""

        def func(t):
            t = np.asarray(t, float)
            e = np.exp(1j * t)
            return t + np.angle(self(e) / e)

        def dfunc(t):
            return np.abs(self.derivative(np.exp(1j * np.asarray(t, float))))

        return CircleMap.from_function(func, dfunc, None, n=n, name=f"elliptic:{self.a:g}")

    def as_disk_map(self):
        def ev(r, t):
            return self(r * np.exp(1j * t))

        return DiskMap(ev, "composed", None, lambda r, t: np.zeros_like(r, dtype=complex), 1.0)

    def level_curves_json(self, radii, n=256):
        out = []
        for r in radii:
            c = self.level_curve(r, n).vertices
            out.append({"r": float(r), "points": [[float(p.real), float(p.imag)] for p in c]})
        return json.dumps({"a": self.a, "r0": self.r0, "curves": out}, indent=2)


def elliptic_germ(a):
    return EllipticGerm(a)


def elliptic_roundness(a):
    """(1 + a^2)/(1 - a^2)."""
    if not 0 <= a < 1:
        raise InvalidParameterError("need 0 <= a < 1")
    return (1 + a * a) / (1 - a * a)


def g3_inverse_boundary(r0, zeta):
    """(zeta / r0 + r0 conj(zeta)) / 2 for |zeta| = 1."""
    if not 0 < r0 < 1:
        raise InvalidParameterError("need 0 < r0 < 1")
    zeta = np.asarray(zeta, dtype=complex)
    if np.any(np.abs(np.abs(zeta) - 1) > 1e-9):
        raise InvalidInputError("g3 inverse boundary map needs |zeta| = 1")
    out = 0.5 * (zeta / r0 + r0 * np.conj(zeta))
    return out[()] if out.ndim == 0 else out


def g3_inverse_linear(r0):
    """The real-linear map w -> (w / r0 + r0 conj(w)) / 2, with mu = r0^2."""
    if not 0 < r0 < 1:
        raise InvalidParameterError("need 0 < r0 < 1")

    def ev(r, t):
        w = r * np.exp(1j * t)
        return 0.5 * (w / r0 + r0 * np.conj(w))

    def mu(r, t):
        return np.full(np.shape(r), r0 * r0, dtype=complex)

    return DiskMap(ev, "composed", None, mu, (1 + r0 * r0) / (1 - r0 * r0))


class WedgeMap:
    """F(z) = z |z|^(1 - h(arg z)) on the closed upper half-plane.

    h is 0 below the wedge |arg z - pi/2| <= eps, 1 above it, linear inside.
    F is the identity where h = 1 and z|z| where h = 0.
    """

    def __init__(self, epsilon):
        if not 0 < epsilon < np.pi / 2:
            raise InvalidParameterError("wedge needs 0 < epsilon < pi/2")
        self.epsilon = float(epsilon)

    def h(self, theta):
        e = self.epsilon
        return np.clip((np.asarray(theta, float) - np.pi / 2 + e) / (2 * e), 0.0, 1.0)

    def polar(self, r, theta):
        r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
        return r ** (2 - self.h(theta)) * np.exp(1j * theta)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        th = np.angle(z)
        # the real axis: arg 0 for x >= 0, arg pi for x < 0
        th = np.where((z.imag == 0) & (z.real < 0), np.pi, th)
        return self.polar(np.abs(z), th)

    def boundary(self, x):
        return np.real(self(np.asarray(x, dtype=float) + 0j))

    def quasisymmetry_ratio(self, t):
        """(f0(t) - f0(0)) / (f0(0) - f0(-t)); bounded for quasisymmetric f0."""
        f0 = self.boundary
        return float((f0(t) - f0(0.0)) / (f0(0.0) - f0(-t)))

    def disk_map(self):
        return DiskMap(self.polar, "composed", None, None, None, rmin=0.0, rmax=np.inf)


def wedge_counterexample(epsilon):
    return WedgeMap(epsilon)
