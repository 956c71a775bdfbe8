"""Disk geometry: Moebius maps, the hyperbolic metric, annuli and closed polylines.

Points are plain Python/numpy complex numbers.  All functions broadcast over
numpy arrays.  Boundary points are those with ``abs(1 - |z|) <= BOUNDARY_TOL``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .errors import (
    DivergenceError,
    DomainError,
    InvalidInputError,
    InvalidParameterError,
    OnCurveError,
    TopologyError,
)

BOUNDARY_TOL = 1e-12
MIN_VERTICES = 64


def mobius_disk(a, z):
    """phi_a(z) = (z + a) / (1 + conj(a) z).  Note phi_{-a} is the inverse of phi_a."""
    a = complex(a)
    if abs(a) >= 1:
        raise InvalidParameterError(f"Moebius parameter must satisfy |a| < 1, got |a| = {abs(a)}")
    z = np.asarray(z, dtype=complex)
    out = (z + a) / (1 + np.conj(a) * z)
    return out[()] if out.ndim == 0 else out


def pseudo_hyperbolic(z, w):
    """|phi_{-z}(w)|, the pseudo-hyperbolic distance."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return np.abs(z - w) / np.abs(1 - np.conj(w) * z)


def hyperbolic_distance(z, w):
    """rho(z, w) = log((1+t)/(1-t)) with t the pseudo-hyperbolic distance.

    The metric has curvature -1, so rho(0, x) = log((1+x)/(1-x)).
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(z) >= 1 - BOUNDARY_TOL) or np.any(np.abs(w) >= 1 - BOUNDARY_TOL):
        raise DivergenceError("hyperbolic distance to a boundary point is infinite")
    t = pseudo_hyperbolic(z, w)
    out = 2.0 * np.arctanh(np.minimum(t, 1.0))
    return out[()] if out.ndim == 0 else out


def annulus_hyperbolic_density(r, z):
    """Density of the complete hyperbolic metric of A(r, 1/r) at z."""
    if not 0 < r < 1:
        raise InvalidParameterError(f"need 0 < r < 1, got {r}")
    rad = np.abs(np.asarray(z, dtype=complex))
    if np.any(rad <= r) or np.any(rad >= 1 / r):
        raise DomainError("point outside the annulus A(r, 1/r)")
    lr = np.log(1 / r)
    out = np.pi / (2 * lr) / (rad * np.cos(np.pi * np.log(rad) / (2 * lr)))
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class Annulus:
    """Round annulus {r < |z - center| < R}."""

    inner_radius: float
    outer_radius: float
    center: complex = 0j

    def __post_init__(self):
        if not (0 <= self.inner_radius < self.outer_radius):
            raise InvalidParameterError(
                f"annulus needs 0 <= r < R, got r={self.inner_radius}, R={self.outer_radius}"
            )

    @property
    def modulus(self):
        if self.inner_radius == 0:
            return np.inf
        return float(np.log(self.outer_radius / self.inner_radius))

    def contains(self, z):
        d = np.abs(np.asarray(z, dtype=complex) - self.center)
        return (d > self.inner_radius) & (d < self.outer_radius)


def _signed_area(v):
    return 0.5 * float(np.sum(v.real * np.roll(v.imag, -1) - np.roll(v.real, -1) * v.imag))


class JordanCurve:
    """Closed polyline in the open unit disk.

    The closing segment from the last vertex back to the first is implicit.
    A repeated final vertex is dropped.  Orientation is +1 for counterclockwise.
    Curve-dependent quantities converge as the vertex count grows, and callers
    who care should compare against a curve with twice the vertices.
    """

    def __init__(self, vertices, require_interior=True):
        v = np.asarray(vertices, dtype=complex).ravel()
        if v.size > 1 and abs(v[0] - v[-1]) < BOUNDARY_TOL:
            v = v[:-1]
        if v.size < MIN_VERTICES:
            raise InvalidInputError(f"a curve needs at least {MIN_VERTICES} vertices, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("non-finite vertex")
        if require_interior and np.max(np.abs(v)) >= 1 - BOUNDARY_TOL:
            raise InvalidInputError("curve vertices must lie inside the open unit disk")
        area = _signed_area(v)
        if area == 0:
            raise TopologyError("curve encloses zero area")
        self.vertices = v
        self.vertices.setflags(write=False)
        self.orientation = 1 if area > 0 else -1

    def __len__(self):
        return self.vertices.size

    def __repr__(self):
        return f"JordanCurve(n={len(self)}, orientation={self.orientation})"

    @classmethod
    def circle(cls, center=0j, radius=0.5, n=1024):
        t = 2 * np.pi * np.arange(n) / n
        return cls(center + radius * np.exp(1j * t))

    @property
    def area(self):
        return abs(_signed_area(self.vertices))

    @property
    def diameter(self):
        v = self.vertices
        # pairwise maximum over at most ~256 vertices
        sub = v[:: max(1, len(v) // 256)]
        return float(np.max(np.abs(sub[:, None] - sub[None, :])))

    def segments(self):
        return self.vertices, np.roll(self.vertices, -1)

    def reversed(self):
        return JordanCurve(self.vertices[::-1])

    def mapped(self, fn):
        return JordanCurve(fn(self.vertices))

    def positive(self):
        return self if self.orientation == 1 else self.reversed()

    def is_simple(self):
        """True when no two non-adjacent segments intersect."""
        p, q = self.segments()
        n = p.size
        d = q - p

        def cross(u, w):
            return u.real * w.imag - u.imag * w.real

        for start in range(0, n, 256):
            i = np.arange(start, min(n, start + 256))[:, None]
            j = np.arange(n)[None, :]
            pi, di = p[i], d[i]
            pj, dj = p[j], d[j]
            o1 = cross(di, pj - pi)
            o2 = cross(di, pj + dj - pi)
            o3 = cross(dj, pi - pj)
            o4 = cross(dj, pi + di - pj)
            hit = (o1 * o2 < 0) & (o3 * o4 < 0)
            adjacent = (np.abs(i - j) <= 1) | (np.abs(i - j) == n - 1)
            if np.any(hit & ~adjacent):
                return False
        return True

    def require_simple(self):
        if not self.is_simple():
            raise TopologyError("polyline is not simple (self-intersection found)")
        return self


def _segment_distance(points, p, q):
    """Distance from each point to each segment, shape (len(points), len(p))."""
    d = q - p
    rel = points[:, None] - p[None, :]
    dd = np.abs(d) ** 2
    t = np.clip((rel.real * d.real + rel.imag * d.imag) / np.where(dd > 0, dd, 1), 0, 1)
    return np.abs(rel - t * d[None, :])


def winding_number(curve, p, chunk=512):
    """Winding number of the closed polyline about p (scalar or array)."""
    verts = curve.vertices if isinstance(curve, JordanCurve) else np.asarray(curve, dtype=complex)
    pts = np.atleast_1d(np.asarray(p, dtype=complex))
    a = verts
    b = np.roll(verts, -1)
    out = np.empty(pts.shape, dtype=int)
    flat_in = pts.ravel()
    flat_out = out.ravel()
    for s in range(0, flat_in.size, chunk):
        z = flat_in[s : s + chunk]
        dist = _segment_distance(z, a, b)
        close = np.min(dist, axis=1) < BOUNDARY_TOL
        if np.any(close):
            raise OnCurveError(f"point {z[np.argmax(close)]} lies on the curve")
        ang = np.angle((b[None, :] - z[:, None]) / (a[None, :] - z[:, None]))
        flat_out[s : s + chunk] = np.rint(np.sum(ang, axis=1) / (2 * np.pi)).astype(int)
    out = flat_out.reshape(pts.shape)
    if np.ndim(p) == 0:
        return int(out[0])
    return out


def _max_pseudo(a, pts):
    return float(np.max(np.abs(pts - a) / np.abs(1 - np.conj(a) * pts)))


def smallest_enclosing_hyperbolic_disk(points, grid_step=0.02):
    """Hyperbolic center and radius of the smallest hyperbolic disk containing points.

    The search runs in three stages. A coarse grid over the disk finds a start
    point. Golden-section line searches along the axes and diagonals refine it.
    Finally an epigraph problem (minimize s subject to every point being within
    pseudo-distance s) is polished with SLSQP, since line searches alone can
    stall on the ridge where two points are simultaneously farthest.
    """
    pts = np.asarray(points, dtype=complex).ravel()
    if pts.size == 0:
        raise InvalidInputError("empty point list")
    if np.max(np.abs(pts)) >= 1 - BOUNDARY_TOL:
        raise DivergenceError("points must be interior to the disk")
    if pts.size == 1 or np.max(np.abs(pts - pts[0])) == 0:
        return complex(pts[0]), 0.0

    g = np.arange(-1 + grid_step, 1, grid_step)
    X, Y = np.meshgrid(g, g)
    cand = (X + 1j * Y).ravel()
    cand = cand[np.abs(cand) < 1 - grid_step / 2]
    sub = pts[:: max(1, pts.size // 512)]
    worst = np.zeros(cand.size)
    for s in range(0, cand.size, 1024):
        c = cand[s : s + 1024, None]
        worst[s : s + 1024] = np.max(np.abs(sub - c) / np.abs(1 - np.conj(c) * sub), axis=1)
    a = complex(cand[np.argmin(worst)])

    span = 2 * grid_step
    dirs = [1, 1j, (1 + 1j) / np.sqrt(2), (1 - 1j) / np.sqrt(2)]
    for _ in range(6):
        moved = 0.0
        for d in dirs:
            res = minimize_scalar(
                lambda t: _max_pseudo(a + t * d, pts) if abs(a + t * d) < 1 else 2.0,
                bracket=None,
                bounds=(-span, span),
                method="bounded",
                options={"xatol": 1e-10},
            )
            if res.fun < _max_pseudo(a, pts):
                moved = max(moved, abs(res.x))
                a = a + res.x * d
        span = max(4 * moved, 1e-6)
        if moved < 1e-9:
            break

    t0 = _max_pseudo(a, pts)
    far = pts[np.abs(pts - a) / np.abs(1 - np.conj(a) * pts) > t0 - 0.2 * (1 - t0) - 1e-3]

    def cons(x):
        c = x[0] + 1j * x[1]
        return x[2] - np.abs(far - c) ** 2 / np.abs(1 - np.conj(c) * far) ** 2

    res = minimize(
        lambda x: x[2],
        np.array([a.real, a.imag, t0 * t0]),
        method="SLSQP",
        constraints=[{"type": "ineq", "fun": cons}],
        options={"ftol": 1e-15, "maxiter": 200},
    )
    if res.success:
        c = res.x[0] + 1j * res.x[1]
        if abs(c) < 1 and _max_pseudo(c, pts) <= t0:
            a = c
    t = _max_pseudo(a, pts)
    return complex(a), float(2 * np.arctanh(t))
