"""Conformal modulus of ring domains.

Two estimators live here.

``ring_modulus`` is the general engine.  It minimizes the discrete Dirichlet
energy of the potential that is 0 on the inner boundary and 1 on the outer one
(5-point stencil).  Grid edges that cross a boundary are cut at the exact
crossing point, which keeps the scheme second order for curved boundaries, so
Richardson extrapolation between n and 2n applies.  The sparse SPD system is
solved by conjugate gradients preconditioned with smoothed-aggregation AMG
from pyamg.

``charge_modulus`` handles the special case of a ring D \\ closure(Omega) whose
outer boundary is the unit circle.  It writes the potential as a sum of disk
Green functions with charges placed just inside the curve.  This is exact on
the unit circle and spectrally accurate for smooth curves.

Moduli use the natural-log convention: mod A(r, R) = log(R/r).
"""

import json
from dataclasses import asdict, dataclass, field

import numpy as np
import pyamg
import scipy.sparse as sp
from scipy import ndimage
from scipy.spatial import ConvexHull, cKDTree
from scipy.spatial import QhullError

from .errors import (
    DegenerateRingError,
    InvalidInputError,
    InvalidParameterError,
    ParseError,
    ResolutionError,
    SolverError,
    TopologyError,
)
from .geometry import Annulus, JordanCurve, winding_number

CUT_FLOOR = 1e-3


# ---------------------------------------------------------------------------
# boundaries


class Boundary:
    """A boundary component.  Subclasses provide line crossings and containment."""

    closed = True

    def line_crossings(self, c0, h, nlines, horizontal):
        """Crossings with the lines y = c0 + k h (horizontal) or x = c0 + k h.

        Returns (k, s) where s is the coordinate along the line.
        """
        raise NotImplementedError

    def contains(self, z):
        raise NotImplementedError

    def sample(self, n=4096):
        raise NotImplementedError

    def bbox(self):
        s = self.sample(4096)
        return s.real.min(), s.real.max(), s.imag.min(), s.imag.max()


class CircleBoundary(Boundary):
    def __init__(self, center=0j, radius=1.0):
        if radius <= 0:
            raise InvalidParameterError("circle radius must be positive")
        self.center = complex(center)
        self.radius = float(radius)

    def __repr__(self):
        return f"CircleBoundary(center={self.center}, radius={self.radius})"

    def line_crossings(self, c0, h, nlines, horizontal):
        c_fixed = self.center.imag if horizontal else self.center.real
        c_along = self.center.real if horizontal else self.center.imag
        k = np.arange(nlines)
        d = c0 + k * h - c_fixed
        ok = np.abs(d) < self.radius
        k = k[ok]
        half = np.sqrt(self.radius**2 - d[ok] ** 2)
        return np.concatenate([k, k]), np.concatenate([c_along - half, c_along + half])

    def contains(self, z):
        return np.abs(np.asarray(z, dtype=complex) - self.center) < self.radius

    def sample(self, n=4096):
        return self.center + self.radius * np.exp(2j * np.pi * np.arange(n) / n)

    def bbox(self):
        c, r = self.center, self.radius
        return c.real - r, c.real + r, c.imag - r, c.imag + r


def _segment_line_crossings(a, b, c0, h, nlines, horizontal):
    """Crossings of segments a->b with a family of parallel grid lines (half-open rule)."""
    if horizontal:
        pa, pb, qa, qb = a.imag, b.imag, a.real, b.real
    else:
        pa, pb, qa, qb = a.real, b.real, a.imag, b.imag
    lo = np.minimum(pa, pb)
    hi = np.maximum(pa, pb)
    kmin = np.maximum(np.ceil((lo - c0) / h).astype(int), 0)
    kmax = np.minimum(np.ceil((hi - c0) / h).astype(int) - 1, nlines - 1)
    # half-open: line value v counts when lo <= v < hi
    cnt = np.maximum(kmax - kmin + 1, 0)
    cnt[pa == pb] = 0
    seg = np.repeat(np.arange(a.size), cnt)
    offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    k = kmin[seg] + offs
    v = c0 + k * h
    t = (v - pa[seg]) / (pb[seg] - pa[seg])
    s = qa[seg] + t * (qb[seg] - qa[seg])
    return k, s


class PolygonBoundary(Boundary):
    def __init__(self, vertices):
        if isinstance(vertices, JordanCurve):
            vertices = vertices.vertices
        v = np.asarray(vertices, dtype=complex).ravel()
        if v.size > 1 and v[0] == v[-1]:
            v = v[:-1]
        if v.size < 3:
            raise InvalidInputError("a polygon boundary needs at least three vertices")
        self.vertices = v

    def __repr__(self):
        return f"PolygonBoundary(n={self.vertices.size})"

    def line_crossings(self, c0, h, nlines, horizontal):
        return _segment_line_crossings(
            self.vertices, np.roll(self.vertices, -1), c0, h, nlines, horizontal
        )

    def contains(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        a = self.vertices
        b = np.roll(a, -1)
        out = np.zeros(z.shape, dtype=bool)
        flat = z.ravel()
        res = out.ravel()
        for s in range(0, flat.size, 1024):
            p = flat[s : s + 1024, None]
            cond = (a.imag > p.imag) != (b.imag > p.imag)
            with np.errstate(divide="ignore", invalid="ignore"):
                xc = a.real + (p.imag - a.imag) * (b.real - a.real) / (b.imag - a.imag)
            res[s : s + 1024] = np.sum(cond & (p.real < xc), axis=1) % 2 == 1
        return res.reshape(z.shape)

    def sample(self, n=4096):
        a = self.vertices
        b = np.roll(a, -1)
        per = max(1, n // a.size)
        t = np.arange(per) / per
        return (a[:, None] + t[None, :] * (b - a)[:, None]).ravel()

    def bbox(self):
        v = self.vertices
        return v.real.min(), v.real.max(), v.imag.min(), v.imag.max()


class SlitBoundary(Boundary):
    """A segment [p, q]; it has no interior."""

    closed = False

    def __init__(self, p, q):
        self.p = complex(p)
        self.q = complex(q)
        if self.p == self.q:
            raise InvalidInputError("slit endpoints coincide")

    def __repr__(self):
        return f"SlitBoundary({self.p}, {self.q})"

    def line_crossings(self, c0, h, nlines, horizontal):
        return _segment_line_crossings(
            np.array([self.p]), np.array([self.q]), c0, h, nlines, horizontal
        )

    def contains(self, z):
        return np.zeros(np.shape(z), dtype=bool)

    def sample(self, n=4096):
        return self.p + np.linspace(0, 1, n) * (self.q - self.p)

    @property
    def length(self):
        return abs(self.q - self.p)


def hull_boundary(points):
    """Convex hull of a point set as a polygon, or a slit if the points are collinear."""
    pts = np.asarray(points, dtype=complex).ravel()
    if pts.size < 2:
        raise InvalidInputError("a hull needs at least two distinct points")
    xy = np.column_stack([pts.real, pts.imag])
    try:
        hull = ConvexHull(xy)
        return PolygonBoundary(pts[hull.vertices])
    except QhullError:
        c = pts.mean()
        d = pts - c
        direction = d[np.argmax(np.abs(d))]
        proj = (d * np.conj(direction)).real
        return SlitBoundary(pts[np.argmin(proj)], pts[np.argmax(proj)])


def as_boundary(obj):
    if isinstance(obj, Boundary):
        return obj
    if isinstance(obj, JordanCurve):
        return PolygonBoundary(obj)
    raise InvalidInputError(f"cannot interpret {type(obj).__name__} as a boundary")


# ---------------------------------------------------------------------------
# ring domains


@dataclass
class Grid:
    n: int
    x0: float
    y0: float
    h: float
    free: np.ndarray
    value: np.ndarray
    # per-direction cut data: (t_first, b_first, t_last, b_last) arrays on edges
    cuts: dict = field(default_factory=dict)

    def points(self):
        x = self.x0 + self.h * np.arange(self.n)
        y = self.y0 + self.h * np.arange(self.n)
        X, Y = np.meshgrid(x, y, indexing="ij")
        return X + 1j * Y


class RingDomain:
    """Doubly connected region between an inner and an outer boundary.

    Either boundary pair or a raw mask may be given.  A mask domain carries
    free nodes as True. The non-free component touching the grid border is
    the outer boundary and the remaining one is the hole.
    """

    def __init__(self, inner=None, outer=None, mask=None, extent=None):
        if mask is not None:
            self.inner = None
            self.outer = None
            self.mask = np.asarray(mask, dtype=bool)
            if self.mask.ndim != 2 or self.mask.shape[0] != self.mask.shape[1]:
                raise InvalidInputError("mask must be a square 2-D array")
            self.extent = tuple(extent) if extent is not None else (-1.0, 1.0, -1.0, 1.0)
            return
        if inner is None:
            raise InvalidInputError("ring domain needs an inner boundary")
        self.inner = as_boundary(inner)
        self.outer = as_boundary(outer) if outer is not None else CircleBoundary(0j, 1.0)
        if not self.outer.closed:
            raise TopologyError("outer boundary must be a closed curve")
        self.mask = None
        s = self.inner.sample(2048)
        if not np.all(self.outer.contains(s)):
            raise TopologyError("inner boundary is not strictly inside the outer boundary")

    def __repr__(self):
        if self.mask is not None:
            return f"RingDomain(mask {self.mask.shape})"
        return f"RingDomain(inner={self.inner!r}, outer={self.outer!r})"

    @classmethod
    def annulus(cls, r, R=1.0, center=0j):
        if isinstance(r, Annulus):
            r, R, center = r.inner_radius, r.outer_radius, r.center
        if not 0 < r < R:
            raise InvalidParameterError("annulus needs 0 < r < R")
        return cls(CircleBoundary(center, r), CircleBoundary(center, R))

    @classmethod
    def disk_minus_disk(cls, c, t):
        return cls(CircleBoundary(c, t))

    @classmethod
    def grotzsch(cls, r):
        return cls(SlitBoundary(0, r))

    @classmethod
    def from_curve(cls, curve, outer=None):
        return cls(PolygonBoundary(curve), outer)

    def bbox(self):
        if self.mask is not None:
            return self.extent
        return self.outer.bbox()

    def gap(self):
        """Smallest distance between the two boundary components."""
        a = self.inner.sample(4096)
        b = self.outer.sample(4096)
        d, _ = cKDTree(np.column_stack([b.real, b.imag])).query(np.column_stack([a.real, a.imag]))
        return float(d.min())

    # -- rasterization -----------------------------------------------------

    def grid(self, n):
        if self.mask is not None:
            return self._mask_grid(n)
        x0, x1, y0, y1 = self.bbox()
        side = max(x1 - x0, y1 - y0)
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        half = 0.51 * side
        h = 2 * half / (n - 1)
        gx0, gy0 = cx - half, cy - half

        if self.gap() < 2 * h:
            raise ResolutionError(
                f"boundaries are closer than two grid cells (gap {self.gap():.3g}, cell {h:.3g})"
            )

        inside_outer = self._parity(self.outer, gx0, gy0, h, n)
        inside_inner = (
            self._parity(self.inner, gx0, gy0, h, n)
            if self.inner.closed
            else np.zeros((n, n), bool)
        )
        free = inside_outer & ~inside_inner
        value = np.where(inside_outer, 0.0, 1.0)

        cuts = {}
        for horizontal in (True, False):
            data = []
            for bnd in (self.inner, self.outer):
                data.append(self._edge_cuts(bnd, gx0, gy0, h, n, horizontal))
            (fi, li), (fo, lo) = data
            t_first = np.minimum(fi, fo)
            b_first = np.where(fi <= fo, 0.0, 1.0)
            t_last = np.maximum(li, lo)
            b_last = np.where(li >= lo, 0.0, 1.0)
            cuts[horizontal] = (t_first, b_first, t_last, b_last)

        g = Grid(n, gx0, gy0, h, free, value, cuts)
        self._check_topology(g)
        return g

    @staticmethod
    def _parity(bnd, gx0, gy0, h, n):
        # horizontal lines y = gy0 + k h; a crossing at x flips all nodes to its right
        k, s = bnd.line_crossings(gy0, h, n, horizontal=True)
        j = np.floor((s - gx0) / h).astype(int) + 1
        keep = j < n
        toggles = np.zeros((n + 1, n), dtype=np.int64)
        np.add.at(toggles, (np.clip(j[keep], 0, n), k[keep]), 1)
        return np.cumsum(toggles[:n], axis=0) % 2 == 1

    @staticmethod
    def _edge_cuts(bnd, gx0, gy0, h, n, horizontal):
        """First/last crossing fraction for each grid edge, inf/-inf when none.

        Edge arrays are indexed [i, j] with the edge running from node [i, j]
        to [i+1, j] (x-direction) or [i, j+1] (y-direction), padded to n x n.
        """
        first = np.full((n, n), np.inf)
        last = np.full((n, n), -np.inf)
        if horizontal:
            k, s = bnd.line_crossings(gy0, h, n, horizontal=True)
            pos = (s - gx0) / h
        else:
            k, s = bnd.line_crossings(gx0, h, n, horizontal=False)
            pos = (s - gy0) / h
        e = np.floor(pos).astype(int)
        t = pos - e
        ok = (e >= 0) & (e < n - 1)
        e, t, k = e[ok], t[ok], k[ok]
        if horizontal:
            idx = (e, k)
        else:
            idx = (k, e)
        np.minimum.at(first, idx, t)
        np.maximum.at(last, idx, t)
        return first, last

    def _mask_grid(self, n):
        mask = self.mask
        if mask.shape[0] != n:
            zoom = n / mask.shape[0]
            mask = ndimage.zoom(mask.astype(float), zoom, order=0) > 0.5
        x0, x1, y0, y1 = self.extent
        h = (x1 - x0) / (n - 1)
        lab, nlab = ndimage.label(~mask)
        border = set(np.unique(np.concatenate([lab[0], lab[-1], lab[:, 0], lab[:, -1]]))) - {0}
        if len(border) != 1 or nlab != 2:
            raise TopologyError(
                f"mask complement must have one outer and one inner component, found {nlab}"
            )
        outer_label = border.pop()
        value = np.where(lab == outer_label, 1.0, 0.0)
        g = Grid(n, x0, y0, h, mask.copy(), value, {})
        self._check_topology(g)
        return g

    def _check_topology(self, g):
        lab, nlab = ndimage.label(g.free)
        if nlab != 1:
            raise TopologyError(f"free region has {nlab} connected components, expected 1")
        if self.mask is None and not self.inner.closed:
            if self.inner.length < 2 * g.h:
                raise ResolutionError("slit shorter than two grid cells")
            return
        hole = ~g.free & (g.value == 0)
        if not hole.any():
            raise ResolutionError("inner boundary encloses no grid node")
        near = ndimage.binary_dilation(hole) & ~g.free & (g.value == 1)
        if near.any():
            raise ResolutionError("inner and outer boundaries touch at grid resolution")

    def mask_at(self, n):
        return self.grid(n).free


# ---------------------------------------------------------------------------
# the FD solver


@dataclass
class ModulusEstimate:
    value: float
    grid_n: int
    richardson_refined: bool
    error: float = float("nan")
    coarse: float = float("nan")
    fine: float = float("nan")
    method: str = "fd"

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def _energy(g):
    n = g.n
    free = g.free
    idx = -np.ones((n, n), dtype=np.int64)
    nfree = int(free.sum())
    idx[free] = np.arange(nfree)
    rows, cols, vals = [], [], []
    rhs = np.zeros(nfree)
    const = 0.0

    def diag(ii, w, b):
        nonlocal const
        rows.append(ii)
        cols.append(ii)
        vals.append(w)
        np.add.at(rhs, ii, w * b)
        const += float(np.sum(w * b * b))

    for horizontal in (True, False):
        if horizontal:
            I = (slice(0, n - 1), slice(None))
            J = (slice(1, n), slice(None))
        else:
            I = (slice(None), slice(0, n - 1))
            J = (slice(None), slice(1, n))
        fi, fj = free[I], free[J]
        ii, jj = idx[I], idx[J]
        vi, vj = g.value[I], g.value[J]
        if horizontal in g.cuts:
            tf, bf, tl, bl = (a[I] for a in g.cuts[horizontal])
            crossed = np.isfinite(tf)
        else:
            crossed = np.zeros(fi.shape, bool)

        plain = ~crossed
        both = plain & fi & fj
        a, b = ii[both], jj[both]
        one = np.ones(a.size)
        rows += [a, b, a, b]
        cols += [a, b, b, a]
        vals += [one, one, -one, -one]
        m = plain & fi & ~fj
        diag(ii[m], np.ones(m.sum()), vj[m])
        m = plain & ~fi & fj
        diag(jj[m], np.ones(m.sum()), vi[m])

        if crossed.any():
            m = crossed & fi
            diag(ii[m], 1.0 / np.maximum(tf[m], CUT_FLOOR), bf[m])
            m = crossed & fj
            diag(jj[m], 1.0 / np.maximum(1.0 - tl[m], CUT_FLOOR), bl[m])

    A = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(nfree, nfree)
    )
    return A, rhs, const


def _solve_energy(g, tol=1e-12):
    A, rhs, const = _energy(g)
    ml = pyamg.smoothed_aggregation_solver(A, symmetry="symmetric")
    residuals = []
    u = ml.solve(rhs, tol=tol, accel="cg", maxiter=500, residuals=residuals)
    rel = np.linalg.norm(rhs - A @ u) / max(np.linalg.norm(rhs), 1e-300)
    if not np.isfinite(rel) or rel > 1e-8:
        raise SolverError(f"CG did not converge (relative residual {rel:.2e})")
    energy = const - float(rhs @ u)
    if energy <= 0:
        raise SolverError("nonpositive discrete energy")
    return energy, u


def ring_modulus(dom, grid_n=512, refine=True, tol=1e-12):
    """Modulus 2 pi / energy of the discrete potential, optionally Richardson-refined.

    With ``refine`` the estimate is repeated on a grid of 2n - 1 nodes per side
    (half the spacing) and the two values are combined assuming an O(h^2)
    error.  ``error`` is the size of that correction.
    """
    if grid_n < 16:
        raise InvalidParameterError("grid_n must be at least 16")
    g1 = dom.grid(grid_n)
    e1, _ = _solve_energy(g1, tol)
    m1 = 2 * np.pi / e1
    if not refine:
        return ModulusEstimate(m1, grid_n, False, float("nan"), m1, m1, "fd")
    g2 = dom.grid(2 * grid_n - 1)
    e2, _ = _solve_energy(g2, tol)
    m2 = 2 * np.pi / e2
    ratio = (g1.h / g2.h) ** 2
    m = (ratio * m2 - m1) / (ratio - 1)
    return ModulusEstimate(float(m), grid_n, True, float(abs(m - m2)), float(m1), float(m2), "fd")


def potential(dom, grid_n=256):
    """Discrete potential on the grid (NaN outside the ring) for plotting."""
    g = dom.grid(grid_n)
    _, u = _solve_energy(g)
    out = np.where(g.value == 1.0, 1.0, 0.0)
    out[g.free] = u
    return g, out


# ---------------------------------------------------------------------------
# charge simulation for rings D \ closure(Omega)


def _green(z, p):
    return np.log(np.abs((z[:, None] - p[None, :]) / (1 - np.conj(p)[None, :] * z[:, None])))


def charge_modulus(curve, depth=2.0, stride=2):
    """Modulus of D \\ closure(Omega_curve) by charge simulation.

    The potential is u = 1 + sum q_j G(z, p_j), where G is the Green function
    of the disk.  It equals 1 on the unit circle whatever the charges are.
    Charges sit a few local spacings inside the curve.  The charges solve
    u = 0 at the vertices in the least-squares sense, and the modulus is
    1 / sum(q).  The reported error bounds the relative modulus error by
    the potential's deviation from 0 on the polyline, checked at the edge
    midpoints.
    """
    if not isinstance(curve, JordanCurve):
        curve = JordanCurve(curve)
    z = curve.positive().vertices
    n = z.size
    if np.max(np.abs(z)) >= 1 - 1e-9:
        raise DegenerateRingError("curve touches the unit circle")
    tang = np.roll(z, -1) - np.roll(z, 1)
    outward = -1j * tang / np.abs(tang)
    spacing = np.abs(np.roll(z, -1) - z)
    hloc = 0.5 * (spacing + np.roll(spacing, 1))
    mid = 0.5 * (z + np.roll(z, -1))
    for d in (depth, depth / 2, depth / 4, depth / 8):
        p = (z - d * stride * hloc * outward)[::stride]
        if np.all(winding_number(curve, p) == curve.orientation):
            break
    else:
        raise DegenerateRingError("could not place charges inside the curve")
    G = _green(z, p)
    q, *_ = np.linalg.lstsq(G, -np.ones(n), rcond=None)
    total = float(np.sum(q))
    if total <= 0:
        raise SolverError("charge simulation produced a nonpositive total charge")
    resid = float(np.max(np.abs(_green(mid, p) @ q + 1)))
    value = 1.0 / total
    return ModulusEstimate(value, n, False, resid * value / max(1 - resid, 1e-12), value, value, "charge")


def curve_modulus_estimate(curve, grid_n=512, max_residual=1e-3):
    """mod(D \\ closure(Omega_curve)): charge simulation, falling back to the grid solver."""
    try:
        est = charge_modulus(curve)
        if est.error <= max_residual * est.value:
            return est
    except (SolverError, DegenerateRingError, np.linalg.LinAlgError):
        pass
    return ring_modulus(RingDomain.from_curve(curve), grid_n=grid_n)


# ---------------------------------------------------------------------------
# modulus inequalities and separation


def quasi_modulus_bounds(mod_U, k):
    """Interval [(1-k)/(1+k) mod_U, (1+k)/(1-k) mod_U] for images under k-qc maps."""
    if mod_U <= 0:
        raise InvalidParameterError("mod_U must be positive")
    if not 0 <= k < 1:
        raise InvalidParameterError("need 0 <= k < 1")
    f = (1 + k) / (1 - k)
    return mod_U / f, mod_U * f


def _as_ring(a):
    if isinstance(a, Annulus):
        return RingDomain.annulus(a)
    if isinstance(a, RingDomain):
        return a
    raise InvalidInputError(f"cannot interpret {type(a).__name__} as a ring domain")


def _masks_overlap(d1, d2, n):
    b1, b2 = d1.bbox(), d2.bbox()
    x0, x1 = max(b1[0], b2[0]), min(b1[1], b2[1])
    y0, y1 = max(b1[2], b2[2]), min(b1[3], b2[3])
    if x0 >= x1 or y0 >= y1:
        return False
    x = np.linspace(x0, x1, n)
    y = np.linspace(y0, y1, n)
    X, Y = np.meshgrid(x, y, indexing="ij")
    Z = X + 1j * Y
    return bool(np.any(_ring_contains(d1, Z) & _ring_contains(d2, Z)))


def _ring_contains(d, z):
    if d.mask is not None:
        raise InvalidInputError("separation checks need boundary-defined rings")
    return d.outer.contains(z) & ~d.inner.contains(z) if d.inner.closed else d.outer.contains(z)


def q_separation_check(components, annuli, Q, grid_n=256, rel_tol=5e-3):
    """Check that the components are Q-separated in modulus by the given annuli.

    Returns (ok, report).  Violations are listed in the report, never raised.
    """
    rings = [_as_ring(a) for a in annuli]
    if not rings:
        raise InvalidInputError("need at least one annulus")
    report = {"Q": float(Q), "moduli": [], "violations": []}
    for i, d in enumerate(rings):
        est = ring_modulus(d, grid_n=grid_n)
        report["moduli"].append(est.value)
        if est.value < Q * (1 - rel_tol) - est.error:
            report["violations"].append(
                {"kind": "modulus", "annulus": i, "modulus": est.value}
            )
    for i in range(len(rings)):
        for j in range(i + 1, len(rings)):
            if _masks_overlap(rings[i], rings[j], grid_n):
                report["violations"].append({"kind": "overlap", "annuli": [i, j]})
    for c, comp in enumerate(components):
        pts = np.atleast_1d(np.asarray(comp, dtype=complex))
        if not any(np.all(d.inner.contains(pts)) for d in rings if d.inner.closed):
            report["violations"].append({"kind": "uncovered", "component": c})
    return not report["violations"], report


# ---------------------------------------------------------------------------
# PGM masks


def write_pgm(path, mask):
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        # row 0 of the image is the top edge: largest y
        fh.write((np.flipud(mask.T) * 255).astype(np.uint8).tobytes())


def read_pgm(path):
    with open(path, "rb") as fh:
        data = fh.read()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and chr(data[pos]).isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not chr(data[pos]).isspace():
            pos += 1
        if start == pos:
            raise ParseError("truncated PGM header")
        tokens.append(data[start:pos].decode("ascii"))
    if tokens[0] != "P5":
        raise ParseError(f"not a binary PGM file (magic {tokens[0]!r})")
    w, h, maxval = (int(t) for t in tokens[1:])
    pos += 1
    img = np.frombuffer(data[pos : pos + w * h], dtype=np.uint8)
    if img.size != w * h:
        raise ParseError("PGM pixel data is truncated")
    img = img.reshape(h, w)
    return np.flipud(img).T > maxval // 2
