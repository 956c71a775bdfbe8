"""Distortion bounds for extensions, and gluing of extensions across separating annuli.

Every evaluator uses the computed ring constant ``beta0()``.  Arguments of
modulus type accept ``math.inf``.  A factor 1 + c/Q then becomes 1.
"""

import csv
import io
import math

import numpy as np

from .errors import GluingError, InvalidInputError, InvalidParameterError, ParseError
from .extensions import DiskMap, PolarGrid, distortion_field, numerical_beltrami
from .modulus import CircleBoundary, RingDomain, ring_modulus
from .special import beta0


def _need(cond, msg):
    if not cond:
        raise InvalidParameterError(msg)


def _factor(c, q):
    return 1.0 if math.isinf(q) else 1.0 + c / q


def thm2_bound(K_g, m_g):
    """K_g * (4 b / m) for m <= 2b, K_g * (1 + 2 b / m) beyond; b = beta0."""
    _need(K_g >= 1, "K_g must be >= 1")
    _need(m_g > 0, "m_g must be positive")
    b = beta0()
    if m_g <= 2 * b:
        return K_g * 4 * b / m_g
    return K_g * _factor(2 * b, m_g)


def thm5_bound(K_r, r):
    """Returns (bound, lower bound for log 1/r0) with log 1/r0 >= log(1/r) / K_r."""
    _need(K_r >= 1, "K_r must be >= 1")
    _need(0 < r < 1, "r must lie in (0, 1)")
    lr0 = math.log(1 / r) / K_r
    return _factor(4 * beta0(), lr0) * K_r, lr0


def spacefilling_bound(S, T, L, K0):
    """max(log S / log L, log L / log T) * K0, for 0 < S <= L <= T < 1."""
    _need(K0 >= 1, "K0 must be >= 1")
    _need(0 < S <= L <= T < 1, "need 0 < S <= L <= T < 1")
    return max(math.log(S) / math.log(L), math.log(L) / math.log(T)) * K0


def lemma56_bound(K, Q, Qp):
    """K (1 + 4 b / Q)(1 + 4 b / Q')."""
    _need(K >= 1, "K must be >= 1")
    _need(Q > 0 and Qp > 0, "Q and Q' must be positive")
    b = beta0()
    return K * _factor(4 * b, Q) * _factor(4 * b, Qp)


def sepinmod_bound(K0, Q):
    """(1 + 4 b / Q)(1 + 4 b K0 / Q) K0, which equals lemma56_bound(K0, Q, Q / K0)."""
    _need(K0 >= 1, "K0 must be >= 1")
    _need(Q > 0, "Q must be positive")
    b = beta0()
    return _factor(4 * b, Q) * _factor(4 * b * K0, Q) * K0


def thmLf_bound(max_ratio, min_fprime):
    """1 + 4 sqrt(A) + 9 A with A = 2 b * max|f''/f'| / min f'."""
    _need(min_fprime > 0, "min f' must be positive")
    _need(max_ratio >= 0, "max |f''/f'| must be nonnegative")
    A = 2 * beta0() * max_ratio / min_fprime
    return 1 + 4 * math.sqrt(A) + 9 * A


def thmLf_inputs(f):
    """(max |f''/f'|, min f') read off the samples of a CircleMap."""
    return float(np.max(np.abs(f.require_second() / f.fprime))), float(f.fprime.min())


def sharpness_lower(m_g):
    """(1 + e^{-2m}) / (1 - e^{-2m}) = coth m, never below 1/m."""
    _need(m_g > 0, "m_g must be positive")
    if math.isinf(m_g):
        return 1.0
    val = 1 / math.tanh(m_g)
    assert val >= 1 / m_g, "coth m >= 1/m failed"
    return val


def riemann_surface_bound(K, mod_omega):
    """K (1 + 4 b / mod)(1 + 4 b K / mod)."""
    _need(K >= 1, "K must be >= 1")
    _need(mod_omega > 0, "mod must be positive")
    b = beta0()
    return K * _factor(4 * b, mod_omega) * _factor(4 * b * K, mod_omega)


def mainthm_bound(mod_U):
    """thm2_bound(1, mod_U)."""
    _need(mod_U > 0, "mod_U must be positive")
    return thm2_bound(1.0, mod_U)


def lemma4_roundness_bound(mod_U):
    """mod / (mod - b) for conformal germs with mod(U) > b."""
    b = beta0()
    _need(mod_U > b, f"needs mod(U) > beta0 = {b:.6g}")
    return 1.0 if math.isinf(mod_U) else mod_U / (mod_U - b)


# name -> (function, parameter names)
FORMULAS = {
    "thm2": (thm2_bound, ("K", "m")),
    "thm5": (lambda K, r: thm5_bound(K, r)[0], ("K", "r")),
    "spacefilling": (spacefilling_bound, ("S", "T", "L", "K0")),
    "lemma56": (lemma56_bound, ("K", "Q", "Qp")),
    "sepinmod": (sepinmod_bound, ("K0", "Q")),
    "lf": (thmLf_bound, ("max_ratio", "min_fprime")),
    "sharpness": (sharpness_lower, ("m",)),
    "riemann": (riemann_surface_bound, ("K", "mod")),
    "main": (mainthm_bound, ("mod",)),
}


def evaluate(name, params):
    if name not in FORMULAS:
        raise InvalidInputError(f"unknown formula {name!r}; choose from {', '.join(FORMULAS)}")
    fn, names = FORMULAS[name]
    missing = [p for p in names if p not in params]
    if missing:
        raise InvalidInputError(f"{name} needs parameter(s): {', '.join(missing)}")
    return float(fn(*(float(params[p]) for p in names)))


def evaluate_batch(name, text):
    """Evaluate a formula on every row of a CSV table with a header of parameter names.

    Returns CSV text with the input columns plus ``bound``.
    """
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty CSV input")
    header = [h.strip() for h in rows[0]]
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\r\n")
    w.writerow(header + ["bound"])
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", lineno)
        try:
            params = {h: float(v) for h, v in zip(header, row)}
        except ValueError:
            raise ParseError(f"non-numeric field in {row!r}", lineno) from None
        w.writerow(row + [repr(evaluate(name, params))])
    return out.getvalue()


def sweep(name, fixed, vary, values):
    """CSV of the bound as one parameter runs over values, the rest held fixed."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\r\n")
    w.writerow([vary, "bound"])
    for v in values:
        p = dict(fixed)
        p[vary] = v
        w.writerow([repr(float(v)), repr(evaluate(name, p))])
    return out.getvalue()


# ---------------------------------------------------------------------------
# gluing


class GluedMap(DiskMap):
    """Piecewise map: region i (inside the outer boundary of A_i) uses F_i."""

    def __init__(self, base, regions, report):
        self.base = base
        self.regions = regions
        self.report = report
        pieces = [(self._selector(ring), F) for ring, F in regions]

        def ev(r, t):
            out = base.polar(r, t)
            own = self.owner(r, t)
            for i, (_, F) in enumerate(regions):
                sel = own == i + 1
                if sel.any():
                    out = np.array(out, dtype=complex)
                    out[sel] = F.polar(r[sel], t[sel])
            return out

        super().__init__(ev, "glued", base.circle_map, None, None, base.rmin, base.rmax, pieces)

    def local(self, index):
        # node owners outside every region are differenced with the base map itself
        return self.base if index == 0 else self.regions[index - 1][1]

    @staticmethod
    def _selector(ring):
        def sel(r, t):
            return ring.outer.contains(r * np.exp(1j * t))

        return sel


def power_patch(beta, radius, target_radius):
    """z -> target (|z|/radius)^beta e^{i arg z}: a radial stretch of D(0, radius) onto D(0, target)."""
    if beta < 1:
        raise InvalidParameterError("patch exponent must be >= 1")

    def ev(r, t):
        return target_radius * (r / radius) ** beta * np.exp(1j * t)

    k = (beta - 1) / (beta + 1)
    return DiskMap(ev, "power-of-modulus", None,
                   lambda r, t: k * np.exp(2j * t) * np.ones_like(r), float(beta),
                   rmin=0.0, rmax=radius)


def shrink_annulus(ring, cells, grid_n=512):
    """Concentric sub-annulus of a round ring, trimmed by ``cells`` grid cells on each side.

    Returns (sub_ring, Q') with Q' = log(R'/r') the modulus actually achieved.
    """
    inner, outer = ring.inner, ring.outer
    if not (isinstance(inner, CircleBoundary) and isinstance(outer, CircleBoundary)
            and inner.center == outer.center):
        raise InvalidInputError("concentric shrinking needs a round annulus")
    x0, x1, _, _ = ring.bbox()
    h = 1.02 * (x1 - x0) / (grid_n - 1)
    r, R = inner.radius + cells * h, outer.radius - cells * h
    if not r < R:
        raise InvalidParameterError("annulus too thin to shrink")
    return RingDomain.annulus(r, R, inner.center), math.log(R / r)


def glue_extension(f, regions, tol=1e-6, seam_points=512, grid_n=256):
    """Replace f by F_i on each A_i union D_i and check the seams.

    ``regions`` is a list of (RingDomain A_i, DiskMap F_i).  The replacement
    must agree with f on the outer boundary of A_i.  That boundary is
    sampled at ``seam_points`` points and any jump above ``tol`` raises
    GluingError.  The report records each seam's jump, mod(A_i) and the
    modulus Q' of the sub-annulus clear of the finite-difference stencils.
    """
    regions = list(regions)
    report = {"seams": [], "max_jump": 0.0}
    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            if _filled_overlap(regions[i][0], regions[j][0], grid_n):
                raise GluingError(f"regions {i} and {j} overlap")
    for i, (ring, F) in enumerate(regions):
        z = ring.outer.sample(seam_points)
        jump = float(np.max(np.abs(f(z) - F(z))))
        entry = {"region": i, "max_jump": jump}
        try:
            entry["Q"] = _round_modulus(ring)
            if entry["Q"] is None:
                entry["Q"] = ring_modulus(ring, grid_n=grid_n).value
            _, entry["Q_prime"] = shrink_annulus(ring, 2, grid_n)
        except InvalidInputError:
            entry["Q_prime"] = None
        report["seams"].append(entry)
        report["max_jump"] = max(report["max_jump"], jump)
    if report["max_jump"] > tol:
        raise GluingError(f"seam mismatch {report['max_jump']:.3g} exceeds {tol:g}",
                          max_jump=report["max_jump"])
    return GluedMap(f, regions, report)


def _round_modulus(ring):
    i, o = ring.inner, ring.outer
    if isinstance(i, CircleBoundary) and isinstance(o, CircleBoundary) and i.center == o.center:
        return math.log(o.radius / i.radius)
    return None


def _filled_overlap(a, b, n):
    """Whether the filled regions (inside the outer boundaries) intersect."""
    ba, bb = a.bbox(), b.bbox()
    x0, x1 = max(ba[0], bb[0]), min(ba[1], bb[1])
    y0, y1 = max(ba[2], bb[2]), min(ba[3], bb[3])
    if x0 >= x1 or y0 >= y1:
        return False
    X, Y = np.meshgrid(np.linspace(x0, x1, n), np.linspace(y0, y1, n), indexing="ij")
    Z = X + 1j * Y
    return bool(np.any(a.outer.contains(Z) & b.outer.contains(Z)))


def measured_distortion(G, grid=None):
    """sup K of a DiskMap measured by finite differences."""
    grid = grid or PolarGrid(0.05, 0.95, 256, 256)
    return distortion_field(numerical_beltrami(G, grid)).sup
