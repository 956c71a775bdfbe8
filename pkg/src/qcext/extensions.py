"""Circle homeomorphisms, their extensions to the disk, and Beltrami coefficients.

A :class:`CircleMap` is a lift f of an orientation-preserving circle
homeomorphism, i.e. an increasing function with f(t + 2 pi) = f(t) + 2 pi.
Extensions are :class:`DiskMap` objects evaluated in polar coordinates.

Conventions for the Beltrami coefficient in polar form: with G = G(r, t),

    G_z    = exp(-i t)/2 * (G_r - (i/r) G_t)
    G_zbar = exp(+i t)/2 * (G_r + (i/r) G_t)
    mu     = G_zbar / G_z
"""

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    DegenerateDerivativeError,
    InfiniteDistortionError,
    InsufficientRegularityError,
    InvalidInputError,
    InvalidParameterError,
    NotBilipschitzError,
    ParseError,
)

TWO_PI = 2 * np.pi
SMOOTH_TAIL = 1e-9


def _is_pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


def _spectral_derivative(p, order):
    n = p.size
    k = np.fft.fftfreq(n, d=1.0 / n)
    c = np.fft.fft(p)
    if order % 2 == 1:
        c[n // 2] = 0
    return np.real(np.fft.ifft(c * (1j * k) ** order))


def _tail_ratio(p):
    c = np.abs(np.fft.rfft(p - p.mean()))
    if c.max() == 0:
        return 0.0
    return float(c[-max(1, c.size // 8) :].max() / c.max())


def _trig_eval(p, theta):
    """Evaluate the trigonometric interpolant of periodic samples p at theta."""
    n = p.size
    c = np.fft.rfft(p) / n
    if n % 2 == 0:
        c[-1] *= 0.5
    k = np.arange(c.size)
    theta = np.asarray(theta, dtype=float)
    u, inv = np.unique(theta.ravel() % TWO_PI, return_inverse=True)
    out = np.empty(u.size)
    for s in range(0, u.size, 2048):
        e = np.exp(1j * np.outer(u[s : s + 2048], k))
        out[s : s + 2048] = 2 * np.real(e @ c) - np.real(c[0])
    return out[inv].reshape(theta.shape)


class CircleMap:
    """Lift f of a degree-one circle homeomorphism, sampled at N uniform angles.

    Samples live at theta_j = 2 pi j / N.  Derivatives not supplied are
    obtained by spectral differentiation of the periodic part f(t) - t when
    its spectrum decays, and by periodic central differences otherwise.  In
    the second case f'' is not available.

    Optional callables ``func``, ``dfunc``, ``d2func`` give exact values off
    the sample grid.  Without them, off-grid values come from trigonometric
    interpolation of the samples, or linear interpolation for rough maps.
    """

    def __init__(self, f, fprime=None, fsecond=None, func=None, dfunc=None, d2func=None,
                 name="samples", normalized=False):
        f = np.asarray(f, dtype=float).ravel()
        n = f.size
        if not _is_pow2(n) or n < 256:
            raise InvalidInputError(f"sample count must be a power of two >= 256, got {n}")
        self.n = n
        self.theta = TWO_PI * np.arange(n) / n
        self.f = f
        self.name = name
        self.normalized = normalized
        self._func, self._dfunc, self._d2func = func, dfunc, d2func
        self.periodic = f - self.theta
        self.smooth = _tail_ratio(self.periodic) < SMOOTH_TAIL

        if fprime is None:
            if self.smooth:
                fprime = 1 + _spectral_derivative(self.periodic, 1)
            else:
                ext = np.concatenate([[f[-1] - TWO_PI], f, [f[0] + TWO_PI]])
                fprime = (ext[2:] - ext[:-2]) / (2 * TWO_PI / n)
        self.fprime = np.asarray(fprime, dtype=float).ravel()
        if fsecond is None and self.smooth:
            fsecond = _spectral_derivative(self.periodic, 2)
        self.fsecond = None if fsecond is None else np.asarray(fsecond, dtype=float).ravel()

        steps = np.diff(np.concatenate([f, [f[0] + TWO_PI]]))
        if np.any(steps <= 0):
            raise NotBilipschitzError("samples are not strictly increasing over one turn")

    def __repr__(self):
        return f"CircleMap({self.name}, n={self.n})"

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_function(cls, func, dfunc=None, d2func=None, n=1024, name="function"):
        theta = TWO_PI * np.arange(n) / n
        return cls(
            func(theta),
            None if dfunc is None else dfunc(theta),
            None if d2func is None else d2func(theta),
            func=func, dfunc=dfunc, d2func=d2func, name=name,
        )

    @classmethod
    def identity(cls, n=1024):
        return cls.from_function(
            lambda t: np.asarray(t, float),
            lambda t: np.ones_like(np.asarray(t, float)),
            lambda t: np.zeros_like(np.asarray(t, float)),
            n=n, name="identity",
        )

    @classmethod
    def sine(cls, c, n=1024):
        """f(t) = t + c sin t, a diffeomorphism for |c| < 1."""
        if not abs(c) < 1:
            raise NotBilipschitzError("t + c sin t is a homeomorphism only for |c| < 1")
        return cls.from_function(
            lambda t: t + c * np.sin(t),
            lambda t: 1 + c * np.cos(t),
            lambda t: -c * np.sin(t),
            n=n, name=f"sine:{c:g}",
        )

    @classmethod
    def mobius(cls, c, n=1024):
        """Boundary values of the disk automorphism phi_c(z) = (z + c)/(1 + conj(c) z)."""
        c = complex(c)
        if abs(c) >= 1:
            raise InvalidParameterError("need |c| < 1")
        s = 1 - abs(c) ** 2
        e = lambda t: np.exp(1j * np.asarray(t, float))

        def func(t):
            # phi_c(e^{it}) e^{-it} = (1 + c e^{-it}) / conj(1 + c e^{-it}), whose
            # argument is continuous because Re(1 + c e^{-it}) > 0
            t = np.asarray(t, float)
            return t + 2 * np.angle(1 + c * np.exp(-1j * t))

        def dfunc(t):
            return s / np.abs(1 + np.conj(c) * e(t)) ** 2

        def d2func(t):
            d = np.abs(1 + np.conj(c) * e(t)) ** 2
            return 2 * s * np.imag(np.conj(c) * e(t)) / d**2

        return cls.from_function(func, dfunc, d2func, n=n, name=f"mobius:{c.real:g}")

    @classmethod
    def from_samples(cls, theta, values, n=1024, name="csv"):
        """Resample scattered (theta, f(theta)) data onto n uniform angles."""
        theta = np.asarray(theta, float)
        values = np.asarray(values, float)
        if theta.size < 4:
            raise InvalidInputError("need at least four samples")
        order = np.argsort(theta)
        theta, values = theta[order], values[order]
        uniform = TWO_PI * np.arange(theta.size) / theta.size
        if _is_pow2(theta.size) and theta.size >= 256 and np.allclose(theta, uniform, atol=1e-12):
            return cls(values, name=name)
        if theta[-1] - theta[0] >= TWO_PI:
            raise InvalidInputError("sample angles must span less than one full turn")
        per = values - theta
        x = np.concatenate([theta, [theta[0] + TWO_PI]])
        y = np.concatenate([per, [per[0]]])
        spline = CubicSpline(x, y, bc_type="periodic")
        grid = TWO_PI * np.arange(n) / n
        shifted = theta[0] + (grid - theta[0]) % TWO_PI
        return cls(grid + spline(shifted), name=name)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, theta):
        if self._func is not None:
            return self._func(theta)
        theta = np.asarray(theta, float)
        wraps = np.floor(theta / TWO_PI)
        if self.smooth:
            return theta + _trig_eval(self.periodic, theta)
        x = np.concatenate([self.theta, [TWO_PI]])
        y = np.concatenate([self.periodic, [self.periodic[0]]])
        return theta + np.interp(theta - wraps * TWO_PI, x, y)

    def derivative(self, theta, order=1):
        if order == 1:
            if self._dfunc is not None:
                return self._dfunc(theta)
            data = self.fprime
        elif order == 2:
            if self._d2func is not None:
                return self._d2func(theta)
            data = self.require_second()
        else:
            raise InvalidParameterError("only first and second derivatives are available")
        if self.smooth:
            return _trig_eval(data, theta)
        x = np.concatenate([self.theta, [TWO_PI]])
        return np.interp(np.asarray(theta, float) % TWO_PI, x, np.concatenate([data, [data[0]]]))

    def require_second(self):
        if self.fsecond is None:
            raise InsufficientRegularityError(
                f"{self.name}: no second-derivative data (samples are not smooth enough)"
            )
        return self.fsecond

    @property
    def ell(self):
        return float(self.fprime.min())

    @property
    def L(self):
        return float(self.fprime.max())

    def normalize(self):
        """Rotate the image so that f(0) = 0."""
        shift = self.f[0]
        fn = None if self._func is None else (lambda t, g=self._func: g(t) - shift)
        out = CircleMap(self.f - shift, self.fprime, self.fsecond, fn, self._dfunc, self._d2func,
                        name=self.name, normalized=True)
        return out

    def boundary_values(self, theta=None):
        t = self.theta if theta is None else theta
        return np.exp(1j * self(t))


def circle_map_from_csv(text):
    """Parse CSV text with rows theta,f(theta).  A non-numeric first row is a header."""
    reader = csv.reader(io.StringIO(text))
    th, fv = [], []
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) < 2:
            raise ParseError("expected two columns theta,f", lineno)
        try:
            a, b = float(row[0]), float(row[1])
        except ValueError:
            if lineno == 1:
                continue
            raise ParseError(f"non-numeric value in {row!r}", lineno) from None
        th.append(a)
        fv.append(b)
    if len(th) < 4:
        raise ParseError("need at least four data rows")
    return CircleMap.from_samples(th, fv)


def builtin_circle_map(spec, n=1024):
    """identity | sine:c | mobius:c"""
    name, _, arg = spec.partition(":")
    if name == "identity":
        return CircleMap.identity(n)
    try:
        val = float(arg)
    except ValueError:
        raise InvalidInputError(f"map spec {spec!r} needs a numeric parameter") from None
    if name == "sine":
        return CircleMap.sine(val, n)
    if name == "mobius":
        return CircleMap.mobius(val, n)
    raise InvalidInputError(f"unknown map {name!r}")


# ---------------------------------------------------------------------------


class DiskMap:
    """A self-map of the closed disk given by a polar evaluator.

    ``mu`` (optional) is the exact Beltrami coefficient as a function of
    (r, theta).  ``rmin``/``rmax`` delimit where the evaluator may be
    called.  Glued maps carry ``pieces``, a list of (selector, DiskMap).
    ``local`` then returns the piece owning a point, which lets finite
    differences stay on one side of a seam.
    """

    def __init__(self, evaluator, tag, circle_map=None, mu=None, bound=None,
                 rmin=0.0, rmax=1.0, pieces=None):
        self._eval = evaluator
        self.tag = tag
        self.circle_map = circle_map
        self.mu = mu
        self.bound = bound
        self.rmin = rmin
        self.rmax = rmax
        self.pieces = pieces

    def __repr__(self):
        return f"DiskMap({self.tag})"

    def polar(self, r, theta):
        r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
        return self._eval(r, theta)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.polar(np.abs(z), np.angle(z))

    def owner(self, r, theta):
        """Index of the piece owning each point (all zeros for an unglued map)."""
        r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
        out = np.zeros(r.shape, dtype=int)
        if self.pieces:
            for i, (sel, _) in enumerate(self.pieces):
                out[(out == 0) & sel(r, theta)] = i + 1
        return out

    def local(self, index):
        return self if index == 0 else self.pieces[index - 1][1]


def radial_extend(f):
    """G(r e^{it}) = r e^{i f(t)}, with mu = e^{2it} (1 - f')/(1 + f').

    The distortion bound max(1/ell, L) uses the extreme derivative samples.
    """
    if np.any(f.fprime <= 0):
        j = int(np.argmin(f.fprime))
        raise NotBilipschitzError(f"f' = {f.fprime[j]:.3g} <= 0 at theta = {f.theta[j]:.6f}")

    def ev(r, t):
        return r * np.exp(1j * f(t))

    def mu(r, t):
        d = f.derivative(t)
        return np.exp(2j * t) * (1 - d) / (1 + d) * np.ones_like(r)

    return DiskMap(ev, "radial", f, mu, max(1 / f.ell, f.L))


def small_distortion(K):
    """(K + 1/K) / 2."""
    K = np.asarray(K, dtype=float)
    if np.any(K < 1 - 1e-12):
        raise InvalidParameterError("distortion must be >= 1")
    out = 0.5 * (K + 1 / K)
    return out[()] if out.ndim == 0 else out


def power_extend(f):
    """G(r e^{it}) = r^{f'(t)} e^{i f(t)}.  Needs f''.

    mu = e^{2it} (i f'' log r) / (2 f' - i f'' log r), so
    |mu| = (1 + (2 f' / (f'' log r))^2)^{-1/2}, which tends to 0 as r -> 1.
    """
    f.require_second()
    if np.any(f.fprime <= 0):
        raise NotBilipschitzError("power extension needs f' > 0")

    def ev(r, t):
        with np.errstate(divide="ignore"):
            return np.where(r > 0, r ** f.derivative(t) * np.exp(1j * f(t)), 0j)

    def mu(r, t):
        d1 = f.derivative(t)
        d2 = f.derivative(t, 2)
        lr = np.log(r)
        return np.exp(2j * t) * (1j * d2 * lr) / (2 * d1 - 1j * d2 * lr)

    return DiskMap(ev, "power", f, mu, None)


def power_abs_mu(f, r, theta):
    """|mu| of the power extension from the displayed closed form."""
    d1 = f.derivative(theta)
    d2 = f.derivative(theta, 2)
    lr = np.log(r)
    with np.errstate(divide="ignore"):
        return 1 / np.sqrt(1 + (2 * d1 / (d2 * lr)) ** 2)


def power_map(alpha):
    """f_alpha(z) = z |z|^(alpha - 1); constant distortion alpha, identity on the circle."""
    if alpha < 1:
        raise InvalidParameterError("power map needs alpha >= 1")
    k = (alpha - 1) / (alpha + 1)

    def ev(r, t):
        return r**alpha * np.exp(1j * t)

    def mu(r, t):
        return k * np.exp(2j * t) * np.ones_like(r)

    return DiskMap(ev, "power-of-modulus", CircleMap.identity(), mu, float(alpha))


def compose(F, G, tag="composed"):
    """F after G."""

    def ev(r, t):
        w = G.polar(r, t)
        return F.polar(np.abs(w), np.angle(w))

    return DiskMap(ev, tag, None, None, None)


# ---------------------------------------------------------------------------


@dataclass
class PolarGrid:
    """Tensor grid of radii and angles.

    By default the angles cover the full circle periodically.  Passing
    ``tmin``/``tmax`` gives an inclusive angular sector instead.
    """

    rmin: float = 0.2
    rmax: float = 0.9
    nr: int = 256
    ntheta: int = 256
    tmin: float = None
    tmax: float = None

    def __post_init__(self):
        if not 0 <= self.rmin < self.rmax:
            raise InvalidParameterError("need 0 <= rmin < rmax")
        if self.nr < 2 or self.ntheta < 8:
            raise InvalidParameterError("grid too small")
        if (self.tmin is None) != (self.tmax is None):
            raise InvalidParameterError("give both tmin and tmax, or neither")
        if self.tmin is not None and not self.tmin < self.tmax:
            raise InvalidParameterError("need tmin < tmax")

    @property
    def radii(self):
        return np.linspace(self.rmin, self.rmax, self.nr)

    @property
    def thetas(self):
        if self.tmin is None:
            return TWO_PI * np.arange(self.ntheta) / self.ntheta
        return np.linspace(self.tmin, self.tmax, self.ntheta)

    @property
    def theta_spacing(self):
        if self.tmin is None:
            return TWO_PI / self.ntheta
        return (self.tmax - self.tmin) / (self.ntheta - 1)

    def mesh(self):
        return np.meshgrid(self.radii, self.thetas, indexing="ij")


@dataclass
class BeltramiField:
    radii: np.ndarray
    thetas: np.ndarray
    mu: np.ndarray

    @property
    def abs(self):
        return np.abs(self.mu)

    def to_csv(self, fh):
        K = distortion_field(self).values
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(["r", "theta", "re_mu", "im_mu", "K"])
        R, T = np.meshgrid(self.radii, self.thetas, indexing="ij")
        for row in zip(R.ravel(), T.ravel(), self.mu.real.ravel(), self.mu.imag.ravel(), K.ravel()):
            w.writerow([repr(float(x)) for x in row])


def exact_beltrami(G, grid):
    """Closed-form Beltrami field of a DiskMap on a polar grid."""
    if G.mu is None:
        raise InvalidInputError(f"{G.tag} map carries no closed-form Beltrami coefficient")
    R, T = grid.mesh()
    return BeltramiField(grid.radii, grid.thetas, np.asarray(G.mu(R, T), dtype=complex))


# first-derivative stencils in units of the step h: 4th order radially,
# 8th order in angle where the grid is periodic and nothing is one-sided
_CENTRAL = (np.array([-2, -1, 1, 2]), np.array([1, -8, 8, -1]) / 12.0)
_CENTRAL8 = (np.array([-4, -3, -2, -1, 1, 2, 3, 4]),
             np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 4 / 5, -1 / 5, 4 / 105, -1 / 280]))
_FORWARD = (np.array([0, 1, 2, 3, 4]), np.array([-25, 48, -36, 16, -3]) / 12.0)


def _radial_stencil(r, h, rmin, rmax):
    """Offsets/weights per node: central unless that leaves [rmin, rmax]."""
    fwd = r - 2 * h < rmin
    bwd = r + 2 * h > rmax
    return fwd, bwd


def numerical_beltrami(G, grid):
    """Finite-difference Beltrami coefficient G_zbar / G_z on a polar grid.

    Derivatives use central stencils with step half the node spacing,
    eighth order in angle and fourth order in radius.  Radial stencils switch
    to one-sided ones where a central stencil would leave the map's domain.
    Glued maps are differenced inside the piece that owns each node.
    """
    R, T = grid.mesh()
    hr = 0.5 * (grid.rmax - grid.rmin) / max(grid.nr - 1, 1)
    ht = 0.5 * grid.theta_spacing
    owner = G.owner(R, T)
    Gr = np.empty(R.shape, complex)
    Gt = np.empty(R.shape, complex)
    for idx in np.unique(owner):
        piece = G.local(int(idx))
        sel = owner == idx
        r, t = R[sel], T[sel]
        off, w = _CENTRAL8
        Gt[sel] = sum(wk * piece.polar(r, t + o * ht) for o, wk in zip(off, w)) / ht
        off, w = _CENTRAL
        fwd, bwd = _radial_stencil(r, hr, G.rmin, G.rmax)
        cen = ~(fwd | bwd)
        val = np.empty(r.shape, complex)
        if cen.any():
            val[cen] = sum(wk * piece.polar(r[cen] + o * hr, t[cen]) for o, wk in zip(off, w)) / hr
        o5, w5 = _FORWARD
        if fwd.any():
            val[fwd] = sum(wk * piece.polar(r[fwd] + o * hr, t[fwd]) for o, wk in zip(o5, w5)) / hr
        if bwd.any():
            val[bwd] = -sum(wk * piece.polar(r[bwd] - o * hr, t[bwd]) for o, wk in zip(o5, w5)) / hr
        Gr[sel] = val
    e = np.exp(1j * T)
    gz = 0.5 / e * (Gr - 1j / R * Gt)
    gzb = 0.5 * e * (Gr + 1j / R * Gt)
    scale = np.maximum(np.abs(Gr), np.abs(Gt) / R)
    bad = np.abs(gz) < 1e-10 * np.maximum(scale, 1.0)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        loc = complex(R[i, j] * e[i, j])
        raise DegenerateDerivativeError(f"|G_z| below 1e-10 at z = {loc:.6g}", location=loc)
    mu = gzb / gz
    over = np.abs(mu) >= 1
    if over.any():
        i, j = np.argwhere(over)[0]
        loc = complex(R[i, j] * e[i, j])
        raise InfiniteDistortionError(f"|mu| = {abs(mu[i, j]):.6g} >= 1 at z = {loc:.6g}",
                                      location=loc)
    return BeltramiField(grid.radii, grid.thetas, mu)


@dataclass
class DistortionField:
    values: np.ndarray
    sup: float
    argmax: complex


def distortion_field(field):
    """Pointwise K = (1 + |mu|)/(1 - |mu|) and its supremum over the nodes."""
    a = field.abs
    over = a >= 1
    R, T = np.meshgrid(field.radii, field.thetas, indexing="ij")
    if over.any():
        i, j = np.argwhere(over)[0]
        loc = complex(R[i, j] * np.exp(1j * T[i, j]))
        raise InfiniteDistortionError(f"|mu| >= 1 at z = {loc:.6g}", location=loc)
    K = (1 + a) / (1 - a)
    i, j = np.unravel_index(np.argmax(K), K.shape)
    return DistortionField(K, float(K[i, j]), complex(R[i, j] * np.exp(1j * T[i, j])))
