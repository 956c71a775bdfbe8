"""Elliptic integrals, Jacobi functions and the classical ring moduli.

Parameter convention: every function taking ``m`` uses the *parameter*
m = k**2, where k is the elliptic modulus.  So K(m) = int_0^{pi/2}
(1 - m sin^2 t)^{-1/2} dt, and sn(u, m) has real quarter period K(m).
"""

import functools

import numpy as np

from .errors import BranchPointError, DivergenceError, InvalidParameterError, RangeError

_AGM_MAXITER = 40


def agm(a, b):
    """Arithmetic-geometric mean of two positive reals (or arrays)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    for _ in range(_AGM_MAXITER):
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        if np.all(np.abs(a - b) <= 1e-16 * np.abs(a)):
            break
    out = 0.5 * (a + b)
    return out[()] if out.ndim == 0 else out


def agm_iterations(a, b, tol=1e-16):
    """Number of AGM steps needed to reach relative agreement tol."""
    n = 0
    while abs(a - b) > tol * abs(a):
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        n += 1
        if n > _AGM_MAXITER:
            break
    return n


def _check_m(m):
    m = np.asarray(m, dtype=float)
    if np.any(m < 0):
        raise InvalidParameterError("elliptic parameter must satisfy m >= 0")
    if np.any(m >= 1):
        raise DivergenceError("K(m) diverges as m -> 1")
    return m


def complete_elliptic_K(m):
    """K(m) = pi / (2 agm(1, sqrt(1 - m)))."""
    m = _check_m(m)
    out = np.pi / (2 * agm(1.0, np.sqrt(1 - m)))
    return out[()] if np.ndim(out) == 0 else out


def complete_elliptic_E(m):
    """E(m) from the AGM sequence: E = K (1 - sum 2^(n-1) c_n^2)."""
    m = _check_m(m)
    a = np.ones_like(m)
    b = np.sqrt(1 - m)
    c2 = m.copy()
    total = 0.5 * c2
    w = 0.5
    for _ in range(_AGM_MAXITER):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        w *= 2
        total = total + w * c * c
        if np.all(np.abs(c) <= 1e-17 * np.abs(a)):
            break
    out = np.pi / (2 * a) * (1 - total)
    return out[()] if np.ndim(out) == 0 else out


def sn_cn_dn(u, m):
    """Jacobi sn, cn, dn for complex u and real 0 <= m < 1 by descending Landen steps."""
    m = float(_check_m(m))
    u = np.asarray(u, dtype=complex)
    return _landen(u, m)


def _landen(u, m):
    if m < 1e-12:
        s, c = np.sin(u), np.cos(u)
        corr = 0.25 * m * (u - s * c)
        return s - corr * c, c + corr * s, 1 - 0.5 * m * s * s
    kp = np.sqrt(1 - m)
    mu = (m / (1 + kp) ** 2) ** 2
    rt = np.sqrt(mu)
    sv, cv, dv = _landen(u / (1 + rt), mu)
    den = 1 + rt * sv * sv
    return (1 + rt) * sv / den, cv * dv / den, (1 - rt * sv * sv) / den


def carlson_rf(x, y, z):
    """Carlson's symmetric integral R_F for complex arguments off the negative axis."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    z = np.asarray(z, dtype=complex)
    x, y, z = np.broadcast_arrays(x, y, z)
    x, y, z = x.copy(), y.copy(), z.copy()
    for _ in range(60):
        A = (x + y + z) / 3
        dev = np.max(np.abs(np.stack([x - A, y - A, z - A])) / np.abs(A), initial=0.0)
        if dev < 1e-3:
            break
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
    A = (x + y + z) / 3
    X = 1 - x / A
    Y = 1 - y / A
    Z = -X - Y
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / np.sqrt(A)


def jacobi_arcsn(z, m, newton_steps=8):
    """Principal inverse of sn(., m).

    The closed upper half-plane maps into the rectangle [-K, K] x [0, K'] and
    the lower half-plane into its mirror image (arcsn(conj z) = conj arcsn z).
    Real points with |z| > 1 take the limit from above.  At the branch points
    the limits K and K + iK' are returned.  The seed is the integral
    z R_F(1 - z^2, 1 - m z^2, 1), polished by damped Newton steps on sn(w) = z.
    """
    m = float(_check_m(m))
    z = np.asarray(z, dtype=complex)
    lower = z.imag < 0
    zu = np.where(lower, np.conj(z), z)
    # signed zeros would put real |z| > 1 on the lower side of the cut
    zu = np.where((zu.imag == 0) & (np.abs(zu.real) > 1), zu + 1e-300j, zu)
    K = complete_elliptic_K(m)
    Kp = complete_elliptic_K(1 - m) if m > 0 else np.inf

    w = zu * carlson_rf(1 - zu * zu, 1 - m * zu * zu, 1.0)
    with np.errstate(all="ignore"):
        for _ in range(newton_steps):
            s, c, d = _landen(w, m)
            res = s - zu
            deriv = c * d
            ok = np.abs(deriv) > 1e-14
            step = np.where(ok, res / np.where(ok, deriv, 1), 0)
            w_new = w - step
            s_new = _landen(w_new, m)[0]
            better = np.abs(s_new - zu) <= np.abs(res)
            w = np.where(better & np.isfinite(w_new), w_new, w)

    # branch points: exact limits
    x = zu.real
    at_one = (np.abs(np.abs(zu) - 1) < 1e-15) & (np.abs(zu.imag) < 1e-15)
    w = np.where(at_one, np.sign(x) * K, w)
    if m > 0:
        inv_k = 1 / np.sqrt(m)
        at_k = (np.abs(np.abs(x) - inv_k) < 1e-15 * inv_k) & (np.abs(zu.imag) < 1e-15)
        w = np.where(at_k, np.sign(x) * K + 1j * Kp, w)
    if not np.all(np.isfinite(w)):
        raise BranchPointError("arcsn did not converge; argument is at a pole or branch point")
    w = np.where(lower, np.conj(w), w)
    return w[()] if w.ndim == 0 else w


def grotzsch_modulus(r):
    """Modulus of the Groetzsch ring D \\ [0, r]: mu(r) = (pi/2) K(1 - r^2) / K(r^2).

    Evaluated as (pi/2) agm(1, r') / agm(1, r), which stays accurate for r near 0 or 1.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0) or np.any(r >= 1):
        raise InvalidParameterError("Groetzsch modulus needs 0 < r < 1")
    rp = np.sqrt((1 - r) * (1 + r))
    if np.any(rp == 0) or np.any(r < 1e-300):
        raise RangeError("Groetzsch modulus out of floating-point range")
    out = 0.5 * np.pi * agm(1.0, rp) / agm(1.0, r)
    return out[()] if out.ndim == 0 else out


def teichmuller_modulus(t):
    """Modulus of the Teichmueller ring C \\ ([-1, 0] u [t, inf)), m_T(t) = 2 mu(1/sqrt(1+t))."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise InvalidParameterError("Teichmueller modulus needs t > 0")
    out = 2 * grotzsch_modulus(1 / np.sqrt(1 + t))
    return out[()] if out.ndim == 0 else out


@functools.lru_cache(maxsize=1)
def beta0():
    """The ring constant beta_0 = m_T(sqrt 2)."""
    return float(teichmuller_modulus(np.sqrt(2.0)))
