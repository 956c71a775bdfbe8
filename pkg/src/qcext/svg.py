"""Minimal SVG writers for curves, level-curve families and polar heat maps."""

from xml.sax.saxutils import escape

import numpy as np

SIZE = 480


def _xy(z, scale=SIZE / 2.2):
    z = np.asarray(z, dtype=complex)
    return SIZE / 2 + scale * z.real, SIZE / 2 - scale * z.imag


def _polyline(z, stroke, width=1.0, closed=True, step=1):
    z = np.asarray(z, dtype=complex)[::step]
    if closed:
        z = np.concatenate([z, z[:1]])
    x, y = _xy(z)
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(x, y))
    return f'<polyline points="{pts}" fill="none" stroke="{stroke}" stroke-width="{width}"/>'


def _doc(body, title):
    return (
        f'<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">\n<title>{escape(title)}</title>\n'
        + "\n".join(body)
        + "\n</svg>\n"
    )


def _unit_circle():
    return _polyline(np.exp(2j * np.pi * np.arange(256) / 256), "#888888", 0.8)


def curve_svg(curve, center=None, ell=None, L=None, title="curve"):
    """The curve, the unit circle, and the enclosing hyperbolic annulus about center."""
    body = [_unit_circle()]
    v = curve.vertices
    body.append(_polyline(v, "#1f4e99", 1.4, step=max(1, v.size // 1024)))
    if center is not None:
        t = np.exp(2j * np.pi * np.arange(256) / 256)
        for rad, col in ((ell, "#cc5500"), (L, "#cc5500")):
            if rad is not None:
                w = rad * t
                body.append(_polyline((w + center) / (1 + np.conj(center) * w), col, 0.9))
        x, y = _xy(center)
        body.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="#cc5500"/>')
    return _doc(body, title)


def curves_svg(curves, title="level curves"):
    body = [_unit_circle()]
    for c in curves:
        v = c.vertices if hasattr(c, "vertices") else np.asarray(c)
        body.append(_polyline(v, "#1f4e99", 1.0, step=max(1, v.size // 512)))
    return _doc(body, title)


def _color(x):
    """Map x in [0, 1] to a blue-to-red hex color."""
    x = float(np.clip(x, 0, 1))
    r = int(255 * x)
    b = int(255 * (1 - x))
    g = int(120 * (1 - abs(2 * x - 1)))
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap_svg(radii, thetas, values, title="distortion", max_cells=(48, 96)):
    """Polar heat map of a field on a (radius, angle) grid, downsampled to stay small."""
    values = np.asarray(values, float)
    sr = max(1, int(np.ceil(len(radii) / max_cells[0])))
    st = max(1, int(np.ceil(len(thetas) / max_cells[1])))
    R = np.asarray(radii)[::sr]
    T = np.asarray(thetas)[::st]
    V = values[::sr, ::st]
    lo, hi = float(np.min(V)), float(np.max(V))
    span = hi - lo if hi > lo else 1.0
    dr = (R[1] - R[0]) if R.size > 1 else 0.05
    dt = (T[1] - T[0]) if T.size > 1 else 2 * np.pi
    body = [_unit_circle()]
    for i, r in enumerate(R):
        for j, t in enumerate(T):
            r0, r1 = max(r - dr / 2, 0), r + dr / 2
            t0, t1 = t - dt / 2, t + dt / 2
            corners = np.array([r0 * np.exp(1j * t0), r1 * np.exp(1j * t0),
                                r1 * np.exp(1j * t1), r0 * np.exp(1j * t1)])
            x, y = _xy(corners)
            pts = " ".join(f"{a:.1f},{b:.1f}" for a, b in zip(x, y))
            body.append(f'<polygon points="{pts}" fill="{_color((V[i, j] - lo) / span)}"/>')
    body.append(
        f'<text x="8" y="{SIZE - 10}" font-size="12" font-family="sans-serif">'
        f"{escape(title)}: min {lo:.4g}, max {hi:.4g}</text>"
    )
    return _doc(body, title)
