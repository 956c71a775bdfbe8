"""Level curves of the elliptic germ and how round they are.

Run:  python3 demos/elliptic_levels.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from qcext import elliptic_germ, roundness
from qcext.sharp_examples import elliptic_roundness
from qcext.svg import curves_svg

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)

a = 0.5
g = elliptic_germ(a)
print(g)  # r0 is fixed by g(1) = 1

# the germ maps the unit circle onto itself
t = np.linspace(0, 2 * np.pi, 9)[:-1]
print("|g(e^it)| =", np.round(np.abs(g(np.exp(1j * t))), 12))

# a few level curves, from close to the slit out to near the circle.
# g is conformal, so the ring outside gamma_r has modulus log(1/r)
radii = [0.6, 0.75, 0.9, 0.99]
curves = [g.level_curve(r, 512) for r in radii]
for r, c in zip(radii, curves):
    rep = roundness(c, mod_gamma=np.log(1 / r))
    print(f"r = {r:5.2f}  nu = {rep.nu:.5f}  ratio of the circles = {rep.annulus_ratio:.5f}")

print("(1 + a^2)/(1 - a^2) =", elliptic_roundness(a))

(out / "elliptic_levels.svg").write_text(curves_svg(curves, f"elliptic germ, a = {a}"))
print("wrote", out / "elliptic_levels.svg")
