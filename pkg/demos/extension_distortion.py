"""Extend a circle map into the disk and compare the distortion with its bounds.

Run:  python3 demos/extension_distortion.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from qcext import (CircleMap, PolarGrid, distortion_field, exact_beltrami,
                   numerical_beltrami, power_extend, radial_extend, thmLf_bound)
from qcext.bounds import thmLf_inputs
from qcext.svg import heatmap_svg

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)

f = CircleMap.sine(0.1, 1024)  # t -> t + 0.1 sin t
print(f.name, "min f' =", f.fprime.min(), "max f' =", f.fprime.max())

grid = PolarGrid(0.05, 0.95, 128, 256)

# radial extension: K is known in closed form, the grid gives a check
R = radial_extend(f)
K_exact = distortion_field(exact_beltrami(R, grid))
K_fd = distortion_field(numerical_beltrami(R, grid))
print("radial: sup K exact =", K_exact.sup, " by differences =", K_fd.sup)

# the power extension smooths things out near the boundary
P = power_extend(f)
K_pow = distortion_field(numerical_beltrami(P, grid))
print("power:  sup K =", K_pow.sup)

max_ratio, min_fp = thmLf_inputs(f)
print("bound from f''/f' =", thmLf_bound(max_ratio, min_fp))

svg = heatmap_svg(grid.radii, grid.thetas, K_pow.values, "K of the power extension")
(out / "power_K.svg").write_text(svg)
print("wrote", out / "power_K.svg")
