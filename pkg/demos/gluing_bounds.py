"""Patch an extension inside a separating annulus and check the bound.

Run:  python3 demos/gluing_bounds.py
"""

import math

from qcext import (RingDomain, glue_extension, measured_distortion, power_map,
                   power_patch, sepinmod_bound, thm2_bound, beta0)

print("beta0 =", beta0())

f = power_map(2.0)  # K = 2 everywhere
ring = RingDomain.annulus(0.3, 0.9)
patch = power_patch(3.0, 0.9, 0.9**2.0)  # agrees with f on |z| = 0.9
G = glue_extension(f, [(ring, patch)])
print("seam jump:", G.report["max_jump"])
print("seams:", G.report["seams"])

K = measured_distortion(G)
print("measured sup K =", K, " bound =", sepinmod_bound(2.0, math.log(3)))

# the bound for a germ of modulus m, with K_g = 1
for m in (0.5, 1, 2, 5, 10, 50):
    print(f"m = {m:5}  bound = {thm2_bound(1.0, m):.4f}")
