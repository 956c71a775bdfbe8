"""Ring moduli on a grid against closed forms.

Run:  python3 demos/modulus_calibration.py
"""

import numpy as np

from qcext import RingDomain, ring_modulus
from qcext.special import grotzsch_modulus

# round annulus: mod = log(R/r)
for r in (0.1, 0.3, 0.5):
    est = ring_modulus(RingDomain.annulus(r), grid_n=256)
    print(f"annulus r={r}:  {est.value:.6f}  exact {np.log(1 / r):.6f}  err bar {est.error:.1e}")

# disk minus the slit [0, r]: Grotzsch's modulus
for r in (0.2, 0.5):
    est = ring_modulus(RingDomain.grotzsch(r), grid_n=256)
    print(f"slit r={r}:     {est.value:.6f}  exact {grotzsch_modulus(r):.6f}")

# the grid size matters, so look at the convergence
dom = RingDomain.annulus(0.3)
for n in (64, 128, 256, 512):
    v = ring_modulus(dom, grid_n=n, refine=False).value
    print(n, v, abs(v - np.log(1 / 0.3)))
