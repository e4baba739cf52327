"""Beam-splitter realisation of a Heisenberg-Weyl covariant measurement.

Run: python demos/optics_scheme.py
"""

import numpy as np

from povm_forge.contvar import Grid1D, check_optics, gaussian_wavefn, optics_lattice, random_smooth_wavefn

grid = Grid1D(10.0, 256)
alpha, beta = gaussian_wavefn(1.0, grid), gaussian_wavefn(1.5, grid)
psi = random_smooth_wavefn(grid, np.random.default_rng(3))
pts = [(x, y) for x in (-1.0, 0.0, 1.0) for y in (-1.0, 0.0, 1.0)]
print(check_optics(alpha, beta, psi, pts).line())

# with psi = alpha = beta the conditional norm peaks at the zero read-out
norms = [s.norm for s in optics_lattice(alpha, alpha, alpha, pts)]
for (x, y), v in zip(pts, norms):
    print(f"  (x, y) = ({x:+.0f}, {y:+.0f}): ||output|| = {v:.5f}")
