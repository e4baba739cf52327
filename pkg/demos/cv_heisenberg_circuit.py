"""Continuous Heisenberg-Weyl measurement on a position grid.

Three wires carry alpha, conj(alpha) and the input; after the gate sequence
the first two wires are read out as (t, s).  The conditional output is
compared with the direct quadrature of the closed-form Kraus action.

Run: python demos/cv_heisenberg_circuit.py   (about ten seconds)
"""

import numpy as np

from povm_forge.contvar import Grid1D, check_circuit_vs_oracle, completeness_sum, gaussian_wavefn, infhw_lattice, outcome_lattice, random_smooth_wavefn

grid = Grid1D(10.0, 256)
alpha = gaussian_wavefn(1.0, grid)
psi = random_smooth_wavefn(grid, np.random.default_rng(0))
lattice = outcome_lattice(2.0, 5)

print(check_circuit_vs_oracle(alpha, psi, lattice).line())
states = infhw_lattice(alpha, psi, lattice)
print("conditional weights ||Psi_ts||^2 on the lattice (rows t, columns s):")
w = np.array([s.norm**2 for s in states]).reshape(5, 5)
for t, row in zip(np.linspace(-2, 2, 5), w):
    print(f"  t={t:+.1f} " + " ".join(f"{v:.4f}" for v in row))
print("sum over every grid outcome of ||Psi_ts||^2 dx^2:", completeness_sum(alpha, psi))
