"""Joint position-momentum read-out and its uncertainty product.

Outcome variances are those of the input plus those of the seed state, so
the product of the spreads is at least 1 and equals 1 for a Gaussian input
matched to a pure seed.

Run: python demos/uncertainty.py
"""

import math

from povm_forge.contvar import Grid1D, gaussian_wavefn, thermal_params
from povm_forge.contvar.statistics import outcome_statistics

grid = Grid1D(16.0, 512)
for s1, s2, label in [(2.0, 1.0, "matched"), (2.0, 1.0, None), (4.0, 1.0, "matched"), (1.0, 0.25, None)]:
    p = thermal_params(s1, s2)
    width = 1 / math.sqrt(p.m_omega) if label else 1.0
    st = outcome_statistics(gaussian_wavefn(s1, grid), gaussian_wavefn(s2, grid), gaussian_wavefn(width, grid), s1, s2)
    print(f"sigma1={s1} sigma2={s2} psi width {width:.3f}: "
          f"dx={st.delta_x:.4f} dp={st.delta_p:.4f} product={st.product:.4f} (seed N={p.N:.3f})")
