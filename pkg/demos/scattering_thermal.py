"""Scattering network, its Kraus kernel and the thermal seed it produces.

Run: python demos/scattering_thermal.py
"""

import numpy as np

from povm_forge.contvar import (
    Grid1D,
    check_kernel_covariance,
    gaussian_fidelity_to_ground,
    gaussian_wavefn,
    k00_positivity,
    mu_consistency,
    mu_operator,
    scattering_compose,
    thermal_params,
    thermal_state,
    trace_distance,
)

net = scattering_compose()
print("composite coordinate map A =\n", net.composite.array.astype(int))

grid = Grid1D(16.0, 256)
for s1, s2 in [(2.0, 1.0), (4.0, 1.0), (1.0, 1.0)]:
    a, b = gaussian_wavefn(s1, grid), gaussian_wavefn(s2, grid)
    p = thermal_params(s1, s2)
    pos = k00_positivity(a, b, s1, s2)
    print(f"\nsigma1={s1}, sigma2={s2}: m_omega={p.m_omega:.4f}, N={p.N:.4f}, "
          f"K00 min eigenvalue {pos.details['min_eigenvalue']:.2e}")
    print("  ", check_kernel_covariance(a, b, [(0.4, -0.6), (-1.0, 0.3)]).line())
    rep = mu_consistency(a, b, s1, s2)
    print("  ", rep.line(), f"purity={rep.details['purity']:.4f}")
    if p.positivity_regime:
        mu = mu_operator(a, b)
        mu = mu / np.trace(mu).real
        if p.N == 0:
            print("   fidelity with oscillator ground state:", gaussian_fidelity_to_ground(mu, p.m_omega, grid))
        else:
            rho = thermal_state(p, 40, grid)
            print("   trace distance to the thermal state:", trace_distance(mu, rho.matrix))
    else:
        print("   sigma1 < 2 sigma2: K00 is not positive, so it is not a square root of mu")
