"""Heisenberg-Weyl covariant POVM on a qudit and its three-wire circuit.

Run: python demos/heisenberg_weyl_qudit.py
"""

import numpy as np

from povm_forge.circuits import QuditRegister, appendix_hw_verify, gamma_state, hw_circuit, hw_kraus_from_circuit, run_measurement
from povm_forge.povm import KrausFamily, check_minimal_disturbance, check_symmetry, hw_action, hw_povm, random_seed_operator

rng = np.random.default_rng(1)
d = 3
mu = random_seed_operator(d, rng)
povm = hw_povm(d, mu)
print(f"{len(povm)} elements Z^k X^j mu X^-j Z^-k from a seed of trace 1/{d}")
print(check_symmetry(povm, hw_action(d)).line())

# ancilla pair prepared in |gamma>, then CX^dag, F^dag, CX^dag, CZ, F^dag, F^dag
fam = KrausFamily(tuple(hw_kraus_from_circuit(d, mu)))
print(check_minimal_disturbance(fam, povm).line())
print(appendix_hw_verify(d, mu).line())

psi = rng.normal(size=d) + 1j * rng.normal(size=d)
psi /= np.linalg.norm(psi)
circuit = hw_circuit(d)
res = run_measurement(circuit, QuditRegister(circuit.dims, np.kron(gamma_state(mu, d).amplitudes, psi)))
born = povm.probabilities(psi)
for lab, p, q in zip(res.labels, res.probabilities, born):
    print(f"  outcome {lab}: circuit {p:.6f}  <psi|Pi|psi> {q:.6f}")
