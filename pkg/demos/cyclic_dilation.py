"""Cyclic qubit POVM: build it, dilate it, and measure it with a qubit circuit.

Run: python demos/cyclic_dilation.py
"""

import numpy as np

from povm_forge import matcore as mc
from povm_forge.circuits import (
    QuditRegister,
    cyclic_gate_circuit,
    cyclic_unitary,
    dense_unitary,
    expand_fourier,
    gate_count,
    run_measurement,
)
from povm_forge.povm import check_minimal_disturbance, check_symmetry, cyclic_action, cyclic_povm, kraus_operators

n = 8
povm = cyclic_povm(n)
print(f"{n} rank-one elements on C^2, each with eigenvalue 2/n = {2 / n}")
print("covariant under R_n:", check_symmetry(povm, cyclic_action(n)).line())

# the coupling unitary acts on ancilla (x) system; its Kraus blocks are sqrt(Pi_j)
u = cyclic_unitary(n)
kraus = kraus_operators(u, np.eye(n)[0], 2, n)
print(check_minimal_disturbance(kraus, povm).line())

# for n = 2^m the same unitary is a circuit of qubit gates
m = 3
circuit = cyclic_gate_circuit(m)
print("gate circuit equals the dense unitary:", np.abs(dense_unitary(circuit) - u).max())
for k in range(1, 7):
    print(f"  m={k}: {gate_count(expand_fourier(cyclic_gate_circuit(k)))} elementary gates")

psi = np.array([np.cos(0.3), np.exp(0.7j) * np.sin(0.3)])
reg = QuditRegister((2,) * m, np.eye(n)[0]).kron(QuditRegister((2,), psi))
res = run_measurement(circuit, reg, seed=7, shots=20000)
print("outcome  exact p   sampled freq")
for j, (p, c) in enumerate(zip(res.probabilities, res.counts)):
    print(f"  {j}      {p:.4f}    {c / 20000:.4f}")
print("Born rule residual:", np.abs(res.probabilities - povm.probabilities(psi)).max())
print("unitarity:", mc.assert_unitary(u).line())
