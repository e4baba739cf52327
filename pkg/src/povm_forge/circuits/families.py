"""Dilation unitaries and circuits for the cyclic and Heisenberg-Weyl POVMs."""

from __future__ import annotations

import numpy as np

from .. import matcore as mc
from ..errors import InvalidParameterError, ResourceError
from ..povm import hw_conjugator, validate_seed
from ..report import CheckReport
from . import gates as G
from .simulator import QuditRegister, dense_unitary

APPENDIX_MAX_DIM = 6


# -- cyclic family -----------------------------------------------------------


def interleave_permutation(n: int) -> np.ndarray:
    """Permutation ``K`` with ``K|2j> = |j>`` and ``K|2j+1> = |n+j>``."""
    k = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    j = np.arange(n)
    k[j, 2 * j] = 1.0
    k[n + j, 2 * j + 1] = 1.0
    return k


def cyclic_unitary(n: int) -> np.ndarray:
    """``U = (F_n^dag (x) I_2) X_2n^dag (I_n (x) F_2) K^dag`` on ``C^n (x) C^2``."""
    if n < 2:
        raise InvalidParameterError(f"cyclic dilation needs n >= 2, got {n}")
    return (
        mc.kron(mc.fourier(n, -1), np.eye(2))
        @ mc.shift(2 * n, -1)
        @ mc.kron(np.eye(n), mc.fourier(2))
        @ interleave_permutation(n).conj().T
    )


def cyclic_dense_circuit(n: int) -> G.Circuit:
    """Ancilla of dimension ``n`` (wire 0) and system qubit (wire 1), one dense gate."""
    return G.Circuit((n, 2), (G.Gate(G.DENSE_BLOCK, (0, 1), params={"matrix": cyclic_unitary(n)}),), (0,))


def cyclic_gate_circuit(m: int) -> G.Circuit:
    """Qubit circuit for ``n = 2^m``: wires ``0..m-1`` are the ancilla (wire 0 most
    significant), wire ``m`` is the system qubit.

    ``X_2n^dag`` is realised as ``F_2n^dag Z_2n^dag F_2n`` with ``Z_2n^dag`` a
    product of single-qubit ``R_2n^(-2^k)`` gates; ``K^dag`` is a cyclic shift of
    the qubit wires.
    """
    if m < 1:
        raise InvalidParameterError(f"cyclic circuit needs m >= 1, got {m}")
    n = 2**m
    wires = tuple(range(m + 1))
    gates = [
        G.Gate(G.PERMUTATION, wires, params={"order": list(wires[1:]) + [0]}),
        G.Gate(G.FOURIER, (m,)),
        G.Gate(G.FOURIER, wires),
    ]
    for i in wires:
        gates.append(G.Gate(G.RPHASE_POWER, (i,), params={"n": 2 * n, "power": -(2 ** (m - i))}))
    gates.append(G.Gate(G.FOURIER_DAGGER, wires))
    gates.append(G.Gate(G.FOURIER_DAGGER, wires[:m]))
    return G.Circuit((2,) * (m + 1), tuple(gates), tuple(range(m)))


def _controlled_rotation(k: int, sign: int) -> np.ndarray:
    # diag(1, 1, 1, exp(sign * 2 pi i / 2^k)) on two qubits
    return np.diag([1.0, 1.0, 1.0, np.exp(sign * 2j * np.pi / 2**k)]).astype(np.complex128)


def qft_gates(wires, inverse: bool = False) -> list:
    """Textbook decomposition of ``F_N`` (``inverse=False``) or ``F_N^dag`` on qubits.

    With the ``omega = exp(-2 pi i/N)`` convention, ``F_N^dag`` is the usual
    positive-exponent QFT: Hadamards, controlled ``exp(2 pi i/2^k)`` rotations
    and a final bit reversal.  ``F_N`` is that sequence reversed and conjugated.
    """
    wires = tuple(wires)
    q = len(wires)
    std = []
    for i in range(q):
        std.append(("H", (wires[i],), 0))
        for j in range(i + 1, q):
            std.append(("CR", (wires[j], wires[i]), j - i + 1))
    if q > 1:
        std.append(("REV", wires, 0))

    def make(op, ws, k, sign):
        if op == "H":
            return G.Gate(G.FOURIER, ws)
        if op == "CR":
            return G.Gate(G.DENSE_BLOCK, ws, params={"matrix": _controlled_rotation(k, sign)})
        return G.Gate(G.PERMUTATION, ws, params={"order": list(reversed(ws))})

    if inverse:
        return [make(op, ws, k, +1) for op, ws, k in std]
    return [make(op, ws, k, -1) for op, ws, k in reversed(std)]


def expand_fourier(circuit: G.Circuit) -> G.Circuit:
    """Replace multi-qubit Fourier blocks by one- and two-qubit gates."""
    out = []
    for g in circuit.gates:
        multi = len(g.targets) > 1 and all(circuit.dims[t] == 2 for t in g.targets)
        if g.kind == G.FOURIER and multi:
            out.extend(qft_gates(g.targets, inverse=False))
        elif g.kind == G.FOURIER_DAGGER and multi:
            out.extend(qft_gates(g.targets, inverse=True))
        else:
            out.append(g)
    return G.Circuit(circuit.dims, tuple(out), circuit.measured)


# -- Heisenberg-Weyl family --------------------------------------------------


def hw_circuit(d: int) -> G.Circuit:
    """Wires: 0 ancilla-alpha, 1 ancilla-conj(alpha), 2 system; ancillas measured."""
    if d < 2:
        raise InvalidParameterError(f"Heisenberg-Weyl circuit needs d >= 2, got {d}")
    gates = (
        G.Gate(G.CONTROLLED_SHIFT_DAGGER, (1,), (0,)),
        G.Gate(G.FOURIER_DAGGER, (0,)),
        G.Gate(G.CONTROLLED_SHIFT_DAGGER, (2,), (1,)),
        G.Gate(G.CONTROLLED_PHASE, (2,), (0,)),
        G.Gate(G.FOURIER_DAGGER, (0,)),
        G.Gate(G.FOURIER_DAGGER, (1,)),
    )
    return G.Circuit((d, d, d), gates, (0, 1))


def gamma_state(mu, d: int) -> QuditRegister:
    """Ancilla input ``sqrt(d) sum_jk sqrt(mu)_jk |j>|k>``."""
    mu = validate_seed(mu, d)
    return QuditRegister((d, d), np.sqrt(d) * mc.psd_sqrt(mu).reshape(-1))


def _controlled_inverse_shift_matrix(d: int) -> np.ndarray:
    # sum_q |q><q| (x) X^-q
    return mc.direct_sum(*[mc.shift(d, -q) for q in range(d)])


def phi1_state(mu, d: int) -> QuditRegister:
    """``(F^dag (x) I)(sum_q |q><q| (x) X^-q)|gamma>``, the first column block of ``N``."""
    gamma = gamma_state(mu, d).amplitudes
    vec = mc.kron(mc.fourier(d, -1), np.eye(d)) @ _controlled_inverse_shift_matrix(d) @ gamma
    return QuditRegister((d, d), vec)


def hw_kraus_from_circuit(d: int, mu) -> list:
    """Simulate :func:`hw_circuit` on ``|gamma> (x) I`` and slice the ancilla blocks."""
    u = dense_unitary(hw_circuit(d))
    gamma = gamma_state(mu, d).amplitudes
    blocks = u.reshape(d * d, d, d * d, d)
    ops = np.einsum("jxay,a->jxy", blocks, gamma)
    return list(ops)


def appendix_hw_verify(d: int, mu, tol: float = 1e-10) -> CheckReport:
    """Rebuild ``M``, ``A = X_mod Z_div^dag (F (x) F (x) I)`` and ``N = A M`` densely
    and measure every intertwining identity they are supposed to satisfy."""
    if d < 2:
        raise InvalidParameterError(f"d must be >= 2, got {d}")
    if d > APPENDIX_MAX_DIM:
        raise ResourceError(f"dense appendix check limited to d <= {APPENDIX_MAX_DIM}")
    mu = validate_seed(mu, d)
    smu = mc.psd_sqrt(mu)
    I = np.eye(d)
    X, Z, F = mc.shift(d), mc.phase(d), mc.fourier(d)

    M = np.zeros((d**3, d), dtype=np.complex128)
    for j in range(d):
        for k in range(d):
            t = hw_conjugator(d, j, k)
            row = (j * d + k) * d
            M[row : row + d] = t @ smu @ t.conj().T

    x_mod = mc.direct_sum(*[mc.shift(d, J % d) for J in range(d * d)])
    z_div = mc.direct_sum(*[mc.phase(d, J // d) for J in range(d * d)])
    A = x_mod @ z_div.conj().T @ mc.kron(F, F, I)
    N = A @ M
    phi1 = phi1_state(mu, d).amplitudes

    residuals = {
        "M_symmetry_Z": np.abs(mc.kron(I, X, Z) @ M - M @ Z).max(),
        "M_symmetry_X": np.abs(mc.kron(X, I, X) @ M - M @ X).max(),
        "A_unitary": mc.unitarity_error(A),
        "N_symmetry_Z": np.abs(mc.kron(I, I, Z) @ N - N @ Z).max(),
        "N_symmetry_X": np.abs(mc.kron(I, I, X) @ N - N @ X).max(),
        "N_equals_phi1_kron_I": np.abs(N - mc.kron(phi1.reshape(-1, 1), I)).max(),
    }
    circuit_u = dense_unitary(hw_circuit(d))
    gamma = gamma_state(mu, d).amplitudes
    residuals["circuit_dilates_M"] = np.abs(circuit_u @ mc.kron(gamma.reshape(-1, 1), I) - M).max()
    residuals = {k: float(v) for k, v in residuals.items()}
    worst = max(residuals.values())
    return CheckReport(f"appendix_hw[d={d}]", worst, tol, worst <= tol, residuals)
