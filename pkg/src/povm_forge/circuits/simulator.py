"""Statevector simulation of :class:`Circuit` objects and ancilla measurement."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np

from .. import matcore as mc
from ..errors import ShapeError
from . import gates as G

NORM_TOL = 1e-10
# conditioning on an outcome below this probability yields EMPTY_STATE
ZERO_PROBABILITY = 1e-24
EMPTY_STATE = None


@dataclass(frozen=True)
class QuditRegister:
    dims: tuple
    amplitudes: np.ndarray
    unnormalized: bool = False

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != int(np.prod(dims)):
            raise ShapeError(f"{amps.size} amplitudes for register of dims {dims}")
        if not self.unnormalized and abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise ShapeError(f"register norm {np.linalg.norm(amps):.12f} != 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def kron(self, other: "QuditRegister") -> "QuditRegister":
        return QuditRegister(
            self.dims + other.dims,
            np.kron(self.amplitudes, other.amplitudes),
            self.unnormalized or other.unnormalized,
        )

    @classmethod
    def basis(cls, dims, index) -> "QuditRegister":
        amps = np.zeros(int(np.prod(dims)), dtype=np.complex128)
        amps[index] = 1.0
        return cls(tuple(dims), amps)


def _apply_matrix(state: np.ndarray, mat: np.ndarray, axes) -> np.ndarray:
    axes = list(axes)
    moved = np.moveaxis(state, axes, range(len(axes)))
    shape = moved.shape
    size = int(np.prod(shape[: len(axes)]))
    out = (mat @ moved.reshape(size, -1)).reshape(shape)
    return np.moveaxis(out, range(len(axes)), axes)


def _base_matrix(gate: G.Gate, dims) -> np.ndarray:
    t = gate.targets
    size = int(np.prod([dims[w] for w in t]))
    p = gate.params
    if gate.kind == G.FOURIER:
        return mc.fourier(size, 1)
    if gate.kind == G.FOURIER_DAGGER:
        return mc.fourier(size, -1)
    if gate.kind == G.SHIFT_POWER:
        return mc.shift(size, int(p.get("power", 1)))
    if gate.kind == G.PHASE_POWER:
        return mc.phase(size, int(p.get("power", 1)))
    if gate.kind == G.RPHASE_POWER:
        return mc.rphase(int(p["n"]), int(p.get("power", 1)))
    if gate.kind == G.DENSE_BLOCK:
        return p["matrix"]
    raise ValueError(f"no single matrix for gate kind {gate.kind}")


def apply_gate(state: np.ndarray, gate: G.Gate, dims) -> np.ndarray:
    """Apply ``gate`` to a tensor whose leading axes are the register wires.

    Extra trailing axes are carried along untouched (used for batched
    evaluation of many input vectors at once).
    """
    if gate.kind == G.PERMUTATION:
        # output wire targets[i] carries what input wire order[i] carried
        axes = list(range(state.ndim))
        for dst, src in zip(gate.targets, gate.params["order"]):
            axes[dst] = src
        return np.transpose(state, axes)
    if gate.kind in (G.CONTROLLED_SHIFT_DAGGER, G.CONTROLLED_PHASE):
        c, t = gate.controls[0], gate.targets[0]
        dc, dt = dims[c], dims[t]
        power = int(gate.params.get("power", 1))
        out = np.empty_like(state)
        for j in range(dc):
            if gate.kind == G.CONTROLLED_SHIFT_DAGGER:
                base = mc.shift(dt, -power * j)
            else:
                base = mc.phase(dt, power * j)
            idx = [slice(None)] * state.ndim
            idx[c] = j
            sub = state[tuple(idx)]
            # target axis index shifts down by one if it comes after the control
            t_sub = t - 1 if t > c else t
            out[tuple(idx)] = _apply_matrix(sub, base, [t_sub])
        return out
    return _apply_matrix(state, _base_matrix(gate, dims), gate.targets)


def simulate(circuit: G.Circuit, state) -> np.ndarray:
    """Run every gate on ``state`` (flat vector or register tensor)."""
    arr = np.asarray(state, dtype=np.complex128)
    batch = arr.shape[1:] if arr.ndim == 2 and arr.shape[0] == circuit.size else ()
    tensor = arr.reshape(circuit.dims + batch)
    for g in circuit.gates:
        tensor = apply_gate(tensor, g, circuit.dims)
    return tensor.reshape((circuit.size,) + batch)


def dense_unitary(circuit: G.Circuit) -> np.ndarray:
    """Matrix of the whole circuit (columns are images of basis states)."""
    return simulate(circuit, np.eye(circuit.size, dtype=np.complex128))


def gate_count(circuit: G.Circuit) -> int:
    """Elementary gate count; a wire permutation counts as its minimal number of swaps."""
    total = 0
    for g in circuit.gates:
        if g.kind == G.PERMUTATION:
            perm = dict(zip(g.targets, g.params["order"]))
            seen, cycles = set(), 0
            for w in perm:
                if w in seen:
                    continue
                cycles += 1
                while w not in seen:
                    seen.add(w)
                    w = perm[w]
            total += len(perm) - cycles
        else:
            total += 1
    return total


@dataclass
class MeasurementResult:
    labels: list
    probabilities: np.ndarray
    conditional_states: list
    samples: np.ndarray
    counts: np.ndarray

    def distribution(self) -> dict:
        return dict(zip(self.labels, self.probabilities))

    def write_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["outcome_label", "probability", "count"])
            for lab, p, c in zip(self.labels, self.probabilities, self.counts):
                w.writerow(["-".join(str(v) for v in lab), f"{p:.17g}", int(c)])


def run_measurement(
    circuit: G.Circuit, input: QuditRegister, seed: int = 0, shots: int = 0
) -> MeasurementResult:
    """Simulate, then measure ``circuit.measured`` wires in the standard basis.

    Probabilities are exact squared norms of the ancilla blocks.  Labels are
    tuples of measured-wire values in lexicographic order (first measured wire
    most significant).  Conditional states live on the unmeasured wires and
    are normalised; impossible outcomes get ``EMPTY_STATE``.
    """
    if tuple(input.dims) != circuit.dims:
        raise ShapeError(f"input dims {input.dims} do not match circuit dims {circuit.dims}")
    out = simulate(circuit, input.amplitudes).reshape(circuit.dims)
    meas = list(circuit.measured)
    rest = [w for w in range(len(circuit.dims)) if w not in meas]
    block = np.transpose(out, meas + rest)
    mdims = [circuit.dims[w] for w in meas]
    rdims = tuple(circuit.dims[w] for w in rest)
    block = block.reshape(int(np.prod(mdims)) if meas else 1, -1)
    probs = np.sum(np.abs(block) ** 2, axis=1)
    labels = list(product(*[range(d) for d in mdims]))
    states = []
    for row, p in zip(block, probs):
        if p < ZERO_PROBABILITY:
            states.append(EMPTY_STATE)
        else:
            states.append(QuditRegister(rdims, row / np.sqrt(p)))
    rng = np.random.default_rng(seed)
    pnorm = probs / probs.sum()
    samples = rng.choice(len(probs), size=shots, p=pnorm) if shots else np.zeros(0, dtype=int)
    counts = np.bincount(samples, minlength=len(probs))
    return MeasurementResult(labels, probs, states, samples, counts)
