"""Gate and circuit description for mixed-dimension qudit registers.

Controlled gates use the power convention ``sum_j |j><j| (x) B^j``; the
``Dagger`` variants use ``B^-j``.  Multi-wire targets of ``Fourier``,
``FourierDagger`` and ``DenseBlock`` are combined big-endian (first listed
wire is the most significant digit).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ShapeError

FOURIER = "Fourier"
FOURIER_DAGGER = "FourierDagger"
SHIFT_POWER = "ShiftPower"
PHASE_POWER = "PhasePower"
RPHASE_POWER = "RPhasePower"
CONTROLLED_SHIFT_DAGGER = "ControlledShiftDagger"
CONTROLLED_PHASE = "ControlledPhase"
PERMUTATION = "Permutation"
DENSE_BLOCK = "DenseBlock"

GATE_KINDS = (
    FOURIER,
    FOURIER_DAGGER,
    SHIFT_POWER,
    PHASE_POWER,
    RPHASE_POWER,
    CONTROLLED_SHIFT_DAGGER,
    CONTROLLED_PHASE,
    PERMUTATION,
    DENSE_BLOCK,
)
_CONTROLLED = (CONTROLLED_SHIFT_DAGGER, CONTROLLED_PHASE)


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple
    controls: tuple = ()
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        if self.kind == DENSE_BLOCK:
            params = dict(self.params)
            params["matrix"] = np.asarray(params["matrix"], dtype=np.complex128)
            object.__setattr__(self, "params", params)

    @property
    def wires(self) -> tuple:
        return self.controls + self.targets

    def validate(self, dims) -> None:
        n = len(dims)
        wires = self.wires
        if len(set(wires)) != len(wires):
            raise ShapeError(f"{self.kind}: control and target wires must be distinct")
        if any(w < 0 or w >= n for w in wires):
            raise ShapeError(f"{self.kind}: wire index out of range for {n} wires")
        if not self.targets:
            raise ShapeError(f"{self.kind}: needs at least one target")
        if self.kind in _CONTROLLED and len(self.controls) != 1:
            raise ShapeError(f"{self.kind}: exactly one control wire required")
        if self.kind not in _CONTROLLED and self.controls:
            raise ShapeError(f"{self.kind}: does not take control wires")
        if self.kind in (SHIFT_POWER, PHASE_POWER, RPHASE_POWER) + _CONTROLLED:
            if len(self.targets) != 1:
                raise ShapeError(f"{self.kind}: exactly one target wire required")
        if self.kind == RPHASE_POWER and dims[self.targets[0]] != 2:
            raise ShapeError("RPhasePower acts on a qubit")
        if self.kind == PERMUTATION:
            order = list(self.params["order"])
            if sorted(order) != sorted(self.targets) or len(order) != len(self.targets):
                raise ShapeError("Permutation order must rearrange its target wires")
            if len({dims[t] for t in self.targets}) != 1:
                raise ShapeError("Permutation may only exchange wires of equal dimension")
        if self.kind == DENSE_BLOCK:
            size = int(np.prod([dims[t] for t in self.targets]))
            if self.params["matrix"].shape != (size, size):
                raise ShapeError(f"DenseBlock matrix must be {size}x{size}")

    def to_json(self) -> dict:
        params = dict(self.params)
        if self.kind == DENSE_BLOCK:
            m = params["matrix"]
            params["matrix"] = np.stack([m.real, m.imag], axis=-1).tolist()
        return {
            "kind": self.kind,
            "targets": list(self.targets),
            "controls": list(self.controls),
            "params": params,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Gate":
        params = dict(doc.get("params", {}))
        if doc["kind"] == DENSE_BLOCK:
            arr = np.asarray(params["matrix"], dtype=float)
            params["matrix"] = arr[..., 0] + 1j * arr[..., 1]
        return cls(doc["kind"], tuple(doc["targets"]), tuple(doc.get("controls", ())), params)


@dataclass(frozen=True)
class Circuit:
    dims: tuple
    gates: tuple = ()
    measured: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "measured", tuple(int(w) for w in self.measured))
        if any(d < 1 for d in self.dims):
            raise ShapeError("wire dimensions must be >= 1")
        for g in self.gates:
            g.validate(self.dims)
        if any(w < 0 or w >= len(self.dims) for w in self.measured):
            raise ShapeError("measured wire out of range")

    @property
    def size(self) -> int:
        return int(np.prod(self.dims))

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "gates": [g.to_json() for g in self.gates],
            "measured": list(self.measured),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Circuit":
        return cls(
            tuple(doc["dims"]),
            tuple(Gate.from_json(g) for g in doc["gates"]),
            tuple(doc.get("measured", ())),
        )

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "Circuit":
        return cls.from_json(json.loads(Path(path).read_text()))
