"""Continuous Heisenberg-Weyl measurement: circuit path and closed-form oracle.

Three wires: 0 carries ``alpha``, 1 carries ``conj(alpha)``, 2 the system
``Psi``.  The gate list mirrors the discrete Heisenberg-Weyl circuit with
shifts replaced by controlled translations and ``Z`` by the ``exp(-ixy)``
phase.  Wires 0 and 1 are then read out in position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConditioningError, ShapeError
from ..report import CheckReport
from .gates import ControlledPhase, ControlledShiftDagger, FourierDagger, apply_cv_gate
from .grid import GridWavefunction, fourier_matrix, index_shift, product_state

INFHW_GATES = (
    ControlledShiftDagger(0, 1),
    FourierDagger(0),
    ControlledShiftDagger(1, 2),
    ControlledPhase(0, 2),
)
# followed by FourierDagger on wires 0 and 1, which is evaluated row-wise below


@dataclass(frozen=True)
class SnappedOutcome:
    t_index: int
    s_index: int
    t: float
    s: float
    snap_distance: float


def _common_grid(*wfs: GridWavefunction):
    grid = wfs[0].grids[0]
    for wf in wfs:
        if wf.ndim != 1 or wf.grids[0] != grid:
            raise ShapeError("all inputs must be one-coordinate wavefunctions on one grid")
    return grid


def snap_outcome(grid, t: float, s: float, snap: bool = True) -> SnappedOutcome:
    if abs(t) > grid.half_width / 2 or abs(s) > grid.half_width / 2:
        raise ConditioningError(f"outcome ({t}, {s}) outside |t|, |s| <= L/2 = {grid.half_width / 2}")
    kt, xt, dt = grid.snap(t)
    ks, xs, ds = grid.snap(s)
    dist = max(dt, ds)
    if not snap and dist > 1e-12:
        raise ConditioningError(f"outcome ({t}, {s}) is off-grid by {dist:.3g} and snapping is disabled")
    if dist > grid.spacing / 2 + 1e-12:
        raise ConditioningError(f"outcome ({t}, {s}) is more than half a cell from the grid")
    return SnappedOutcome(kt, ks, xt, xs, dist)


def infhw_state(alpha: GridWavefunction, psi: GridWavefunction) -> GridWavefunction:
    """The three-wire state just before the final pair of inverse Fourier gates."""
    _common_grid(alpha, psi)
    state = product_state(alpha, alpha.conj(), psi)
    for gate in INFHW_GATES:
        state = apply_cv_gate(state, gate)
    return state


def infhw_lattice(alpha: GridWavefunction, psi: GridWavefunction, outcomes, snap: bool = True) -> list:
    """Conditional states for many ``(t, s)`` outcomes from one circuit run.

    Only the requested rows of the last two Fourier gates are evaluated,
    which avoids materialising the full three-dimensional output.
    """
    grid = _common_grid(alpha, psi)
    snapped = [snap_outcome(grid, t, s, snap) for t, s in outcomes]
    state = infhw_state(alpha, psi).values
    fd = fourier_matrix(grid, inverse=True)
    t_rows = sorted({o.t_index for o in snapped})
    # contract wire 0 first, then wire 1 only at the needed rows
    partial = np.tensordot(fd[t_rows], state, axes=(1, 0))
    row_of = {k: i for i, k in enumerate(t_rows)}
    out = []
    for o in snapped:
        z = fd[o.s_index] @ partial[row_of[o.t_index]]
        out.append(GridWavefunction((grid,), z, unnormalized=True))
    return out


def infhw_kraus(alpha: GridWavefunction, psi: GridWavefunction, t: float, s: float, snap: bool = True) -> GridWavefunction:
    """Unnormalised conditional state of wire 2 after reading ``(t, s)`` on wires 0, 1."""
    return infhw_lattice(alpha, psi, [(t, s)], snap)[0]


def infhw_full_output(alpha: GridWavefunction, psi: GridWavefunction) -> np.ndarray:
    """Complete output amplitudes, indexed ``[t, s, z]``."""
    grid = _common_grid(alpha, psi)
    state = infhw_state(alpha, psi)
    state = apply_cv_gate(state, FourierDagger(0))
    state = apply_cv_gate(state, FourierDagger(1))
    return state.values


def coin_oracle(alpha: GridWavefunction, psi: GridWavefunction, t: float, s: float, snap: bool = True) -> GridWavefunction:
    """Direct quadrature of
    ``(2 pi)^{-1/2} exp(-i z s) alpha(z - t) int conj(alpha(u - t)) exp(i u s) Psi(u) du``."""
    grid = _common_grid(alpha, psi)
    o = snap_outcome(grid, t, s, snap)
    z = grid.x
    shifted = index_shift(alpha.values, 0, -(o.t_index - grid.center))
    overlap = np.sum(np.conj(shifted) * np.exp(1j * z * o.s) * psi.values) * grid.spacing
    vals = np.exp(-1j * z * o.s) * shifted * overlap / math.sqrt(2 * math.pi)
    return GridWavefunction((grid,), vals, unnormalized=True)


def relative_l2(a: GridWavefunction, b: GridWavefunction) -> float:
    """``||a - b|| / ||b||`` in the grid norm."""
    diff = np.sqrt(np.sum(np.abs(a.values - b.values) ** 2))
    ref = np.sqrt(np.sum(np.abs(b.values) ** 2))
    return float(diff / ref) if ref > 0 else float(diff)


def outcome_lattice(extent: float, steps: int) -> list:
    pts = np.linspace(-extent, extent, steps) if steps > 1 else np.zeros(1)
    return [(float(t), float(s)) for t in pts for s in pts]


def check_circuit_vs_oracle(alpha, psi, outcomes, tol: float = 1e-3) -> CheckReport:
    circuit = infhw_lattice(alpha, psi, outcomes)
    errors = [relative_l2(c, coin_oracle(alpha, psi, t, s)) for c, (t, s) in zip(circuit, outcomes)]
    grid = alpha.grids[0]
    snaps = [grid.snap(v)[2] for ts in outcomes for v in ts]
    worst = max(errors)
    return CheckReport(
        "infhw_circuit_vs_oracle", worst, tol, worst < tol,
        {"outcomes": len(outcomes), "max_snap_distance": max(snaps)},
    )


def completeness_sum(alpha: GridWavefunction, psi: GridWavefunction) -> float:
    """``sum_{t,s} ||Psi_{t,s}||^2 dx^2`` over the full output grid."""
    out = infhw_full_output(alpha, psi)
    dx = alpha.grids[0].spacing
    return float(np.sum(np.abs(out) ** 2) * dx**3)
