"""Beam-splitter teleportation scheme for Heisenberg-Weyl covariant measurements.

Mode 0 carries the input ``psi``, modes 1 and 2 the ancillas ``alpha`` and
``beta``.  A balanced beam splitter mixes modes 0 and 1, mode 0 is read out
in position (``x``) and mode 1 in momentum (``y``), and mode 2 is displaced
by ``U_{sqrt2 y, sqrt2 x}``.

The conditional amplitude of the read-out comes out as
``sqrt2 exp(-i x y)`` times the overlap in the displaced frame.  The phase
is global for each outcome and the ``sqrt2`` is the Jacobian of the outcome
rescaling ``(x, y) -> sqrt2 (x, y)``, so both are removed here: the result is
the Kraus output for outcome densities in the rescaled variables.  Ancillas
are assumed even (real Gaussians in all uses here); for odd parts the
beam-splitter convention reflects ``alpha``.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConditioningError, ShapeError
from ..report import CheckReport
from .gates import BeamSplitter, Displacement, apply_cv_gate
from .grid import GridWavefunction, fourier_matrix, product_state
from .heisenberg import relative_l2

SQRT2 = math.sqrt(2.0)


def _grid(*wfs):
    grid = wfs[0].grids[0]
    for wf in wfs:
        if wf.ndim != 1 or wf.grids[0] != grid:
            raise ShapeError("optics inputs must share one grid")
    return grid


def _check_outcome(grid, x, y):
    if abs(x) > grid.half_width / 4 or abs(y) > grid.half_width / 4:
        raise ConditioningError(f"outcome ({x}, {y}) outside |x|, |y| <= L/4")


def optics_amplitudes(alpha: GridWavefunction, psi: GridWavefunction) -> np.ndarray:
    """Beam splitter on ``psi (x) alpha`` followed by the momentum transform of mode 1.

    Returned array is indexed ``[x, y]``; mode 2 is untouched by these gates
    and is kept as a separate product factor.
    """
    state = apply_cv_gate(product_state(psi, alpha), BeamSplitter(0, 1))
    return state.values @ fourier_matrix(alpha.grids[0], inverse=True).T


def optics_kraus(alpha, beta, psi, x: float, y: float) -> GridWavefunction:
    """Unnormalised output of mode 2 for read-out ``(x, y)`` (snapped to the grid)."""
    return optics_lattice(alpha, beta, psi, [(x, y)])[0]


def optics_lattice(alpha, beta, psi, outcomes) -> list:
    grid = _grid(alpha, beta, psi)
    amps = optics_amplitudes(alpha, psi)
    out = []
    for x, y in outcomes:
        _check_outcome(grid, x, y)
        kx, xs, _ = grid.snap(x)
        ky, ys, _ = grid.snap(y)
        vals = apply_cv_gate(beta, Displacement(SQRT2 * ys, SQRT2 * xs, 0)).values
        out.append(GridWavefunction((grid,), vals * amps[kx, ky] * np.exp(1j * xs * ys) / SQRT2, unnormalized=True))
    return out


def optics_oracle(alpha, beta, psi, x: float, y: float) -> GridWavefunction:
    """``(2 pi)^{-1/2} U_{s,t} |beta> <conj(alpha)| U_{s,t}^dag |psi>`` with ``(s, t) = sqrt2 (y, x)``."""
    grid = _grid(alpha, beta, psi)
    xs = grid.snap(x)[1]
    ys = grid.snap(y)[1]
    s, t = SQRT2 * ys, SQRT2 * xs
    z = grid.x
    # U_{s,t} conj(alpha) evaluated in closed form where available
    shifted_bar_alpha = np.exp(-1j * z * s) * np.conj(alpha.evaluate(z - t))
    overlap = np.vdot(shifted_bar_alpha, psi.values) * grid.spacing
    out = np.exp(-1j * z * s) * beta.evaluate(z - t) * overlap / math.sqrt(2 * math.pi)
    return GridWavefunction((grid,), out, unnormalized=True)


def check_optics(alpha, beta, psi, outcomes, tol: float = 1e-3) -> CheckReport:
    circuit = optics_lattice(alpha, beta, psi, outcomes)
    errors = [relative_l2(c, optics_oracle(alpha, beta, psi, x, y)) for c, (x, y) in zip(circuit, outcomes)]
    worst = max(errors)
    return CheckReport("optics_vs_oracle", worst, tol, worst < tol, {"outcomes": len(outcomes)})
