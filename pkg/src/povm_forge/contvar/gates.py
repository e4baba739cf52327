"""Continuous-variable gates acting on sampled wavefunctions.

Every gate is a small frozen dataclass; :func:`apply_cv_gate` dispatches on
its type.  Wire ``i`` is axis ``i`` of ``GridWavefunction.values``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import map_coordinates

from ..errors import ShapeError
from .grid import NORM_TOL, GridWavefunction, apply_fourier, fourier_shift, index_shift

SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class Fourier:
    wire: int


@dataclass(frozen=True)
class FourierDagger:
    wire: int


@dataclass(frozen=True)
class ControlledShiftDagger:
    """``psi(..., x_c, ..., x_t, ...) -> psi(..., x_c, ..., x_t + x_c, ...)``."""

    control: int
    target: int


@dataclass(frozen=True)
class ControlledPhase:
    """Multiplication by ``exp(-i x_c x_t)``."""

    control: int
    target: int


@dataclass(frozen=True)
class Reflection:
    wire: int


@dataclass(frozen=True)
class Displacement:
    """``U_{s,t}``: ``psi(x) -> exp(-i x s) psi(x - t)``."""

    s: float
    t: float
    wire: int


@dataclass(frozen=True)
class BeamSplitter:
    """Balanced beam splitter ``psi(x, y) -> psi((x + y)/sqrt2, (x - y)/sqrt2)``."""

    w1: int
    w2: int


@dataclass(frozen=True)
class CoordinateMap:
    """``psi(v) -> psi(A v)`` on the listed wires (all wires when empty)."""

    matrix: tuple
    wires: tuple = ()

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)

    @property
    def is_integer(self) -> bool:
        a = self.array
        return bool(np.all(a == np.round(a)))

    @property
    def momentum_action(self) -> np.ndarray:
        # psi(A x) has Fourier transform |det A|^-1 psihat((A^T)^-1 p)
        return np.linalg.inv(self.array).T

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.array))


def _check_wire(psi: GridWavefunction, *wires) -> None:
    for w in wires:
        if not 0 <= w < psi.ndim:
            raise ShapeError(f"wire {w} out of range for a {psi.ndim}-coordinate wavefunction")
    if len(set(wires)) != len(wires):
        raise ShapeError("gate wires must be distinct")


def _same_spacing(psi: GridWavefunction, *wires) -> None:
    g0 = psi.grids[wires[0]]
    for w in wires[1:]:
        if psi.grids[w] != g0:
            raise ShapeError("two-wire gates need identical grids on both wires")


def _axis_array(grid, axis: int, ndim: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = grid.points
    return grid.x.reshape(shape)


def _controlled_index_shift(values, control: int, target: int, center: int, sign: int) -> np.ndarray:
    out = np.empty_like(values)
    moved = np.moveaxis(values, control, 0)
    dst = np.moveaxis(out, control, 0)
    t = target - 1 if target > control else target
    for c in range(moved.shape[0]):
        dst[c] = index_shift(moved[c], t, sign * (c - center))
    return out


def _reflect(values, axis: int) -> np.ndarray:
    # x_k -> -x_k maps index k to N - k; index 0 (x = -L) has no partner
    n = values.shape[axis]
    out = np.zeros_like(values)
    src = [slice(None)] * values.ndim
    dst = [slice(None)] * values.ndim
    src[axis] = slice(n - 1, 0, -1)
    dst[axis] = slice(1, n)
    out[tuple(dst)] = values[tuple(src)]
    return out


def _shear(values, grid, axis: int, along: int, factor: float) -> np.ndarray:
    """``f(v) -> f(v + factor * v_along * e_axis)`` via per-line Fourier shifts."""
    amount = -factor * grid.x
    shape = [1] * values.ndim
    shape[along] = grid.points
    return fourier_shift(values, grid, axis, amount.reshape(shape))


def _coordinate_map(psi: GridWavefunction, gate: CoordinateMap) -> GridWavefunction:
    wires = tuple(gate.wires) or tuple(range(psi.ndim))
    _check_wire(psi, *wires)
    _same_spacing(psi, *wires)
    a = gate.array
    if a.shape != (len(wires), len(wires)):
        raise ShapeError(f"coordinate map of shape {a.shape} on {len(wires)} wires")
    if abs(abs(np.linalg.det(a)) - 1.0) > 1e-12:
        raise ShapeError(f"coordinate map must preserve area, det = {np.linalg.det(a)}")
    grid = psi.grids[wires[0]]
    n, c = grid.points, grid.center
    vals = np.moveaxis(psi.values, wires, range(len(wires)))
    rest = vals.shape[len(wires):]
    idx = np.indices((n,) * len(wires)).reshape(len(wires), -1) - c
    src = a @ idx + c
    flat = vals.reshape((n,) * len(wires) + (-1,))
    out = np.zeros_like(flat).reshape(n ** len(wires), -1)
    if gate.is_integer:
        src = np.rint(src).astype(int)
        ok = np.all((src >= 0) & (src < n), axis=0)
        out[ok] = flat[tuple(src[:, ok])]
        renorm = False
    else:
        for col in range(flat.shape[-1]):
            part = flat[..., col]
            out[:, col] = map_coordinates(part.real, src, order=1, cval=0.0) + 1j * map_coordinates(
                part.imag, src, order=1, cval=0.0
            )
        renorm = True
    out = out.reshape((n,) * len(wires) + rest)
    out = np.moveaxis(out, range(len(wires)), wires)
    if renorm and not psi.unnormalized:
        norm_in = psi.norm
        result = psi.replace(out, unnormalized=True)
        return psi.replace(out * (norm_in / result.norm))
    return _wrap(psi, out)


def _wrap(psi: GridWavefunction, out) -> GridWavefunction:
    # window truncation can shave off a little norm; flag it rather than hide it
    norm = float(np.sqrt(np.sum(np.abs(out) ** 2) * psi.cell))
    return psi.replace(out, unnormalized=psi.unnormalized or abs(norm - 1.0) > NORM_TOL)


def apply_cv_gate(psi: GridWavefunction, gate) -> GridWavefunction:
    vals = psi.values
    if isinstance(gate, (Fourier, FourierDagger)):
        _check_wire(psi, gate.wire)
        inverse = isinstance(gate, FourierDagger)
        return _wrap(psi, apply_fourier(vals, psi.grids[gate.wire], gate.wire, inverse=inverse))
    if isinstance(gate, ControlledShiftDagger):
        _check_wire(psi, gate.control, gate.target)
        _same_spacing(psi, gate.control, gate.target)
        center = psi.grids[gate.control].center
        return _wrap(psi, _controlled_index_shift(vals, gate.control, gate.target, center, +1))
    if isinstance(gate, ControlledPhase):
        _check_wire(psi, gate.control, gate.target)
        xc = _axis_array(psi.grids[gate.control], gate.control, psi.ndim)
        xt = _axis_array(psi.grids[gate.target], gate.target, psi.ndim)
        return psi.replace(vals * np.exp(-1j * xc * xt))
    if isinstance(gate, Reflection):
        _check_wire(psi, gate.wire)
        return _wrap(psi, _reflect(vals, gate.wire))
    if isinstance(gate, Displacement):
        _check_wire(psi, gate.wire)
        grid = psi.grids[gate.wire]
        steps = gate.t / grid.spacing
        if abs(steps - round(steps)) < 1e-9:
            out = index_shift(vals, gate.wire, -int(round(steps)))
        else:
            out = fourier_shift(vals, grid, gate.wire, gate.t)
        return _wrap(psi, out * np.exp(-1j * gate.s * _axis_array(grid, gate.wire, psi.ndim)))
    if isinstance(gate, BeamSplitter):
        _check_wire(psi, gate.w1, gate.w2)
        _same_spacing(psi, gate.w1, gate.w2)
        return _wrap(psi, beam_splitter_values(vals, psi.grids[gate.w1], gate.w1, gate.w2))
    if isinstance(gate, CoordinateMap):
        return _coordinate_map(psi, gate)
    raise TypeError(f"unknown continuous-variable gate {gate!r}")


def beam_splitter_values(values, grid, w1: int, w2: int) -> np.ndarray:
    """``f(x, y) -> f((x + y)/sqrt2, (x - y)/sqrt2)``.

    The map is ``diag(1, -1)`` times a rotation by -45 degrees.  The rotation
    is done as three Fourier shears (x += a y, y += b x, x += a y with
    ``a = tan(pi/8)`` and ``b = -sin(pi/4)``), which keeps it band-limited
    exact; the reflection of the second coordinate is an index flip.
    """
    a = math.tan(math.pi / 8)
    b = -SQRT_HALF
    out = _reflect(values, w2)
    out = _shear(out, grid, w1, w2, a)
    out = _shear(out, grid, w2, w1, b)
    out = _shear(out, grid, w1, w2, a)
    return out
