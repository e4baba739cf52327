"""Uniform grids, sampled wavefunctions and the grid Fourier transform.

Grid convention: ``x_k = -L + k * dx`` for ``k = 0..N-1`` with ``dx = 2L/N``
and ``N`` even, so ``x = 0`` is the sample ``k = N/2`` and every sum or
difference of grid points is an integer number of samples away from the
origin.  Inner products are Riemann sums ``sum conj(psi) phi dx^ndim``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.signal import czt

from ..errors import ResolutionError, ShapeError

NORM_TOL = 1e-6


@dataclass(frozen=True)
class Grid1D:
    half_width: float
    points: int

    def __post_init__(self):
        if not self.half_width > 0:
            raise ResolutionError(f"half_width must be positive, got {self.half_width}")
        if self.points < 8 or self.points % 2:
            raise ResolutionError(f"points must be an even number >= 8, got {self.points}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    @property
    def x(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.points)

    @property
    def center(self) -> int:
        return self.points // 2

    def nearest_index(self, value: float) -> int:
        k = int(round((value + self.half_width) / self.spacing))
        return min(max(k, 0), self.points - 1)

    def snap(self, value: float) -> tuple[int, float, float]:
        """Nearest sample index, its abscissa, and the snap distance."""
        k = self.nearest_index(value)
        xk = float(self.x[k])
        return k, xk, abs(xk - value)

    def wavenumbers(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.points, d=self.spacing)


@dataclass(frozen=True)
class GridWavefunction:
    """Samples of a wavefunction of one to three coordinates.

    ``func`` optionally keeps the closed form the samples came from, so that
    off-grid evaluation (needed by kernels with half-integer arguments) is
    exact; otherwise off-grid values use band-limited interpolation.
    """

    grids: tuple
    values: np.ndarray
    unnormalized: bool = False
    func: Optional[Callable] = None

    def __post_init__(self):
        grids = tuple(self.grids) if isinstance(self.grids, (tuple, list)) else (self.grids,)
        vals = np.asarray(self.values, dtype=np.complex128)
        if not 1 <= len(grids) <= 3:
            raise ShapeError("wavefunctions have one to three coordinates")
        if vals.shape != tuple(g.points for g in grids):
            raise ShapeError(f"values of shape {vals.shape} do not match the grids")
        object.__setattr__(self, "grids", grids)
        object.__setattr__(self, "values", vals)
        if not self.unnormalized and abs(self.norm - 1.0) > NORM_TOL:
            raise ShapeError(f"wavefunction norm {self.norm:.8f} differs from 1")

    @property
    def ndim(self) -> int:
        return len(self.grids)

    @property
    def cell(self) -> float:
        return float(np.prod([g.spacing for g in self.grids]))

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell))

    def inner(self, other: "GridWavefunction") -> complex:
        return complex(np.vdot(self.values, other.values) * self.cell)

    def normalized(self) -> "GridWavefunction":
        return GridWavefunction(self.grids, self.values / self.norm)

    def replace(self, values, unnormalized: Optional[bool] = None) -> "GridWavefunction":
        flag = self.unnormalized if unnormalized is None else unnormalized
        return GridWavefunction(self.grids, values, unnormalized=flag)

    def conj(self) -> "GridWavefunction":
        f = self.func
        return GridWavefunction(
            self.grids, np.conj(self.values), self.unnormalized,
            None if f is None else (lambda x: np.conj(f(x))),
        )

    def evaluate(self, points) -> np.ndarray:
        """Values at arbitrary abscissas (1-D wavefunctions only)."""
        if self.ndim != 1:
            raise ShapeError("off-grid evaluation is only defined for one coordinate")
        points = np.asarray(points, dtype=float)
        if self.func is not None:
            return np.asarray(self.func(points), dtype=np.complex128)
        return bandlimited_interpolate(self.values, self.grids[0], points)


def product_state(*wfs: GridWavefunction) -> GridWavefunction:
    grids = tuple(g for wf in wfs for g in wf.grids)
    vals = wfs[0].values
    for wf in wfs[1:]:
        vals = np.multiply.outer(vals, wf.values)
    return GridWavefunction(grids, vals, unnormalized=any(wf.unnormalized for wf in wfs))


def gaussian_density_amplitude(x, sigma: float) -> np.ndarray:
    return np.exp(-np.asarray(x) ** 2 / (2 * sigma**2)) / math.sqrt(sigma * math.sqrt(math.pi))


def gaussian_wavefn(sigma: float, grid: Grid1D) -> GridWavefunction:
    """Real Gaussian ``(sigma sqrt(pi))^{-1/2} exp(-x^2 / (2 sigma^2))``.

    The width must satisfy ``4 dx <= sigma <= L/4`` so the packet is both
    resolved and untruncated.
    """
    if not sigma > 0:
        raise ResolutionError(f"sigma must be positive, got {sigma}")
    if sigma < 4 * grid.spacing - 1e-12 or sigma > grid.half_width / 4 + 1e-12:
        raise ResolutionError(
            f"sigma={sigma} outside resolvable band [{4 * grid.spacing:.4g}, {grid.half_width / 4:.4g}]"
        )
    f = lambda x: gaussian_density_amplitude(x, sigma)  # noqa: E731
    return GridWavefunction((grid,), f(grid.x), func=f)


def bandlimited_interpolate(values, grid: Grid1D, points) -> np.ndarray:
    """Trigonometric interpolation of periodic samples at arbitrary points."""
    coeffs = np.fft.fft(values) / grid.points
    k = grid.wavenumbers()
    if grid.points % 2 == 0:
        # split the Nyquist term symmetrically so real data interpolates to real values
        nyq = grid.points // 2
        coeffs = coeffs.copy()
        coeffs[nyq] *= 0.5
        k = np.append(k, -k[nyq])
        coeffs = np.append(coeffs, coeffs[nyq])
    phase = np.exp(1j * np.multiply.outer(np.asarray(points) + grid.half_width, k))
    return phase @ coeffs


# -- Fourier transform on the grid -------------------------------------------


def fourier_matrix(grid: Grid1D, inverse: bool = False) -> np.ndarray:
    """Riemann quadrature of ``(F psi)(x) = (2 pi)^{-1/2} int exp(-i x y) psi(y) dy``,
    evaluated on the same grid (``inverse`` flips the sign of the exponent)."""
    sign = 1.0 if inverse else -1.0
    x = grid.x
    return grid.spacing / math.sqrt(2 * math.pi) * np.exp(sign * 1j * np.outer(x, x))


def apply_fourier(values: np.ndarray, grid: Grid1D, axis: int, inverse: bool = False) -> np.ndarray:
    """Same quadrature as :func:`fourier_matrix`, via a chirp-z transform along ``axis``.

    Writing ``x_j = -L + j dx`` the kernel factorises into two linear phase
    ramps and the chirp ``exp(i s dx^2 j k)``, which is exactly a CZT with
    ``w = exp(i s dx^2)``.
    """
    sign = 1.0 if inverse else -1.0
    L, dx, n = grid.half_width, grid.spacing, grid.points
    idx = np.arange(n)
    shape = [1] * values.ndim
    shape[axis] = n
    ramp = np.exp(-sign * 1j * L * dx * idx).reshape(shape)
    out = czt(values * ramp, m=n, w=np.exp(sign * 1j * dx * dx), a=1.0, axis=axis)
    return (dx / math.sqrt(2 * math.pi)) * np.exp(sign * 1j * L * L) * ramp * out


def fourier_rows(values: np.ndarray, grid: Grid1D, axis: int, rows, inverse: bool = False) -> np.ndarray:
    """Only the requested output samples of :func:`apply_fourier` along ``axis``."""
    mat = fourier_matrix(grid, inverse)[np.asarray(rows)]
    moved = np.moveaxis(values, axis, 0)
    out = np.tensordot(mat, moved, axes=(1, 0))
    return np.moveaxis(out, 0, axis)


def fourier_shift(values: np.ndarray, grid: Grid1D, axis: int, amount) -> np.ndarray:
    """``f(x) -> f(x - amount)`` with zero fill outside the window.

    The whole-cell part of the shift is an exact index shift; only the
    remainder (at most half a cell) uses a periodic Fourier phase ramp, so
    content pushed past the window edge is lost rather than wrapped around.
    ``amount`` may be an array broadcastable against ``values`` with the
    shift axis collapsed, giving a different shift per line.
    """
    n = grid.points
    shape = [1] * values.ndim
    shape[axis] = n
    amount = np.asarray(amount, dtype=float)
    if amount.ndim:
        amount = np.expand_dims(amount, axis) if amount.ndim == values.ndim - 1 else amount
    cells = np.rint(amount / grid.spacing)
    frac = amount - cells * grid.spacing
    k = grid.wavenumbers().reshape(shape)
    spectrum = np.fft.fft(values, axis=axis)
    out = np.fft.ifft(spectrum * np.exp(-1j * k * frac), axis=axis)
    src = np.arange(n).reshape(shape) - cells.astype(np.int64)
    src = np.broadcast_to(src, out.shape)
    inside = (src >= 0) & (src < n)
    return np.where(inside, np.take_along_axis(out, np.clip(src, 0, n - 1), axis), 0.0)


def index_shift(values: np.ndarray, axis: int, offset: int) -> np.ndarray:
    """``out[k] = values[k + offset]`` along ``axis``, zero outside the window."""
    out = np.zeros_like(values)
    n = values.shape[axis]
    if abs(offset) >= n:
        return out
    src = [slice(None)] * values.ndim
    dst = [slice(None)] * values.ndim
    if offset >= 0:
        src[axis] = slice(offset, n)
        dst[axis] = slice(0, n - offset)
    else:
        src[axis] = slice(0, n + offset)
        dst[axis] = slice(-offset, n)
    out[tuple(dst)] = values[tuple(src)]
    return out


def random_smooth_wavefn(grid: Grid1D, rng: np.random.Generator, width: float = 1.0) -> GridWavefunction:
    """Gaussian envelope times a random complex quadratic and a small momentum kick."""
    c = rng.normal(size=3) + 1j * rng.normal(size=3)
    x0 = rng.uniform(-1.0, 1.0)
    k = rng.uniform(-1.0, 1.0)
    x = grid.x
    vals = np.exp(-((x - x0) ** 2) / (2 * width**2)) * (c[0] + c[1] * x + c[2] * x**2) * np.exp(1j * k * x)
    vals = vals / np.sqrt(np.sum(np.abs(vals) ** 2) * grid.spacing)
    return GridWavefunction((grid,), vals)
