"""Gaussian covariance bookkeeping and the thermal-oscillator description of mu.

Covariance matrices use the ordering ``(x_1, ..., x_n, p_1, ..., p_n)`` and
``hbar = 1``, so the vacuum has covariance ``I/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError, ResolutionError, ShapeError
from .gates import CoordinateMap
from .grid import Grid1D

SYMPLECTIC_TOL = 1e-9
G_MAP = ((1.0, 1.0), (0.5, -0.5))


def symplectic_form(modes: int) -> np.ndarray:
    eye = np.eye(modes)
    zero = np.zeros((modes, modes))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_eigenvalues(cov) -> np.ndarray:
    cov = np.asarray(cov, dtype=float)
    modes = cov.shape[0] // 2
    ev = np.linalg.eigvals(1j * symplectic_form(modes) @ cov)
    return np.sort(np.abs(ev.real))[::2]


@dataclass(frozen=True)
class GaussianState:
    modes: int
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        cov = np.asarray(self.covariance, dtype=float)
        mean = np.asarray(self.mean, dtype=float)
        n = 2 * self.modes
        if cov.shape != (n, n) or mean.shape != (n,):
            raise ShapeError(f"{self.modes}-mode state needs a {n}x{n} covariance and length-{n} mean")
        if np.abs(cov - cov.T).max() > 1e-12 * max(1.0, np.abs(cov).max()):
            raise ShapeError("covariance matrix is not symmetric")
        nu = symplectic_eigenvalues(cov)
        if nu.min() < 0.5 - SYMPLECTIC_TOL:
            raise InvalidParameterError(f"covariance violates the uncertainty bound: nu_min = {nu.min():.6g}")
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "mean", mean)

    def reduced(self, mode: int) -> "GaussianState":
        idx = [mode, self.modes + mode]
        return GaussianState(1, self.mean[idx], self.covariance[np.ix_(idx, idx)])

    @property
    def purity(self) -> float:
        # 1 / prod(2 nu_k)
        return float(1.0 / np.prod(2 * symplectic_eigenvalues(self.covariance)))


def product_covariance(sigma1: float, sigma2: float) -> np.ndarray:
    """Covariance of ``alpha (x) beta`` for real Gaussians of widths ``sigma1``, ``sigma2``."""
    _positive(sigma1, sigma2)
    return np.diag([sigma1**2 / 2, sigma2**2 / 2, 1 / (2 * sigma1**2), 1 / (2 * sigma2**2)])


def covariance_transform(g: CoordinateMap, sigma1: float, sigma2: float) -> GaussianState:
    """Covariance of ``(alpha (x) beta)(g v)``.

    Positions transform with ``g^-1`` and momenta with ``g^T``, giving
    ``(g^-1 + g^T) sigma ((g^T)^-1 + g)`` in block-diagonal form.
    """
    a = g.array
    if a.shape != (2, 2):
        raise ShapeError("covariance_transform takes a 2x2 coordinate map")
    if abs(abs(np.linalg.det(a)) - 1.0) > 1e-12:
        raise InvalidParameterError(f"coordinate map is not area preserving, det = {np.linalg.det(a)}")
    ginv = np.linalg.inv(a)
    z = np.zeros((2, 2))
    left = np.block([[ginv, z], [z, a.T]])
    right = np.block([[ginv.T, z], [z, a]])
    cov = left @ product_covariance(sigma1, sigma2) @ right
    return GaussianState(2, np.zeros(4), (cov + cov.T) / 2)


def reduced_covariance_closed_form(sigma1: float, sigma2: float) -> np.ndarray:
    _positive(sigma1, sigma2)
    return np.diag([sigma1**2 + 4 * sigma2**2, 4 / sigma1**2 + 1 / sigma2**2]) / 8


@dataclass(frozen=True)
class ThermalParams:
    m_omega: float
    N: float
    positivity_regime: bool = True

    def __post_init__(self):
        if not self.m_omega > 0:
            raise InvalidParameterError(f"m_omega must be positive, got {self.m_omega}")
        if self.N < -1e-12:
            raise InvalidParameterError(f"N must be non-negative, got {self.N}")
        object.__setattr__(self, "N", max(float(self.N), 0.0))


def thermal_params(sigma1: float, sigma2: float) -> ThermalParams:
    _positive(sigma1, sigma2)
    m_omega = math.sqrt((4 / sigma1**2 + 1 / sigma2**2) / (sigma1**2 + 4 * sigma2**2))
    n = 0.5 * math.sqrt(2 + 4 * sigma2**2 / sigma1**2 + sigma1**2 / (4 * sigma2**2)) - 1
    # the radicand is 4 + (r - 1/r)^2 with r = sigma1/(2 sigma2); clean rounding at r = 1
    if abs(sigma1 - 2 * sigma2) <= 1e-15 * sigma1:
        n = 0.0
    return ThermalParams(m_omega, n, sigma1 >= 2 * sigma2 - 1e-12)


def _positive(*vals):
    for v in vals:
        if not v > 0:
            raise InvalidParameterError(f"widths must be positive, got {v}")


# -- thermal state on a grid ---------------------------------------------------


def hermite_functions(n_max: int, m_omega: float, x) -> np.ndarray:
    """Rows ``0..n_max-1`` are oscillator eigenfunctions for mass-frequency ``m_omega``."""
    x = np.asarray(x, dtype=float)
    xi = math.sqrt(m_omega) * x
    out = np.zeros((n_max, x.size))
    out[0] = (m_omega / math.pi) ** 0.25 * np.exp(-xi**2 / 2)
    if n_max > 1:
        out[1] = math.sqrt(2.0) * xi * out[0]
    for n in range(2, n_max):
        out[n] = math.sqrt(2.0 / n) * xi * out[n - 1] - math.sqrt((n - 1) / n) * out[n - 2]
    return out


def thermal_weights(n_mean_phonon: float, cutoff: int) -> np.ndarray:
    """Occupation weights whose covariance is ``(N+1)/2`` in oscillator units.

    A Boltzmann mixture with ``q = N/(N+2)`` has mean occupation ``N/2`` and
    hence ``<X^2> = <P^2> = (N+1)/2``.
    """
    q = n_mean_phonon / (n_mean_phonon + 2.0)
    n = np.arange(cutoff)
    return (1 - q) * q**n


@dataclass(frozen=True)
class GridDensity:
    """Density operator sampled on a grid; ``matrix`` is the operator on grid vectors."""

    grid: Grid1D
    matrix: np.ndarray
    weights: np.ndarray = None

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


def derivative_matrix(grid: Grid1D) -> np.ndarray:
    """Spectral ``-i d/dx`` on the periodic grid."""
    n = grid.points
    f = np.fft.fft(np.eye(n), axis=0)
    return np.fft.ifft(grid.wavenumbers()[:, None] * f, axis=0)


def grid_covariance(rho: np.ndarray, grid: Grid1D) -> np.ndarray:
    """``[[<x^2>, <xp + px>/2], [., <p^2>]]`` of a zero-mean grid density."""
    x = np.diag(grid.x)
    p = derivative_matrix(grid)
    tr = np.trace(rho).real
    xx = np.trace(x @ x @ rho).real / tr
    pp = np.trace(p @ rho @ p.conj().T).real / tr
    xp = np.trace((x @ p + p @ x) @ rho).real / (2 * tr)
    return np.array([[xx, xp], [xp, pp]])


def thermal_state(params: ThermalParams, cutoff: int, grid: Grid1D, tail_tol: float = 1e-8) -> GridDensity:
    if cutoff < 1:
        raise InvalidParameterError(f"cutoff must be >= 1, got {cutoff}")
    q = params.N / (params.N + 2.0)
    if q**cutoff >= tail_tol:
        raise InvalidParameterError(f"cutoff {cutoff} leaves weight {q**cutoff:.3g} >= {tail_tol}")
    width = 1.0 / math.sqrt(params.m_omega)
    if width < 2 * grid.spacing or 4 * width > grid.half_width:
        raise ResolutionError(f"oscillator length {width:.3g} not resolved by the grid")
    w = thermal_weights(params.N, cutoff)
    w = w[w > 0]
    phi = hermite_functions(len(w), params.m_omega, grid.x) * math.sqrt(grid.spacing)
    rho = (phi.T * w) @ phi
    return GridDensity(grid, rho.astype(np.complex128), w)


def gaussian_fidelity_to_ground(rho: np.ndarray, m_omega: float, grid: Grid1D) -> float:
    """``<0| rho |0> / tr rho`` with ``|0>`` the oscillator ground state on the grid."""
    g = hermite_functions(1, m_omega, grid.x)[0] * math.sqrt(grid.spacing)
    return float((g @ rho @ g).real / np.trace(rho).real)
