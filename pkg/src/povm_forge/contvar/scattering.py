"""Three-particle hard-core scattering network and its Kraus kernels.

Particles 1, 2, 3 start in ``alpha(x) beta(y) psi(z)``.  The collisions act
on the position arguments through integer matrices; after the network the
first particle is read out in position (``x``) and the second in momentum
(``y``), leaving particle 3 in ``K_{x,y} psi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError, ResolutionError, ShapeError
from ..report import CheckReport
from .gates import CoordinateMap, Displacement, apply_cv_gate
from .grid import Grid1D, GridWavefunction, fourier_matrix, product_state

S21 = ((-1, 2, 0), (0, 1, 0), (0, 0, 1))
S23 = ((1, 0, 0), (0, 1, 0), (0, 2, -1))
S31 = ((-1, 0, 2), (0, 1, 0), (0, 0, 1))
R3 = ((1, 0, 0), (0, 1, 0), (0, 0, -1))
# two-particle collision with an extreme mass ratio: psi(x, y) -> psi(x, 2x - y)
TWO_PARTICLE = ((1, 0), (2, -1))


@dataclass(frozen=True)
class ScatteringNetwork:
    s21: CoordinateMap
    s23: CoordinateMap
    s31: CoordinateMap
    r3: CoordinateMap
    composite: CoordinateMap

    @property
    def sequence(self) -> tuple:
        """Gate order whose successive application equals ``psi(A v)``.

        Substitutions compose in reverse: applying ``psi -> psi(P v)`` and then
        ``psi -> psi(Q v)`` yields ``psi(P Q v)``.
        """
        return (self.s31, self.s23, self.s21, self.r3)


def scattering_compose() -> ScatteringNetwork:
    """``A = S31 S23 S21 R3`` as an exact integer product."""
    mats = [np.array(m, dtype=np.int64) for m in (S31, S23, S21, R3)]
    a = mats[0] @ mats[1] @ mats[2] @ mats[3]
    cm = lambda m: CoordinateMap(tuple(tuple(int(v) for v in row) for row in m))  # noqa: E731
    return ScatteringNetwork(cm(S21), cm(S23), cm(S31), cm(R3), cm(a))


def two_particle_map() -> CoordinateMap:
    return CoordinateMap(TWO_PARTICLE)


# -- kernels -----------------------------------------------------------------


@dataclass(frozen=True)
class KernelOperator:
    """Integral operator ``(K psi)(z) = sum_w k(z, w) psi(w) dx`` on one grid."""

    grid: Grid1D
    kernel: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.kernel, dtype=np.complex128)
        if k.shape != (self.grid.points, self.grid.points):
            raise ShapeError(f"kernel of shape {k.shape} does not match the grid")
        object.__setattr__(self, "kernel", k)

    @property
    def matrix(self) -> np.ndarray:
        return self.kernel * self.grid.spacing

    def apply(self, psi: GridWavefunction) -> GridWavefunction:
        if psi.ndim != 1 or psi.grids[0] != self.grid:
            raise ShapeError("kernel and wavefunction live on different grids")
        return GridWavefunction((self.grid,), self.matrix @ psi.values, unnormalized=True)

    @classmethod
    def from_matrix(cls, grid: Grid1D, mat) -> "KernelOperator":
        return cls(grid, np.asarray(mat) / grid.spacing)


def _grid_of(*wfs: GridWavefunction) -> Grid1D:
    grid = wfs[0].grids[0]
    for wf in wfs:
        if wf.ndim != 1 or wf.grids[0] != grid:
            raise ShapeError("inputs must be one-coordinate wavefunctions on a common grid")
    return grid


def scattering_kraus_kernel(alpha: GridWavefunction, beta: GridWavefunction, x: float, y: float) -> KernelOperator:
    """``k_{x,y}(z, w) = (8 pi)^{-1/2} alpha(x + w + z) beta((w - z)/2) exp(-i y (w - z)/2)``."""
    grid = _grid_of(alpha, beta)
    z = grid.x[:, None]
    w = grid.x[None, :]
    k = (
        alpha.evaluate(x + w + z)
        * beta.evaluate((w - z) / 2)
        * np.exp(-0.5j * y * (w - z))
        / math.sqrt(8 * math.pi)
    )
    return KernelOperator(grid, k)


def displacement_matrix(grid: Grid1D, s: float, t: float) -> np.ndarray:
    """Matrix of ``U_{s,t}`` on the grid (columns are images of unit samples)."""
    eye = GridWavefunction((grid, grid), np.eye(grid.points), unnormalized=True)
    return apply_cv_gate(eye, Displacement(s, t, 0)).values


def covariance_displacement(x: float, y: float) -> tuple:
    """``(s, t)`` with ``K_{x,y} = U_{s,t} K_{0,0} U_{s,t}^dag``."""
    return -y / 2, -x / 2


def check_kernel_covariance(alpha, beta, points, tol: float = 1e-6) -> CheckReport:
    """Compare ``K_{x,y}`` with the displaced ``K_{0,0}`` as grid operators."""
    grid = _grid_of(alpha, beta)
    k00 = scattering_kraus_kernel(alpha, beta, 0.0, 0.0).matrix
    scale = np.abs(k00).max()
    errors = {}
    for x, y in points:
        s, t = covariance_displacement(x, y)
        u = displacement_matrix(grid, s, t)
        rhs = u @ k00 @ u.conj().T
        lhs = scattering_kraus_kernel(alpha, beta, x, y).matrix
        errors[f"({x:g},{y:g})"] = float(np.abs(lhs - rhs).max() / scale)
    worst = max(errors.values())
    return CheckReport("kernel_covariance", worst, tol, worst <= tol, errors)


def scattering_circuit_kraus(alpha, beta, psi, x: float, y: float) -> GridWavefunction:
    """Run the network on the three-particle grid state and condition on ``(x, y)``.

    This is the circuit-side counterpart of :func:`scattering_kraus_kernel`:
    the composite coordinate map, a Fourier transform on particle 2, and a
    position read-out of particles 1 and 2 at the grid points nearest ``x``, ``y``.
    """
    grid = _grid_of(alpha, beta, psi)
    state = product_state(alpha, beta, psi)
    state = apply_cv_gate(state, scattering_compose().composite)
    kx, _, _ = grid.snap(x)
    ky, _, _ = grid.snap(y)
    row = state.values[kx]  # (y, z) after the position read-out of particle 1
    out = fourier_matrix(grid)[ky] @ row
    return GridWavefunction((grid,), out, unnormalized=True)


# -- positivity ---------------------------------------------------------------


def positivity_parameters(sigma1: float, sigma2: float) -> tuple:
    """``(a, b)`` of the Gaussian kernel ``exp(-a (z+w)^2 - b (z-w)^2)`` of ``K_{0,0}``."""
    _check_widths(sigma1, sigma2)
    return 1.0 / (2 * sigma1**2), 1.0 / (8 * sigma2**2)


def in_positivity_regime(sigma1: float, sigma2: float) -> bool:
    return sigma1 >= 2 * sigma2 - 1e-12


def _check_widths(sigma1, sigma2):
    if not (sigma1 > 0 and sigma2 > 0):
        raise InvalidParameterError(f"widths must be positive, got {sigma1}, {sigma2}")


def _eig_report(name, mat, regime_positive: bool, tol_rel: float = 1e-8, details=None) -> CheckReport:
    evals = np.linalg.eigvalsh((mat + mat.conj().T) / 2)
    lo, hi = float(evals[0]), float(evals[-1])
    scale = max(abs(hi), abs(lo))
    psd = lo >= -tol_rel * scale
    info = {"min_eigenvalue": lo, "max_eigenvalue": hi, "psd": bool(psd), "regime_positive": regime_positive}
    info.update(details or {})
    violation = max(0.0, -lo / scale) if scale else 0.0
    return CheckReport(name, violation, tol_rel, psd, info)


def kernel_positivity(a: float, b: float, d: float, grid: Grid1D) -> CheckReport:
    """Smallest eigenvalue of ``d exp(-a (x+y)^2 - b (x-y)^2)`` on ``grid``.

    The report passes when the kernel is PSD to ``1e-8`` of its largest
    eigenvalue; ``details['regime_positive']`` says whether ``b > a >= 0``,
    the regime where positivity is guaranteed.
    """
    if a < 0 or not d > 0:
        raise InvalidParameterError(f"need a >= 0 and d > 0, got a={a}, d={d}")
    for width in (a, b):
        if width > 0 and 1.0 / math.sqrt(width) < 2 * grid.spacing:
            raise ResolutionError(f"kernel width 1/sqrt({width}) not resolved by spacing {grid.spacing}")
    x = grid.x
    k = d * np.exp(-a * np.add.outer(x, x) ** 2 - b * np.subtract.outer(x, x) ** 2)
    return _eig_report("kernel_positivity", k * grid.spacing, b > a >= 0, details={"a": a, "b": b, "d": d})


def k00_positivity(alpha, beta, sigma1: float, sigma2: float) -> CheckReport:
    k00 = scattering_kraus_kernel(alpha, beta, 0.0, 0.0).matrix
    return _eig_report(
        "k00_positivity", k00, in_positivity_regime(sigma1, sigma2),
        details={"sigma1": sigma1, "sigma2": sigma2},
    )


# -- the POVM seed mu = K_00^2 -------------------------------------------------


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    evals = np.linalg.eigvalsh((a - b + (a - b).conj().T) / 2)
    return float(0.5 * np.abs(evals).sum())


def mu_operator(alpha, beta) -> np.ndarray:
    k00 = scattering_kraus_kernel(alpha, beta, 0.0, 0.0).matrix
    return k00 @ k00


def reduced_state(alpha, beta) -> np.ndarray:
    """Grid partial trace of ``phi(x, y) = alpha(x + y) beta((x - y)/2)`` over ``y``."""
    grid = _grid_of(alpha, beta)
    x, y = grid.x[:, None], grid.x[None, :]
    phi = alpha.evaluate(x + y) * beta.evaluate((x - y) / 2)
    dx = grid.spacing
    return (phi @ phi.conj().T) * dx * dx


def mu_consistency(alpha, beta, sigma1: float, sigma2: float, tol: float = 1e-3) -> CheckReport:
    """Trace distance between the unit-trace ``mu`` and the reduced two-particle state.

    ``K_{0,0}`` carries the ``(8 pi)^{-1/2}`` prefactor of the scattering
    kernel, so ``2 pi mu`` has trace ``1/4``; ``details`` records that trace
    before normalisation.
    """
    mu = mu_operator(alpha, beta)
    rho = reduced_state(alpha, beta)
    tr_mu = float(np.trace(mu).real)
    dist = trace_distance(mu / tr_mu, rho / np.trace(rho).real)
    purity = float(np.trace(rho @ rho).real / np.trace(rho).real ** 2)
    return CheckReport(
        "mu_consistency", dist, tol, dist < tol,
        {
            "trace_2pi_mu": 2 * math.pi * tr_mu,
            "trace_reduced": float(np.trace(rho).real),
            "purity": purity,
            "regime_positive": in_positivity_regime(sigma1, sigma2),
        },
    )
