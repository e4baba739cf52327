"""Outcome statistics of the covariant measurement ``Pi_{s,t} = U_{s,t} mu U_{s,t}^dag``."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ResolutionError
from .grid import GridWavefunction, apply_fourier, index_shift
from .scattering import in_positivity_regime, mu_operator

MAX_TRUNCATION = 0.05


@dataclass
class OutcomeStatistics:
    delta_x: float
    delta_p: float
    total_probability: float
    t: np.ndarray = field(repr=False)
    s: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)
    positivity_regime: bool = True

    @property
    def product(self) -> float:
        return self.delta_x * self.delta_p

    def write_csv(self, path, stride: int = 1) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "s", "probability_density"])
            for i in range(0, len(self.t), stride):
                for j in range(0, len(self.s), stride):
                    w.writerow([f"{self.t[i]:.12g}", f"{self.s[j]:.12g}", f"{self.density[i, j]:.12g}"])


def outcome_density(mu: np.ndarray, psi: GridWavefunction) -> np.ndarray:
    """``p(t, s) = <U_{s,t}^dag psi | mu' | U_{s,t}^dag psi>`` on the full grid.

    ``mu'`` is ``mu`` scaled to the unit-trace state divided by ``2 pi``, so
    that ``p`` integrates to one over ``ds dt``.  Each eigenvector ``e`` of
    ``mu`` contributes ``|int conj(e(u)) exp(ius) psi(u + t) du|^2``, evaluated
    for all ``s`` at once with a Fourier transform.
    """
    grid = psi.grids[0]
    dx, n, c = grid.spacing, grid.points, grid.center
    evals, evecs = np.linalg.eigh((mu + mu.conj().T) / 2)
    evals = evals / evals.sum()
    keep = evals > 1e-14 * evals.max()
    # shifted[t, u] = psi(u + t)
    shifted = np.stack([index_shift(psi.values, 0, k - c) for k in range(n)])
    density = np.zeros((n, n))
    for lam, e in zip(evals[keep], evecs[:, keep].T):
        e_fn = e / math.sqrt(dx)  # grid vector -> sampled function
        amp = apply_fourier(np.conj(e_fn)[None, :] * shifted, grid, axis=1, inverse=True)
        # the (2 pi)^{-1/2} inside apply_fourier supplies the 1/(2 pi) of Pi_{s,t}
        density += lam * np.abs(amp) ** 2
    return density


def _moments(axis_vals, marginal, d):
    p = marginal / (marginal.sum() * d)
    mean = np.sum(axis_vals * p) * d
    var = np.sum((axis_vals - mean) ** 2 * p) * d
    return mean, math.sqrt(var)


def outcome_statistics(alpha, beta, psi: GridWavefunction, sigma1: float = None, sigma2: float = None) -> OutcomeStatistics:
    """Spreads of the position (``t``) and momentum (``s``) outcome marginals."""
    grid = psi.grids[0]
    mu = mu_operator(alpha, beta)
    density = outcome_density(mu, psi)
    dx = grid.spacing
    total = float(density.sum() * dx * dx)
    if abs(1.0 - total) > MAX_TRUNCATION:
        raise ResolutionError(f"outcome window holds only {total:.3f} of the probability; widen the grid")
    _, dt = _moments(grid.x, density.sum(axis=1), dx)
    _, ds = _moments(grid.x, density.sum(axis=0), dx)
    regime = True if sigma1 is None else in_positivity_regime(sigma1, sigma2)
    return OutcomeStatistics(dt, ds, total, grid.x, grid.x, density, regime)
