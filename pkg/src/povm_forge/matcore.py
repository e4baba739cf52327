"""Dense complex linear algebra and the structured operators used throughout.

Phase convention: ``omega(m) = exp(-2*pi*i/m)``.  This is the *negative*
exponent, so ``fourier(m)`` is the complex conjugate of the matrix returned by
``numpy.fft.ifft`` scaled to be unitary.  Every operator in the package
(shift, phase, Fourier, R-phase) follows this sign.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import (
    InvalidDimensionError,
    NotIsometryError,
    NotPSDError,
    ShapeError,
)
from .report import CheckReport

DEFAULT_TOL = 1e-10

SHIFT = "Shift"
PHASE = "Phase"
FOURIER = "Fourier"
RPHASE = "RPhase"


def omega(m: int) -> complex:
    """Primitive root ``exp(-2*pi*i/m)``."""
    if m < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {m}")
    return complex(np.exp(-2j * np.pi / m))


def _omega_powers(m: int, exponents) -> np.ndarray:
    # reduce exponents mod m first so large powers stay exact
    e = np.mod(np.asarray(exponents, dtype=np.int64), m)
    return np.exp(-2j * np.pi * e / m)


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ShapeError(f"expected a matrix, got array of shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ShapeError("matrix contains NaN or Inf entries")
    return m


def shift(m: int, power: int = 1) -> np.ndarray:
    """Cyclic shift ``X_m |j> = |j+1 mod m>`` raised to ``power``."""
    if m < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {m}")
    out = np.zeros((m, m), dtype=np.complex128)
    j = np.arange(m)
    out[(j + power) % m, j] = 1.0
    return out


def phase(m: int, power: int = 1) -> np.ndarray:
    """Diagonal clock ``Z_m = diag(omega_m^j)`` raised to ``power``."""
    if m < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {m}")
    return np.diag(_omega_powers(m, power * np.arange(m)))


def fourier(m: int, power: int = 1) -> np.ndarray:
    """Unitary ``F_m = m^{-1/2} sum_{jk} omega_m^{jk} |j><k|`` raised to ``power``.

    ``F_m^4 = I`` so the power is reduced mod 4; ``power=-1`` is ``F_m^dagger``.
    """
    if m < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {m}")
    j = np.arange(m)
    f = _omega_powers(m, np.outer(j, j)) / math.sqrt(m)
    p = power % 4
    out = np.eye(m, dtype=np.complex128)
    for _ in range(p):
        out = f @ out
    return out


def rphase(n: int, power: int = 1) -> np.ndarray:
    """Single-qubit ``R_n = diag(1, omega_n)`` raised to ``power``."""
    if n < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {n}")
    return np.diag(_omega_powers(n, [0, power]))


_KINDS = {SHIFT: shift, PHASE: phase, FOURIER: fourier, RPHASE: rphase}


def structured_operator(kind: str, m: int, power: int = 1) -> np.ndarray:
    """Return one of the named operators ``Shift``, ``Phase``, ``Fourier``, ``RPhase``."""
    try:
        build = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown operator kind {kind!r}; expected one of {sorted(_KINDS)}")
    return build(m, power)


def kron(*mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = np.kron(out, as_matrix(m))
    return out


def direct_sum(*mats) -> np.ndarray:
    mats = [as_matrix(m) for m in mats]
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols), dtype=np.complex128)
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def dagger(a) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def hermiticity_error(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def psd_sqrt(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root by eigendecomposition.

    Eigenvalues in ``[-tol, 0)`` are clipped to zero, as are eigenvalues
    below the double-precision noise floor of the decomposition
    (``64 * eps * max|lambda|``) so that rank-deficient inputs get exact
    zeros instead of ``sqrt(1e-17)``-sized garbage.
    """
    if tol < 0:
        raise ValueError("tolerance must be >= 0")
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"psd_sqrt needs a square matrix, got {a.shape}")
    herr = hermiticity_error(a)
    if herr > tol:
        raise ShapeError(f"matrix is not Hermitian (max deviation {herr:.3e} > {tol:.1e})")
    h = 0.5 * (a + a.conj().T)
    evals, evecs = np.linalg.eigh(h)
    if evals.size and evals[0] < -tol:
        raise NotPSDError(f"matrix has eigenvalue {evals[0]:.3e} < -{tol:.1e}")
    floor = 64 * np.finfo(float).eps * float(np.max(np.abs(evals), initial=0.0))
    evals = np.where(evals <= floor, 0.0, evals)
    root = (evecs * np.sqrt(evals)) @ evecs.conj().T
    return 0.5 * (root + root.conj().T)


def isometry_error(m) -> float:
    m = as_matrix(m)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[1]))))


def complete_isometry_to_unitary(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Append orthonormal columns to an isometry until it is square.

    Candidates are the standard basis vectors taken in index order; each is
    orthogonalised (two passes of classical Gram-Schmidt) against all columns
    kept so far and appended if its residual norm exceeds ``tol``.  The
    result is deterministic and its leading columns are the input, bit for bit.
    """
    m = as_matrix(m)
    rows, cols = m.shape
    if cols > rows:
        raise NotIsometryError(f"{rows}x{cols} matrix cannot have orthonormal columns")
    err = isometry_error(m) if cols else 0.0
    if err > tol:
        raise NotIsometryError(f"columns are not orthonormal (max |M^dag M - I| = {err:.3e})")
    out = np.zeros((rows, rows), dtype=np.complex128)
    out[:, :cols] = m
    k = cols
    for idx in range(rows):
        if k == rows:
            break
        v = np.zeros(rows, dtype=np.complex128)
        v[idx] = 1.0
        basis = out[:, :k]
        for _ in range(2):
            v = v - basis @ (basis.conj().T @ v)
        norm = np.linalg.norm(v)
        if norm > tol:
            out[:, k] = v / norm
            k += 1
    if k != rows:
        raise NotIsometryError("orthonormal completion failed to span the space")
    return out


def unitarity_error(a) -> float:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"unitarity check needs a square matrix, got {a.shape}")
    return float(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0]))))


def assert_unitary(a, tol: float = DEFAULT_TOL) -> CheckReport:
    """Report ``max |(a^dag a - I)_ij|``; passes iff it is at most ``tol``."""
    err = unitarity_error(a)
    return CheckReport("unitarity", err, tol, err <= tol)


# -- text format -------------------------------------------------------------
# first line "rows cols", then one "re im" line per entry in row-major order


def format_matrix(a) -> str:
    a = as_matrix(a)
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    for z in a.reshape(-1):
        lines.append(f"{z.real:.17g} {z.imag:.17g}")
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    tokens = text.split("\n")
    header = tokens[0].split()
    if len(header) != 2:
        raise ShapeError("matrix header must be 'rows cols'")
    rows, cols = int(header[0]), int(header[1])
    body = [ln.split() for ln in tokens[1:] if ln.strip()]
    if len(body) != rows * cols:
        raise ShapeError(f"expected {rows * cols} entries, found {len(body)}")
    vals = np.array([complex(float(re), float(im)) for re, im in body], dtype=np.complex128)
    return as_matrix(vals.reshape(rows, cols))


def write_matrix(path, a) -> None:
    Path(path).write_text(format_matrix(a))


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())
