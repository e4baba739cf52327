"""POVM data model, the cyclic and Heisenberg-Weyl families, and Kraus checks.

Outcome ordering is fixed: cyclic outcomes ascend in ``j``; Heisenberg-Weyl
outcomes are the pairs ``(j, k)`` in lexicographic order with ``j`` major,
so the flat index of ``(j, k)`` is ``j * d + k``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Sequence

import numpy as np

from . import matcore as mc
from .errors import (
    InvalidParameterError,
    InvalidPovmError,
    InvalidSeedOperatorError,
    NotUnitaryError,
    ShapeError,
)
from .report import CheckReport

POVM_TOL = 1e-9


@dataclass(frozen=True)
class Povm:
    """Family of PSD operators summing to the identity on ``C^dim``."""

    dim: int
    operators: tuple
    labels: tuple = ()

    def __post_init__(self):
        ops = tuple(mc.as_matrix(op) for op in self.operators)
        if not ops:
            raise InvalidPovmError("a POVM needs at least one operator")
        for op in ops:
            if op.shape != (self.dim, self.dim):
                raise ShapeError(f"operator of shape {op.shape} on a {self.dim}-dim space")
        object.__setattr__(self, "operators", ops)
        labels = tuple(self.labels) if self.labels else tuple(range(len(ops)))
        if len(labels) != len(ops):
            raise ShapeError("one label per operator required")
        object.__setattr__(self, "labels", labels)

        herm = max(mc.hermiticity_error(op) for op in ops)
        if herm > POVM_TOL:
            raise InvalidPovmError(f"operator not Hermitian (deviation {herm:.3e})")
        low = min(np.linalg.eigvalsh(0.5 * (op + op.conj().T))[0] for op in ops)
        if low < -POVM_TOL:
            raise InvalidPovmError(f"operator has negative eigenvalue {low:.3e}")
        comp = completeness_error(ops)
        if comp > POVM_TOL:
            raise InvalidPovmError(f"operators sum to I only within {comp:.3e}")

    def __len__(self) -> int:
        return len(self.operators)

    def index(self, label: Hashable) -> int:
        return self.labels.index(label)

    def probabilities(self, psi) -> np.ndarray:
        """Born-rule probabilities ``<psi|Pi_j|psi>`` in outcome order."""
        psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
        return np.array([np.vdot(psi, op @ psi).real for op in self.operators])


def completeness_error(operators) -> float:
    total = sum(np.asarray(op, dtype=np.complex128) for op in operators)
    return float(np.max(np.abs(total - np.eye(total.shape[0]))))


def check_completeness(operators, tol: float = POVM_TOL) -> CheckReport:
    err = completeness_error(operators)
    return CheckReport("povm_completeness", err, tol, err <= tol)


# -- families ----------------------------------------------------------------


def cyclic_povm(n: int) -> Povm:
    """Qubit POVM ``Pi_j = (1/n) [[1, w^-j], [w^j, 1]]`` with ``w = exp(-2 pi i/n)``."""
    if n < 2:
        raise InvalidParameterError(f"cyclic POVM needs n >= 2, got {n}")
    ops = []
    for j in range(n):
        r = mc.rphase(n, j)
        ops.append(r @ np.ones((2, 2), dtype=np.complex128) @ r.conj().T / n)
    return Povm(2, tuple(ops), tuple(range(n)))


def validate_seed(mu, d: int, tol: float = POVM_TOL) -> np.ndarray:
    mu = mc.as_matrix(mu)
    if mu.shape != (d, d):
        raise ShapeError(f"seed operator must be {d}x{d}, got {mu.shape}")
    if mc.hermiticity_error(mu) > tol:
        raise InvalidSeedOperatorError("seed operator is not Hermitian")
    if np.linalg.eigvalsh(0.5 * (mu + mu.conj().T))[0] < -tol:
        raise InvalidSeedOperatorError("seed operator is not PSD")
    tr = np.trace(mu)
    if abs(tr - 1.0 / d) > tol:
        raise InvalidSeedOperatorError(f"seed operator trace {tr.real:.6g} != 1/{d}")
    return mu


def hw_conjugator(d: int, j: int, k: int) -> np.ndarray:
    """``Z^k X^j``: maps the seed to outcome ``(j, k)`` by conjugation."""
    return mc.phase(d, k) @ mc.shift(d, j)


def hw_povm(d: int, mu) -> Povm:
    """The ``d^2`` operators ``Z^k X^j mu X^-j Z^-k``, labelled ``(j, k)``."""
    if d < 2:
        raise InvalidParameterError(f"Heisenberg-Weyl POVM needs d >= 2, got {d}")
    mu = validate_seed(mu, d)
    ops, labels = [], []
    for j in range(d):
        for k in range(d):
            t = hw_conjugator(d, j, k)
            ops.append(t @ mu @ t.conj().T)
            labels.append((j, k))
    return Povm(d, tuple(ops), tuple(labels))


def random_seed_operator(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random PSD ``mu`` with trace ``1/d`` (full rank unless ``rank`` given)."""
    r = d if rank is None else rank
    g = rng.normal(size=(d, r)) + 1j * rng.normal(size=(d, r))
    mu = g @ g.conj().T
    mu = 0.5 * (mu + mu.conj().T)
    return mu / (np.trace(mu).real * d)


def build_M(povm: Povm) -> np.ndarray:
    """Stack ``sqrt(Pi_j)`` vertically in outcome order: an ``(n d) x d`` isometry."""
    return np.vstack([mc.psd_sqrt(op) for op in povm.operators])


# -- symmetry ----------------------------------------------------------------


@dataclass(frozen=True)
class SymmetryAction:
    """Generators ``sigma[g]`` (unitaries) and outcome permutations ``pi[g]``.

    ``pi[g][j]`` is the index of the outcome that ``Pi_j`` is mapped to.
    """

    group: str
    sigma: tuple
    pi: tuple
    order: int | None = None

    def __post_init__(self):
        sig = tuple(mc.as_matrix(s) for s in self.sigma)
        pis = tuple(np.asarray(p, dtype=np.int64) for p in self.pi)
        if len(sig) != len(pis):
            raise ShapeError("need one permutation per generator")
        for s in sig:
            if mc.unitarity_error(s) > POVM_TOL:
                raise NotUnitaryError("symmetry generator is not unitary")
        for p in pis:
            if sorted(p.tolist()) != list(range(len(p))):
                raise InvalidParameterError("outcome map is not a bijection")
        object.__setattr__(self, "sigma", sig)
        object.__setattr__(self, "pi", pis)


def cyclic_action(n: int) -> SymmetryAction:
    return SymmetryAction(f"Cyclic({n})", (mc.rphase(n),), ((np.arange(n) + 1) % n,), order=n)


def hw_action(d: int) -> SymmetryAction:
    j, k = np.divmod(np.arange(d * d), d)
    x_perm = ((j + 1) % d) * d + k
    z_perm = j * d + (k + 1) % d
    return SymmetryAction(
        f"HeisenbergWeyl({d})", (mc.shift(d), mc.phase(d)), (x_perm, z_perm), order=d**3
    )


def group_closure(action: SymmetryAction, limit: int = 100000) -> SymmetryAction:
    """All group elements generated by ``action`` (up to a global phase of sigma)."""

    def key(s, p):
        flat = s.reshape(-1)
        pivot = flat[np.argmax(np.abs(flat) > 1e-8)]
        s_norm = s * (abs(pivot) / pivot)
        return p.tobytes() + (np.round(s_norm, 8) + 0.0).tobytes()

    dim = action.sigma[0].shape[0]
    n = len(action.pi[0])
    start = (np.eye(dim, dtype=np.complex128), np.arange(n))
    seen = {key(*start): start}
    frontier = [start]
    while frontier:
        nxt = []
        for s, p in frontier:
            for gs, gp in zip(action.sigma, action.pi):
                el = (gs @ s, gp[p])
                k = key(*el)
                if k not in seen:
                    seen[k] = el
                    nxt.append(el)
                    if len(seen) > limit:
                        raise InvalidParameterError("group closure exceeded size limit")
        frontier = nxt
    sig, pis = zip(*seen.values())
    return SymmetryAction(action.group, sig, pis, order=action.order)


def check_symmetry(povm: Povm, action: SymmetryAction, tol: float = POVM_TOL) -> CheckReport:
    """``max_{g,j} || sigma(g) Pi_j sigma(g)^dag - Pi_{pi(g) j} ||_max``."""
    for s, p in zip(action.sigma, action.pi):
        if s.shape != (povm.dim, povm.dim) or len(p) != len(povm):
            raise ShapeError("symmetry action does not match the POVM dimensions")
    err = 0.0
    for s, p in zip(action.sigma, action.pi):
        for j, op in enumerate(povm.operators):
            err = max(err, float(np.max(np.abs(s @ op @ s.conj().T - povm.operators[p[j]]))))
    return CheckReport(
        f"symmetry[{action.group}]", err, tol, err <= tol, {"generators": len(action.sigma)}
    )


# -- Kraus operators ---------------------------------------------------------


@dataclass(frozen=True)
class KrausFamily:
    operators: tuple
    labels: tuple = ()

    def __post_init__(self):
        ops = tuple(mc.as_matrix(a) for a in self.operators)
        object.__setattr__(self, "operators", ops)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(len(ops))))

    def completeness_error(self) -> float:
        total = sum(a.conj().T @ a for a in self.operators)
        return float(np.max(np.abs(total - np.eye(total.shape[0]))))


def kraus_operators(u, phi, d: int, outcomes: int, labels: Sequence = ()) -> KrausFamily:
    """``A_j = (<j| (x) I_d) u (|phi> (x) I_d)`` for each ancilla outcome ``j``."""
    u = mc.as_matrix(u)
    phi = np.asarray(phi, dtype=np.complex128).reshape(-1)
    if u.shape != (outcomes * d, outcomes * d):
        raise ShapeError(f"unitary of shape {u.shape} does not act on {outcomes} x {d}")
    if phi.shape != (outcomes,):
        raise ShapeError(f"ancilla state has length {phi.size}, expected {outcomes}")
    if mc.unitarity_error(u) > POVM_TOL:
        raise NotUnitaryError("coupling unitary is not unitary")
    blocks = u.reshape(outcomes, d, outcomes, d)
    ops = np.einsum("jxay,a->jxy", blocks, phi)
    return KrausFamily(tuple(ops), tuple(labels))


def check_minimal_disturbance(kraus: KrausFamily, povm: Povm, tol: float = POVM_TOL) -> CheckReport:
    """Compare each ``A_j`` against ``sqrt(Pi_j)``; also record which ``A_j`` are PSD."""
    if len(kraus.operators) != len(povm):
        raise ShapeError(f"{len(kraus.operators)} Kraus operators for {len(povm)} outcomes")
    err = 0.0
    psd = []
    for a, op in zip(kraus.operators, povm.operators):
        if a.shape != op.shape:
            raise ShapeError("Kraus operator and POVM element differ in shape")
        err = max(err, float(np.max(np.abs(a - mc.psd_sqrt(op)))))
        herm = mc.hermiticity_error(a)
        psd.append(bool(herm <= tol and np.linalg.eigvalsh(0.5 * (a + a.conj().T))[0] >= -tol))
    return CheckReport("minimal_disturbance", err, tol, err <= tol, {"kraus_psd": psd})


def povm_from_kraus(kraus: KrausFamily) -> Povm:
    """POVM ``Pi_j = A_j^dag A_j`` realised by a Kraus family (``A_j^2`` when PSD)."""
    d = kraus.operators[0].shape[0]
    return Povm(d, tuple(a.conj().T @ a for a in kraus.operators), kraus.labels)


# -- JSON export -------------------------------------------------------------
# {dim, outcomes: [{label, matrix_file}]}; matrices in the matcore text format


def _label_json(label):
    return list(label) if isinstance(label, tuple) else label


def write_povm(povm: Povm, directory, stem: str = "povm") -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    outcomes = []
    for i, (label, op) in enumerate(zip(povm.labels, povm.operators)):
        name = f"{stem}_{i:04d}.mat"
        mc.write_matrix(directory / name, op)
        outcomes.append({"label": _label_json(label), "matrix_file": name})
    path = directory / f"{stem}.json"
    path.write_text(json.dumps({"dim": povm.dim, "outcomes": outcomes}, indent=2) + "\n")
    return path


def read_povm(path) -> Povm:
    path = Path(path)
    doc = json.loads(path.read_text())
    ops, labels = [], []
    for entry in doc["outcomes"]:
        ops.append(mc.read_matrix(path.parent / entry["matrix_file"]))
        lab = entry["label"]
        labels.append(tuple(lab) if isinstance(lab, list) else lab)
    return Povm(int(doc["dim"]), tuple(ops), tuple(labels))
