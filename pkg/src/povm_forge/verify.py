"""Desk-scale verification suite, one function per headline property.

Each ``check_*`` function compares the library path against an oracle that
does not share code with it (closed forms, ``scipy.linalg.sqrtm``, direct
Born-rule sums or independent quadratures) and returns a
:class:`CheckReport`.  :func:`run_suite` runs them all in a fixed order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import contvar as cv
from .circuits import (
    QuditRegister,
    appendix_hw_verify,
    cyclic_dense_circuit,
    cyclic_gate_circuit,
    cyclic_unitary,
    dense_unitary,
    expand_fourier,
    gamma_state,
    gate_count,
    hw_circuit,
    hw_kraus_from_circuit,
    run_measurement,
)
from .povm import completeness_error, cyclic_povm, hw_conjugator, hw_povm, random_seed_operator
from .report import CheckReport


# -- 1: cyclic dilation ------------------------------------------------------


def cyclic_sqrt_closed_form(n: int, j: int) -> np.ndarray:
    """``sqrt(Pi_j) = sqrt(2/n) |v_j><v_j|`` with ``v_j = (1, w^j)/sqrt2``."""
    w = np.exp(-2j * np.pi * j / n)
    v = np.array([1.0, w]) / math.sqrt(2)
    return math.sqrt(2.0 / n) * np.outer(v, v.conj())


def check_cyclic_dilation(seed: int = 0, n_values=range(2, 17), samples: int = 100, tol: float = 1e-10) -> CheckReport:
    rng = np.random.default_rng(seed)
    errs = {}
    for n in n_values:
        u = cyclic_unitary(n)
        psi = rng.normal(size=(2, samples)) + 1j * rng.normal(size=(2, samples))
        psi /= np.linalg.norm(psi, axis=0)
        inp = np.zeros((2 * n, samples), dtype=np.complex128)
        inp[:2] = psi  # ancilla |0> occupies the first two rows
        out = (u @ inp).reshape(n, 2, samples)
        ref = np.stack([cyclic_sqrt_closed_form(n, j) @ psi for j in range(n)])
        errs[str(n)] = float(np.abs(out - ref).max())
    worst = max(errs.values())
    return CheckReport("cyclic_dilation", worst, tol, worst < tol, {"per_n": errs, "samples": samples})


# -- 2: Fig. 1 gate circuit --------------------------------------------------


def check_cyclic_gate_circuit(m_values=(1, 2, 3, 4), tol: float = 1e-9, max_exponent: float = 2.2) -> CheckReport:
    errs, counts = {}, {}
    for m in m_values:
        circ = cyclic_gate_circuit(m)
        expanded = expand_fourier(circ)
        target = cyclic_unitary(2**m)
        errs[str(m)] = float(
            max(np.abs(dense_unitary(circ) - target).max(), np.abs(dense_unitary(expanded) - target).max())
        )
        counts[str(m)] = gate_count(expanded)
    ms = np.array(list(m_values), dtype=float)
    cs = np.array([counts[str(m)] for m in m_values], dtype=float)
    exponent = float(np.polyfit(np.log(ms), np.log(cs), 1)[0])
    worst = max(errs.values())
    ok = worst < tol and exponent <= max_exponent
    return CheckReport(
        "cyclic_gate_circuit", worst, tol, ok,
        {"per_m": errs, "gate_counts": counts, "fit_exponent": exponent, "max_exponent": max_exponent},
    )


# -- 3: Heisenberg-Weyl minimal disturbance ----------------------------------


def check_hw_minimal_disturbance(seed: int = 0, d_values=(2, 3, 4), samples: int = 10, tol: float = 1e-9,
                                 appendix_tol: float = 1e-10) -> CheckReport:
    rng = np.random.default_rng(seed)
    kraus_err, appendix_err = 0.0, 0.0
    for d in d_values:
        for _ in range(samples):
            mu = random_seed_operator(d, rng)
            root = scipy.linalg.sqrtm(mu)
            ops = hw_kraus_from_circuit(d, mu)
            for j in range(d):
                for k in range(d):
                    t = hw_conjugator(d, j, k)
                    kraus_err = max(kraus_err, float(np.abs(ops[j * d + k] - t @ root @ t.conj().T).max()))
            rep = appendix_hw_verify(d, mu, tol=appendix_tol)
            appendix_err = max(appendix_err, rep.max_error)
    ok = kraus_err < tol and appendix_err < appendix_tol
    return CheckReport(
        "hw_minimal_disturbance", kraus_err, tol, ok,
        {"appendix_max_residual": appendix_err, "appendix_tolerance": appendix_tol, "samples_per_d": samples},
    )


# -- 4: outcome distributions ------------------------------------------------


def _random_qudit(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def check_outcome_distribution(seed: int = 0, tol: float = 1e-10) -> CheckReport:
    rng = np.random.default_rng(seed)
    errs = {}
    for m in (1, 2, 3):
        n = 2**m
        povm = cyclic_povm(n)
        psi = _random_qudit(rng, 2)
        reg = QuditRegister((2,) * m, np.eye(n)[0]).kron(QuditRegister((2,), psi))
        res = run_measurement(cyclic_gate_circuit(m), reg)
        # labels are bit tuples, wire 0 most significant
        idx = [int("".join(map(str, lab)), 2) for lab in res.labels]
        born = [np.vdot(psi, povm.operators[j] @ psi).real for j in idx]
        errs[f"cyclic_gates_m{m}"] = float(np.abs(res.probabilities - born).max())
    for n in (3, 5, 6):
        povm = cyclic_povm(n)
        psi = _random_qudit(rng, 2)
        reg = QuditRegister((n,), np.eye(n)[0]).kron(QuditRegister((2,), psi))
        res = run_measurement(cyclic_dense_circuit(n), reg)
        born = [np.vdot(psi, povm.operators[lab[0]] @ psi).real for lab in res.labels]
        errs[f"cyclic_dense_n{n}"] = float(np.abs(res.probabilities - born).max())
    for d in (2, 3, 4):
        mu = random_seed_operator(d, rng)
        povm = hw_povm(d, mu)
        psi = _random_qudit(rng, d)
        res = run_measurement(hw_circuit(d), gamma_state(mu, d).kron(QuditRegister((d,), psi)))
        born = [np.vdot(psi, povm.operators[povm.index(tuple(lab))] @ psi).real for lab in res.labels]
        errs[f"hw_d{d}"] = float(np.abs(res.probabilities - born).max())
    worst = max(errs.values())
    return CheckReport("outcome_distribution", worst, tol, worst < tol, errs)


def check_povm_completeness(inject_perturbation: bool = False, tol: float = 1e-9) -> CheckReport:
    """``sum_j Pi_j = I`` for both families; the hook scales one element by 1.01."""
    errs = {}
    rng = np.random.default_rng(0)
    families = {f"cyclic_n{n}": list(cyclic_povm(n).operators) for n in (2, 3, 8)}
    for d in (2, 3):
        families[f"hw_d{d}"] = list(hw_povm(d, random_seed_operator(d, rng)).operators)
    for name, ops in families.items():
        if inject_perturbation:
            ops[0] = 1.01 * ops[0]
        errs[name] = completeness_error(ops)
    worst = max(errs.values())
    return CheckReport(
        "povm_completeness", worst, tol, worst <= tol, {"per_family": errs, "perturbed": inject_perturbation}
    )


# -- 5: continuous circuit versus the coin oracle ----------------------------


def check_cv_circuit(seed: int = 0, points: int = 256, half_width: float = 10.0, samples: int = 10,
                     lattice_extent: float = 2.0, lattice_steps: int = 5, tol: float = 1e-3) -> CheckReport:
    rng = np.random.default_rng(seed)
    grid = cv.Grid1D(half_width, points)
    alpha = cv.gaussian_wavefn(1.0, grid)
    lattice = cv.outcome_lattice(lattice_extent, lattice_steps)
    worst, snap = 0.0, 0.0
    for _ in range(samples):
        psi = cv.random_smooth_wavefn(grid, rng)
        rep = cv.check_circuit_vs_oracle(alpha, psi, lattice, tol)
        worst = max(worst, rep.max_error)
        snap = max(snap, rep.details["max_snap_distance"])
    return CheckReport(
        "cv_circuit_vs_coin_oracle", worst, tol, worst < tol,
        {"points": points, "half_width": half_width, "samples": samples,
         "lattice": [lattice_extent, lattice_steps], "max_snap_distance": snap},
    )


# -- 6: scattering network ---------------------------------------------------


def check_scattering(seed: int = 0, points: int = 256, half_width: float = 10.0) -> CheckReport:
    rng = np.random.default_rng(seed)
    net = cv.scattering_compose()
    expected = ((1, 2, 2), (0, 1, 0), (0, 2, 1))
    composite_ok = net.composite.matrix == expected
    grid = cv.Grid1D(half_width, points)
    alpha, beta = cv.gaussian_wavefn(2.0, grid), cv.gaussian_wavefn(1.0, grid)
    pts = [tuple(float(v) for v in rng.uniform(-1.0, 1.0, size=2)) for _ in range(5)]
    cov = cv.check_kernel_covariance(alpha, beta, pts, tol=1e-6)
    psd = {}
    for s1, s2 in ((2.0, 1.0), (3.0, 1.0), (1.0, 0.5), (2.5, 0.5)):
        g = _cv_grid_for(s1, points)
        psd[f"{s1:g},{s2:g}"] = cv.k00_positivity(cv.gaussian_wavefn(s1, g), cv.gaussian_wavefn(s2, g), s1, s2)
    one = cv.gaussian_wavefn(1.0, grid)
    indefinite = cv.k00_positivity(one, one, 1.0, 1.0)
    indefinite_ok = indefinite.details["min_eigenvalue"] < -1e-4
    ok = composite_ok and cov.passed and all(r.passed for r in psd.values()) and indefinite_ok
    return CheckReport(
        "scattering", cov.max_error, cov.tolerance, ok,
        {
            "composite": [list(r) for r in net.composite.matrix],
            "composite_exact": composite_ok,
            "covariance": cov.to_dict(),
            "k00_psd": {k: r.details["min_eigenvalue"] / r.details["max_eigenvalue"] for k, r in psd.items()},
            "k00_psd_pass": all(r.passed for r in psd.values()),
            "sigma_1_1_min_eigenvalue": indefinite.details["min_eigenvalue"],
            "sigma_1_1_indefinite": indefinite_ok,
        },
    )


# -- 7: thermal map ----------------------------------------------------------


def _cv_grid_for(sigma1: float, points: int = 256) -> "cv.Grid1D":
    return cv.Grid1D(max(10.0, 4.0 * sigma1), points)


def check_thermal_map(points: int = 256, cutoff: int = 40) -> CheckReport:
    fidelities = {}
    for s1 in (1.0, 2.0, 4.0):
        s2 = s1 / 2
        grid = _cv_grid_for(s1, points)
        tp = cv.thermal_params(s1, s2)
        mu = cv.mu_operator(cv.gaussian_wavefn(s1, grid), cv.gaussian_wavefn(s2, grid))
        fidelities[f"{s1:g}"] = {"N": tp.N, "fidelity": cv.gaussian_fidelity_to_ground(mu, tp.m_omega, grid)}
    ground_ok = all(v["N"] == 0.0 and v["fidelity"] > 0.999 for v in fidelities.values())

    tp = cv.thermal_params(4.0, 1.0)
    closed_ok = tp.m_omega == 0.25 and tp.N == 0.25
    grid = _cv_grid_for(4.0, points)
    mu = cv.mu_operator(cv.gaussian_wavefn(4.0, grid), cv.gaussian_wavefn(1.0, grid))
    rho = cv.thermal_state(tp, cutoff, grid)
    dist = cv.trace_distance(mu / np.trace(mu).real, rho.matrix)
    tol = 5e-3
    return CheckReport(
        "thermal_map", dist, tol, ground_ok and closed_ok and dist < tol,
        {"ground_state": fidelities, "m_omega": tp.m_omega, "N": tp.N, "closed_form_exact": closed_ok,
         "thermal_trace": rho.trace, "cutoff": cutoff},
    )


# -- 8: optics scheme --------------------------------------------------------


def check_optics_scheme(seed: int = 0, points: int = 256, half_width: float = 10.0, samples: int = 3,
                        tol: float = 1e-3) -> CheckReport:
    rng = np.random.default_rng(seed)
    grid = cv.Grid1D(half_width, points)
    alpha, beta = cv.gaussian_wavefn(1.0, grid), cv.gaussian_wavefn(1.5, grid)
    lattice = cv.outcome_lattice(1.0, 3)
    worst = 0.0
    for _ in range(samples):
        rep = cv.check_optics(alpha, beta, cv.random_smooth_wavefn(grid, rng), lattice, tol)
        worst = max(worst, rep.max_error)
    return CheckReport("optics_scheme", worst, tol, worst < tol, {"lattice": [1.0, 3], "samples": samples})


# -- 9: uncertainty product --------------------------------------------------


def check_uncertainty(points: int = 512, half_width: float = 16.0, slack: float = 0.02) -> CheckReport:
    grid = cv.Grid1D(half_width, points)
    products = {}
    for s1 in (1.0, 2.0, 4.0):
        s2 = s1 / 2
        tp = cv.thermal_params(s1, s2)
        # input matched to the oscillator length of mu, where the bound is tight
        psi = cv.gaussian_wavefn(1.0 / math.sqrt(tp.m_omega), grid)
        st = cv.outcome_statistics(cv.gaussian_wavefn(s1, grid), cv.gaussian_wavefn(s2, grid), psi, s1, s2)
        products[f"{s1:g}"] = {"delta_x": st.delta_x, "delta_p": st.delta_p, "product": st.product,
                               "captured_probability": st.total_probability}
    lowest = min(v["product"] for v in products.values())
    shortfall = max(0.0, 1.0 - lowest)
    return CheckReport("uncertainty_product", shortfall, slack, lowest >= 1.0 - slack,
                       {"per_sigma1": products, "min_product": lowest})


# -- suite -------------------------------------------------------------------


@dataclass
class SuiteResult:
    reports: list
    timings: dict

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_dict(self, config: dict) -> dict:
        return {
            "schema": 1,
            "config": config,
            "pass": self.passed,
            "failures": [r.check for r in self.reports if not r.passed],
            "checks": [r.to_dict() for r in self.reports],
        }


CRITERIA = (
    ("1", "cyclic_dilation"),
    ("2", "cyclic_gate_circuit"),
    ("3", "hw_minimal_disturbance"),
    ("4", "outcome_distribution"),
    ("5", "cv_circuit_vs_coin_oracle"),
    ("6", "scattering"),
    ("7", "thermal_map"),
    ("8", "optics_scheme"),
    ("9", "uncertainty_product"),
)


def run_suite(seed: int = 0, inject_perturbation: bool = False, log=None) -> SuiteResult:
    jobs = [
        lambda: check_cyclic_dilation(seed),
        lambda: check_cyclic_gate_circuit(),
        lambda: check_hw_minimal_disturbance(seed),
        lambda: check_outcome_distribution(seed),
        lambda: check_povm_completeness(inject_perturbation),
        lambda: check_cv_circuit(seed),
        lambda: check_scattering(seed),
        lambda: check_thermal_map(),
        lambda: check_optics_scheme(seed),
        lambda: check_uncertainty(),
    ]
    reports, timings = [], {}
    for job in jobs:
        t0 = time.perf_counter()
        rep = job()
        timings[rep.check] = time.perf_counter() - t0
        reports.append(rep)
        if log is not None:
            log(f"{rep.line()} ({timings[rep.check]:.1f}s)")
    return SuiteResult(reports, timings)
