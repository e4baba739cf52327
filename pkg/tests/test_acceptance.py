"""Acceptance criteria, one test each, at the criterion tolerances.

Every test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line (visible even
under output capture) before asserting.
"""

import json
import subprocess
import sys
import time

import pytest

from povm_forge import verify
from povm_forge.contvar import scattering_compose, thermal_params


@pytest.fixture
def emit(capsys):
    def _emit(number, name, ok, info):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'} {name}: {info}")

    return _emit


def timed(fn):
    t0 = time.perf_counter()
    rep = fn()
    return rep, time.perf_counter() - t0


def judge(emit, number, rep, tol, limit=None, elapsed=0.0, extra_ok=True):
    ok = rep.passed and rep.max_error < tol and rep.tolerance <= tol and extra_ok
    if limit is not None:
        ok = ok and elapsed < limit
    info = f"max_error={rep.max_error:.3e} tol={tol:.0e} time={elapsed:.1f}s"
    if limit is not None:
        info += f" limit={limit:.0f}s"
    emit(number, rep.check, ok, info)
    return ok


def test_criterion_01_cyclic_dilation(emit):
    rep, dt = timed(lambda: verify.check_cyclic_dilation(seed=0, n_values=range(2, 17), samples=100))
    assert judge(emit, 1, rep, 1e-10, limit=10, elapsed=dt)


def test_criterion_02_gate_circuit(emit):
    rep, dt = timed(lambda: verify.check_cyclic_gate_circuit(m_values=(1, 2, 3, 4)))
    exponent_ok = rep.details["fit_exponent"] <= 2.2
    assert judge(emit, 2, rep, 1e-9, elapsed=dt, extra_ok=exponent_ok)


def test_criterion_03_hw_minimal_disturbance(emit):
    rep, dt = timed(lambda: verify.check_hw_minimal_disturbance(seed=0, d_values=(2, 3, 4), samples=10))
    appendix_ok = rep.details["appendix_max_residual"] < 1e-10
    assert judge(emit, 3, rep, 1e-9, limit=60, elapsed=dt, extra_ok=appendix_ok)


def test_criterion_04_outcome_distribution(emit):
    rep, dt = timed(lambda: verify.check_outcome_distribution(seed=0))
    families = {k.split("_")[0] for k in rep.details}
    assert judge(emit, 4, rep, 1e-10, elapsed=dt, extra_ok=families == {"cyclic", "hw"})


def test_criterion_05_cv_circuit(emit):
    rep, dt = timed(lambda: verify.check_cv_circuit(seed=0, points=256, half_width=10.0, samples=10))
    shape_ok = rep.details["samples"] == 10 and rep.details["lattice"][1] == 5
    assert judge(emit, 5, rep, 1e-3, limit=120, elapsed=dt, extra_ok=shape_ok)


def test_criterion_06_scattering(emit):
    rep, dt = timed(lambda: verify.check_scattering(seed=0))
    exact = scattering_compose().composite.array.tolist() == [[1, 2, 2], [0, 1, 0], [0, 2, 1]]
    assert judge(emit, 6, rep, 1e-6, elapsed=dt, extra_ok=exact)


def test_criterion_07_thermal_map(emit):
    rep, dt = timed(lambda: verify.check_thermal_map())
    p = thermal_params(4.0, 1.0)
    closed = p.m_omega == pytest.approx(0.25, abs=1e-15) and p.N == pytest.approx(0.25, abs=1e-15)
    fid_ok = all(v["fidelity"] > 0.999 and v["N"] == 0.0 for v in rep.details["ground_state"].values())
    assert judge(emit, 7, rep, 5e-3, elapsed=dt, extra_ok=closed and fid_ok)


def test_criterion_08_optics(emit):
    rep, dt = timed(lambda: verify.check_optics_scheme(seed=0))
    assert judge(emit, 8, rep, 1e-3, elapsed=dt, extra_ok=rep.details["lattice"][1] == 3)


def test_criterion_09_uncertainty(emit):
    rep, dt = timed(lambda: verify.check_uncertainty())
    products = [v["product"] for v in rep.details["per_sigma1"].values()]
    ok = len(products) == 3 and min(products) >= 1 - 0.02
    assert judge(emit, 9, rep, 0.02 + 1e-12, elapsed=dt, extra_ok=ok)


def test_criterion_10_verify_all(emit, tmp_path):
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "povm_forge", "verify-all", "--out", str(tmp_path)],
        capture_output=True, text=True, timeout=600,
    )
    dt = time.perf_counter() - t0
    doc = json.loads((tmp_path / "report.json").read_text())
    ok = proc.returncode == 0 and doc["pass"] and dt < 300
    emit(10, "verify_all", ok, f"exit={proc.returncode} checks={len(doc['checks'])} time={dt:.1f}s limit=300s")
    assert ok, proc.stderr
