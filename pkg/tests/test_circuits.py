import json

import numpy as np
import pytest

from povm_forge import matcore as mc
from povm_forge.circuits import (
    EMPTY_STATE,
    Circuit,
    Gate,
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
    phi1_state,
    run_measurement,
    simulate,
)
from povm_forge.circuits import gates as G
from povm_forge.errors import InvalidParameterError, ResourceError, ShapeError
from povm_forge.povm import (
    KrausFamily,
    check_minimal_disturbance,
    cyclic_povm,
    hw_povm,
    kraus_operators,
    random_seed_operator,
)

from conftest import random_state

P0 = np.diag([1.0, 0.0]).astype(complex)


# -- registers and gates -----------------------------------------------------


def test_register_validation():
    with pytest.raises(ShapeError):
        QuditRegister((2, 3), np.ones(5))
    with pytest.raises(ShapeError):
        QuditRegister((2,), [1.0, 1.0])
    reg = QuditRegister((2,), [1.0, 1.0], unnormalized=True)
    assert reg.norm == pytest.approx(np.sqrt(2))
    assert QuditRegister.basis((2, 3), 4).tensor()[1, 1] == 1.0


def test_gate_wire_checks():
    with pytest.raises(ShapeError):
        Circuit((2, 2), (Gate(G.CONTROLLED_PHASE, (0,), (0,)),))
    with pytest.raises(ShapeError):
        Circuit((2, 2), (Gate(G.FOURIER, (2,)),))
    with pytest.raises(ShapeError):
        Circuit((2, 2), (), measured=(3,))
    with pytest.raises(ValueError):
        Gate("Toffoli", (0,))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_controlled_shift_dagger_semantics(d):
    # |j>|k> -> |j>|k - j>
    c = Circuit((d, d), (Gate(G.CONTROLLED_SHIFT_DAGGER, (1,), (0,)),))
    u = dense_unitary(c)
    expected = mc.direct_sum(*[mc.shift(d, -j) for j in range(d)])
    np.testing.assert_allclose(u, expected, atol=1e-15)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_controlled_phase_semantics(d):
    c = Circuit((d, d), (Gate(G.CONTROLLED_PHASE, (1,), (0,)),))
    expected = mc.direct_sum(*[mc.phase(d, j) for j in range(d)])
    np.testing.assert_allclose(dense_unitary(c), expected, atol=1e-14)


def test_gate_on_second_wire_matches_kron():
    c = Circuit((3, 2), (Gate(G.FOURIER, (1,)),))
    np.testing.assert_allclose(dense_unitary(c), mc.kron(np.eye(3), mc.fourier(2)), atol=1e-15)
    c = Circuit((3, 2), (Gate(G.SHIFT_POWER, (0,), params={"power": 2}),))
    np.testing.assert_allclose(dense_unitary(c), mc.kron(mc.shift(3, 2), np.eye(2)), atol=1e-15)


def test_circuit_json_roundtrip(tmp_path):
    c = cyclic_dense_circuit(3)
    c.dump(tmp_path / "c.json")
    back = Circuit.load(tmp_path / "c.json")
    np.testing.assert_array_equal(dense_unitary(back), dense_unitary(c))
    doc = json.loads((tmp_path / "c.json").read_text())
    assert doc["dims"] == [3, 2]
    g = Circuit.from_json(hw_circuit(3).to_json())
    np.testing.assert_array_equal(dense_unitary(g), dense_unitary(hw_circuit(3)))


# -- cyclic dilation -----------------------------------------------------------


def _dilation_error(n, psi):
    u = cyclic_unitary(n)
    out = u @ np.kron(np.eye(n)[0], psi)
    expected = np.concatenate([mc.psd_sqrt(op) @ psi for op in cyclic_povm(n).operators])
    return np.abs(out - expected).max()


def test_cyclic_two_dilation(rng):
    for _ in range(20):
        assert _dilation_error(2, random_state(rng, 2)) < 1e-12


@pytest.mark.parametrize("n", range(2, 17))
def test_cyclic_unitary_is_unitary(n, rng):
    assert mc.assert_unitary(cyclic_unitary(n)).passed
    assert _dilation_error(n, random_state(rng, 2)) < 1e-12


def test_cyclic_three_kraus():
    fam = kraus_operators(cyclic_unitary(3), np.eye(3)[0], 2, 3)
    for a, op in zip(fam.operators, cyclic_povm(3).operators):
        np.testing.assert_allclose(a, mc.psd_sqrt(op), atol=1e-10)


def test_cyclic_rejects_small_n():
    with pytest.raises(InvalidParameterError):
        cyclic_unitary(1)
    with pytest.raises(InvalidParameterError):
        cyclic_gate_circuit(0)


def test_gate_circuit_m1_matches_unitary():
    c = cyclic_gate_circuit(1)
    assert c.dims == (2, 2)
    np.testing.assert_allclose(dense_unitary(c), cyclic_unitary(2), atol=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_gate_circuit_matches_unitary(m):
    c = cyclic_gate_circuit(m)
    np.testing.assert_allclose(dense_unitary(c), cyclic_unitary(2**m), atol=1e-9)
    np.testing.assert_allclose(dense_unitary(expand_fourier(c)), cyclic_unitary(2**m), atol=1e-9)


def test_gate_count_m3():
    # non-Fourier part: wire rotation plus one phase gate per wire
    c = cyclic_gate_circuit(3)
    fourier = [g for g in c.gates if g.kind in (G.FOURIER, G.FOURIER_DAGGER) and len(g.targets) > 1]
    assert len(fourier) == 3
    rest = Circuit(c.dims, tuple(g for g in c.gates if g not in fourier))
    assert gate_count(rest) <= 2 * 3**2
    expanded = gate_count(expand_fourier(c))
    assert expanded <= 4 * 4**2


def test_gate_count_quadratic():
    ms = np.arange(1, 7)
    counts = [gate_count(expand_fourier(cyclic_gate_circuit(int(m)))) for m in ms]
    slope = np.polyfit(np.log(ms + 1), np.log(counts), 1)[0]
    assert slope <= 2.2


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_gate_circuit_preserves_norm(m, rng):
    c = cyclic_gate_circuit(m)
    states = rng.normal(size=(c.size, 50)) + 1j * rng.normal(size=(c.size, 50))
    states /= np.linalg.norm(states, axis=0)
    out = simulate(c, states)
    np.testing.assert_allclose(np.linalg.norm(out, axis=0), 1.0, atol=1e-12)


# -- Heisenberg-Weyl dilation ----------------------------------------------------


def test_gamma_state_pure_seed():
    g = gamma_state(P0 / 2, 2)
    np.testing.assert_allclose(g.amplitudes, [1, 0, 0, 0], atol=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_gamma_state_maximally_entangled(d):
    g = gamma_state(np.eye(d) / d**2, d)
    np.testing.assert_allclose(g.amplitudes, np.eye(d).reshape(-1) / np.sqrt(d), atol=1e-15)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_gamma_state_norm(d, rng):
    assert gamma_state(random_seed_operator(d, rng), d).norm == pytest.approx(1.0, abs=1e-12)


def test_gamma_state_trace_violation():
    from povm_forge.errors import InvalidSeedOperatorError

    with pytest.raises(InvalidSeedOperatorError):
        gamma_state(P0, 2)


def test_hw_circuit_pure_seed():
    ops = hw_kraus_from_circuit(2, P0 / 2)
    np.testing.assert_allclose(ops[0], P0 / np.sqrt(2), atol=1e-14)


def test_hw_circuit_maximally_mixed():
    for a in hw_kraus_from_circuit(2, np.eye(2) / 4):
        np.testing.assert_allclose(a, np.eye(2) / 2, atol=1e-14)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_hw_circuit_rank_one_seed(d, rng):
    mu = random_seed_operator(d, rng, rank=1)
    fam = KrausFamily(tuple(hw_kraus_from_circuit(d, mu)))
    assert check_minimal_disturbance(fam, hw_povm(d, mu)).max_error < 1e-9


def test_hw_circuit_rejects_small_d():
    with pytest.raises(InvalidParameterError):
        hw_circuit(1)


def test_phi1_pure_seed():
    phi = phi1_state(P0 / 2, 2)
    np.testing.assert_allclose(phi.amplitudes, np.kron([1, 1], [1, 0]) / np.sqrt(2), atol=1e-15)


def test_phi1_norm(rng):
    assert phi1_state(random_seed_operator(3, rng), 3).norm == pytest.approx(1.0, abs=1e-12)


def test_appendix_examples(rng):
    rep = appendix_hw_verify(2, P0 / 2)
    assert rep.passed and rep.max_error < 1e-11
    rep = appendix_hw_verify(3, random_seed_operator(3, rng))
    assert rep.passed and rep.max_error < 1e-10
    rep = appendix_hw_verify(2, np.eye(2) / 4)
    assert rep.details["N_equals_phi1_kron_I"] < 1e-12


def test_appendix_guards():
    with pytest.raises(ResourceError):
        appendix_hw_verify(7, np.eye(7) / 49)
    with pytest.raises(InvalidParameterError):
        appendix_hw_verify(1, np.eye(1))


# -- measurement -----------------------------------------------------------------


def _system_input(circuit, anc, psi):
    return QuditRegister(circuit.dims, np.kron(anc, psi))


def test_measurement_cyclic_two_zero():
    c = cyclic_dense_circuit(2)
    res = run_measurement(c, _system_input(c, [1, 0], [1, 0]), seed=3, shots=1000)
    np.testing.assert_allclose(res.probabilities, [0.5, 0.5], atol=1e-14)
    np.testing.assert_allclose(res.conditional_states[0].amplitudes, [1, 1] / np.sqrt(2), atol=1e-14)
    np.testing.assert_allclose(res.conditional_states[1].amplitudes, [1, -1] / np.sqrt(2), atol=1e-14)
    assert res.counts.sum() == 1000


def test_measurement_cyclic_two_plus():
    c = cyclic_dense_circuit(2)
    res = run_measurement(c, _system_input(c, [1, 0], np.array([1, 1]) / np.sqrt(2)))
    np.testing.assert_allclose(res.probabilities, [1.0, 0.0], atol=1e-14)
    assert res.conditional_states[1] is EMPTY_STATE


def test_measurement_empty_circuit(rng):
    psi = random_state(rng, 6)
    c = Circuit((2, 3), (), (0,))
    res = run_measurement(c, QuditRegister((2, 3), psi))
    t = psi.reshape(2, 3)
    np.testing.assert_allclose(res.probabilities, np.sum(np.abs(t) ** 2, axis=1), atol=1e-15)


def test_measurement_shape_mismatch():
    with pytest.raises(ShapeError):
        run_measurement(cyclic_dense_circuit(2), QuditRegister((2,), [1, 0]))


def test_measurement_sampling_deterministic():
    c = cyclic_dense_circuit(5)
    reg = _system_input(c, np.eye(5)[0], [0.6, 0.8])
    a = run_measurement(c, reg, seed=7, shots=500)
    b = run_measurement(c, reg, seed=7, shots=500)
    np.testing.assert_array_equal(a.samples, b.samples)


@pytest.mark.parametrize("d", [2, 3])
def test_measurement_hw_probabilities(d, rng):
    mu = random_seed_operator(d, rng)
    psi = random_state(rng, d)
    c = hw_circuit(d)
    reg = QuditRegister(c.dims, np.kron(gamma_state(mu, d).amplitudes, psi))
    res = run_measurement(c, reg)
    expected = [np.vdot(psi, op @ psi).real for op in hw_povm(d, mu).operators]
    np.testing.assert_allclose(res.probabilities, expected, atol=1e-10)


def test_measurement_csv(tmp_path):
    c = cyclic_dense_circuit(2)
    res = run_measurement(c, _system_input(c, [1, 0], [1, 0]), seed=1, shots=10)
    res.write_csv(tmp_path / "o.csv")
    lines = (tmp_path / "o.csv").read_text().splitlines()
    assert lines[0] == "outcome_label,probability,count"
    assert len(lines) == 3
