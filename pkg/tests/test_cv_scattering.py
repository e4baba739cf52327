import numpy as np
import pytest

from povm_forge.contvar import (
    CoordinateMap,
    Grid1D,
    GridWavefunction,
    KernelOperator,
    apply_cv_gate,
    check_kernel_covariance,
    covariance_displacement,
    gaussian_fidelity_to_ground,
    gaussian_wavefn,
    in_positivity_regime,
    k00_positivity,
    kernel_positivity,
    mu_consistency,
    mu_operator,
    product_state,
    random_smooth_wavefn,
    relative_l2,
    scattering_circuit_kraus,
    scattering_compose,
    scattering_kraus_kernel,
    thermal_params,
    two_particle_map,
)
from povm_forge.contvar.grid import apply_fourier, gaussian_density_amplitude
from povm_forge.errors import InvalidParameterError, ResolutionError, ShapeError

GRID = Grid1D(10.0, 256)
WIDE = Grid1D(16.0, 256)


def pair(s1, s2, grid=GRID):
    return gaussian_wavefn(s1, grid), gaussian_wavefn(s2, grid)


def test_composite_matrix():
    net = scattering_compose()
    np.testing.assert_array_equal(net.composite.array, [[1, 2, 2], [0, 1, 0], [0, 2, 1]])
    np.testing.assert_array_equal(net.s21.array, [[-1, 2, 0], [0, 1, 0], [0, 0, 1]])
    for m in (net.s21, net.s23, net.s31, net.r3, net.composite):
        assert abs(m.determinant) == pytest.approx(1.0)
        np.testing.assert_allclose(m.momentum_action, np.linalg.inv(m.array.T), atol=1e-15)


def test_sequence_reproduces_composite():
    # compact support of radius 3 cells; intermediate maps grow rows by at most 7
    g = Grid1D(6.0, 64)
    c = g.center
    rng = np.random.default_rng(0)
    v = np.zeros((64, 64, 64), dtype=complex)
    v[c - 3 : c + 4, c - 3 : c + 4, c - 3 : c + 4] = rng.normal(size=(7, 7, 7)) + 1j * rng.normal(size=(7, 7, 7))
    psi = GridWavefunction((g, g, g), v, unnormalized=True)
    net = scattering_compose()
    step = psi
    for gate in net.sequence:
        step = apply_cv_gate(step, gate)
    once = apply_cv_gate(psi, net.composite)
    np.testing.assert_array_equal(step.values, once.values)
    assert np.sum(np.abs(once.values) ** 2) == pytest.approx(np.sum(np.abs(v) ** 2))
    # direct substitution psi(A v)
    a = net.composite.array.astype(int)
    for idx in [(c, c, c), (c + 1, c - 2, c + 1), (c - 3, c + 1, c + 2), (c + 5, c - 1, c)]:
        src = a @ (np.array(idx) - c) + c
        assert once.values[idx] == v[tuple(src)]


def test_two_particle_momentum_action():
    """Fourier transform of psi(M v) equals psi^ evaluated at N p with N = (M^T)^-1."""
    m = two_particle_map()
    n = m.momentum_action
    np.testing.assert_array_equal(np.rint(n), [[1, 2], [0, -1]])
    g = Grid1D(12.0, 256)  # psi(M v) must stay inside the window
    x, y = g.x[:, None], g.x[None, :]
    f = gaussian_density_amplitude(x, 0.8) * gaussian_density_amplitude(y - 0.5, 1.1)
    psi = GridWavefunction((g, g), f)
    both = lambda w: apply_fourier(apply_fourier(w.values, g, 0), g, 1)  # noqa: E731
    lhs = both(apply_cv_gate(psi, m))
    rhs = apply_cv_gate(GridWavefunction((g, g), both(psi)), CoordinateMap(tuple(map(tuple, np.rint(n)))))
    np.testing.assert_allclose(lhs, rhs.values, atol=1e-8)


def test_covariance_shift():
    assert covariance_displacement(0.4, -0.6) == (0.3, -0.2)


def test_kernel_covariance():
    a, b = pair(2.0, 1.0)
    rep = check_kernel_covariance(a, b, [(0.4, -0.6)])
    assert rep.passed and rep.max_error < 1e-6


def test_kernel_covariance_random_points():
    a, b = pair(1.5, 1.0)
    pts = [tuple(p) for p in np.random.default_rng(4).uniform(-1, 1, size=(4, 2))]
    assert check_kernel_covariance(a, b, pts).max_error < 1e-6


def test_kernel_operator():
    k = KernelOperator(GRID, np.eye(256) / GRID.spacing)
    psi = gaussian_wavefn(1.0, GRID)
    np.testing.assert_allclose(k.apply(psi).values, psi.values, atol=1e-14)
    np.testing.assert_allclose(KernelOperator.from_matrix(GRID, np.eye(256)).kernel, k.kernel)
    with pytest.raises(ShapeError):
        KernelOperator(GRID, np.eye(3))


def test_kernel_grid_mismatch():
    with pytest.raises(ShapeError):
        scattering_kraus_kernel(gaussian_wavefn(1.0, GRID), gaussian_wavefn(1.0, WIDE), 0, 0)


@pytest.mark.parametrize("s1,s2", [(2.0, 1.0), (1.0, 0.5), (2.4, 0.6)])
def test_k00_psd_in_regime(s1, s2):
    a, b = pair(s1, s2)
    rep = k00_positivity(a, b, s1, s2)
    assert rep.passed
    assert rep.details["min_eigenvalue"] >= -1e-8 * rep.details["max_eigenvalue"]


def test_k00_square_is_ground_state():
    a, b = pair(2.0, 1.0)
    mu = mu_operator(a, b)
    assert gaussian_fidelity_to_ground(mu, thermal_params(2.0, 1.0).m_omega, GRID) > 0.999


def test_k00_indefinite_outside_regime():
    a, b = pair(1.0, 1.0)
    assert not in_positivity_regime(1.0, 1.0)
    rep = k00_positivity(a, b, 1.0, 1.0)
    assert not rep.passed
    assert rep.details["min_eigenvalue"] < -1e-4


def test_kernel_positivity_examples():
    assert kernel_positivity(0.0, 1.0, 1.0, GRID).passed
    rep = kernel_positivity(0.5, 0.5, 2.0, GRID)
    assert rep.passed
    x = GRID.x
    k = 2.0 * np.exp(-np.add.outer(x**2, x**2)) * GRID.spacing
    ev = np.linalg.eigvalsh(k)
    assert ev[-2] < 1e-12 * ev[-1]  # rank one
    rep = kernel_positivity(1.0, 0.25, 1.0, GRID)
    assert not rep.passed and not rep.details["regime_positive"]


def test_kernel_positivity_errors():
    with pytest.raises(InvalidParameterError):
        kernel_positivity(-0.1, 1.0, 1.0, GRID)
    with pytest.raises(ResolutionError):
        kernel_positivity(0.0, 1e4, 1.0, GRID)


def test_mu_consistency_pure():
    a, b = pair(2.0, 1.0)
    rep = mu_consistency(a, b, 2.0, 1.0)
    assert rep.passed and rep.max_error < 1e-3
    assert rep.details["purity"] == pytest.approx(1.0, abs=1e-3)
    assert rep.details["trace_2pi_mu"] == pytest.approx(0.25, abs=1e-6)


def test_mu_consistency_mixed():
    a, b = pair(4.0, 1.0, WIDE)
    rep = mu_consistency(a, b, 4.0, 1.0)
    assert rep.passed and rep.max_error < 1e-3
    assert rep.details["purity"] < 1.0 - 1e-3


def test_circuit_kraus_matches_kernel():
    g = Grid1D(10.0, 128)
    a, b = pair(2.0, 1.0, g)
    psi = random_smooth_wavefn(g, np.random.default_rng(8))
    for x, y in [(0.0, 0.0), (0.3125, -0.46875)]:
        circ = scattering_circuit_kraus(a, b, psi, x, y)
        ref = scattering_kraus_kernel(a, b, x, y).apply(psi)
        assert relative_l2(circ, ref) < 1e-6
