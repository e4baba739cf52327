import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from povm_forge.contvar import (
    G_MAP,
    CoordinateMap,
    GaussianState,
    Grid1D,
    covariance_transform,
    gaussian_fidelity_to_ground,
    gaussian_wavefn,
    grid_covariance,
    hermite_functions,
    mu_operator,
    reduced_covariance_closed_form,
    reduced_state,
    symplectic_eigenvalues,
    thermal_params,
    thermal_state,
    trace_distance,
)
from povm_forge.contvar.gaussian import symplectic_form, thermal_weights
from povm_forge.errors import InvalidParameterError, ResolutionError, ShapeError

WIDE = Grid1D(16.0, 256)
G = CoordinateMap(G_MAP)


def test_reduced_covariance_pure_case():
    st2 = covariance_transform(G, 2.0, 1.0)
    red = st2.reduced(0).covariance
    np.testing.assert_allclose(red, np.diag([1.0, 0.25]), atol=1e-14)
    assert np.linalg.det(red) == pytest.approx(0.25, abs=1e-14)
    assert st2.reduced(0).purity == pytest.approx(1.0, abs=1e-12)


def test_reduced_covariance_mixed_case():
    red = covariance_transform(G, 4.0, 1.0).reduced(0)
    np.testing.assert_allclose(red.covariance, np.diag([20.0, 1.25]) / 8, atol=1e-14)
    assert np.linalg.det(red.covariance) == pytest.approx(25 / 64, abs=1e-14)
    assert red.purity < 1.0


@pytest.mark.parametrize("s1,s2", [(2.0, 1.0), (4.0, 1.0), (1.0, 1.0), (3.0, 0.7)])
def test_xp_blocks_vanish(s1, s2):
    cov = covariance_transform(G, s1, s2).covariance
    assert np.all(cov[:2, 2:] == 0.0) and np.all(cov[2:, :2] == 0.0)
    np.testing.assert_allclose(cov[np.ix_([0, 2], [0, 2])], reduced_covariance_closed_form(s1, s2), atol=1e-13)


@pytest.mark.parametrize("s1,s2", [(2.0, 1.0), (4.0, 1.0), (2.0, 2.0)])
def test_reduced_covariance_against_grid(s1, s2):
    """Partial trace on the grid reproduces the closed-form covariance."""
    a, b = gaussian_wavefn(s1, WIDE), gaussian_wavefn(s2, WIDE)
    rho = reduced_state(a, b)
    np.testing.assert_allclose(grid_covariance(rho, WIDE), reduced_covariance_closed_form(s1, s2), atol=1e-6)


def test_covariance_transform_rejects_area_change():
    with pytest.raises(InvalidParameterError):
        covariance_transform(CoordinateMap(((1, 1), (1, -1))), 1.0, 1.0)
    with pytest.raises(ShapeError):
        covariance_transform(CoordinateMap(((1, 0, 0), (0, 1, 0), (0, 0, 1))), 1.0, 1.0)


def test_uncertainty_bound_enforced():
    GaussianState(1, np.zeros(2), np.diag([0.5, 0.5]))
    with pytest.raises(InvalidParameterError):
        GaussianState(1, np.zeros(2), np.diag([0.3, 0.5]))
    with pytest.raises(ShapeError):
        GaussianState(1, np.zeros(2), np.array([[1.0, 0.2], [0.0, 1.0]]))
    with pytest.raises(ShapeError):
        GaussianState(2, np.zeros(2), np.eye(2))


def _random_symplectic(rng, modes):
    # exp(J H) with H symmetric lies in Sp(2n)
    from scipy.linalg import expm

    h = rng.normal(size=(2 * modes, 2 * modes)) * 0.4
    return expm(symplectic_form(modes) @ (h + h.T))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0.0, 3.0))
def test_symplectic_invariance(seed, n_thermal):
    s = _random_symplectic(np.random.default_rng(seed), 2)
    cov = (n_thermal + 1) / 2 * np.eye(4)
    nu = symplectic_eigenvalues(s @ cov @ s.T)
    np.testing.assert_allclose(nu, (n_thermal + 1) / 2, rtol=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.2, 6.0), st.floats(0.2, 6.0))
def test_transformed_state_is_physical(s1, s2):
    state = covariance_transform(G, s1, s2)
    assert symplectic_eigenvalues(state.covariance).min() >= 0.5 - 1e-9
    red = state.reduced(0).covariance
    assert np.linalg.det(red) >= 0.25 - 1e-12


def test_thermal_params_examples():
    p = thermal_params(2.0, 1.0)
    assert p.m_omega == pytest.approx(0.5, abs=1e-15) and p.N == 0.0
    p = thermal_params(4.0, 1.0)
    assert p.m_omega == pytest.approx(0.25, abs=1e-15)
    assert p.N == pytest.approx(0.25, abs=1e-15)
    for s2 in (0.3, 1.0, 2.5):
        assert thermal_params(2 * s2, s2).N == 0.0


@pytest.mark.parametrize("ratio", np.linspace(1.0, 4.0, 13))
def test_thermal_params_scan_nonnegative(ratio):
    p = thermal_params(2 * ratio, 1.0)
    assert p.N >= 0.0 and p.m_omega > 0
    # cross-check with the determinant of the reduced covariance: det = ((N+1)/2)^2
    det = np.linalg.det(reduced_covariance_closed_form(2 * ratio, 1.0))
    assert (p.N + 1) / 2 == pytest.approx(math.sqrt(det), rel=1e-12)


def test_thermal_params_rejects_nonpositive():
    with pytest.raises(InvalidParameterError):
        thermal_params(0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        thermal_params(1.0, -2.0)


def test_hermite_functions_orthonormal():
    phi = hermite_functions(30, 0.5, WIDE.x) * math.sqrt(WIDE.spacing)
    np.testing.assert_allclose(phi @ phi.T, np.eye(30), atol=1e-10)


def test_thermal_weights_mean_occupation():
    w = thermal_weights(0.25, 200)
    assert w.sum() == pytest.approx(1.0, abs=1e-14)
    assert np.sum(np.arange(200) * w) == pytest.approx(0.125, abs=1e-14)


def test_thermal_ground_state():
    p = thermal_params(2.0, 1.0)
    rho = thermal_state(p, 1, WIDE)
    assert rho.purity == pytest.approx(1.0, abs=1e-12)
    cov = grid_covariance(rho.matrix, WIDE)
    assert cov[0, 0] == pytest.approx(1 / (2 * p.m_omega), abs=1e-10)


def test_thermal_state_covariance():
    p = thermal_params(4.0, 1.0)
    rho = thermal_state(p, 40, WIDE)
    assert rho.trace == pytest.approx(1.0, abs=1e-8)
    expected = (p.N + 1) / 2 * np.diag([1 / p.m_omega, p.m_omega])
    np.testing.assert_allclose(grid_covariance(rho.matrix, WIDE), expected, atol=1e-4)


def test_thermal_matches_mu():
    a, b = gaussian_wavefn(4.0, WIDE), gaussian_wavefn(1.0, WIDE)
    mu = mu_operator(a, b)
    rho = thermal_state(thermal_params(4.0, 1.0), 40, WIDE)
    assert trace_distance(mu / np.trace(mu).real, rho.matrix) < 5e-3


@pytest.mark.parametrize("s1", [1.0, 2.0, 4.0])
def test_ground_state_fidelity(s1):
    a, b = gaussian_wavefn(s1, WIDE), gaussian_wavefn(s1 / 2, WIDE)
    mu = mu_operator(a, b)
    assert gaussian_fidelity_to_ground(mu, thermal_params(s1, s1 / 2).m_omega, WIDE) > 0.999


def test_thermal_state_guards():
    p = thermal_params(4.0, 1.0)
    with pytest.raises(InvalidParameterError):
        thermal_state(p, 5, WIDE)
    with pytest.raises(InvalidParameterError):
        thermal_state(p, 0, WIDE)
    with pytest.raises(ResolutionError):
        thermal_state(p, 40, Grid1D(6.0, 256))
