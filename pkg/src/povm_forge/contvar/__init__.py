"""Continuous-variable measurements on discretised position grids."""

from .gates import (
    BeamSplitter,
    ControlledPhase,
    ControlledShiftDagger,
    CoordinateMap,
    Displacement,
    Fourier,
    FourierDagger,
    Reflection,
    apply_cv_gate,
)
from .gaussian import (
    G_MAP,
    GaussianState,
    GridDensity,
    ThermalParams,
    covariance_transform,
    gaussian_fidelity_to_ground,
    grid_covariance,
    hermite_functions,
    reduced_covariance_closed_form,
    symplectic_eigenvalues,
    thermal_params,
    thermal_state,
)
from .grid import Grid1D, GridWavefunction, gaussian_wavefn, product_state, random_smooth_wavefn
from .heisenberg import (
    check_circuit_vs_oracle,
    coin_oracle,
    completeness_sum,
    infhw_kraus,
    infhw_lattice,
    outcome_lattice,
    relative_l2,
)
from .optics import check_optics, optics_kraus, optics_lattice, optics_oracle
from .scattering import (
    KernelOperator,
    ScatteringNetwork,
    check_kernel_covariance,
    covariance_displacement,
    in_positivity_regime,
    k00_positivity,
    kernel_positivity,
    mu_consistency,
    mu_operator,
    reduced_state,
    scattering_circuit_kraus,
    scattering_compose,
    scattering_kraus_kernel,
    trace_distance,
    two_particle_map,
)
from .statistics import OutcomeStatistics, outcome_statistics
