"""Discrete dilation circuits and the qudit statevector simulator."""

from .families import (
    appendix_hw_verify,
    cyclic_dense_circuit,
    cyclic_gate_circuit,
    cyclic_unitary,
    expand_fourier,
    gamma_state,
    hw_circuit,
    hw_kraus_from_circuit,
    interleave_permutation,
    phi1_state,
    qft_gates,
)
from .gates import Circuit, Gate
from .simulator import (
    EMPTY_STATE,
    MeasurementResult,
    QuditRegister,
    apply_gate,
    dense_unitary,
    gate_count,
    run_measurement,
    simulate,
)
