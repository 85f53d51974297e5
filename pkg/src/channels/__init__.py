from .superop import (
    ChannelError, Superoperator, vec, unvec, identity_superop, from_map, tensor_superop,
    is_trace_preserving, choi_matrix, is_completely_positive,
)
from .decompositions import (
    MeasureKind, PrepareKind, MeasurePrepTerm, QuasiDecomposition,
    psi0_superop, psi1_superop, randomized_decomposition, pauli_decomposition, tensor_decomposition,
    verify_identity, sample_term, enumerate_estimator, exhaustive_psi0, sampled_psi0,
    basis_measure_prepare, clifford_averaged_psi0,
)
from .instances import RandomizedInstance, PauliInstance, draw_instance, measure_pauli, prepare_pauli

__all__ = [
    'ChannelError', 'Superoperator', 'vec', 'unvec', 'identity_superop', 'from_map', 'tensor_superop',
    'is_trace_preserving', 'choi_matrix', 'is_completely_positive',
    'MeasureKind', 'PrepareKind', 'MeasurePrepTerm', 'QuasiDecomposition',
    'psi0_superop', 'psi1_superop', 'randomized_decomposition', 'pauli_decomposition',
    'tensor_decomposition', 'verify_identity', 'sample_term', 'enumerate_estimator',
    'exhaustive_psi0', 'sampled_psi0', 'basis_measure_prepare', 'clifford_averaged_psi0',
    'RandomizedInstance', 'PauliInstance', 'draw_instance', 'measure_pauli', 'prepare_pauli',
]
