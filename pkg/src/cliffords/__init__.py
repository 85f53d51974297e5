from .tableau import (
    CliffordError, CliffordTableau, sample_uniform_clifford, tableau_to_unitary, is_symplectic,
    identity_tableau, enumerate_single_qubit_cliffords, conjugation_deviation, apply_tableau_to_pauli,
    row_pauli, symplectic_form,
)
from .design import verify_2design, second_moment_deviation, second_moment_target, swap_operator

__all__ = [
    'CliffordError', 'CliffordTableau', 'sample_uniform_clifford', 'tableau_to_unitary', 'is_symplectic',
    'identity_tableau', 'enumerate_single_qubit_cliffords', 'conjugation_deviation',
    'apply_tableau_to_pauli', 'row_pauli', 'symplectic_form',
    'verify_2design', 'second_moment_deviation', 'second_moment_target', 'swap_operator',
]
