"""
Pauli string algebra
"""

from .pauli_string import (
    PauliString,
    parse_pauli,
    multiply,
    commutator,
    product_phase,
    symplectic_form,
    pauli_action,
    parity_signs,
)
from .hermitian_op import HermitianOp, hs_inner
from .families import (
    tfim_generators,
    single_qubit_generators,
    hardware_efficient_generators,
    jordan_wigner_string,
)

__all__ = [
    'PauliString',
    'parse_pauli',
    'multiply',
    'commutator',
    'product_phase',
    'symplectic_form',
    'pauli_action',
    'parity_signs',
    'HermitianOp',
    'hs_inner',
    'tfim_generators',
    'single_qubit_generators',
    'hardware_efficient_generators',
    'jordan_wigner_string',
]
