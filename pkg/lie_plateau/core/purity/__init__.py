"""
States, projections onto DLA components and g-purities
"""

from .states import (
    QuantumState,
    PauliRotation,
    DenseGate,
    Gate,
    check_statevector_size,
    local_rotation_matrix,
    random_local_rotations,
)
from .projection import (
    component_coefficients,
    project,
    g_purity,
    membership,
    membership_residual,
    ComponentPurity,
    PurityReport,
    purity_report,
    apply_global_depolarizing,
    apply_state_prep_unitary,
)

__all__ = [
    'QuantumState',
    'check_statevector_size',
    'PauliRotation',
    'DenseGate',
    'Gate',
    'local_rotation_matrix',
    'random_local_rotations',
    'component_coefficients',
    'project',
    'g_purity',
    'membership',
    'membership_residual',
    'ComponentPurity',
    'PurityReport',
    'purity_report',
    'apply_global_depolarizing',
    'apply_state_prep_unitary',
]
