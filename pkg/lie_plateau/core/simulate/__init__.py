"""
Statevector simulation and Monte Carlo variance estimation
"""

from .circuit import (
    CircuitSpec,
    CoherentError,
    SpamNoise,
    CompiledCircuit,
    circuit_gates,
    apply_circuit,
    loss,
    batched_expectations,
)
from .haar import sample_haar_unitary, sample_haar_su4
from .montecarlo import (
    ConvergenceSpec,
    McEstimate,
    sample_generators,
    batch_stderr,
    run_sample_chunks,
    estimate_variance_mc,
)
from .brickwork import brickwork_pairs, apply_brickwork, brickwork_state, brickwork_variance_mc

__all__ = [
    'CircuitSpec',
    'CoherentError',
    'SpamNoise',
    'CompiledCircuit',
    'circuit_gates',
    'apply_circuit',
    'loss',
    'batched_expectations',
    'sample_haar_unitary',
    'sample_haar_su4',
    'ConvergenceSpec',
    'McEstimate',
    'sample_generators',
    'batch_stderr',
    'run_sample_chunks',
    'estimate_variance_mc',
    'brickwork_pairs',
    'apply_brickwork',
    'brickwork_state',
    'brickwork_variance_mc',
]
