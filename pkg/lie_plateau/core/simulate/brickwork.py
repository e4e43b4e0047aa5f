"""
Brickwork circuits of Haar-random SU(4) gates.

A layer is the even sublayer on pairs (0,1), (2,3), ... followed by the odd sublayer on
(1,2), (3,4), ...; an odd qubit count leaves the last qubit idle in the even sublayer.
"""
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from lie_plateau.core.exceptions import DimensionMismatchError, InvalidParameterError
from lie_plateau.core.pauli import HermitianOp
from lie_plateau.core.purity import QuantumState, check_statevector_size
from lie_plateau.core.simulate.circuit import batched_expectations
from lie_plateau.core.simulate.haar import sample_haar_su4
from lie_plateau.core.simulate.montecarlo import (
    McEstimate,
    _check_samples,
    _as_states,
    initial_batch,
    run_sample_chunks,
    summarize,
)
from lie_plateau.core.utils.logger import get_logger
from lie_plateau.core.utils.metrics import record_samples, track_mc_run

logger = get_logger(__name__)


def brickwork_pairs(n: int) -> List[Tuple[int, int]]:
    """Gate positions of one layer, even sublayer first"""
    even = [(q, q + 1) for q in range(0, n - 1, 2)]
    odd = [(q, q + 1) for q in range(1, n - 1, 2)]
    return even + odd


def _check_n(n: int):
    if n < 2:
        raise InvalidParameterError(f"Brickwork circuits need n >= 2, got {n}")
    check_statevector_size(n)


def apply_two_qubit_gates(psi: np.ndarray, gates: np.ndarray, first_qubit: int, n: int) -> np.ndarray:
    """Apply gates[b] to qubits (first_qubit, first_qubit + 1) of row b"""
    batch = psi.shape[0]
    tensor = psi.reshape(batch, 1 << first_qubit, 4, 1 << (n - first_qubit - 2))
    return np.einsum("bij,bqjr->bqir", gates, tensor).reshape(batch, -1)


def apply_brickwork(psi: np.ndarray, gates: np.ndarray, n: int) -> np.ndarray:
    """
    Evolve a (batch, 2^n) array through brickwork layers.

    gates has shape (batch, layers, n - 1, 4, 4) in brickwork_pairs order.
    """
    pairs = brickwork_pairs(n)
    if gates.shape[2] != len(pairs):
        raise DimensionMismatchError(f"Expected {len(pairs)} gates per layer, got {gates.shape[2]}")
    for layer in range(gates.shape[1]):
        for g, (q, _) in enumerate(pairs):
            psi = apply_two_qubit_gates(psi, gates[:, layer, g], q, n)
    return psi


def _draw_gates(rng: np.random.Generator, layers: int, n: int) -> np.ndarray:
    per_layer = n - 1
    return sample_haar_su4(rng, size=layers * per_layer).reshape(layers, per_layer, 4, 4)


def brickwork_state(n: int, layers: int, rng: np.random.Generator) -> QuantumState:
    """|0...0> after `layers` brickwork layers of Haar SU(4) gates"""
    _check_n(n)
    psi = QuantumState.zeros(n).statevector[None, :]
    gates = _draw_gates(rng, layers, n)[None]
    out = apply_brickwork(psi, gates, n)[0]
    return QuantumState.from_statevector(out / np.linalg.norm(out))


def brickwork_variance_mc(n: int, layers: int, states: Union[QuantumState, Sequence[QuantumState]],
                          observable: HermitianOp, num_samples: int, seed: int,
                          chunk_size: Optional[int] = None, max_workers: Optional[int] = None,
                          show_progress: Optional[bool] = None) -> McEstimate:
    """Variance of Tr[U rho U^dagger O] over brickwork circuits with `layers` layers"""
    _check_n(n)
    _check_samples(num_samples)
    if layers < 1:
        raise InvalidParameterError(f"layers must be >= 1, got {layers}")
    states = _as_states(states, n)
    if observable.n != n:
        raise DimensionMismatchError(f"Observable on n={observable.n}, circuit on n={n}")
    trace_over_dim = observable.trace() / observable.dim

    def simulate_chunk(indices, generators):
        psi, keep = initial_batch(states, indices)
        gates = np.stack([_draw_gates(rng, layers, n) for rng in generators])
        values = batched_expectations(apply_brickwork(psi, gates, n), observable)
        return keep * values + (1.0 - keep) * trace_over_dim

    with track_mc_run("brickwork"):
        losses = run_sample_chunks(num_samples, seed, simulate_chunk, chunk_size, max_workers,
                                   show_progress, desc=f"brickwork n={n} L={layers}")
    record_samples("brickwork", num_samples)
    estimate = summarize(losses, seed, layers)
    estimate.history = [(layers, estimate.variance_hat)]
    logger.info(f"Brickwork MC n={n} L={layers}: var_hat={estimate.variance_hat:.6g}")
    return estimate
