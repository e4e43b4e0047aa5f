"""
Monte Carlo estimation of the loss landscape variance.

Every sample index s owns an independent Philox stream spawned from the run seed, so the
draws of sample s do not depend on the chunking or on the number of worker threads, and a
deeper circuit reuses the shallower circuit's draws as a prefix.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from lie_plateau.config.settings import get_settings
from lie_plateau.core.constants import (
    DEFAULT_LAYER_FACTOR,
    DEFAULT_REL_TOL,
    MAX_LAYERS,
    MIN_NUM_SAMPLES,
    STDERR_BATCHES,
    VARIANCE_FLOOR,
)
from lie_plateau.core.exceptions import DimensionMismatchError, InvalidParameterError
from lie_plateau.core.pauli import HermitianOp
from lie_plateau.core.purity import QuantumState
from lie_plateau.core.simulate.circuit import CircuitSpec, CompiledCircuit, spam_rescale
from lie_plateau.core.utils.logger import get_logger
from lie_plateau.core.utils.metrics import record_samples, track_mc_run

logger = get_logger(__name__)

RNG_NAME = "Philox"

ChunkSimulator = Callable[[np.ndarray, List[np.random.Generator]], np.ndarray]


@dataclass
class ConvergenceSpec:
    """Layer-doubling protocol: start at initial_layers (default 5n), double until stable"""

    layer_doubling: bool = True
    rel_tol: float = DEFAULT_REL_TOL
    max_layers: int = MAX_LAYERS
    initial_layers: Optional[int] = None

    def __post_init__(self):
        if self.rel_tol <= 0:
            raise InvalidParameterError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_layers < 1:
            raise InvalidParameterError(f"max_layers must be >= 1, got {self.max_layers}")


@dataclass
class McEstimate:
    num_samples: int
    mean_hat: float
    variance_hat: float
    stderr_of_variance: float
    seed: int
    layers_used: int
    converged: bool
    rng: str = RNG_NAME
    history: List[Tuple[int, float]] = field(default_factory=list)

    def z_score(self, exact: float) -> float:
        """(var_hat - exact) / stderr"""
        if self.stderr_of_variance <= 0:
            return 0.0 if abs(self.variance_hat - exact) <= VARIANCE_FLOOR else float("inf")
        return (self.variance_hat - exact) / self.stderr_of_variance

    def to_dict(self) -> dict:
        return {
            "num_samples": self.num_samples,
            "mean_hat": self.mean_hat,
            "variance_hat": self.variance_hat,
            "stderr_of_variance": self.stderr_of_variance,
            "seed": self.seed,
            "rng": self.rng,
            "layers_used": self.layers_used,
            "converged": self.converged,
            "history": [{"layers": layers, "variance_hat": var} for layers, var in self.history],
        }


def sample_generators(seed: int, num_samples: int) -> List[np.random.Generator]:
    """One independent counter-based stream per sample index"""
    children = np.random.SeedSequence(seed).spawn(num_samples)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def batch_stderr(losses: np.ndarray, batches: int = STDERR_BATCHES) -> float:
    """Standard error of the sample variance from contiguous batch means"""
    groups = [group for group in np.array_split(losses, batches) if group.size > 1]
    if len(groups) < 2:
        return float("nan")
    batch_vars = np.array([np.var(group, ddof=1) for group in groups])
    return float(np.std(batch_vars, ddof=1) / np.sqrt(len(groups)))


def run_sample_chunks(num_samples: int, seed: int, simulate_chunk: ChunkSimulator,
                      chunk_size: Optional[int] = None, max_workers: Optional[int] = None,
                      show_progress: Optional[bool] = None, desc: str = "samples") -> np.ndarray:
    """
    Map simulate_chunk over contiguous index chunks and gather losses in sample order.

    simulate_chunk(indices, generators) returns one loss per index; every call gets freshly
    spawned generators so repeated runs with the same seed replay the same streams.
    """
    settings = get_settings()
    chunk_size = chunk_size or settings.mc_chunk_size
    max_workers = max_workers or settings.max_workers
    show_progress = settings.show_progress if show_progress is None else show_progress

    generators = sample_generators(seed, num_samples)
    starts = list(range(0, num_samples, chunk_size))
    losses = np.empty(num_samples)

    def work(start: int):
        indices = np.arange(start, min(start + chunk_size, num_samples))
        return start, simulate_chunk(indices, [generators[i] for i in indices])

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = [executor.submit(work, start) for start in starts]
        for future in tqdm(futures, total=len(futures), desc=desc, disable=not show_progress):
            start, values = future.result()
            losses[start:start + len(values)] = values
    return losses


def summarize(losses: np.ndarray, seed: int, layers: int, converged: bool = True) -> McEstimate:
    return McEstimate(
        num_samples=int(losses.size),
        mean_hat=float(np.mean(losses)),
        variance_hat=float(np.var(losses, ddof=1)),
        stderr_of_variance=batch_stderr(losses),
        seed=seed,
        layers_used=layers,
        converged=converged,
    )


def _as_states(states: Union[QuantumState, Sequence[QuantumState]], n: int) -> List[QuantumState]:
    states = [states] if isinstance(states, QuantumState) else list(states)
    if not states:
        raise InvalidParameterError("Monte Carlo needs at least one initial state")
    for state in states:
        if state.n != n:
            raise DimensionMismatchError(f"Initial state on n={state.n}, circuit on n={n}")
        if not state.is_pure_vector:
            raise InvalidParameterError("Monte Carlo runs on statevectors; pass pure states (white noise is allowed)")
    return states


def initial_batch(states: List[QuantumState], indices: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Statevector rows and surviving (1 - q) fractions for sample indices (state s mod k)"""
    picks = indices % len(states)
    psi = np.stack([states[k].statevector for k in picks])
    keep = np.array([1.0 - states[k].white_noise for k in picks])
    return psi, keep


def _check_samples(num_samples: int):
    if num_samples < MIN_NUM_SAMPLES:
        raise InvalidParameterError(f"num_samples must be >= {MIN_NUM_SAMPLES}, got {num_samples}")


def estimate_variance_mc(states: Union[QuantumState, Sequence[QuantumState]], observable: HermitianOp,
                         spec: CircuitSpec, num_samples: int, seed: int,
                         convergence: Optional[ConvergenceSpec] = None,
                         chunk_size: Optional[int] = None, max_workers: Optional[int] = None,
                         show_progress: Optional[bool] = None) -> McEstimate:
    """
    Sample mean and unbiased variance of the loss over random parameters.

    Without convergence (or with layer_doubling off) the spec's num_layers is used as is.
    Non-convergence at max_layers is reported through McEstimate.converged.
    """
    _check_samples(num_samples)
    states = _as_states(states, spec.n)
    if observable.n != spec.n:
        raise DimensionMismatchError(f"Observable on n={observable.n}, circuit on n={spec.n}")
    kernel = CompiledCircuit(spec)
    trace_over_dim = observable.trace() / observable.dim

    def run(layers: int) -> McEstimate:
        def simulate_chunk(indices, generators):
            psi, keep = initial_batch(states, indices)
            thetas = np.stack([spec.sample_parameters(rng, layers) for rng in generators])
            values = kernel.expectations(kernel.run(psi, thetas, layers), observable)
            values = keep * values + (1.0 - keep) * trace_over_dim
            return spam_rescale(values, trace_over_dim, spec)

        with track_mc_run("pauli"):
            losses = run_sample_chunks(num_samples, seed, simulate_chunk, chunk_size, max_workers,
                                       show_progress, desc=f"n={spec.n} L={layers}")
        record_samples("pauli", num_samples)
        estimate = summarize(losses, seed, layers)
        logger.debug(f"MC n={spec.n} L={layers}: var_hat={estimate.variance_hat:.6g} +- {estimate.stderr_of_variance:.2g}")
        return estimate

    if convergence is None or not convergence.layer_doubling:
        estimate = run(spec.num_layers)
        estimate.history = [(spec.num_layers, estimate.variance_hat)]
        return estimate

    layers = convergence.initial_layers or DEFAULT_LAYER_FACTOR * spec.n
    layers = min(layers, convergence.max_layers)
    current = run(layers)
    history = [(layers, current.variance_hat)]
    converged = False
    while 2 * layers <= convergence.max_layers:
        layers *= 2
        deeper = run(layers)
        history.append((layers, deeper.variance_hat))
        difference = abs(deeper.variance_hat - current.variance_hat)
        current = deeper
        if difference <= convergence.rel_tol * max(abs(deeper.variance_hat), VARIANCE_FLOOR):
            converged = True
            break

    current.converged = converged
    current.history = history
    if converged:
        logger.info(f"MC converged at L={current.layers_used}: var_hat={current.variance_hat:.6g}")
    else:
        logger.warning(f"MC did not converge by L={current.layers_used} (max_layers={convergence.max_layers})")
    return current
