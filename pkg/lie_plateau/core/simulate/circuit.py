"""
Layered Pauli-rotation circuits with optional SPAM and coherent errors.

One layer is prod_l exp(i theta_l H_l) over the layer generators in order; a coherent
error exp(-i alpha K) follows gate `gate_index` in every layer. SPAM is global depolarizing
before the circuit and before the measurement, so it only rescales the loss:
    loss -> (1 - p) loss + p Tr[O] / 2^n
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from lie_plateau.core.constants import (
    PARAMETER_DISTRIBUTIONS,
    ERROR_PROBABILITY_RANGE,
)
from lie_plateau.core.exceptions import (
    DimensionMismatchError,
    InvalidParameterError,
    NonHermitianError,
)
from lie_plateau.core.pauli import HermitianOp, PauliString, parse_pauli, pauli_action
from lie_plateau.core.purity import PauliRotation, QuantumState, check_statevector_size

# Pauli actions are cached per circuit up to this size; larger n recomputes them per use
_ACTION_CACHE_MAX_QUBITS = 14


def _as_pauli(value: Union[str, PauliString], n: Optional[int] = None) -> PauliString:
    pauli = parse_pauli(value, n=n) if isinstance(value, str) else value
    if not pauli.is_hermitian:
        raise NonHermitianError(f"{pauli} is not Hermitian")
    return pauli


@dataclass(frozen=True)
class CoherentError:
    """exp(-i alpha K) applied after gate `gate_index` of every layer"""

    gate_index: int
    pauli: PauliString
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "pauli", _as_pauli(self.pauli))


@dataclass(frozen=True)
class SpamNoise:
    p_before: float = 0.0
    p_after: float = 0.0

    def __post_init__(self):
        for p in (self.p_before, self.p_after):
            if not 0.0 <= p <= 1.0:
                raise InvalidParameterError(ERROR_PROBABILITY_RANGE.format(p=p))

    @property
    def surviving_fraction(self) -> float:
        return (1.0 - self.p_before) * (1.0 - self.p_after)


@dataclass(frozen=True)
class CircuitSpec:
    n: int
    layer_generators: Tuple[PauliString, ...]
    num_layers: int = 1
    parameter_distribution: str = "uniform"
    parameter_scale: float = 1.0  # std for "normal"
    coherent_errors: Tuple[CoherentError, ...] = field(default_factory=tuple)
    spam: Optional[SpamNoise] = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameterError(f"Circuits need n >= 1, got {self.n}")
        check_statevector_size(self.n)
        generators = tuple(_as_pauli(g, self.n) for g in self.layer_generators)
        if not generators:
            raise InvalidParameterError("A layer needs at least one generator")
        if any(g.n != self.n for g in generators):
            raise DimensionMismatchError(f"Every layer generator must act on n={self.n}")
        object.__setattr__(self, "layer_generators", generators)
        object.__setattr__(self, "coherent_errors", tuple(self.coherent_errors))
        if self.num_layers < 1:
            raise InvalidParameterError(f"num_layers must be >= 1, got {self.num_layers}")
        if self.parameter_distribution not in PARAMETER_DISTRIBUTIONS:
            raise InvalidParameterError(
                f"Unknown parameter distribution {self.parameter_distribution!r}, "
                f"expected one of {PARAMETER_DISTRIBUTIONS}"
            )
        for error in self.coherent_errors:
            if not 0 <= error.gate_index < len(generators):
                raise InvalidParameterError(f"Coherent error after gate {error.gate_index} of a {len(generators)}-gate layer")
            if error.pauli.n != self.n:
                raise DimensionMismatchError(f"Coherent error {error.pauli} does not act on n={self.n}")

    @property
    def gates_per_layer(self) -> int:
        return len(self.layer_generators)

    @property
    def num_parameters(self) -> int:
        return self.num_layers * self.gates_per_layer

    def with_layers(self, num_layers: int) -> "CircuitSpec":
        return replace(self, num_layers=num_layers)

    def sample_parameters(self, rng: np.random.Generator, num_layers: Optional[int] = None) -> np.ndarray:
        """Draw layer-major parameters; a deeper draw extends a shallower one from the same stream"""
        count = (num_layers or self.num_layers) * self.gates_per_layer
        if self.parameter_distribution == "uniform":
            return rng.uniform(-np.pi, np.pi, size=count)
        return rng.normal(0.0, self.parameter_scale, size=count)


def circuit_gates(spec: CircuitSpec, theta: Sequence[float]) -> List[PauliRotation]:
    """Gate list for QuantumState.evolve; exp(i theta P) is a rotation by -theta"""
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.shape[0] != spec.num_parameters:
        raise DimensionMismatchError(f"Expected {spec.num_parameters} parameters, got {theta.shape[0]}")
    errors_after: Dict[int, List[CoherentError]] = {}
    for error in spec.coherent_errors:
        errors_after.setdefault(error.gate_index, []).append(error)

    gates = []
    for layer in range(spec.num_layers):
        for l, generator in enumerate(spec.layer_generators):
            gates.append(PauliRotation(generator, -theta[layer * spec.gates_per_layer + l]))
            for error in errors_after.get(l, ()):
                gates.append(PauliRotation(error.pauli, error.alpha))
    return gates


def apply_circuit(state: QuantumState, spec: CircuitSpec, theta: Sequence[float]) -> QuantumState:
    """U(theta) rho U(theta)^dagger"""
    if state.n != spec.n:
        raise DimensionMismatchError(f"State on n={state.n}, circuit on n={spec.n}")
    return state.evolve(circuit_gates(spec, theta))


def spam_rescale(value, trace_over_dim: float, spec: CircuitSpec):
    if spec.spam is None:
        return value
    keep = spec.spam.surviving_fraction
    return keep * value + (1.0 - keep) * trace_over_dim


def loss(state: QuantumState, observable: HermitianOp, spec: CircuitSpec, theta: Sequence[float]) -> float:
    """Tr[U rho U^dagger O], SPAM included when the spec carries it"""
    evolved = apply_circuit(state, spec, theta)
    value = evolved.expectation(observable)
    return float(spam_rescale(value, observable.trace() / observable.dim, spec))


class CompiledCircuit:
    """
    Batched statevector kernel for one CircuitSpec.

    Works on arrays of shape (batch, 2^n); exp(i t P) psi = cos t psi + i sin t P psi.
    """

    def __init__(self, spec: CircuitSpec):
        self.spec = spec
        self.n = spec.n
        self._cache: Dict[Tuple[int, int], Tuple[np.ndarray, np.ndarray]] = {}
        self._errors_after: Dict[int, List[CoherentError]] = {}
        for error in spec.coherent_errors:
            self._errors_after.setdefault(error.gate_index, []).append(error)

    def _action(self, pauli: PauliString) -> Tuple[np.ndarray, np.ndarray]:
        key = pauli.key
        if key in self._cache:
            return self._cache[key]
        action = pauli_action(self.n, pauli.x_bits, pauli.z_bits)
        if self.n <= _ACTION_CACHE_MAX_QUBITS:
            self._cache[key] = action
        return action

    def _rotate(self, psi: np.ndarray, pauli: PauliString, angles: np.ndarray) -> np.ndarray:
        """exp(i angles_b P) on every row"""
        perm, phase = self._action(pauli)
        angles = angles * pauli.sign
        return np.cos(angles)[:, None] * psi + 1j * np.sin(angles)[:, None] * (phase[None, :] * psi[:, perm])

    def run(self, psi: np.ndarray, thetas: np.ndarray, num_layers: int) -> np.ndarray:
        """Evolve every row of psi with its own parameter row (layer-major)"""
        spec = self.spec
        batch = psi.shape[0]
        for layer in range(num_layers):
            for l, generator in enumerate(spec.layer_generators):
                psi = self._rotate(psi, generator, thetas[:, layer * spec.gates_per_layer + l])
                for error in self._errors_after.get(l, ()):
                    psi = self._rotate(psi, error.pauli, np.full(batch, -error.alpha))
        return psi

    def expectations(self, psi: np.ndarray, observable: HermitianOp) -> np.ndarray:
        return batched_expectations(psi, observable, self._action)


def batched_expectations(psi: np.ndarray, observable: HermitianOp, action=None) -> np.ndarray:
    """<psi_b| O |psi_b> for every row"""
    n = observable.n
    if observable.is_dense:
        matrix = observable.to_dense()
        return np.real(np.einsum("bi,ij,bj->b", psi.conj(), matrix, psi))
    values = np.zeros(psi.shape[0])
    for (x, z), coeff in observable.coefficients().items():
        if action is not None:
            perm, phase = action(PauliString(n, x, z))
        else:
            perm, phase = pauli_action(n, x, z)
        values += coeff * np.real(np.sum(psi.conj() * (phase[None, :] * psi[:, perm]), axis=1))
    return values
