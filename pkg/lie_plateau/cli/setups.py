"""
Problem construction: generators, observables and initial states for a config and n,
plus the registry of the four transverse-field Ising setups run by reproduce-si.

Setup 0  |0...0>,                      O = X_p X_{p+1} + Z_p   (p = n // 2)
Setup 1  |0...0>,                      O = X_1 Z ... Z Y_n
Setup 2  local rotations on |0...0>,   O = X_p X_{p+1} + Z_p
Setup 3  n brickwork layers on |0..0>, O = X_p X_{p+1} + Z_p
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from lie_plateau.config.experiment import ExperimentConfig
from lie_plateau.core.constants import DEFAULT_PREP_DRAWS, LOCAL_ROTATION_SCALE
from lie_plateau.core.exceptions import ConfigError, InvalidParameterError
from lie_plateau.core.pauli import (
    HermitianOp,
    PauliString,
    hardware_efficient_generators,
    jordan_wigner_string,
    parse_pauli,
    single_qubit_generators,
    tfim_generators,
)
from lie_plateau.core.purity import (
    QuantumState,
    apply_global_depolarizing,
    apply_state_prep_unitary,
    random_local_rotations,
)
from lie_plateau.core.simulate import CircuitSpec, CoherentError, SpamNoise, brickwork_state
from lie_plateau.core.utils.logger import get_logger

logger = get_logger(__name__)

FAMILIES: Dict[str, Callable[[int], List[PauliString]]] = {
    "tfim": tfim_generators,
    "single_qubit": single_qubit_generators,
    "hardware_efficient": hardware_efficient_generators,
}


# ============================================
# Observables
# ============================================

def local_xx_z_observable(n: int) -> HermitianOp:
    """X_p X_{p+1} + Z_p at the middle of the chain"""
    if n < 2:
        raise InvalidParameterError(f"local_xx_z needs n >= 2, got {n}")
    p = min(n // 2, n - 2)
    return HermitianOp.from_terms([
        (1.0, PauliString.from_sparse(n, {p: "X", p + 1: "X"})),
        (1.0, PauliString.from_sparse(n, {p: "Z"})),
    ])


def jordan_wigner_observable(n: int) -> HermitianOp:
    """X_1 Z_2 ... Z_{n-1} Y_n, a nonlocal string that still lies in the TFIM algebra"""
    if n < 2:
        raise InvalidParameterError(f"jordan_wigner needs n >= 2, got {n}")
    return HermitianOp.from_pauli(jordan_wigner_string(n, 0, n - 1, "X", "Y"))


def z_first_observable(n: int) -> HermitianOp:
    return HermitianOp.from_pauli(PauliString.from_sparse(n, {0: "Z"}))


OBSERVABLE_PRESETS: Dict[str, Callable[[int], HermitianOp]] = {
    "local_xx_z": local_xx_z_observable,
    "jordan_wigner": jordan_wigner_observable,
    "z_first": z_first_observable,
}


# ============================================
# Setups registry
# ============================================

@dataclass(frozen=True)
class Setup:
    index: int
    description: str
    observable: str
    prep: str  # "none", "local_rotations" or "brickwork"


SETUPS: Dict[int, Setup] = {
    0: Setup(0, "|0...0> with a local observable in i*g", "local_xx_z", "none"),
    1: Setup(1, "|0...0> with a nonlocal Jordan-Wigner string in i*g", "jordan_wigner", "none"),
    2: Setup(2, "random single-qubit rotations on |0...0>", "local_xx_z", "local_rotations"),
    3: Setup(3, "n layers of Haar SU(4) brickwork on |0...0>", "local_xx_z", "brickwork"),
}


def prep_rngs(seed: int, n: int, draws: int) -> List[np.random.Generator]:
    """Independent prep streams for (seed, n); the Monte Carlo streams use the bare seed"""
    return [np.random.default_rng(child) for child in np.random.SeedSequence([seed, n, 1]).spawn(draws)]


def prepared_states(n: int, prep: str, seed: int, draws: int = DEFAULT_PREP_DRAWS,
                    rotation_scale: float = LOCAL_ROTATION_SCALE, layers: Optional[int] = None) -> List[QuantumState]:
    """|0...0>, or `draws` independent random preparations of it"""
    if prep == "none":
        return [QuantumState.zeros(n)]
    states = []
    for rng in prep_rngs(seed, n, draws):
        if prep == "local_rotations":
            states.append(apply_state_prep_unitary(QuantumState.zeros(n), random_local_rotations(n, rng, rotation_scale)))
        elif prep == "brickwork":
            states.append(brickwork_state(n, layers or n, rng))
        else:
            raise ConfigError(f"Unknown prep circuit {prep!r}")
    logger.debug(f"Prepared {len(states)} '{prep}' states on n={n}")
    return states


def setup_problem(setup_index: int, n: int, seed: int,
                  prep_draws: int = DEFAULT_PREP_DRAWS) -> Tuple[List[PauliString], List[QuantumState], HermitianOp]:
    """(generators, initial states, observable) of one setup at size n"""
    if setup_index not in SETUPS:
        raise ConfigError(f"Unknown setup {setup_index}", ["setups are numbered 0-3"])
    setup = SETUPS[setup_index]
    states = prepared_states(n, setup.prep, seed, prep_draws)
    return tfim_generators(n), states, OBSERVABLE_PRESETS[setup.observable](n)


# ============================================
# Config resolution
# ============================================

def build_generators(config: ExperimentConfig, n: int) -> List[PauliString]:
    if config.generators is not None:
        generators = [parse_pauli(text) for text in config.generators]
        if generators[0].n != n:
            raise ConfigError(f"Generators act on {generators[0].n} qubits, run asks for n={n}")
        return generators
    if config.family is None:
        raise ConfigError("Config gives no circuit", ["set 'family' or 'generators'"])
    return FAMILIES[config.family](n)


def coherent_error_generators(config: ExperimentConfig, n: int) -> List[PauliString]:
    errors = [parse_pauli(entry.pauli) for entry in config.noise.coherent_errors]
    for error in errors:
        if error.n != n:
            raise ConfigError(f"Coherent error {error} does not act on n={n}")
    return errors


def build_observable(config: ExperimentConfig, n: int) -> HermitianOp:
    spec = config.observable
    if spec is None:
        raise ConfigError("Config gives no observable", ["set observable.terms or observable.preset"])
    if spec.preset is not None:
        return OBSERVABLE_PRESETS[spec.preset](n)
    widths = {parse_pauli(term.pauli).n for term in spec.terms}
    if widths != {n}:
        raise ConfigError(f"Observable terms act on {sorted(widths)} qubits, run asks for n={n}")
    return HermitianOp.from_terms([(term.coeff, term.pauli) for term in spec.terms], n=n)


def build_states(config: ExperimentConfig, n: int, seed: int) -> List[QuantumState]:
    """Initial states before noise; several when a prep circuit is averaged over draws"""
    spec = config.state
    if spec.type == "basis":
        bits = spec.bits if spec.bits is not None else "0" * n
        if len(bits) != n:
            raise ConfigError(f"Basis state {bits!r} has {len(bits)} qubits, run asks for n={n}")
        return [QuantumState.from_bits(bits)]
    if spec.type == "statevector":
        state = QuantumState.from_statevector([complex(re, im) for re, im in spec.amplitudes])
        if state.n != n:
            raise ConfigError(f"Statevector has {state.n} qubits, run asks for n={n}")
        return [state]
    return prepared_states(n, spec.prep, seed, spec.prep_draws, spec.rotation_scale, spec.prep_layers)


def noisy_states(config: ExperimentConfig, states: List[QuantumState]) -> List[QuantumState]:
    """States as seen by the exact formula: depolarized by p_before"""
    p = config.noise.p_before
    return [apply_global_depolarizing(state, p) for state in states] if p > 0 else states


def measured_observable(config: ExperimentConfig, O: HermitianOp) -> HermitianOp:
    """(1 - p) O + p Tr[O] / 2^n, the observable behind a depolarizing channel"""
    p = config.noise.p_after
    if p == 0:
        return O
    shifted = (1.0 - p) * O
    trace_part = O.trace() / O.dim
    if abs(trace_part) > 0:
        shifted = shifted + HermitianOp.from_pauli(PauliString.identity(O.n), p * trace_part)
    return shifted


def build_circuit(config: ExperimentConfig, n: int, generators: List[PauliString], layers: int) -> CircuitSpec:
    noise = config.noise
    spam = SpamNoise(noise.p_before, noise.p_after) if noise.has_spam else None
    errors = tuple(
        CoherentError(entry.gate_index, parse_pauli(entry.pauli, n=n), entry.alpha)
        for entry in noise.coherent_errors
    )
    return CircuitSpec(
        n=n,
        layer_generators=tuple(generators),
        num_layers=layers,
        parameter_distribution=config.sampling.parameter_distribution,
        parameter_scale=config.sampling.parameter_scale,
        coherent_errors=errors,
        spam=spam,
    )
