"""
Experiment configuration schema

One JSON file describes a run: system size(s), generators, state, observable, noise,
sampling and outputs. Every nested model forbids unknown keys, so a typo fails loudly
before any computation starts.
"""

import json
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, ValidationError, model_validator

from lie_plateau.core.constants import (
    DEFAULT_PREP_DRAWS,
    DEFAULT_REL_TOL,
    DEFAULT_LAMBDA_TOL,
    DECOMPOSE_METHODS,
    LAMBDA_METHODS,
    LOCAL_ROTATION_SCALE,
    MAX_LAYERS,
    MIN_NUM_SAMPLES,
    PARAMETER_DISTRIBUTIONS,
)
from lie_plateau.core.exceptions import ConfigError
from lie_plateau.core.pauli import parse_pauli
from lie_plateau.core.utils.logger import get_logger

logger = get_logger(__name__)


def _check_pauli(text: str) -> str:
    # PauliParseError is a ValueError, so pydantic reports it with the field location
    parse_pauli(text)
    return text.strip()


PauliText = Annotated[str, AfterValidator(_check_pauli)]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class StateSpec(_Strict):
    """Initial state: a basis string, explicit amplitudes, or |0...0> plus a random prep circuit"""

    type: Literal["basis", "statevector", "prep_circuit"] = Field(default="basis", description="State kind")
    bits: Optional[str] = Field(default=None, description="0/1 string, qubit 0 first; default all zeros")
    amplitudes: Optional[List[Tuple[float, float]]] = Field(default=None, description="(re, im) pairs")
    prep: Optional[Literal["local_rotations", "brickwork"]] = Field(default=None, description="Prep circuit kind")
    prep_layers: Optional[int] = Field(default=None, ge=1, description="Brickwork prep layers, default n")
    prep_draws: int = Field(default=DEFAULT_PREP_DRAWS, ge=1, description="Independent prep states averaged")
    rotation_scale: float = Field(default=LOCAL_ROTATION_SCALE, gt=0, description="Std of local rotation angles")

    @model_validator(mode="after")
    def _check_kind(self):
        if self.type == "basis" and self.bits is not None and any(b not in "01" for b in self.bits):
            raise ValueError(f"bits must be a 0/1 string, got {self.bits!r}")
        if self.type == "statevector" and not self.amplitudes:
            raise ValueError("type 'statevector' needs amplitudes")
        if self.type == "prep_circuit" and self.prep is None:
            raise ValueError("type 'prep_circuit' needs prep ('local_rotations' or 'brickwork')")
        return self


class ObservableTerm(_Strict):
    coeff: float = 1.0
    pauli: PauliText


class ObservableSpec(_Strict):
    """Explicit Pauli terms, or a preset built for every n"""

    terms: Optional[List[ObservableTerm]] = Field(default=None, description="Real Pauli expansion")
    preset: Optional[Literal["local_xx_z", "jordan_wigner", "z_first"]] = Field(default=None)

    @model_validator(mode="after")
    def _one_source(self):
        if (self.terms is None) == (self.preset is None):
            raise ValueError("give exactly one of 'terms' or 'preset'")
        if self.terms is not None and not self.terms:
            raise ValueError("'terms' must not be empty")
        return self


class CoherentErrorSpec(_Strict):
    gate_index: int = Field(..., ge=0, description="Error follows this gate of every layer")
    pauli: PauliText
    alpha: float = Field(..., description="Rotation angle of exp(-i alpha K)")


class NoiseSpec(_Strict):
    p_before: float = Field(default=0.0, ge=0.0, le=1.0, description="Depolarizing before the circuit")
    p_after: float = Field(default=0.0, ge=0.0, le=1.0, description="Depolarizing before measurement")
    coherent_errors: List[CoherentErrorSpec] = Field(default_factory=list)

    @property
    def has_spam(self) -> bool:
        return self.p_before > 0.0 or self.p_after > 0.0


class SamplingSpec(_Strict):
    samples: Optional[int] = Field(default=None, ge=MIN_NUM_SAMPLES, description="Default from settings")
    layers: Optional[int] = Field(default=None, ge=1, description="Fixed depth; default starts doubling at 5n")
    layer_doubling: bool = Field(default=True, description="Double the depth until the variance settles")
    rel_tol: float = Field(default=DEFAULT_REL_TOL, gt=0)
    max_layers: int = Field(default=MAX_LAYERS, ge=1)
    parameter_distribution: Literal["uniform", "normal"] = Field(default=PARAMETER_DISTRIBUTIONS[0])
    parameter_scale: float = Field(default=1.0, gt=0, description="Std for the normal distribution")
    brickwork: bool = Field(default=False, description="Sample Haar SU(4) brickwork instead of the generators")


class DepthSpec(_Strict):
    epsilons: List[float] = Field(default_factory=lambda: [1e-3, 1e-6, 1e-9])
    layers: List[int] = Field(default_factory=list, description="Depths at which to report the gap bound")
    method: Literal["auto", "dense", "power", "arnoldi"] = Field(default=LAMBDA_METHODS[0])
    tol: float = Field(default=DEFAULT_LAMBDA_TOL, gt=0)

    @model_validator(mode="after")
    def _check_epsilons(self):
        if any(eps <= 0 for eps in self.epsilons):
            raise ValueError("every epsilon must be positive")
        return self


class OutputSpec(_Strict):
    out_dir: Optional[str] = Field(default=None, description="Default: settings.results_dir")
    report_name: Optional[str] = Field(default=None, description="Report file stem, default the config name")
    write_csv: bool = Field(default=True)


class ExperimentConfig(_Strict):
    """Resolved experiment; echoed verbatim into every report"""

    name: str = Field(default="experiment")
    n: Optional[int] = Field(default=None, ge=1)
    n_range: Optional[Tuple[int, int]] = Field(default=None, description="Inclusive (low, high)")
    setups: Optional[List[int]] = Field(default=None, description="reproduce-si setups, default all four")
    family: Optional[Literal["tfim", "single_qubit", "hardware_efficient"]] = Field(default=None)
    generators: Optional[List[PauliText]] = Field(default=None)
    dim_cap: Optional[int] = Field(default=None, ge=1)
    decompose_method: Literal["auto", "commutant", "peeling"] = Field(default=DECOMPOSE_METHODS[0])
    state: StateSpec = Field(default_factory=StateSpec)
    observable: Optional[ObservableSpec] = Field(default=None)
    noise: NoiseSpec = Field(default_factory=NoiseSpec)
    sampling: SamplingSpec = Field(default_factory=SamplingSpec)
    depth: DepthSpec = Field(default_factory=DepthSpec)
    output: OutputSpec = Field(default_factory=OutputSpec)
    seed: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _check_consistency(self):
        if self.n is not None and self.n_range is not None:
            raise ValueError("give either 'n' or 'n_range', not both")
        if self.n_range is not None:
            low, high = self.n_range
            if not 1 <= low <= high:
                raise ValueError(f"n_range must satisfy 1 <= low <= high, got {self.n_range}")
        if self.family is not None and self.generators is not None:
            raise ValueError("give either 'family' or 'generators', not both")
        if self.generators is not None:
            if not self.generators:
                raise ValueError("'generators' must not be empty")
            lengths = {parse_pauli(text).n for text in self.generators}
            if len(lengths) > 1:
                raise ValueError(f"generators act on different qubit counts {sorted(lengths)}")
            width = lengths.pop()
            if self.n is not None and width != self.n:
                raise ValueError(f"generators act on {width} qubits but n={self.n}")
            if self.n_range is not None:
                raise ValueError("explicit generators fix n; use 'family' with n_range")
        if self.setups is not None:
            bad = [s for s in self.setups if s not in (0, 1, 2, 3)]
            if bad:
                raise ValueError(f"unknown setups {bad}, expected 0-3")
        return self

    def sizes(self) -> List[int]:
        """System sizes this config covers"""
        if self.n_range is not None:
            return list(range(self.n_range[0], self.n_range[1] + 1))
        if self.n is not None:
            return [self.n]
        if self.generators:
            return [parse_pauli(self.generators[0]).n]
        raise ConfigError("Config gives no system size", ["set 'n', 'n_range' or explicit 'generators'"])

    def resolved_seed(self, default: int) -> int:
        return self.seed if self.seed is not None else default


def _format_errors(error: ValidationError) -> List[str]:
    lines = []
    for entry in error.errors():
        location = ".".join(str(part) for part in entry["loc"]) or "<root>"
        lines.append(f"{location}: {entry['msg']}")
    return lines


def _apply_overrides(data: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    data = dict(data)
    if overrides.get("n") is not None:
        data["n"] = overrides["n"]
        data.pop("n_range", None)
    if overrides.get("n_range") is not None:
        data["n_range"] = list(overrides["n_range"])
        data.pop("n", None)
    if overrides.get("setups") is not None:
        data["setups"] = list(overrides["setups"])
    if overrides.get("samples") is not None:
        data["sampling"] = {**data.get("sampling", {}), "samples": overrides["samples"]}
    if overrides.get("seed") is not None:
        data["seed"] = overrides["seed"]
    if overrides.get("out") is not None:
        data["output"] = {**data.get("output", {}), "out_dir": str(overrides["out"])}
    return data


def parse_experiment_config(data: Dict[str, Any], **overrides) -> ExperimentConfig:
    """Validate a config dict after applying CLI overrides (n, n_range, setups, samples, seed, out)"""
    if not isinstance(data, dict):
        raise ConfigError("Experiment config must be a JSON object")
    try:
        return ExperimentConfig.model_validate(_apply_overrides(data, overrides))
    except ValidationError as e:
        diagnostics = _format_errors(e)
        logger.error(f"Invalid experiment config ({len(diagnostics)} errors)")
        raise ConfigError("Invalid experiment config", diagnostics)


def load_experiment_config(path: Optional[Union[str, Path]] = None, **overrides) -> ExperimentConfig:
    """
    Read and validate an experiment config.

    Args:
        path: JSON file; None starts from an empty config (flags only)
        **overrides: n, n_range, setups, samples, seed, out from the command line

    Raises:
        ConfigError: unreadable file, malformed JSON or schema violations, with diagnostics
    """
    data: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"Cannot read config {path}: {e}")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Malformed JSON in {path}", [f"line {e.lineno}, column {e.colno}: {e.msg}"])
    config = parse_experiment_config(data, **overrides)
    logger.debug(f"Loaded experiment config {config.name!r}")
    return config
