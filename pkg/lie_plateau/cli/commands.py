"""
Subcommands of the LiePlateau CLI.

Every command takes a validated ExperimentConfig, runs one job per system size (or per
(setup, n) for reproduce-si), and returns a CommandResult holding the reports, the table
rows and the exit code. Errors inside one run are recorded in that run's report and the
remaining runs continue; the worst exit code wins.
"""
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from lie_plateau.cli.reports import (
    STATUS_ERROR,
    STATUS_NOT_CONVERGED,
    STATUS_OUTSIDE_THEORY,
    STATUS_TRUNCATED,
    RunReport,
    Stopwatch,
    write_reports,
    write_table,
)
from lie_plateau.cli.setups import (
    SETUPS,
    build_circuit,
    build_generators,
    build_observable,
    build_states,
    coherent_error_generators,
    measured_observable,
    noisy_states,
    setup_problem,
    z_first_observable,
)
from lie_plateau.config.experiment import ExperimentConfig
from lie_plateau.config.settings import Settings, get_settings
from lie_plateau.core.constants import (
    CSV_COLUMNS_DEPTH,
    CSV_COLUMNS_DLA,
    CSV_COLUMNS_MONTECARLO,
    CSV_COLUMNS_PURITY,
    CSV_COLUMNS_REPRODUCE,
    CSV_COLUMNS_VARIANCE,
    DEFAULT_LAYER_FACTOR,
    DEFAULT_N_RANGE,
    ERROR_TRUNCATED,
    EXIT_CONFIG,
    EXIT_NON_CONVERGENCE,
    EXIT_OK,
    EXIT_TRUNCATED,
    MIN_FAMILY_SIZES,
    REPRODUCE_MAX_N,
    REPRODUCE_MIN_N,
)
from lie_plateau.core.dla import (
    DlaBasis,
    DlaDecomposition,
    augment_with_coherent_errors,
    decompose,
    from_manifest,
    lie_closure,
    to_manifest,
)
from lie_plateau.core.exceptions import (
    ConfigError,
    LiePlateauError,
    NonConvergenceError,
    OutsideTheoryError,
    TruncatedDlaError,
)
from lie_plateau.core.moments import expressiveness_report
from lie_plateau.core.pauli import HermitianOp, PauliString
from lie_plateau.core.purity import QuantumState, g_purity, purity_report
from lie_plateau.core.simulate import ConvergenceSpec, McEstimate, brickwork_variance_mc, estimate_variance_mc
from lie_plateau.core.utils.cache import ManifestCache
from lie_plateau.core.utils.logger import get_logger
from lie_plateau.core.utils.metrics import track_command
from lie_plateau.core.variance import FamilyPoint, bp_diagnose, loss_variance, two_design_variance

logger = get_logger(__name__)


@dataclass
class CommandResult:
    command: str
    reports: List[RunReport]
    rows: List[dict]
    columns: List[str]
    exit_code: int = EXIT_OK
    paths: List[Path] = field(default_factory=list)


@dataclass
class ExactSummary:
    """Exact prediction averaged over the initial states of one run"""

    dim: int
    purity_rho: float
    purity_O: float
    hs_norm_O: float
    mean: float
    variance: float
    per_state: List[dict]

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "purity_rho": self.purity_rho,
            "purity_O": self.purity_O,
            "mean": self.mean,
            "variance": self.variance,
            "per_state": self.per_state,
        }

    def family_point(self, n: int) -> FamilyPoint:
        return FamilyPoint(n, self.dim, self.purity_rho, self.purity_O, self.hs_norm_O, self.variance, self.mean)


def derive_seed(seed: int, *keys: int) -> int:
    """Independent 32-bit seed for a (setup, n, ...) run of a seeded experiment"""
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1)[0])


def _status_for(error: Exception) -> Tuple[str, int]:
    if isinstance(error, TruncatedDlaError):
        return STATUS_TRUNCATED, error.exit_code
    if isinstance(error, OutsideTheoryError):
        return STATUS_OUTSIDE_THEORY, error.exit_code
    if isinstance(error, NonConvergenceError):
        return STATUS_NOT_CONVERGED, error.exit_code
    if isinstance(error, LiePlateauError):
        return STATUS_ERROR, error.exit_code
    return STATUS_ERROR, EXIT_CONFIG


# ============================================
# Shared pieces
# ============================================

class DlaProvider:
    """Closure + decomposition per generator set, backed by the manifest cache"""

    def __init__(self, config: ExperimentConfig, settings: Settings, seed: int):
        self.config = config
        self.seed = seed
        self.cache = None
        if settings.enable_manifest_cache:
            self.cache = ManifestCache(settings.cache_dir, settings.max_cache_size)

    def _key(self, generators: List[PauliString], errors: List[PauliString], n: int) -> str:
        strings = [str(g) for g in generators] + [f"error:{e}" for e in errors]
        strings.append(f"method:{self.config.decompose_method}")
        return ManifestCache.make_key(strings, n, self.config.dim_cap)

    def get(self, generators: List[PauliString], errors: List[PauliString],
            n: int) -> Tuple[DlaBasis, Optional[DlaDecomposition]]:
        key = self._key(generators, errors, n)
        if self.cache is not None:
            cached = self.cache.get(key)
            if cached is not None:
                basis, decomposition = from_manifest(cached)
                if decomposition is not None:
                    return basis, decomposition

        if errors:
            basis = augment_with_coherent_errors(generators, errors, self.config.dim_cap)
        else:
            basis = lie_closure(generators, self.config.dim_cap)
        if basis.truncated:
            return basis, None
        decomposition = decompose(basis, method=self.config.decompose_method, seed=self.seed)
        if self.cache is not None:
            self.cache.set(key, to_manifest(basis, decomposition))
        return basis, decomposition


def _require_decomposition(basis: DlaBasis, decomposition: Optional[DlaDecomposition]) -> DlaDecomposition:
    if decomposition is None:
        raise TruncatedDlaError(ERROR_TRUNCATED.format(cap=basis.dim_cap))
    return decomposition


def exact_summary(states: List[QuantumState], O: HermitianOp, decomposition: DlaDecomposition) -> ExactSummary:
    """Exact mean and variance from the ideal purities, averaged over the initial states"""
    full = decomposition.full
    predictions = [loss_variance(state, O, decomposition) for state in states]
    return ExactSummary(
        dim=full.dim,
        purity_rho=float(np.mean([g_purity(state, full) for state in states])),
        purity_O=g_purity(O, full),
        hs_norm_O=O.hs_norm_sq(),
        mean=float(np.mean([p.mean for p in predictions])),
        variance=float(np.mean([p.variance for p in predictions])),
        per_state=[p.to_dict() for p in predictions],
    )


def _new_report(command: str, config: ExperimentConfig, seed: int, **fields) -> RunReport:
    return RunReport(command=command, config=config.model_dump(), seed=seed, **fields)


def _output_paths(config: ExperimentConfig, settings: Settings, command: str) -> Tuple[Path, Path]:
    out_dir = Path(config.output.out_dir or settings.results_dir)
    stem = config.output.report_name or config.name
    return out_dir / f"{stem}_{command}.json", out_dir / f"{stem}_{command}.csv"


def _finish(result: CommandResult, config: ExperimentConfig, settings: Settings) -> CommandResult:
    json_path, csv_path = _output_paths(config, settings, result.command)
    result.paths.append(write_reports(result.reports, json_path))
    if config.output.write_csv:
        result.paths.append(write_table(result.rows, result.columns, csv_path))
    codes = [report.exit_code for report in result.reports] or [EXIT_OK]
    result.exit_code = max(result.exit_code, max(codes))
    return result


# ============================================
# Commands
# ============================================

def cmd_dla(config: ExperimentConfig, settings: Optional[Settings] = None) -> CommandResult:
    """Closure and decomposition manifest for every n; exit 2 when dim_cap cut the closure"""
    settings = settings or get_settings()
    seed = config.resolved_seed(settings.default_seed)
    provider = DlaProvider(config, settings, seed)
    result = CommandResult("dla", [], [], CSV_COLUMNS_DLA)

    with track_command("dla"):
        for n in config.sizes():
            watch = Stopwatch()
            report = _new_report("dla", config, seed, n=n)
            basis, decomposition = provider.get(build_generators(config, n), coherent_error_generators(config, n), n)
            report.dla = to_manifest(basis, decomposition)
            row = {"n": n, "dim_g": basis.dim, "truncated": basis.truncated}
            if basis.truncated:
                report.fail(TruncatedDlaError(ERROR_TRUNCATED.format(cap=basis.dim_cap)), STATUS_TRUNCATED, EXIT_TRUNCATED)
            else:
                row.update({
                    "center_dim": decomposition.center.dim,
                    "ideal_dims": " ".join(str(ideal.dim) for ideal in decomposition.ideals),
                    "method": decomposition.method,
                })
                report.notes.append(f"dims={decomposition.dims}")
            report.wall_clock_seconds = watch.elapsed()
            result.reports.append(report)
            result.rows.append(row)
    return _finish(result, config, settings)


def cmd_purity(config: ExperimentConfig, settings: Optional[Settings] = None) -> CommandResult:
    """g-purities of the initial state(s) and, when configured, of the observable"""
    settings = settings or get_settings()
    seed = config.resolved_seed(settings.default_seed)
    provider = DlaProvider(config, settings, seed)
    result = CommandResult("purity", [], [], CSV_COLUMNS_PURITY)

    with track_command("purity"):
        for n in config.sizes():
            watch = Stopwatch()
            report = _new_report("purity", config, seed, n=n)
            row = {"n": n}
            try:
                basis, decomposition = provider.get(build_generators(config, n), coherent_error_generators(config, n), n)
                decomposition = _require_decomposition(basis, decomposition)
                states = noisy_states(config, build_states(config, n, seed))
                payload = {"states": [purity_report(state, decomposition).to_dict() for state in states]}
                row.update({
                    "dim_g": basis.dim,
                    "purity_rho": float(np.mean([g_purity(state, basis) for state in states])),
                })
                if config.observable is not None:
                    O = measured_observable(config, build_observable(config, n))
                    payload["observable"] = purity_report(O, decomposition).to_dict()
                    row["purity_O"] = g_purity(O, basis)
                report.purity = payload
            except (TruncatedDlaError, ConfigError) as e:
                report.fail(e, *_status_for(e))
            report.wall_clock_seconds = watch.elapsed()
            result.reports.append(report)
            result.rows.append(row)
    return _finish(result, config, settings)


def cmd_variance(config: ExperimentConfig, settings: Optional[Settings] = None) -> CommandResult:
    """Exact mean and variance per n, plus a BP diagnosis when the config spans enough sizes"""
    settings = settings or get_settings()
    seed = config.resolved_seed(settings.default_seed)
    provider = DlaProvider(config, settings, seed)
    result = CommandResult("variance", [], [], CSV_COLUMNS_VARIANCE)
    points = []

    with track_command("variance"):
        for n in config.sizes():
            watch = Stopwatch()
            report = _new_report("variance", config, seed, n=n)
            row = {"n": n, "status": report.status}
            try:
                basis, decomposition = provider.get(build_generators(config, n), coherent_error_generators(config, n), n)
                decomposition = _require_decomposition(basis, decomposition)
                states = noisy_states(config, build_states(config, n, seed))
                O = measured_observable(config, build_observable(config, n))
                summary = exact_summary(states, O, decomposition)
                report.variance = summary.to_dict()
                report.dla = to_manifest(basis, decomposition)
                points.append(summary.family_point(n))
                row.update({
                    "dim_g": summary.dim, "purity_rho": summary.purity_rho, "purity_O": summary.purity_O,
                    "mean": summary.mean, "var_exact": summary.variance,
                })
            except (TruncatedDlaError, OutsideTheoryError, ConfigError) as e:
                report.fail(e, *_status_for(e))
                row["status"] = report.status
            report.wall_clock_seconds = watch.elapsed()
            result.reports.append(report)
            result.rows.append(row)

        if len(points) >= MIN_FAMILY_SIZES:
            diagnosis = bp_diagnose(points)
            summary_report = _new_report("variance", config, seed, diagnosis=diagnosis.to_dict())
            summary_report.notes.append(f"{diagnosis.verdict} over n={[p.n for p in points]}")
            result.reports.append(summary_report)
    return _finish(result, config, settings)


def _convergence(config: ExperimentConfig) -> Optional[ConvergenceSpec]:
    sampling = config.sampling
    if not sampling.layer_doubling:
        return None
    return ConvergenceSpec(
        layer_doubling=True,
        rel_tol=sampling.rel_tol,
        max_layers=sampling.max_layers,
        initial_layers=sampling.layers,
    )


def _mc_fields(estimate: McEstimate, exact: Optional[float]) -> Dict[str, Optional[float]]:
    return {
        "L": estimate.layers_used,
        "samples": estimate.num_samples,
        "var_hat": estimate.variance_hat,
        "stderr": estimate.stderr_of_variance,
        "var_exact": exact,
        "z_score": estimate.z_score(exact) if exact is not None else None,
    }


def cmd_montecarlo(config: ExperimentConfig, settings: Optional[Settings] = None) -> CommandResult:
    """Monte Carlo variance next to the exact prediction; exit 4 when layer doubling does not settle"""
    settings = settings or get_settings()
    seed = config.resolved_seed(settings.default_seed)
    samples = config.sampling.samples or settings.default_samples
    provider = DlaProvider(config, settings, seed)
    result = CommandResult("montecarlo", [], [], CSV_COLUMNS_MONTECARLO)

    with track_command("montecarlo"):
        for n in config.sizes():
            watch = Stopwatch()
            report = _new_report("montecarlo", config, seed, n=n)
            row = {"n": n}
            try:
                states = build_states(config, n, seed)
                O = build_observable(config, n)
                layers = config.sampling.layers or DEFAULT_LAYER_FACTOR * n
                if config.sampling.brickwork:
                    noisy = noisy_states(config, states)
                    O_measured = measured_observable(config, O)
                    exact = float(np.mean([two_design_variance(state, O_measured) for state in noisy]))
                    report.variance = {"variance": exact, "model": "2-design"}
                    estimate = brickwork_variance_mc(n, layers, noisy, O_measured, samples, seed)
                else:
                    exact = None
                    try:
                        basis, decomposition = provider.get(build_generators(config, n),
                                                            coherent_error_generators(config, n), n)
                        summary = exact_summary(noisy_states(config, states), measured_observable(config, O),
                                                _require_decomposition(basis, decomposition))
                        exact = summary.variance
                        report.variance = summary.to_dict()
                    except (TruncatedDlaError, OutsideTheoryError) as e:
                        report.notes.append(f"no exact prediction: {e}")
                    spec = build_circuit(config, n, build_generators(config, n), layers)
                    estimate = estimate_variance_mc(states, O, spec, samples, seed, _convergence(config))
                report.monte_carlo = estimate.to_dict()
                row.update(_mc_fields(estimate, exact))
                if not estimate.converged:
                    report.fail(NonConvergenceError(f"Variance still moving at L={estimate.layers_used}"),
                                STATUS_NOT_CONVERGED, EXIT_NON_CONVERGENCE)
            except LiePlateauError as e:
                report.fail(e, *_status_for(e))
            report.wall_clock_seconds = watch.elapsed()
            result.reports.append(report)
            result.rows.append(row)
    return _finish(result, config, settings)


def cmd_depth(config: ExperimentConfig, settings: Optional[Settings] = None) -> CommandResult:
    """lambda_max of the brickwork moment operator, depths per epsilon and gap bounds"""
    settings = settings or get_settings()
    seed = config.resolved_seed(settings.default_seed)
    result = CommandResult("depth", [], [], CSV_COLUMNS_DEPTH)
    spec = config.depth

    with track_command("depth"):
        for n in config.sizes():
            watch = Stopwatch()
            report = _new_report("depth", config, seed, n=n)
            try:
                O = build_observable(config, n) if config.observable is not None else z_first_observable(n)
                expressiveness = expressiveness_report(n, spec.epsilons, O, spec.layers, spec.method, spec.tol)
                report.depth = expressiveness.to_dict()
                for epsilon, depth in expressiveness.epsilon_targets:
                    result.rows.append({"n": n, "lambda_max": expressiveness.lambda_max, "epsilon": epsilon, "L": depth})
                if not expressiveness.epsilon_targets:
                    result.rows.append({"n": n, "lambda_max": expressiveness.lambda_max})
            except LiePlateauError as e:
                report.fail(e, *_status_for(e))
            report.wall_clock_seconds = watch.elapsed()
            result.reports.append(report)
    return _finish(result, config, settings)


# ============================================
# reproduce-si
# ============================================

def _reproduce_sizes(config: ExperimentConfig) -> List[int]:
    if config.n is None and config.n_range is None:
        low, high = DEFAULT_N_RANGE
        return list(range(low, high + 1))
    sizes = config.sizes()
    if min(sizes) < REPRODUCE_MIN_N or max(sizes) > REPRODUCE_MAX_N:
        raise ConfigError(
            f"reproduce-si runs n in [{REPRODUCE_MIN_N}, {REPRODUCE_MAX_N}], got {min(sizes)}..{max(sizes)}"
        )
    return sizes


def _reproduce_run(config: ExperimentConfig, setup_index: int, n: int, seed: int,
                   decomposition: DlaDecomposition, samples: int, run_mc: bool) -> Tuple[RunReport, dict, Optional[FamilyPoint]]:
    watch = Stopwatch()
    report = _new_report("reproduce-si", config, seed, n=n, setup=setup_index)
    report.notes.append(SETUPS[setup_index].description)
    row = {"setup": setup_index, "n": n}
    point = None
    try:
        generators, states, O = setup_problem(setup_index, n, seed, config.state.prep_draws)
        summary = exact_summary(noisy_states(config, states), measured_observable(config, O), decomposition)
        report.variance = summary.to_dict()
        point = summary.family_point(n)
        row.update({
            "dim_g": summary.dim, "purity_rho": summary.purity_rho, "purity_O": summary.purity_O,
            "var_exact": summary.variance,
        })
        if run_mc:
            spec = build_circuit(config, n, generators, config.sampling.layers or DEFAULT_LAYER_FACTOR * n)
            estimate = estimate_variance_mc(states, O, spec, samples, derive_seed(seed, setup_index, n),
                                            _convergence(config), show_progress=False)
            report.monte_carlo = estimate.to_dict()
            row.update({
                "var_mc": estimate.variance_hat,
                "stderr": estimate.stderr_of_variance,
                "z": estimate.z_score(summary.variance),
            })
            if not estimate.converged:
                report.fail(NonConvergenceError(f"Variance still moving at L={estimate.layers_used}"),
                            STATUS_NOT_CONVERGED, EXIT_NON_CONVERGENCE)
    except LiePlateauError as e:
        logger.error(f"Setup {setup_index}, n={n} failed: {e}")
        report.fail(e, *_status_for(e))
    report.wall_clock_seconds = watch.elapsed()
    return report, row, point


def cmd_reproduce_si(config: ExperimentConfig, settings: Optional[Settings] = None,
                     run_mc: bool = True) -> CommandResult:
    """
    Setups 0-3 over an n-range: exact prediction, Monte Carlo estimate and z-score per
    (setup, n), then a BP diagnosis per setup from the exact variances.
    """
    settings = settings or get_settings()
    seed = config.resolved_seed(settings.default_seed)
    samples = config.sampling.samples or settings.default_samples
    setups = config.setups if config.setups is not None else sorted(SETUPS)
    result = CommandResult("reproduce-si", [], [], CSV_COLUMNS_REPRODUCE)

    with track_command("reproduce-si"):
        sizes = _reproduce_sizes(config)
        provider = DlaProvider(config, settings, seed)
        decompositions = {}
        for n in sizes:
            # every setup shares the TFIM algebra, so one closure per n
            generators, _, _ = setup_problem(0, n, seed, 1)
            basis, decomposition = provider.get(generators, coherent_error_generators(config, n), n)
            decompositions[n] = _require_decomposition(basis, decomposition)

        jobs = [(s, n) for s in setups for n in sizes]
        outcomes = {}
        with ThreadPoolExecutor(max_workers=settings.max_workers) as executor:
            futures = {
                executor.submit(_reproduce_run, config, s, n, seed, decompositions[n], samples, run_mc): (s, n)
                for s, n in jobs
            }
            for future in tqdm(as_completed(futures), total=len(futures), desc="reproduce-si",
                               disable=not settings.show_progress):
                outcomes[futures[future]] = future.result()

        for job in jobs:
            report, row, _ = outcomes[job]
            result.reports.append(report)
            result.rows.append(row)

        for s in setups:
            points = [outcomes[(s, n)][2] for n in sizes if outcomes[(s, n)][2] is not None]
            if len(points) < MIN_FAMILY_SIZES:
                logger.warning(f"Setup {s}: {len(points)} sizes, too few for a BP diagnosis")
                continue
            diagnosis = bp_diagnose(points)
            summary = _new_report("reproduce-si", config, seed, setup=s, diagnosis=diagnosis.to_dict())
            summary.notes.append(f"Setup {s}: {diagnosis.verdict}")
            result.reports.append(summary)
            logger.info(f"Setup {s}: {diagnosis.verdict} (cause={diagnosis.cause})")
    return _finish(result, config, settings)


COMMANDS = {
    "dla": cmd_dla,
    "purity": cmd_purity,
    "variance": cmd_variance,
    "montecarlo": cmd_montecarlo,
    "depth": cmd_depth,
}
