"""
Metrics and Observability for LiePlateau
Prometheus counters and timers - handy when a closure or a Monte Carlo run is slower than expected
"""

import time
from typing import Dict, Any
from contextlib import contextmanager
from prometheus_client import Counter, Histogram, Gauge, REGISTRY
from lie_plateau.core.constants import (
    METRICS_NAMESPACE,
    METRICS_SUBSYSTEM_DLA,
    METRICS_SUBSYSTEM_SIMULATE,
    METRICS_SUBSYSTEM_MOMENTS,
    METRICS_SUBSYSTEM_CLI,
    DURATION_BUCKETS,
)
from lie_plateau.core.utils.logger import get_logger

logger = get_logger(__name__)

# ============================================
# DLA Metrics
# ============================================

closures_total = Counter(
    'closures_total',
    'Lie closures computed',
    ['status'],  # complete, truncated
    namespace=METRICS_NAMESPACE,
    subsystem=METRICS_SUBSYSTEM_DLA
)

closure_duration = Histogram(
    'closure_duration_seconds',
    'Lie closure duration',
    buckets=DURATION_BUCKETS,
    namespace=METRICS_NAMESPACE,
    subsystem=METRICS_SUBSYSTEM_DLA
)

decomposition_duration = Histogram(
    'decomposition_duration_seconds',
    'Reductive decomposition duration',
    ['method'],
    buckets=DURATION_BUCKETS,
    namespace=METRICS_NAMESPACE,
    subsystem=METRICS_SUBSYSTEM_DLA
)

dla_dimension = Gauge(
    'dimension',
    'Dimension of the most recent DLA',
    namespace=METRICS_NAMESPACE,
    subsystem=METRICS_SUBSYSTEM_DLA
)

manifest_cache_lookups = Counter(
    'manifest_cache_lookups_total',
    'Manifest cache lookups',
    ['result'],  # hit, miss
    namespace=METRICS_NAMESPACE,
    subsystem=METRICS_SUBSYSTEM_DLA
)

# ============================================
# Simulation Metrics
# ============================================

samples_simulated = Counter(
    'samples_total',
    'Circuit samples simulated',
    ['kind'],  # pauli, brickwork
    namespace=METRICS_NAMESPACE,
    subsystem=METRICS_SUBSYSTEM_SIMULATE
)

mc_run_duration = Histogram(
    'run_duration_seconds',
    'Monte Carlo run duration',
    ['kind'],
    buckets=DURATION_BUCKETS,
    namespace=METRICS_NAMESPACE,
    subsystem=METRICS_SUBSYSTEM_SIMULATE
)

# ============================================
# Moment Operator Metrics
# ============================================

eigensolve_duration = Histogram(
    'eigensolve_duration_seconds',
    'Leading eigenvalue solve duration',
    ['method'],
    buckets=DURATION_BUCKETS,
    namespace=METRICS_NAMESPACE,
    subsystem=METRICS_SUBSYSTEM_MOMENTS
)

operator_applications = Counter(
    'operator_applications_total',
    'Reduced moment operator applications',
    namespace=METRICS_NAMESPACE,
    subsystem=METRICS_SUBSYSTEM_MOMENTS
)

# ============================================
# CLI Metrics
# ============================================

commands_total = Counter(
    'commands_total',
    'CLI commands run',
    ['command', 'status'],
    namespace=METRICS_NAMESPACE,
    subsystem=METRICS_SUBSYSTEM_CLI
)

command_duration = Histogram(
    'command_duration_seconds',
    'CLI command duration',
    ['command'],
    buckets=DURATION_BUCKETS,
    namespace=METRICS_NAMESPACE,
    subsystem=METRICS_SUBSYSTEM_CLI
)

# ============================================
# Utility Functions
# ============================================

@contextmanager
def track_closure():
    """
    Context manager to time a Lie closure

    Example:
        with track_closure():
            basis = lie_closure(generators)
    """
    start_time = time.time()
    try:
        yield
    finally:
        closure_duration.observe(time.time() - start_time)


@contextmanager
def track_decomposition(method: str):
    """Time a decomposition run, labelled by splitting method"""
    start_time = time.time()
    try:
        yield
    finally:
        decomposition_duration.labels(method=method).observe(time.time() - start_time)


@contextmanager
def track_mc_run(kind: str):
    """
    Context manager to track a Monte Carlo run

    Args:
        kind: 'pauli' for Pauli-rotation circuits, 'brickwork' for Haar-SU(4) bricks
    """
    start_time = time.time()
    try:
        yield
    finally:
        mc_run_duration.labels(kind=kind).observe(time.time() - start_time)


@contextmanager
def track_eigensolve(method: str):
    """Time a leading-eigenvalue computation"""
    start_time = time.time()
    try:
        yield
    finally:
        eigensolve_duration.labels(method=method).observe(time.time() - start_time)


@contextmanager
def track_command(command: str):
    """
    Context manager to track a CLI command

    Args:
        command: subcommand name (dla, purity, variance, ...)
    """
    start_time = time.time()
    status = 'success'
    try:
        yield
    except Exception as e:
        status = 'error'
        logger.error(f"Command {command} failed: {e}")
        raise
    finally:
        command_duration.labels(command=command).observe(time.time() - start_time)
        commands_total.labels(command=command, status=status).inc()


def record_closure(dimension: int, truncated: bool):
    """
    Record a finished closure

    Args:
        dimension: dimension reached
        truncated: whether dim_cap stopped the closure
    """
    closures_total.labels(status='truncated' if truncated else 'complete').inc()
    dla_dimension.set(dimension)


def record_samples(kind: str, count: int):
    """Record simulated circuit samples"""
    samples_simulated.labels(kind=kind).inc(count)


def record_operator_application(count: int = 1):
    """Record reduced moment operator applications"""
    operator_applications.inc(count)


def record_cache_hit():
    """Record manifest cache hit"""
    manifest_cache_lookups.labels(result='hit').inc()


def record_cache_miss():
    """Record manifest cache miss"""
    manifest_cache_lookups.labels(result='miss').inc()


def _sample_value(name: str, labels: Dict[str, str] = None) -> float:
    value = REGISTRY.get_sample_value(name, labels or {})
    return float(value) if value is not None else 0.0


def get_metrics_summary() -> Dict[str, Any]:
    """
    Get summary of key metrics

    Returns:
        Dictionary with current counter values
    """
    prefix = f"{METRICS_NAMESPACE}_"
    hits = _sample_value(f"{prefix}{METRICS_SUBSYSTEM_DLA}_manifest_cache_lookups_total", {"result": "hit"})
    misses = _sample_value(f"{prefix}{METRICS_SUBSYSTEM_DLA}_manifest_cache_lookups_total", {"result": "miss"})
    return {
        "closures_complete": _sample_value(f"{prefix}{METRICS_SUBSYSTEM_DLA}_closures_total", {"status": "complete"}),
        "closures_truncated": _sample_value(f"{prefix}{METRICS_SUBSYSTEM_DLA}_closures_total", {"status": "truncated"}),
        "last_dla_dimension": _sample_value(f"{prefix}{METRICS_SUBSYSTEM_DLA}_dimension"),
        "pauli_samples": _sample_value(f"{prefix}{METRICS_SUBSYSTEM_SIMULATE}_samples_total", {"kind": "pauli"}),
        "brickwork_samples": _sample_value(f"{prefix}{METRICS_SUBSYSTEM_SIMULATE}_samples_total", {"kind": "brickwork"}),
        "cache_hit_rate": hits / (hits + misses) if hits + misses else None,
    }
