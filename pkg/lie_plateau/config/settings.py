"""
Configuration Management for LiePlateau
Using Pydantic for settings - env vars and .env files come for free
"""

import os
from pathlib import Path
from pydantic_settings import BaseSettings
from pydantic import Field

from lie_plateau.core.constants import (
    DEFAULT_SEED,
    DEFAULT_NUM_SAMPLES,
    DEFAULT_MC_CHUNK_SIZE,
    MAX_STATEVECTOR_QUBITS,
    DENSE_MOMENT_MAX_QUBITS,
    MATRIX_FREE_MAX_QUBITS,
)


class Settings(BaseSettings):
    """App settings - loads from .env file automatically"""

    # Application Info
    app_name: str = Field(default="LiePlateau", description="Application name")
    app_version: str = Field(default="1.0.0", description="Application version")

    # Output locations
    results_dir: str = Field(default="./results", description="Where reports and CSV tables go")
    cache_dir: str = Field(default="./data/cache", description="Manifest cache directory")

    # Caching Configuration
    enable_manifest_cache: bool = Field(default=True, description="Reuse DLA manifests across runs")
    max_cache_size: int = Field(default=256, description="Maximum cached manifests")

    # Performance Configuration
    max_workers: int = Field(default=4, description="Worker threads for Monte Carlo chunks and CLI runs")
    mc_chunk_size: int = Field(default=DEFAULT_MC_CHUNK_SIZE, description="Samples simulated per batched chunk")
    show_progress: bool = Field(default=False, description="tqdm progress bars - noisy in CI so off by default")

    # Experiment defaults
    default_seed: int = Field(default=DEFAULT_SEED, description="Seed used when a config gives none")
    default_samples: int = Field(default=DEFAULT_NUM_SAMPLES, description="Monte Carlo samples per estimate")

    # Size caps
    max_statevector_qubits: int = Field(default=MAX_STATEVECTOR_QUBITS, description="Dense statevector limit")
    dense_moment_max_qubits: int = Field(default=DENSE_MOMENT_MAX_QUBITS, description="Dense moment operator limit")
    matrix_free_max_qubits: int = Field(default=MATRIX_FREE_MAX_QUBITS, description="Matrix-free moment operator limit")

    # Logging Configuration
    log_level: str = Field(default="INFO", description="Logging level")

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "case_sensitive": False,
        "extra": "ignore"
    }

    def validate_settings(self):
        """Validate critical settings on startup"""
        import warnings

        if self.max_workers < 1:
            raise ValueError(f"max_workers must be at least 1, got {self.max_workers}")

        if self.mc_chunk_size < 1:
            raise ValueError(f"mc_chunk_size must be at least 1, got {self.mc_chunk_size}")

        if self.max_statevector_qubits > MAX_STATEVECTOR_QUBITS:
            raise ValueError(
                f"max_statevector_qubits={self.max_statevector_qubits} exceeds the hard limit "
                f"of {MAX_STATEVECTOR_QUBITS}"
            )

        if self.dense_moment_max_qubits > DENSE_MOMENT_MAX_QUBITS or self.matrix_free_max_qubits > MATRIX_FREE_MAX_QUBITS:
            raise ValueError("Moment operator caps exceed the supported sizes")

        cpu_count = os.cpu_count() or 1
        if self.max_workers > cpu_count:
            warnings.warn(
                f"max_workers={self.max_workers} is larger than the {cpu_count} available CPUs; "
                "numpy kernels will just contend with each other.",
                UserWarning
            )

    def create_directories(self):
        """Create required directories"""
        for directory in (Path(self.results_dir), Path(self.cache_dir)):
            directory.mkdir(parents=True, exist_ok=True)


# Global settings instance
_settings = None


def get_settings() -> Settings:
    """Get global settings instance"""
    global _settings
    if _settings is None:
        _settings = Settings()
        _settings.validate_settings()
    return _settings


def reset_settings():
    """Drop the cached instance so the next get_settings() re-reads the environment"""
    global _settings
    _settings = None
