"""
Configuration Management
"""

from .settings import Settings, get_settings, reset_settings
from .experiment import ExperimentConfig, load_experiment_config, parse_experiment_config

__all__ = [
    'Settings',
    'get_settings',
    'reset_settings',
    'ExperimentConfig',
    'load_experiment_config',
    'parse_experiment_config',
]
