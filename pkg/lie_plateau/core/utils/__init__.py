"""
Utility Modules
"""

from .logger import get_logger, set_log_level
from .cache import ManifestCache

__all__ = ['get_logger', 'set_log_level', 'ManifestCache']
