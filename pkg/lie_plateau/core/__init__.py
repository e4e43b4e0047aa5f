"""
Core LiePlateau Components

Subpackages: pauli, dla, purity, variance, simulate, moments.
"""

from .exceptions import LiePlateauError
from .utils import get_logger

__all__ = ['LiePlateauError', 'get_logger']
