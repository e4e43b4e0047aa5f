"""
Exception hierarchy for LiePlateau

Every error knows the CLI exit code it maps to, so commands can just raise.
"""
from typing import Dict, List, Optional

from lie_plateau.core.constants import (
    EXIT_CONFIG,
    EXIT_TRUNCATED,
    EXIT_OUTSIDE_THEORY,
    EXIT_NON_CONVERGENCE,
)


class LiePlateauError(Exception):
    """Base class for all package errors"""

    exit_code = EXIT_CONFIG


class ConfigError(LiePlateauError, ValueError):
    """Invalid experiment configuration or user input"""

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []

    def __str__(self):
        base = super().__str__()
        if not self.diagnostics:
            return base
        return base + "\n" + "\n".join(f"  - {line}" for line in self.diagnostics)


class PauliParseError(ConfigError):
    """Malformed Pauli string"""


class InvalidParameterError(LiePlateauError, ValueError):
    """A numeric argument is outside its allowed range"""


class DimensionMismatchError(LiePlateauError, ValueError):
    """Operands live on different qubit counts or Hilbert spaces"""


class NonHermitianError(LiePlateauError, ValueError):
    """Operator expected to be Hermitian is not"""


class NonUnitaryGateError(LiePlateauError, ValueError):
    """Gate payload is not unitary"""


class NotAWeightStateError(LiePlateauError, ValueError):
    """State does not commute with the Cartan subalgebra"""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class DecompositionError(LiePlateauError):
    """Ideal splitting failed numerically"""

    def __init__(self, message: str, gaps: Optional[List[float]] = None):
        super().__init__(message)
        self.gaps = gaps or []


class TruncatedDlaError(LiePlateauError):
    """Closure was cut off at dim_cap, exact queries are refused"""

    exit_code = EXIT_TRUNCATED


class OutsideTheoryError(LiePlateauError):
    """Neither rho nor O belongs to i*g"""

    exit_code = EXIT_OUTSIDE_THEORY

    def __init__(self, message: str, hypothesis: Optional[Dict[str, bool]] = None):
        super().__init__(message)
        self.hypothesis = hypothesis or {}


class NonConvergenceError(LiePlateauError):
    """Iterative solver stopped at its cap"""

    exit_code = EXIT_NON_CONVERGENCE

    def __init__(self, message: str, residual: float = float("nan"), iterations: int = 0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
