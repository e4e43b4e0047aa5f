"""
Generator sets and named strings for the circuit families used across the package.
"""
from typing import List

from lie_plateau.core.exceptions import InvalidParameterError
from lie_plateau.core.pauli.pauli_string import PauliString


def _check_n(n: int, minimum: int = 1):
    if n < minimum:
        raise InvalidParameterError(f"Family needs n >= {minimum}, got {n}")


def tfim_generators(n: int) -> List[PauliString]:
    """Transverse-field Ising chain: X_j X_{j+1} couplings then Z_j fields"""
    _check_n(n)
    couplings = [PauliString.from_sparse(n, {j: "X", j + 1: "X"}) for j in range(n - 1)]
    fields = [PauliString.from_sparse(n, {j: "Z"}) for j in range(n)]
    return couplings + fields


def single_qubit_generators(n: int) -> List[PauliString]:
    """X_j and Y_j on every qubit, the algebra is su(2) on each qubit"""
    _check_n(n)
    generators = []
    for j in range(n):
        generators.append(PauliString.from_sparse(n, {j: "X"}))
        generators.append(PauliString.from_sparse(n, {j: "Y"}))
    return generators


def hardware_efficient_generators(n: int) -> List[PauliString]:
    """Single-qubit X_j, Y_j plus Z_j Z_{j+1} entanglers on a chain; controllable"""
    _check_n(n)
    entanglers = [PauliString.from_sparse(n, {j: "Z", j + 1: "Z"}) for j in range(n - 1)]
    return single_qubit_generators(n) + entanglers


def jordan_wigner_string(n: int, i: int, j: int, left: str = "X", right: str = "Y") -> PauliString:
    """left_i Z_{i+1} ... Z_{j-1} right_j, e.g. X_1 Z_2 ... Z_{n-1} Y_n for (0, n-1)"""
    if not 0 <= i < j < n:
        raise InvalidParameterError(f"Need 0 <= i < j < n, got i={i}, j={j}, n={n}")
    letters = {i: left, j: right}
    for k in range(i + 1, j):
        letters[k] = "Z"
    return PauliString.from_sparse(n, letters)
