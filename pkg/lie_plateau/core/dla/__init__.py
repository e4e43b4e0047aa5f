"""
Dynamical Lie algebras: closure, decomposition, Cartan subalgebras, manifests
"""

from .basis import DlaBasis, SparseVec, bracket, vector_from_operator, operator_from_vector, vector_from_pauli
from .closure import lie_closure, augment_with_coherent_errors, normalize_generators
from .decomposition import (
    DlaDecomposition,
    center_of,
    decompose,
    verify_decomposition,
    spans_equal,
    reconstruction_residual,
)
from .cartan import CartanBasis, cartan_subalgebra
from .manifest import to_manifest, from_manifest, save_manifest, load_manifest

__all__ = [
    'DlaBasis',
    'SparseVec',
    'bracket',
    'vector_from_operator',
    'operator_from_vector',
    'vector_from_pauli',
    'lie_closure',
    'augment_with_coherent_errors',
    'normalize_generators',
    'DlaDecomposition',
    'center_of',
    'decompose',
    'verify_decomposition',
    'spans_equal',
    'reconstruction_residual',
    'CartanBasis',
    'cartan_subalgebra',
    'to_manifest',
    'from_manifest',
    'save_manifest',
    'load_manifest',
]
