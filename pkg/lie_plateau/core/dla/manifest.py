"""
DLA manifest: JSON form of a closure and its decomposition.

Coordinates are stored in the normalized Pauli basis P/sqrt(2^n) as they live in memory,
so a save/load cycle reproduces every float exactly (json writes shortest round-trip reprs).
"""
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from filelock import FileLock

from lie_plateau.core.exceptions import ConfigError, PauliParseError
from lie_plateau.core.pauli import PauliString, parse_pauli
from lie_plateau.core.dla.basis import DlaBasis, SparseVec
from lie_plateau.core.dla.decomposition import DlaDecomposition
from lie_plateau.core.utils.logger import get_logger

logger = get_logger(__name__)

MANIFEST_FORMAT = "lie_plateau.dla"
MANIFEST_VERSION = 1
NORMALIZATION_NOTE = "coefficients on P/sqrt(2^n); Hilbert-Schmidt inner product is the dot product"


def _vector_to_terms(vec: SparseVec, n: int) -> List[Dict[str, Any]]:
    return [
        {"coeff": value, "string": PauliString(n, x, z).letters}
        for (x, z), value in sorted(vec.items())
    ]


def _terms_to_vector(terms: List[Dict[str, Any]], n: int) -> SparseVec:
    vec: SparseVec = {}
    for term in terms:
        pauli = parse_pauli(term["string"], n=n)
        if pauli.phase != 0:
            raise PauliParseError(f"Manifest basis strings must be unsigned, got {term['string']!r}")
        vec[pauli.key] = float(term["coeff"])
    return vec


def _generator_entry(vec: SparseVec, n: int) -> Union[str, List[Dict[str, Any]]]:
    """Plain signed string for single unit Pauli generators, term list otherwise"""
    if len(vec) == 1:
        ((x, z), value), = vec.items()
        if abs(value) == 1.0:
            return ("-" if value < 0 else "") + PauliString(n, x, z).letters
    return _vector_to_terms(vec, n)


def _generator_vector(entry, n: int) -> SparseVec:
    if isinstance(entry, str):
        pauli = parse_pauli(entry, n=n)
        return {pauli.key: float(pauli.sign)}
    return _terms_to_vector(entry, n)


def _component(basis: DlaBasis) -> Dict[str, Any]:
    return {"dim": basis.dim, "basis": [_vector_to_terms(vec, basis.n) for vec in basis.vectors]}


def to_manifest(basis: DlaBasis, decomposition: Optional[DlaDecomposition] = None) -> Dict[str, Any]:
    """Plain-dict manifest of a closure, plus center and ideals when a decomposition is given"""
    n = basis.n
    manifest = {
        "format": MANIFEST_FORMAT,
        "version": MANIFEST_VERSION,
        "n": n,
        "generators": [_generator_entry(vec, n) for vec in basis.generators],
        "dim": basis.dim,
        "truncated": basis.truncated,
        "dim_cap": basis.dim_cap,
        "base_dim": basis.base_dim,
        "normalization": NORMALIZATION_NOTE,
        "basis": [_vector_to_terms(vec, n) for vec in basis.vectors],
        "generator_indices": list(basis.generator_indices),
    }
    if decomposition is not None:
        manifest["method"] = decomposition.method
        manifest["center"] = _component(decomposition.center)
        manifest["ideals"] = [_component(ideal) for ideal in decomposition.ideals]
    return manifest


def from_manifest(payload: Dict[str, Any]):
    """
    Rebuild (DlaBasis, DlaDecomposition or None) from a manifest dict.

    Raises:
        ConfigError: wrong format tag or missing fields
    """
    if payload.get("format") != MANIFEST_FORMAT:
        raise ConfigError(f"Not a DLA manifest (format={payload.get('format')!r})")
    try:
        n = int(payload["n"])
        generators = [_generator_vector(entry, n) for entry in payload["generators"]]
        basis = DlaBasis(
            n=n,
            vectors=[_terms_to_vector(terms, n) for terms in payload["basis"]],
            generator_indices=list(payload.get("generator_indices", [])),
            generators=generators,
            truncated=bool(payload.get("truncated", False)),
            dim_cap=payload.get("dim_cap"),
            base_dim=payload.get("base_dim"),
        )
    except KeyError as e:
        raise ConfigError(f"DLA manifest is missing field {e}")

    if basis.dim != payload["dim"]:
        raise ConfigError(f"Manifest dim={payload['dim']} but {basis.dim} basis elements")

    if "center" not in payload:
        return basis, None

    def component(entry, label):
        vectors = [_terms_to_vector(terms, n) for terms in entry["basis"]]
        return DlaBasis(n=n, vectors=vectors, generators=generators, label=label)

    decomposition = DlaDecomposition(
        full=basis,
        center=component(payload["center"], "center"),
        ideals=[component(entry, f"ideal_{j}") for j, entry in enumerate(payload.get("ideals", []))],
        method=payload.get("method", "auto"),
    )
    return basis, decomposition


def _atomic_write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with FileLock(str(path) + ".lock"):
        fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(text)
            os.replace(tmp, path)
        except Exception:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def save_manifest(path: Union[str, Path], basis: DlaBasis,
                  decomposition: Optional[DlaDecomposition] = None) -> Path:
    path = Path(path)
    _atomic_write_text(path, json.dumps(to_manifest(basis, decomposition), indent=2))
    logger.info(f"Saved DLA manifest (dim={basis.dim}) to {path}")
    return path


def load_manifest(path: Union[str, Path]):
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Cannot read DLA manifest {path}: {e}")
    return from_manifest(payload)
