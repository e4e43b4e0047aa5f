"""
Shared pytest fixtures and configuration
"""
import pytest
import shutil
import sys
import tempfile
from pathlib import Path

# Add project root to path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from lie_plateau.config.settings import reset_settings  # noqa: E402
from lie_plateau.core.dla import decompose, lie_closure  # noqa: E402
from lie_plateau.core.pauli import parse_pauli, single_qubit_generators, tfim_generators  # noqa: E402


@pytest.fixture
def temp_dir():
    """Temporary directory removed after the test"""
    path = tempfile.mkdtemp()
    yield path
    shutil.rmtree(path, ignore_errors=True)


@pytest.fixture
def isolated_settings(temp_dir, monkeypatch):
    """Settings pointing results and cache into a temp dir, single worker, no progress bars"""
    monkeypatch.setenv("RESULTS_DIR", str(Path(temp_dir) / "results"))
    monkeypatch.setenv("CACHE_DIR", str(Path(temp_dir) / "cache"))
    monkeypatch.setenv("MAX_WORKERS", "1")
    monkeypatch.setenv("SHOW_PROGRESS", "false")
    reset_settings()
    from lie_plateau.config.settings import get_settings
    yield get_settings()
    reset_settings()


@pytest.fixture
def seed():
    """Fixed seed for reproducible randomized tests"""
    return 20240611


@pytest.fixture
def rng(seed):
    import numpy as np
    return np.random.default_rng(seed)


@pytest.fixture(scope="session")
def tfim3_decomposition():
    """so(6) from the 3-qubit transverse-field Ising generators"""
    return decompose(lie_closure(tfim_generators(3)), seed=0)


@pytest.fixture(scope="session")
def tfim2_decomposition():
    """so(4) = su(2) + su(2) from the 2-qubit transverse-field Ising generators"""
    return decompose(lie_closure(tfim_generators(2)), seed=0)


@pytest.fixture(scope="session")
def local_su2_decomposition():
    """su(2) on each of 3 qubits"""
    return decompose(lie_closure(single_qubit_generators(3)), seed=0)


@pytest.fixture(scope="session")
def su4_decomposition():
    """The full su(4) on 2 qubits"""
    generators = [parse_pauli(text) for text in ("XI", "YI", "IX", "IY", "ZZ")]
    return decompose(lie_closure(generators), seed=0)
