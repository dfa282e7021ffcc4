"""
Pytest configuration and shared fixtures for Teledistill tests.
"""

import pytest
import sys
from pathlib import Path

# Add project root to path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

TEMPLATES = project_root / "templates"


@pytest.fixture
def rng():
    """Seeded generator; every test gets a fresh stream."""
    import numpy as np
    return np.random.default_rng(7)


@pytest.fixture
def bitflip_code():
    """Three-qubit bit-flip code: stabilizers Z1Z2 and Z2Z3."""
    from src.codes import build_code
    from src.zd_symplectic import Subspace, ZdVec

    L = Subspace.span(2, 3, [ZdVec(2, (0, 1, 0, 1, 0, 0)), ZdVec(2, (0, 0, 0, 1, 0, 1))])
    return build_code(L)


@pytest.fixture
def x_noise():
    """iid bit-flip noise on three pairs, P(X) = 0.1 per site."""
    from src.noise import PauliDistribution
    # letters in index order: I, Z, X, XZ
    return PauliDistribution.iid(2, 3, [0.9, 0.0, 0.1, 0.0])


@pytest.fixture
def templates_dir():
    return TEMPLATES


@pytest.fixture
def quiet_config(tmp_path):
    """Config file with small batteries and no log directory."""
    path = tmp_path / "config.yaml"
    path.write_text(
        "seed: 7\n"
        "battery:\n"
        "  random_states: 3\n"
        "  random_states_n2: 2\n"
        "  max_workers: 2\n"
        "logging:\n"
        "  dir: null\n"
        "  level: INFO\n"
        "exponent:\n"
        "  rates: [0.0, 0.2]\n"
    )
    return str(path)
