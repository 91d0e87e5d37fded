import os
import sys

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from utils.config_manager import ConfigManager  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_config():
    ConfigManager.reset()
    yield
    ConfigManager.reset()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def scenario_dir():
    return os.path.join(ROOT, "config", "scenarios")


H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j])


@pytest.fixture
def clifford_generators():
    return [H, S]


@pytest.fixture
def signed_permutation_generators():
    cyclic = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
    swap = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)
    flip = np.diag([-1, 1, 1]).astype(complex)
    return [cyclic, swap, flip]
