"""
Shared fixtures.
"""

import numpy as np
import pytest

import config
from src.linalg import Tolerance


@pytest.fixture
def tol() -> Tolerance:
    return Tolerance.from_config()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(seed=42)


@pytest.fixture(autouse=True)
def quiet_debug(monkeypatch):
    """Keep debug chatter off regardless of the local config."""
    monkeypatch.setattr(config, 'DEBUG', False)
