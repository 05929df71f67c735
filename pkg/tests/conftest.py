import os
import sys
from unittest.mock import patch

import numpy as np
import pytest
from fastapi.testclient import TestClient

# Add the project root to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from recordlab.services.figures import ILLUSTRATION_POINTS


@pytest.fixture
def illustration_points():
    """The eight planar points of the dominance illustration, in arrival order"""
    return [list(p) for p in ILLUSTRATION_POINTS]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def mock_env_vars():
    """Pin the simulation environment so reports do not depend on the host"""
    with patch.dict(os.environ, {
        'RECORDLAB_THREADS': '2',
        'RECORDLAB_SEED': '24301',
        'RECORDLAB_LOG_LEVEL': 'WARNING',
    }):
        yield


@pytest.fixture(scope="session")
def client():
    from recordlab.main import app
    return TestClient(app)
