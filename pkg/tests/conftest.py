import numpy as np
import pytest
from fastapi.testclient import TestClient

from freqloss.service.app import create_app
from freqloss.tensorimg import save_image


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(scope="session")
def client():
    with TestClient(create_app()) as c:
        yield c


@pytest.fixture
def png_factory(tmp_path):
    """Write an array as PNG into the test's tmp dir and return the path."""

    counter = {"n": 0}

    def write(arr, name=None):
        counter["n"] += 1
        path = tmp_path / (name or f"img{counter['n']}.png")
        save_image(np.asarray(arr, dtype=np.float64), path)
        return path

    return write
