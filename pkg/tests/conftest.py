import math
from dataclasses import replace

import numpy as np
import pytest

from superrad.model import SimConfig, SpatialGrid, SystemState, make_default_config


@pytest.fixture(scope="session")
def default_cfg() -> SimConfig:
    return make_default_config()


@pytest.fixture(scope="session")
def coarse_cfg() -> SimConfig:
    """Same physics on a 128-point grid with 200 steps per cycle; for fast plumbing tests."""
    cfg = make_default_config()
    return replace(cfg, grid=SpatialGrid.symmetric(cfg.grid.xi_max, 128), dtau=math.pi / 200)


def random_state(rng, n=128, tau=None, scale=1.0) -> SystemState:
    grid = SpatialGrid.symmetric(10.0, n)
    y = scale * (rng.normal(size=(3, n)) + 1j * rng.normal(size=(3, n)))
    return SystemState.from_array(rng.uniform(0, 3) if tau is None else tau, y, grid)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
