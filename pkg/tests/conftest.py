import pytest

from cramped.momentgeo import OptimizerConfig


@pytest.fixture
def fast_cfg():
    return OptimizerConfig(restarts=20, max_iters=400, seed=7)
