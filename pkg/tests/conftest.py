import numpy as np
import pytest

import entmre as em
from entmre import _kernels
from entmre.mixed import SearchConfig
from entmre.re_oracle import ReConfig, re_estimate


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation once so timed tests measure steady state."""
    rho = em.werner_state(0.75)
    em.mre_search(rho, SearchConfig(restarts=1, seed=0))
    re_estimate(np.eye(4, dtype=complex) / 4, ReConfig(restarts=1, seed=0))
    yield


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def make_rng(seed):
    return np.random.default_rng(seed)
