import functools

import pytest

from kout.oracle import exact_connectivity
from kout.params import ModelParams

# enumerable instances: n <= 6, r <= 2, K_r <= 2
ORACLE_CASES = [
    (4, (1.0,), (1,)),
    (5, (1.0,), (1,)),
    (6, (1.0,), (1,)),
    (5, (1.0,), (2,)),
    (6, (1.0,), (2,)),
    (5, (0.3, 0.7), (1, 1)),
    (6, (0.5, 0.5), (1, 1)),
    (5, (0.5, 0.5), (1, 2)),
    (6, (0.7, 0.3), (1, 2)),
]


@functools.lru_cache(maxsize=None)
def exact(n, mu, k):
    return exact_connectivity(ModelParams.of(n, mu, k))


@pytest.fixture(scope="session")
def oracle():
    return exact
