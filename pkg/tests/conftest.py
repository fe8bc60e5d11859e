import numpy as np
import pytest

from wqed import ModelParams, solve_single_qubit, solve_two_qubit

# shared parameter points reused across modules; session caches keep the
# suite fast on one core
N_FAST = 400
N_FULL = 2000


@pytest.fixture(scope="session")
def solution_cache():
    cache = {}

    def get(delta, g, n_sites=N_FAST, **kw):
        key = ("1q", delta, g, n_sites, tuple(sorted(kw.items())))
        if key not in cache:
            model = ModelParams.single_qubit(delta, g, n_sites=n_sites, **kw)
            cache[key] = (model, solve_single_qubit(model))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def pair_cache():
    cache = {}

    def get(delta, g, separation, n_sites=N_FAST, **kw):
        key = ("2q", delta, g, separation, n_sites, tuple(sorted(kw.items())))
        if key not in cache:
            model = ModelParams.two_qubit(delta, g, separation,
                                          n_sites=n_sites, **kw)
            cache[key] = (model, solve_two_qubit(model))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240811)
