
import numpy as np
import pytest
from hypothesis import settings


settings.register_profile("ci", max_examples=25, deadline=None)
settings.load_profile("ci")

SEED = 0xF10C4E7


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_gate(rng, N=2):
    d = N * N
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
