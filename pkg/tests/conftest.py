import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from implicit_monotone import BoundaryPolicy, GridSpec

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def periodic_1d():
    return GridSpec.uniform(0.0, 1.0, 10, 0.1, boundary=BoundaryPolicy.periodic())


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
