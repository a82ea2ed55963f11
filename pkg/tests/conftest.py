import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "deterministic",
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("deterministic")


@pytest.fixture
def rng():
    return np.random.default_rng(987654321)


def passive_eps_samples(rng, n, min_pole_distance=1.0, max_abs=10.0):
    """Random passive permittivities away from the eps = -1/2 pole."""
    out = []
    while len(out) < n:
        eps = complex(rng.uniform(-3.0, max_abs), rng.uniform(0.0, 5.0))
        if 0.05 <= abs(eps) <= max_abs \
                and abs(2 * eps + 1) >= min_pole_distance:
            out.append(eps)
    return out
