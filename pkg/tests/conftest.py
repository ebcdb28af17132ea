import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_points(rng, count, radius=1.5):
    r = radius * np.sqrt(rng.uniform(0, 1, count))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, count))


def random_seed(rng, n, degree):
    from cpladder.seeds import SeedVector

    comps = [tuple(rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)) for _ in range(n)]
    return SeedVector(tuple(comps), label=f"random-{n}-{degree}")
