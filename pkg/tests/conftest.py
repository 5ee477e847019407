import numpy as np
import pytest

from ricker2 import make_cycle


@pytest.fixture(scope="session")
def cycle_odd_small():
    """Odd period, amplitudes inside (0, 2): multistable 6-cycles."""
    return make_cycle([1.0, 1.9, 0.8])


@pytest.fixture(scope="session")
def cycle_odd_large():
    """Odd period, amplitude 4: higher-order cycles and chaos."""
    return make_cycle([2.0, 4.0, 1.0])


@pytest.fixture(scope="session")
def cycle_even_drift():
    """Even period with sigma = -0.9: even-indexed terms decay to 0."""
    return make_cycle([1.4, 1.8, 1.6, 0.3])


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
