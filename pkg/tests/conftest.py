import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bandphase.corpus import random_real, rng_for

settings.register_profile("default", deadline=None, max_examples=30,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return rng_for(1234)


@pytest.fixture
def real_signal():
    return random_real(rng_for(7), 5)


@pytest.fixture
def atom():
    """Single Nyquist atom sinc(2x) with Ω = 1; its spectrum is 1/2 on [-1, 1]."""
    from bandphase.signals import BandlimitedSignal
    return BandlimitedSignal(1.0, [1.0])


def rel(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))
