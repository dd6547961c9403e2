import math

import pytest

from mkawahara import build_wave_params, sample_profile

TWO_PI = 2.0 * math.pi


@pytest.fixture(scope="session")
def profile_k05():
    """Reference gamma=0 wave at k=0.5, L=2pi, n=512."""
    return sample_profile(build_wave_params(0.5, TWO_PI, 0), 512)


@pytest.fixture(scope="session")
def profile_k09_g1():
    """gamma=1 wave at k=0.9, L=2pi, n=512."""
    return sample_profile(build_wave_params(0.9, TWO_PI, 1), 512)
