import math

import pytest

import arcinterp as ai


@pytest.fixture(scope="session")
def seg01():
    return ai.segment(0.0, 1.0)


@pytest.fixture(scope="session")
def unit_circle():
    return ai.circle(0.0, 1.0)


@pytest.fixture(scope="session")
def half_circle():
    return ai.circular_arc(0.0, 1.0, (0.0, math.pi))


@pytest.fixture(scope="session")
def ellipse_half():
    return ai.ellipse_arc(0.0, (1.0, 0.5), (0.0, math.pi))


def sample_params(rng, count, min_gap=1e-3, closed=False):
    """Uniform sorted parameters with pairwise gap >= min_gap."""
    import numpy as np

    while True:
        ts = np.sort(rng.random(count))
        gaps = np.diff(ts)
        wrap = (1.0 - ts[-1] + ts[0]) if closed else np.inf
        if (gaps >= min_gap).all() and wrap >= min_gap:
            return [float(t) for t in ts]
