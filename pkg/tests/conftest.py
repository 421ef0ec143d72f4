import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from slice_bergman.bergman import DiskQuadrature
from slice_bergman.quaternion import Frame, random_frame

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

finite = st.floats(-10.0, 10.0, allow_nan=False, allow_infinity=False)
quaternions = arrays(np.float64, 4, elements=finite)
unit_ball_coeffs = arrays(np.float64, 4, elements=st.floats(-0.5, 0.5))
seeds = st.integers(0, 2**32 - 1)


@st.composite
def unit_quaternions(draw):
    q = draw(arrays(np.float64, 4, elements=st.floats(-1.0, 1.0)))
    n = np.linalg.norm(q)
    if n < 1e-3:
        return np.array([1.0, 0.0, 0.0, 0.0])
    return q / n


@st.composite
def frames(draw):
    return random_frame(np.random.default_rng(draw(seeds)))


@pytest.fixture(scope="session")
def quad():
    return DiskQuadrature()


@pytest.fixture(scope="session")
def small_quad():
    # exact for degree <= 8 inputs
    return DiskQuadrature(16, 40)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def std():
    return Frame.standard()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
