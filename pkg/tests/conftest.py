import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from quatcat.quat import Quaternion  # noqa: E402

settings.register_profile("default", max_examples=200, deadline=None)
settings.register_profile("ci", max_examples=1000, deadline=None, suppress_health_check=(HealthCheck.too_slow,))
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE = pytest.StashKey[list]()

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


@st.composite
def quaternions(draw, lo=1e-3, hi=1e3):
    """Nonzero quaternion with modulus in [lo, hi]."""
    parts = draw(st.tuples(finite, finite, finite, finite).filter(lambda t: sum(c * c for c in t) > 1e-6))
    scale = draw(st.floats(min_value=np.log(lo), max_value=np.log(hi)))
    v = np.array(parts)
    v = v / np.linalg.norm(v) * np.exp(scale)
    return Quaternion.from_array(v)


@st.composite
def unit_quaternions(draw):
    return draw(quaternions(1.0, 1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
