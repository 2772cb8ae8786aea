import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

# NC_EXAMPLES raises the example count for longer stress runs
settings.register_profile(
    "default",
    deadline=None,
    max_examples=int(os.environ.get("NC_EXAMPLES", 60)),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


coord = st.floats(min_value=-100, max_value=100, allow_nan=False, allow_infinity=False, width=64)


@st.composite
def point_sets(draw, min_size=1, max_size=12, integer=False):
    """Planar point sets; integer coordinates produce collinear and cocircular ties."""
    n = draw(st.integers(min_size, max_size))
    c = st.integers(-6, 6).map(float) if integer else coord
    return np.array(draw(st.lists(st.tuples(c, c), min_size=n, max_size=n)), dtype=float)


@st.composite
def full_rank_sets(draw, min_size=3, max_size=12, integer=False):
    from hypothesis import assume

    from nonconvexity import PointSet

    pts = draw(point_sets(min_size=min_size, max_size=max_size, integer=integer))
    ps = PointSet(pts)
    assume(ps.rank == 2)
    # keep the hull area away from zero relative to its diameter
    assume(ps.hull.area > 1e-3 * ps.tol.scale**2)
    return pts


@pytest.fixture
def example_triangle():
    return np.array([[-2.0, 0.0], [2.0, 0.0], [0.0, 1.0]])
