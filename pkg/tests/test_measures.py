import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from nonconvexity import (
    GeometryError,
    Location,
    PointSet,
    d_exact,
    d_grid_oracle,
    profile,
    rad,
    v_at_point,
    v_exact,
    v_squared_at_points,
)
from nonconvexity.measures import grid_samples, nearest_site_distance

from conftest import full_rank_sets, point_sets

EXAMPLE = [[-2, 0], [2, 0], [0, 1]]
SQUARE = [[0, 0], [1, 0], [0, 1], [1, 1]]


def test_obtuse_triangle_values():
    d = d_exact(EXAMPLE)
    assert d.value == pytest.approx(1.25, abs=1e-12)
    np.testing.assert_allclose(d.witness, [-0.75, 0.0], atol=1e-12)
    v = v_exact(EXAMPLE)
    assert v.value == pytest.approx(2.0, abs=1e-12)
    np.testing.assert_allclose(v.witness, [0.0, 0.0], atol=1e-12)
    assert rad(EXAMPLE).value == pytest.approx(2.0, abs=1e-12)
    assert v_at_point(EXAMPLE, (0, 0)) == pytest.approx(4.0, abs=1e-12)


def test_square_values():
    d = d_exact(SQUARE)
    assert d.value == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    np.testing.assert_allclose(d.witness, [0.5, 0.5])
    assert v_exact(SQUARE).value == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    assert rad(SQUARE).value == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    orc = d_grid_oracle(SQUARE, 512)
    assert math.sqrt(2) / 2 - orc.step <= orc.value <= math.sqrt(2) / 2


def test_rank_one_and_singleton():
    d = d_exact([[0, 0], [6, 0]])
    assert d.value == 3.0
    np.testing.assert_allclose(d.witness, [3, 0])
    v = v_exact([[0, 0], [2, 0]])
    assert v.value == 1.0
    np.testing.assert_allclose(v.witness, [1, 0])
    assert v_at_point([[0, 0], [2, 0]], (1, 0)) == pytest.approx(1.0)
    for f in (d_exact, v_exact, rad):
        assert f([[4, 5]]).value == 0.0
    assert d_grid_oracle([[4, 5]], 16).value == 0.0


def test_rank_one_max_gap_on_slanted_line():
    pts = np.array([[0, 0], [1, 1], [4, 4], [5, 5]], dtype=float)
    d = d_exact(pts)
    assert d.value == pytest.approx(1.5 * math.sqrt(2))
    np.testing.assert_allclose(d.witness, [2.5, 2.5])


def test_v_at_point_site_and_infeasible():
    assert v_at_point(EXAMPLE, (0, 1)) == 0.0
    with pytest.raises(GeometryError, match="infeasible point"):
        v_at_point(EXAMPLE, (5, 5))


def test_example_oracle_at_high_resolution():
    orc = d_grid_oracle(EXAMPLE, 1024)
    assert orc.value <= 1.25 <= orc.value + orc.step


def test_empty_input():
    with pytest.raises(GeometryError, match="empty set"):
        d_exact([])


def _lp_v_squared(sites: np.ndarray, x: np.ndarray) -> float:
    """Many-atom route: minimise sum p |a|^2 subject to sum p a = x, sum p = 1."""
    n = len(sites)
    a_eq = np.vstack([sites.T, np.ones(n)])
    res = linprog((sites**2).sum(axis=1), A_eq=a_eq, b_eq=[x[0], x[1], 1.0], bounds=[(0, None)] * n,
                  method="highs")
    assert res.status == 0
    return float(res.fun - x @ x)


@given(full_rank_sets(max_size=10), st.integers(0, 2**32 - 1))
def test_v_enumeration_matches_linear_program(pts, seed):
    ps = PointSet(pts)
    rng = np.random.default_rng(seed)
    xs = rng.dirichlet(np.full(len(ps), 0.5), size=5) @ ps.points
    got = v_squared_at_points(ps, xs)
    scale2 = max(1.0, ps.tol.scale) ** 2
    for x, g in zip(xs, got):
        assert g == pytest.approx(_lp_v_squared(ps.points, x), abs=1e-7 * scale2)


@given(full_rank_sets(max_size=10))
def test_v_witness_attains_value(pts):
    ps = PointSet(pts)
    v = v_exact(ps)
    assert ps.hull.locate(v.witness) != Location.OUTSIDE
    scale2 = max(1.0, ps.tol.scale) ** 2
    assert v_at_point(ps, v.witness) == pytest.approx(v.value**2, abs=1e-8 * scale2)


@given(point_sets(min_size=1, max_size=30))
def test_d_witness_attains_value(pts):
    ps = PointSet(pts)
    d = d_exact(ps)
    assert ps.hull.locate(d.witness) != Location.OUTSIDE
    assert nearest_site_distance(ps, d.witness)[0] == pytest.approx(d.value, abs=10 * ps.tol.eps)
    if len(ps) >= 2:
        assert d.value > 0


@given(point_sets(min_size=1, max_size=20), st.sampled_from([64, 256]))
def test_d_oracle_sandwich(pts, resolution):
    ps = PointSet(pts)
    d = d_exact(ps).value
    orc = d_grid_oracle(ps, resolution)
    assert orc.value <= d + ps.tol.eps
    assert d <= orc.value + orc.step + ps.tol.eps


@given(point_sets(min_size=1, max_size=10, integer=True))
def test_v_oracle_sandwich_with_ties(pts):
    ps = PointSet(pts)
    v = v_exact(ps).value
    xs, step = grid_samples(ps, 64)
    vo = math.sqrt(max(0.0, float(np.nanmax(v_squared_at_points(ps, xs)))))
    assert vo <= v + 1e-9 * max(1.0, ps.tol.scale)
    assert v <= vo + step + ps.tol.eps


@given(point_sets(min_size=1, max_size=25))
def test_measure_order(pts):
    p = profile(pts)
    slack = 1e-9 * max(1.0, p.rad.value)
    assert p.d.value <= p.v.value + slack
    assert p.v.value <= p.rad.value + slack


@given(
    point_sets(min_size=2, max_size=20),
    st.floats(-1000, 1000),
    st.floats(-1000, 1000),
    st.floats(0, 2 * math.pi),
    st.floats(0.01, 100),
)
def test_d_similarity_invariance(pts, tx, ty, phi, scale):
    rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    moved = scale * pts @ rot.T + [tx, ty]
    base = d_exact(pts).value
    # only compare sets whose rank survives the transform unambiguously
    if PointSet(pts).rank != PointSet(moved).rank:
        return
    span = float(np.ptp(pts, axis=0).max())
    assert d_exact(moved).value == pytest.approx(scale * base, rel=1e-7, abs=1e-9 * scale * span + 1e-12)
