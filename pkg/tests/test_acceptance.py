"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line, printed at the end of the run.
"""

import math
import time

import numpy as np
import pytest

from nonconvexity import (
    DecompositionKind,
    Location,
    ParallelogramSpec,
    PointSet,
    SumsetDecomposer,
    TriangleSpec,
    boundary_decomposition_check,
    check_subadditivity,
    d_exact,
    d_grid_oracle,
    decompose,
    meyer_bound_1d,
    parallelogram_d,
    parallelogram_monotonicity_audit,
    rad,
    triangle_d,
    v_exact,
    v_squared_at_points,
)
from nonconvexity.audit import _meyer_family, pair_profiles, random_pair, random_set, sample_in_sum_hull
from nonconvexity.measures import grid_samples
from nonconvexity.sumset import subadditivity_ratio

from conftest import ACCEPTANCE_LINES

SEED = 20240601


def record(number: int, title: str, ok: bool, detail: str, elapsed: float, budget: float) -> None:
    in_time = elapsed < budget
    status = "PASS" if ok and in_time else "FAIL"
    line = f"[{status}] criterion {number:2d} {title}: {detail}; {elapsed:.1f}s of {budget:.0f}s"
    ACCEPTANCE_LINES[number] = line
    print(line)
    assert ok, line
    assert in_time, line


def rng_for(criterion: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([SEED, criterion, trial])


def test_criterion_01_obtuse_triangle_golden_values():
    start = time.perf_counter()
    pts = [(-2, 0), (2, 0), (0, 1)]
    d, v, r = d_exact(pts).value, v_exact(pts).value, rad(pts).value
    ps = PointSet(pts)
    xs, step = grid_samples(ps, 256)
    v_grid = math.sqrt(float(np.nanmax(v_squared_at_points(ps, xs))))
    ok = (
        abs(d - 1.25) <= 1e-12
        and abs(v - 2.0) <= 1e-9
        and abs(r - 2.0) <= 1e-12
        and v_grid <= v + 1e-12 <= v_grid + step + 1e-12
        and d < v <= r
    )
    detail = f"d={d!r} v={v!r} rad={r!r} v_grid={v_grid:.6f} step={step:.4f}"
    record(1, "obtuse triangle d, v, rad", ok, detail, time.perf_counter() - start, 1.0)


def test_criterion_02_equality_case():
    start = time.perf_counter()
    worst = 0.0
    for da, db in [(3, 4), (1, 1), (0, 5)]:
        rec = check_subadditivity(np.unique([(0, 0), (2 * da, 0)], axis=0), [(0, 0), (0, 2 * db)])
        worst = max(worst, abs(rec.dAB - math.hypot(da, db)), abs(rec.ratio - 1.0))
    record(2, "axis pairs attain equality", worst <= 1e-9, f"max deviation {worst:.2e}",
           time.perf_counter() - start, 1.0)


@pytest.fixture(scope="module")
def corpus():
    """10^4 seeded pairs with the profiles of A, B and A + B."""
    start = time.perf_counter()
    rows = []
    kinds = {"rank1": 0, "equal": 0, "singleton": 0}
    for trial in range(10_000):
        A, B = random_pair(rng_for(3, trial), (2, 40))
        pa, pb, pab = pair_profiles(A, B)
        kinds["equal"] += B is A
        kinds["rank1"] += A.rank == 1 or B.rank == 1
        rows.append((pa, pb, pab))
    return rows, kinds, time.perf_counter() - start


def test_criterion_03_subadditivity_corpus(corpus):
    rows, kinds, elapsed = corpus
    ratios = np.array([subadditivity_ratio(pab.d.value, pa.d.value, pb.d.value) for pa, pb, pab in rows])
    bad = int(np.sum(ratios > 1 + 1e-7))
    ok = bad == 0 and kinds["rank1"] > 0 and kinds["equal"] > 0
    detail = (f"{len(rows)} pairs, {bad} violations, max ratio {ratios.max():.9f}, "
              f"{kinds['rank1']} with a rank-1 set, {kinds['equal']} with A = B")
    record(3, "d^2 subadditive on the corpus", ok, detail, elapsed, 300.0)


def test_criterion_04_closed_forms_match_exact():
    start = time.perf_counter()
    worst_t = worst_p = 0.0
    for trial in range(10_000):
        rng = rng_for(4, trial)
        while True:
            pts = rng.uniform(-10, 10, (3, 2))
            try:
                tri = TriangleSpec.from_points(pts)
                break
            except ValueError:
                continue
        exact = d_exact(pts).value
        worst_t = max(worst_t, abs(triangle_d(tri) - exact) / exact)
        a, x = sorted(rng.uniform(0.01, 10, 2))
        p = ParallelogramSpec(float(a), float(x), float(rng.uniform(1e-3, math.pi / 2)))
        exact = d_exact(p.corners()).value
        worst_p = max(worst_p, abs(parallelogram_d(p) - exact) / exact)
    ok = worst_t <= 1e-7 and worst_p <= 1e-7
    detail = f"max relative error triangles {worst_t:.2e}, parallelograms {worst_p:.2e}"
    record(4, "closed forms vs exact algorithm", ok, detail, time.perf_counter() - start, 120.0)


def test_criterion_05_parallelogram_monotonicity():
    start = time.perf_counter()
    grid = np.radians(np.linspace(1.0, 90.0, 90))
    worst = -math.inf
    for trial in range(100):
        a, x = sorted(rng_for(5, trial).uniform(0.01, 10, 2))
        rep = parallelogram_monotonicity_audit(a, x, grid)
        # the same audit with the exact algorithm on the four corners
        exact = np.array([d_exact(ParallelogramSpec(a, x, g).corners()).value for g in grid])
        top = d_exact(ParallelogramSpec(a, x, math.pi / 2).corners()).value
        exact_worst = max(float(np.max(exact - top)), float(np.max(exact[:-1] - exact[1:])))
        worst = max(worst, rep.max_violation, exact_worst)
    record(5, "parallelogram d grows to its right-angle value", worst <= 1e-9,
           f"100 side pairs x 90 angles, max violation {worst:.2e}", time.perf_counter() - start, 30.0)


def test_criterion_06_oracle_sandwich():
    start = time.perf_counter()
    worst_d = worst_v = -math.inf
    for trial in range(200):
        ps = random_set(rng_for(6, trial), (2, 12))
        eps = ps.tol.eps
        d = d_exact(ps).value
        orc = d_grid_oracle(ps, 1024)
        worst_d = max(worst_d, orc.value - d - eps, d - orc.value - orc.step - eps)
        v = v_exact(ps).value
        xs, step = grid_samples(ps, 128)
        vo = math.sqrt(max(float(np.nanmax(v_squared_at_points(ps, xs))), 0.0))
        worst_v = max(worst_v, vo - v - eps, v - vo - step - eps)
    ok = worst_d <= 0 and worst_v <= 0
    detail = f"200 sets, worst d slack {worst_d:.2e}, worst v slack {worst_v:.2e}"
    record(6, "grid oracles bracket d and v", ok, detail, time.perf_counter() - start, 180.0)


def test_criterion_07_boundary_decomposition():
    start = time.perf_counter()
    mismatches = inside = 0
    for trial in range(50):
        rng = rng_for(7, trial)
        A, B = random_pair(rng, (3, 40), full_rank=True)
        dec = SumsetDecomposer(A, B)
        v = dec.sum_hull.vertices + dec.a0 + dec.b0
        lo, hi = v.min(axis=0), v.max(axis=0)
        pad = 0.1 * (hi - lo)
        xs = np.vstack([rng.uniform(lo - pad, hi + pad, (7_000, 2)), sample_in_sum_hull(rng, dec, 3_000)])
        rep = boundary_decomposition_check(A, B, xs)
        mismatches += rep.mismatches
        inside += rep.in_sum
    detail = f"50 pairs x 10^4 samples ({inside} inside the sum), {mismatches} mismatches"
    record(7, "conv(A+B) equals conv(A) with boundary sums", mismatches == 0, detail,
           time.perf_counter() - start, 120.0)


def test_criterion_08_decomposition_witnesses():
    start = time.perf_counter()
    trace = decompose([(0, 0), (10, 0), (0, 10)], [(0, 0), (10, 0), (0, 10)], (6, 6))
    failures, worst, counts = 0, -math.inf, {k: 0 for k in DecompositionKind}
    for trial in range(1_000):
        rng = rng_for(8, trial)
        A, B = random_pair(rng, (3, 8), full_rank=True)
        dec = SumsetDecomposer(A, B)
        xs = sample_in_sum_hull(rng, dec, 100)
        dist = dec.distance_to_sumset(xs)
        for x, dx in zip(xs, dist):
            try:
                res = dec.decompose(x)
            except Exception:
                failures += 1
                continue
            counts[res.kind] += 1
            if res.kind is DecompositionKind.NOT_IN_HULL:
                failures += 1
            elif res.kind is DecompositionKind.IN_A_TRANSLATE:
                failures += A.hull.locate(x - res.translate, dec.tol) == Location.OUTSIDE
            elif res.kind is DecompositionKind.IN_B_TRANSLATE:
                failures += B.hull.locate(x - res.translate, dec.tol) == Location.OUTSIDE
            else:
                w = res.witness
                slack = max(w.side_a - 2 * w.d_a, w.side_b - 2 * w.d_b, dx * dx - w.rectangle_bound())
                worst = max(worst, slack)
                failures += slack > 1e-7 or not dec.witness_contains(w, x, 1e-7)
    ok = failures == 0 and trace.kind is DecompositionKind.WITNESS and counts[DecompositionKind.WITNESS] > 0
    detail = (f"10^5 points, {failures} failures, {counts[DecompositionKind.WITNESS]} witnesses "
              f"(worst slack {worst:.2e}), hand trace gives {trace.kind.value}")
    record(8, "decomposition is total with bounded witnesses", ok, detail, time.perf_counter() - start, 300.0)


def test_criterion_09_auxiliary_inequalities(corpus):
    rows, _, elapsed = corpus
    start = time.perf_counter()
    starr = cassels = order = 0
    for pa, pb, pab in rows:
        starr += subadditivity_ratio(pab.d.value, pa.rad.value, pb.rad.value) > 1 + 1e-7
        cassels += subadditivity_ratio(pab.v.value, pa.v.value, pb.v.value) > 1 + 1e-7
        for p in (pa, pb, pab):
            eps = 1e-9 * max(1.0, p.rad.value)
            order += p.d.value > p.rad.value + eps or p.d.value > p.v.value + eps
    ok = starr == cassels == order == 0
    detail = f"{len(rows)} pairs, Starr {starr}, Cassels {cassels}, order {order} violations"
    record(9, "Starr, Cassels and d <= v, rad", ok, detail, elapsed + time.perf_counter() - start, 600.0)


def test_criterion_10_collinear_bound():
    start = time.perf_counter()
    lhs0, bound0 = meyer_bound_1d([np.array([0.0, 6.0]), np.array([0.0, 2.0]), np.array([0.0, 2.0])])
    worst = -math.inf
    for trial in range(1_000):
        sets = [np.asarray(s, dtype=float) for s in _meyer_family(rng_for(10, trial), (1, 6))["sets"]]
        lhs, bound = meyer_bound_1d(sets, strict=False)
        worst = max(worst, lhs - bound)
    ok = worst <= 1e-9 and abs(lhs0 - 1) <= 1e-12 and abs(bound0 - 1) <= 1e-12
    detail = f"10^3 families, max lhs - bound {worst:.2e}; worked instance lhs={lhs0!r} bound={bound0!r}"
    record(10, "collinear sums obey the sorted bound", ok, detail, time.perf_counter() - start, 30.0)
