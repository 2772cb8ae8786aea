"""Non-convexity measures of finite planar point sets.

``d`` is the largest distance from a point of the convex hull to the nearest
site, ``v`` is the effective standard deviation (the worst hull point's
cheapest second moment over convex representations) and ``rad`` is the
Chebyshev radius. All three are computed exactly and returned with a
witness point; :func:`d_grid_oracle` and :func:`v_squared_at_points` are
independent brute-force references for testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .delaunay import Triangulation, VoronoiSkeleton, triangulate, voronoi_skeleton
from .geometry import (
    ConvexPolygon,
    GeometryError,
    Location,
    line_frame,
    locate_points,
    min_enclosing_circle,
)
from .validation import PointSet, as_pointset


@dataclass(frozen=True)
class MeasureResult:
    """A measure value with the point that certifies it.

    ``step`` is the sampling resolution (largest distance from any hull point
    to the nearest sample) for grid results and ``0`` for exact ones.
    """

    value: float
    witness: np.ndarray
    method: str = "exact"
    step: float = 0.0

    def as_dict(self) -> dict:
        out = {"value": self.value, "witness": [float(c) for c in self.witness], "method": self.method}
        if self.method == "grid":
            out["step"] = self.step
        return out


def _lex_best(points: np.ndarray, values: np.ndarray, slack: float) -> int:
    """Index of the lexicographically smallest point whose value is within
    ``slack`` of the maximum."""
    near = np.flatnonzero(values >= values.max() - slack)
    sub = points[near]
    return int(near[np.lexsort((sub[:, 1], sub[:, 0]))[0]])


def _gaps_1d(ps: PointSet):
    origin, u = line_frame(ps.points)
    t = np.sort((ps.points - origin) @ u)
    return origin, u, t


def _max_gap_result(ps: PointSet) -> MeasureResult:
    origin, u, t = _gaps_1d(ps)
    gaps = np.diff(t)
    mids = origin + ((t[:-1] + t[1:]) / 2.0)[:, None] * u
    k = _lex_best(mids, gaps, 2 * ps.tol.eps)
    return MeasureResult(float(gaps.max()) / 2.0, mids[k])


def nearest_site_distance(points, xs) -> np.ndarray:
    """Distance from each query point to the nearest site."""
    ps = as_pointset(points)
    xs = np.asarray(xs, dtype=float).reshape(-1, 2)
    dist, _ = cKDTree(ps.points).query(xs)
    return np.asarray(dist, dtype=float)


def _hull_crossings(sites: np.ndarray, hull: ConvexPolygon, sk: VoronoiSkeleton, eps: float) -> np.ndarray:
    """Points where Voronoi edges (ray proxies included) cross hull edges.

    Each Voronoi edge lies on the perpendicular bisector of its two sites, so
    the crossing is solved on that bisector (parametrized from the sites'
    midpoint) and then clipped to the edge's extent; this keeps far-away
    circumcenters of thin triangles out of the arithmetic.
    """
    pair = np.vstack([sk.segment_sites, sk.ray_sites])
    a, b = sites[pair[:, 0]], sites[pair[:, 1]]
    m = (a + b) / 2.0
    n = np.column_stack([-(b - a)[:, 1], (b - a)[:, 0]])
    n /= np.hypot(n[:, 0], n[:, 1])[:, None]

    seg_start = sk.vertices[sk.segments[:, 0]]
    seg_end = sk.vertices[sk.segments[:, 1]]
    ray_start = sk.vertices[sk.ray_origins]
    ray_end = sk.ray_endpoints()
    start = np.vstack([seg_start, ray_start])
    end = np.vstack([seg_end, ray_end])
    lam0 = ((start - m) * n).sum(axis=1)
    lam1 = ((end - m) * n).sum(axis=1)
    lam_lo, lam_hi = np.minimum(lam0, lam1), np.maximum(lam0, lam1)

    v = hull.vertices
    p = v
    d = np.roll(v, -1, axis=0) - v
    if len(v) == 2:
        p, d = v[:1], (v[1] - v[0])[None, :]
    dlen = np.hypot(d[:, 0], d[:, 1])

    wx = p[None, :, 0] - m[:, None, 0]
    wy = p[None, :, 1] - m[:, None, 1]
    den = n[:, None, 0] * d[None, :, 1] - n[:, None, 1] * d[None, :, 0]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        lam = (wx * d[None, :, 1] - wy * d[None, :, 0]) / den
        s = (wx * n[:, None, 1] - wy * n[:, None, 0]) / den
    s_slack = eps / dlen[None, :]
    ok = (
        (np.abs(den) > 1e-300)
        & (s >= -s_slack)
        & (s <= 1 + s_slack)
        & (lam >= lam_lo[:, None] - eps)
        & (lam <= lam_hi[:, None] + eps)
    )
    ei, hi = np.nonzero(ok)
    t = np.clip(s[ei, hi], 0.0, 1.0)
    return p[hi] + t[:, None] * d[hi]


def d_exact(points, tri: Optional[Triangulation] = None) -> MeasureResult:
    """Hausdorff distance from a finite set to its convex hull.

    Rank 0 gives 0, rank 1 half the largest gap along the line. In the plane
    the maximum of the nearest-site distance over the hull is attained at a
    Voronoi vertex inside the hull or where a Voronoi edge crosses the hull
    boundary; every such candidate is evaluated against the actual sites.
    Ties go to the lexicographically smallest witness.
    """
    ps = as_pointset(points)
    if ps.rank == 0:
        return MeasureResult(0.0, ps.points[0].copy())
    if ps.rank == 1:
        return _max_gap_result(ps)
    tri = tri or triangulate(ps)
    sk = voronoi_skeleton(tri)
    hull = ps.hull
    eps = ps.tol.eps
    inside = locate_points(sk.vertices, hull, ps.tol) != Location.OUTSIDE
    cands = np.vstack([sk.vertices[inside], _hull_crossings(ps.points, hull, sk, eps), hull.vertices])
    dist = nearest_site_distance(ps, cands)
    k = _lex_best(cands, dist, eps)
    return MeasureResult(float(dist.max()), cands[k].copy())


def _hull_samples(hull: ConvexPolygon, step: float) -> np.ndarray:
    out = [hull.vertices]
    for p, q in hull.edges():
        k = max(2, int(math.ceil(np.hypot(*(q - p)) / step)) + 1)
        t = np.linspace(0.0, 1.0, k)[:, None]
        out.append(p + t * (q - p))
    return np.vstack(out)


def grid_samples(points, resolution: int) -> tuple[np.ndarray, float]:
    """Sample points of the hull and the sampling step.

    A ``resolution`` x ``resolution`` grid over the hull's bounding box,
    restricted to points inside or on the hull, plus points along every hull
    edge at spacing no larger than the grid diagonal. Every hull point is
    within ``step`` (the grid cell diagonal) of some sample.
    """
    ps = as_pointset(points)
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    hull = ps.hull
    if ps.rank == 0:
        return ps.points[:1].copy(), 0.0
    lo, hi = hull.vertices.min(axis=0), hull.vertices.max(axis=0)
    if ps.rank == 1:
        step = float(np.hypot(*(hi - lo))) / (resolution - 1)
        return _hull_samples(hull, step), step
    gx = np.linspace(lo[0], hi[0], resolution)
    gy = np.linspace(lo[1], hi[1], resolution)
    step = float(np.hypot(gx[1] - gx[0], gy[1] - gy[0]))
    chunks = []
    rows = max(1, 2**18 // resolution)
    for start in range(0, resolution, rows):
        xx, yy = np.meshgrid(gx[start : start + rows], gy, indexing="ij")
        grid = np.column_stack([xx.ravel(), yy.ravel()])
        chunks.append(grid[locate_points(grid, hull, ps.tol) != Location.OUTSIDE])
    chunks.append(_hull_samples(hull, step))
    return np.vstack(chunks), step


def d_grid_oracle(points, resolution: int = 256) -> MeasureResult:
    """Brute-force lower bound for ``d``: best sample from :func:`grid_samples`.

    Because the nearest-site distance is 1-Lipschitz,
    ``value <= d <= value + step``.
    """
    ps = as_pointset(points)
    samples, step = grid_samples(ps, resolution)
    dist = nearest_site_distance(ps, samples)
    k = _lex_best(samples, dist, 0.0)
    return MeasureResult(float(dist[k]), samples[k].copy(), method="grid", step=step)


def v_squared_at_points(points, xs) -> np.ndarray:
    """Smallest second moment ``sum p_i |a_i - x|^2`` over convex representations.

    Enumerates every representation with at most three atoms (single sites,
    site pairs whose segment passes within ``eps`` of ``x``, and triangles
    containing ``x`` within ``eps``); by Caratheodory's theorem nothing else
    can do better in the plane. Returns ``nan`` where ``x`` lies outside the
    hull. Cost grows as ``n**3`` per query point, so keep sets small.
    """
    ps = as_pointset(points)
    sites = ps.points
    eps = ps.tol.eps
    xs = np.asarray(xs, dtype=float).reshape(-1, 2)
    best = np.full(len(xs), np.inf)
    n = len(sites)

    d0 = np.hypot(xs[:, None, 0] - sites[None, :, 0], xs[:, None, 1] - sites[None, :, 1])
    best[(d0 <= eps).any(axis=1)] = 0.0

    if n >= 2:
        ij = np.array(list(combinations(range(n), 2)))
        p, q = sites[ij[:, 0]], sites[ij[:, 1]]
        e = q - p
        L2 = (e * e).sum(axis=1)
        for start in range(0, len(xs), 512):
            x = xs[start : start + 512]
            rx = x[:, None, 0] - p[None, :, 0]
            ry = x[:, None, 1] - p[None, :, 1]
            t = (rx * e[None, :, 0] + ry * e[None, :, 1]) / L2[None, :]
            off = np.abs(rx * e[None, :, 1] - ry * e[None, :, 0]) / np.sqrt(L2)[None, :]
            tl = np.sqrt(L2)[None, :]
            feasible = (off <= eps) & (t * tl >= -eps) & ((1 - t) * tl >= -eps)
            tc = np.clip(t, 0.0, 1.0)
            val = np.where(feasible, tc * (1 - tc) * L2[None, :] + off**2, np.inf)
            best[start : start + 512] = np.minimum(best[start : start + 512], val.min(axis=1))

    if n >= 3 and ps.rank == 2:
        ijk = np.array(list(combinations(range(n), 3)))
        A, B, C = sites[ijk[:, 0]], sites[ijk[:, 1]], sites[ijk[:, 2]]
        area2 = (B[:, 0] - A[:, 0]) * (C[:, 1] - A[:, 1]) - (B[:, 1] - A[:, 1]) * (C[:, 0] - A[:, 0])
        longest = np.max(np.stack([np.hypot(*(B - A).T), np.hypot(*(C - A).T), np.hypot(*(C - B).T)]), axis=0)
        good = np.abs(area2) > eps * longest
        A, B, C, area2 = A[good], B[good], C[good], area2[good]
        # heights opposite each vertex, for eps-tolerant containment
        hA = np.abs(area2) / np.hypot(*(C - B).T)
        hB = np.abs(area2) / np.hypot(*(A - C).T)
        hC = np.abs(area2) / np.hypot(*(B - A).T)
        chunk = max(1, 2**21 // max(1, len(A)))
        for start in range(0, len(xs), chunk):
            x = xs[start : start + chunk]
            X, Y = x[:, None, 0], x[:, None, 1]
            la = ((B[:, 0] - X) * (C[:, 1] - Y) - (B[:, 1] - Y) * (C[:, 0] - X)) / area2
            lb = ((C[:, 0] - X) * (A[:, 1] - Y) - (C[:, 1] - Y) * (A[:, 0] - X)) / area2
            lc = 1.0 - la - lb
            feasible = (la * hA >= -eps) & (lb * hB >= -eps) & (lc * hC >= -eps)
            val = (
                la * ((A[:, 0] - X) ** 2 + (A[:, 1] - Y) ** 2)
                + lb * ((B[:, 0] - X) ** 2 + (B[:, 1] - Y) ** 2)
                + lc * ((C[:, 0] - X) ** 2 + (C[:, 1] - Y) ** 2)
            )
            val = np.where(feasible, np.maximum(val, 0.0), np.inf)
            best[start : start + chunk] = np.minimum(best[start : start + chunk], val.min(axis=1))

    best[~np.isfinite(best)] = np.nan
    return best


def v_at_point(points, x) -> float:
    """``v^2(A, x)``: the cheapest second moment of a representation of ``x``.

    Raises :class:`GeometryError` ("infeasible point") when ``x`` is outside
    the hull.
    """
    value = float(v_squared_at_points(points, np.asarray(x, dtype=float)[None, :])[0])
    if math.isnan(value):
        raise GeometryError("infeasible point")
    return value


def v_triangle_values(tri: Triangulation) -> tuple[np.ndarray, np.ndarray]:
    """Per-triangle maximum of ``v^2`` and where it is attained.

    On a Delaunay triangle the lifted lower envelope gives
    ``v^2(x) = R^2 - |x - c|^2`` (``c``, ``R`` the circumcircle), maximal at
    the point of the triangle nearest ``c``: ``c`` itself unless the triangle
    is obtuse, otherwise the midpoint of the longest side (the projection of
    ``c`` onto every side is that side's midpoint), where the value reduces to
    ``(longest / 2)^2``. Triangles thinner than ``eps`` carry no area and get
    ``-inf``; their sides are covered by neighbouring triangles.
    """
    s = tri.sites[tri.triangles]
    sides = np.stack([s[:, 2] - s[:, 1], s[:, 0] - s[:, 2], s[:, 1] - s[:, 0]], axis=1)
    sq = (sides**2).sum(axis=2)
    longest = sq.argmax(axis=1)
    rows = np.arange(len(sq))
    l2 = sq[rows, longest]
    others = sq.sum(axis=1) - l2
    area2 = np.abs(2.0 * tri.areas)
    thin = area2 <= tri.tol.eps * np.sqrt(l2)
    obtuse = l2 > others
    # R = abc / (4 * area) is stable for non-obtuse triangles
    r2 = sq.prod(axis=1) / (4.0 * np.where(thin, 1.0, area2) ** 2)
    values = np.where(obtuse, l2 / 4.0, r2)
    mid = (s[rows, (longest + 1) % 3] + s[rows, (longest + 2) % 3]) / 2.0
    where = np.where(obtuse[:, None], mid, tri.circumcenters)
    values = np.where(thin, -np.inf, values)
    return values, where


def v_exact(points, tri: Optional[Triangulation] = None) -> MeasureResult:
    """Effective standard deviation ``v`` with the hull point attaining it.

    In the plane the inner minimum is the lower convex envelope of the sites
    lifted to ``|a|^2``, i.e. the Delaunay triangulation; see
    :func:`v_triangle_values`. Rank 1 reduces to half the largest gap.
    """
    ps = as_pointset(points)
    if ps.rank == 0:
        return MeasureResult(0.0, ps.points[0].copy())
    if ps.rank == 1:
        return _max_gap_result(ps)
    tri = tri or triangulate(ps)
    values, where = v_triangle_values(tri)
    vals = np.sqrt(np.maximum(values, 0.0))
    vals[~np.isfinite(values)] = -np.inf
    k = _lex_best(where, vals, ps.tol.eps)
    return MeasureResult(float(vals.max()), where[k].copy())


def rad(points) -> MeasureResult:
    """Radius of the smallest enclosing circle; the witness is its center."""
    ps = as_pointset(points)
    circle = min_enclosing_circle(ps.hull.vertices)
    return MeasureResult(float(circle.radius), np.asarray(circle.center, dtype=float))


@dataclass(frozen=True)
class Profile:
    """``d``, ``v`` and ``rad`` of one point set."""

    d: MeasureResult
    v: MeasureResult
    rad: MeasureResult
    rank: int


def profile(points, with_v: bool = True, with_rad: bool = True) -> Profile:
    """All three measures, sharing one triangulation."""
    ps = as_pointset(points)
    tri = triangulate(ps) if ps.rank == 2 else None
    d = d_exact(ps, tri)
    v = v_exact(ps, tri) if with_v else None
    r = rad(ps) if with_rad else None
    return Profile(d, v, r, ps.rank)
