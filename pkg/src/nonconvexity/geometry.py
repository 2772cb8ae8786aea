"""Planar geometry kernel.

Every predicate that has to decide "collinear", "on the boundary" or
"duplicate" goes through a single :class:`Tolerance`, whose absolute epsilon
is a relative epsilon scaled by the bounding-box diameter of the instance.
Points are plain ``(x, y)`` pairs; arrays of points are ``(n, 2)`` float
arrays.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

import numpy as np

DEFAULT_EPS_REL = 1e-9
EPS_ENV_VAR = "NONCONVEXITY_EPS"

# Welzl containment slack; purely a floating point guard, not a model parameter.
_MEC_SLACK = 1e-12


class GeometryError(ValueError):
    """Raised for degenerate or empty geometric input."""


def default_eps_rel() -> float:
    """Relative epsilon, overridable through ``NONCONVEXITY_EPS``."""
    raw = os.environ.get(EPS_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_EPS_REL
    value = float(raw)
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{EPS_ENV_VAR} must be a positive finite number, got {raw!r}")
    return value


@dataclass(frozen=True)
class Tolerance:
    """Relative epsilon plus the length scale it is applied to.

    The absolute epsilon is ``eps_rel * max(scale, 1)``; all comparisons
    between lengths use it directly.
    """

    eps_rel: float = field(default_factory=default_eps_rel)
    scale: float = 1.0

    def __post_init__(self):
        if not (self.eps_rel > 0 and math.isfinite(self.eps_rel)):
            raise ValueError(f"eps_rel must be positive, got {self.eps_rel}")
        if not (self.scale >= 0 and math.isfinite(self.scale)):
            raise ValueError(f"scale must be finite and nonnegative, got {self.scale}")

    @property
    def eps(self) -> float:
        return self.eps_rel * max(self.scale, 1.0)

    @classmethod
    def for_points(cls, points, eps_rel: Optional[float] = None) -> "Tolerance":
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        scale = 0.0
        if len(pts):
            scale = float(np.hypot(*(pts.max(axis=0) - pts.min(axis=0))))
        if eps_rel is None:
            return cls(scale=scale)
        return cls(eps_rel=eps_rel, scale=scale)

    def rescaled(self, points) -> "Tolerance":
        """Same relative epsilon, scale taken from ``points``."""
        return Tolerance.for_points(points, eps_rel=self.eps_rel)


class Orientation(enum.IntEnum):
    RIGHT = -1
    COLLINEAR = 0
    LEFT = 1


class Location(enum.IntEnum):
    OUTSIDE = -1
    BOUNDARY = 0
    INSIDE = 1


class Circle(NamedTuple):
    center: np.ndarray
    radius: float

    def contains(self, p, tol: Optional[Tolerance] = None) -> bool:
        slack = tol.eps if tol is not None else 0.0
        c = self.center
        return math.hypot(p[0] - c[0], p[1] - c[1]) <= self.radius + slack


def _cross(ox, oy, ax, ay, bx, by) -> float:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def orientation(a, b, c, tol: Optional[Tolerance] = None) -> Orientation:
    """Turn direction of ``a -> b -> c``.

    The triple is collinear when the point opposite the longest side lies
    within ``tol.eps`` of that side's line, i.e. ``|cross| <= eps * longest``.
    """
    tol = tol or Tolerance()
    cr = _cross(a[0], a[1], b[0], b[1], c[0], c[1])
    longest = max(
        math.hypot(b[0] - a[0], b[1] - a[1]),
        math.hypot(c[0] - a[0], c[1] - a[1]),
        math.hypot(c[0] - b[0], c[1] - b[1]),
    )
    if abs(cr) <= tol.eps * longest:
        return Orientation.COLLINEAR
    return Orientation.LEFT if cr > 0 else Orientation.RIGHT


def _lexsorted(points: np.ndarray) -> np.ndarray:
    return points[np.lexsort((points[:, 1], points[:, 0]))]


def dedup_points(points, tol: Tolerance) -> np.ndarray:
    """Lexicographically sorted copy of ``points`` with near-duplicates merged.

    Greedy in sorted order: a point is kept unless an already kept point lies
    within ``tol.eps``.
    """
    from scipy.spatial import cKDTree

    pts = _lexsorted(np.asarray(points, dtype=float).reshape(-1, 2))
    if len(pts) < 2:
        return pts
    pairs = cKDTree(pts).query_pairs(tol.eps, output_type="ndarray")
    if len(pairs) == 0:
        return pts
    keep = np.ones(len(pts), dtype=bool)
    later = {}
    for i, j in pairs:
        i, j = (i, j) if i < j else (j, i)
        later.setdefault(i, []).append(j)
    for i in range(len(pts)):
        if keep[i]:
            for j in later.get(i, ()):
                keep[j] = False
    return pts[keep]


def affine_rank(points: np.ndarray, tol: Tolerance) -> int:
    """0 for a point, 1 for a collinear set (within ``tol.eps``), else 2."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise GeometryError("empty set")
    p0 = pts[0]
    dist = np.hypot(*(pts - p0).T)
    far = int(np.argmax(dist))
    if dist[far] <= tol.eps:
        return 0
    # Re-anchor on the far point so the line runs between two extreme sites.
    p1 = pts[far]
    dist1 = np.hypot(*(pts - p1).T)
    p0 = pts[int(np.argmax(dist1))]
    u = (p1 - p0) / np.hypot(*(p1 - p0))
    rel = pts - p0
    height = np.abs(rel[:, 0] * u[1] - rel[:, 1] * u[0])
    return 1 if height.max() <= tol.eps else 2


def line_frame(points: np.ndarray):
    """Origin and unit direction of the line through a rank-1 set.

    The direction points from the lexicographically smallest extreme site to
    the other extreme, so projections are nonnegative.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    start = _lexsorted(pts)[0]
    d = np.hypot(*(pts - start).T)
    far = pts[int(np.argmax(d))]
    d2 = np.hypot(*(pts - far).T)
    a = pts[int(np.argmax(d2))]
    lo, hi = sorted([tuple(a), tuple(far)])
    lo, hi = np.array(lo), np.array(hi)
    span = np.hypot(*(hi - lo))
    if span == 0:
        return lo, np.array([1.0, 0.0])
    return lo, (hi - lo) / span


class ConvexPolygon:
    """Counter-clockwise vertex cycle starting at the lexicographically
    smallest vertex. One vertex is a point, two a segment."""

    def __init__(self, vertices, tol: Optional[Tolerance] = None):
        v = np.array(vertices, dtype=float).reshape(-1, 2)
        if len(v) == 0:
            raise GeometryError("empty set")
        self.vertices = v
        self.vertices.setflags(write=False)
        self.tol = tol or Tolerance.for_points(v)

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"ConvexPolygon({self.vertices.tolist()!r})"

    @property
    def rank(self) -> int:
        return min(len(self.vertices) - 1, 2)

    def edges(self) -> list[tuple[np.ndarray, np.ndarray]]:
        v = self.vertices
        if len(v) == 1:
            return []
        if len(v) == 2:
            return [(v[0], v[1])]
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    @cached_property
    def area(self) -> float:
        if len(self.vertices) < 3:
            return 0.0
        x, y = self.vertices.T
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    def locate(self, x, tol: Optional[Tolerance] = None) -> Location:
        return point_in_polygon(x, self, tol)

    def locate_many(self, xs, tol: Optional[Tolerance] = None) -> np.ndarray:
        return locate_points(xs, self, tol)

    def contains(self, x, tol: Optional[Tolerance] = None) -> bool:
        return point_in_polygon(x, self, tol) != Location.OUTSIDE

    def translated(self, t) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + np.asarray(t, dtype=float), self.tol)


def _strip_collinear(cycle: list, tol: Tolerance) -> list:
    """Drop vertices lying within ``tol.eps`` of the segment joining their neighbours."""
    changed = True
    while changed and len(cycle) > 2:
        changed = False
        for i in range(len(cycle)):
            a, b, c = cycle[i - 1], cycle[i], cycle[(i + 1) % len(cycle)]
            if nearest_point_on_segment(b, a, c)[1] <= tol.eps:
                del cycle[i]
                changed = True
                break
    return cycle


def _drop_interior(pts: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Discard points well inside the polygon of the eight axis/diagonal extremes.

    Keeps the lexicographic order of the survivors.
    """
    proj = np.column_stack([pts[:, 0], pts[:, 1], pts.sum(axis=1), pts[:, 0] - pts[:, 1]])
    ext = np.unique(np.concatenate([proj.argmin(axis=0), proj.argmax(axis=0)]))
    inner = convex_hull(pts[ext], tol)
    if len(inner) < 3:
        return pts
    v = inner.vertices
    e = np.roll(v, -1, axis=0) - v
    sd = (e[None, :, 0] * (pts[:, None, 1] - v[None, :, 1]) - e[None, :, 1] * (pts[:, None, 0] - v[None, :, 0]))
    sd /= np.hypot(e[:, 0], e[:, 1])[None, :]
    return pts[sd.min(axis=1) <= 2 * tol.eps]


def convex_hull(points, tol: Optional[Tolerance] = None) -> ConvexPolygon:
    """Monotone-chain hull; vertices within ``tol.eps`` of the segment between
    their neighbours are dropped.

    Collinear input yields the segment between its two extreme points and a
    single point yields a one-vertex polygon.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise GeometryError("empty set")
    tol = tol or Tolerance.for_points(pts)
    pts = dedup_points(pts, tol)
    rank = affine_rank(pts, tol)
    if rank == 0:
        return ConvexPolygon(pts[:1], tol)
    if rank == 1:
        origin, u = line_frame(pts)
        t = (pts - origin) @ u
        ends = _lexsorted(np.array([pts[int(np.argmin(t))], pts[int(np.argmax(t))]]))
        return ConvexPolygon(ends, tol)

    if len(pts) > 32:
        pts = _drop_interior(pts, tol)
    plist = [tuple(p) for p in pts.tolist()]

    # the chain uses the plain sign; tolerance is applied afterwards by
    # _strip_collinear, which only removes vertices between their neighbours
    def keeps_left(o, a, b):
        return _cross(o[0], o[1], a[0], a[1], b[0], b[1]) > 0

    lower: list = []
    for p in plist:
        while len(lower) >= 2 and not keeps_left(lower[-2], lower[-1], p):
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(plist):
        while len(upper) >= 2 and not keeps_left(upper[-2], upper[-1], p):
            upper.pop()
        upper.append(p)
    cycle = _strip_collinear(lower[:-1] + upper[:-1], tol)
    start = min(range(len(cycle)), key=lambda i: cycle[i])
    cycle = cycle[start:] + cycle[:start]
    return ConvexPolygon(np.array(cycle), tol)


def _segment_distance_many(xs: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    d = q - p
    dd = float(d @ d)
    if dd == 0:
        return np.hypot(*(xs - p).T)
    t = np.clip(((xs - p) @ d) / dd, 0.0, 1.0)
    proj = p + t[:, None] * d
    return np.hypot(*(xs - proj).T)


def locate_points(xs, polygon: ConvexPolygon, tol: Optional[Tolerance] = None) -> np.ndarray:
    """Vectorized :func:`point_in_polygon`; returns ``Location`` codes as ints."""
    tol = tol or polygon.tol
    xs = np.asarray(xs, dtype=float).reshape(-1, 2)
    eps = tol.eps
    v = polygon.vertices
    out = np.full(len(xs), int(Location.OUTSIDE), dtype=np.int8)
    if len(v) == 1:
        out[np.hypot(*(xs - v[0]).T) <= eps] = Location.BOUNDARY
        return out
    if len(v) == 2:
        out[_segment_distance_many(xs, v[0], v[1]) <= eps] = Location.BOUNDARY
        return out
    e = np.roll(v, -1, axis=0) - v
    length = np.hypot(e[:, 0], e[:, 1])
    # signed distance to each edge line, positive on the interior side
    rel_x = xs[:, None, 0] - v[None, :, 0]
    rel_y = xs[:, None, 1] - v[None, :, 1]
    sd = (e[None, :, 0] * rel_y - e[None, :, 1] * rel_x) / length[None, :]
    worst = sd.min(axis=1)
    out[worst >= -eps] = Location.BOUNDARY
    out[worst > eps] = Location.INSIDE
    return out


def point_in_polygon(x, polygon: ConvexPolygon, tol: Optional[Tolerance] = None) -> Location:
    """Classify ``x`` against a convex polygon by edge orientation.

    Points within ``tol.eps`` of an edge are ``BOUNDARY``; polygons of rank
    below two have no interior.
    """
    return Location(int(locate_points(np.asarray(x, dtype=float)[None, :], polygon, tol)[0]))


def nearest_point_on_segment(x, p, q) -> tuple[np.ndarray, float]:
    """Orthogonal projection of ``x`` onto ``[p, q]`` clamped to the segment."""
    x, p, q = (np.asarray(a, dtype=float) for a in (x, p, q))
    d = q - p
    dd = float(d @ d)
    t = 0.0 if dd == 0 else min(1.0, max(0.0, float((x - p) @ d) / dd))
    proj = p + t * d
    return proj, float(np.hypot(*(x - proj)))


def circumcircle(a, b, c, tol: Optional[Tolerance] = None) -> Circle:
    """Circle through three non-collinear points."""
    tol = tol or Tolerance.for_points([a, b, c])
    if orientation(a, b, c, tol) == Orientation.COLLINEAR:
        raise GeometryError("degenerate circumcircle")
    return _circle_raw(a, b, c)


def _circle_raw(a, b, c) -> Circle:
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]) - ax, float(b[1]) - ay
    cx, cy = float(c[0]) - ax, float(c[1]) - ay
    den = 2.0 * (bx * cy - by * cx)
    b2, c2 = bx * bx + by * by, cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / den
    uy = (bx * c2 - cx * b2) / den
    center = np.array([ax + ux, ay + uy])
    radius = max(math.hypot(ux, uy), math.hypot(ux - bx, uy - by), math.hypot(ux - cx, uy - cy))
    return Circle(center, radius)


def _diameter_circle(p, q) -> Circle:
    center = np.array([(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0])
    radius = max(math.dist(center, p), math.dist(center, q))
    return Circle(center, radius)


def _in_circle(c: Circle, p) -> bool:
    return math.dist(c.center, p) <= c.radius * (1 + _MEC_SLACK)


def _circle_through_three(p, q, r) -> Circle:
    cx = _cross(p[0], p[1], q[0], q[1], r[0], r[1])
    if cx == 0:
        pairs = [(p, q), (p, r), (q, r)]
        a, b = max(pairs, key=lambda ab: math.dist(*ab))
        return _diameter_circle(a, b)
    return _circle_raw(p, q, r)


def min_enclosing_circle(points, seed: int = 0) -> Circle:
    """Smallest circle containing ``points`` (randomized incremental Welzl).

    The shuffle uses a fixed seed, so results are deterministic.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise GeometryError("empty set")
    order = np.random.default_rng(seed).permutation(len(pts))
    plist = [tuple(p) for p in pts[order].tolist()]
    c: Optional[Circle] = None
    for i, p in enumerate(plist):
        if c is not None and _in_circle(c, p):
            continue
        c = Circle(np.array(p), 0.0)
        for j in range(i):
            q = plist[j]
            if _in_circle(c, q):
                continue
            c = _diameter_circle(p, q)
            for k in range(j):
                r = plist[k]
                if not _in_circle(c, r):
                    c = _circle_through_three(p, q, r)
    return c


def segment_line_intersection(p, q, point, direction, tol: Optional[Tolerance] = None) -> Optional[np.ndarray]:
    """Point where segment ``[p, q]`` meets the line ``point + t * direction``.

    Endpoints within ``tol.eps`` of the line count as on it. A segment lying
    on the line returns its midpoint; a segment strictly on one side returns
    ``None``.
    """
    p, q, point, direction = (np.asarray(a, dtype=float) for a in (p, q, point, direction))
    norm = float(np.hypot(*direction))
    if norm == 0:
        raise GeometryError("line direction must be nonzero")
    tol = tol or Tolerance.for_points([p, q, point])
    u = direction / norm
    sp = float(u[0] * (p[1] - point[1]) - u[1] * (p[0] - point[0]))
    sq = float(u[0] * (q[1] - point[1]) - u[1] * (q[0] - point[0]))
    eps = tol.eps
    on_p, on_q = abs(sp) <= eps, abs(sq) <= eps
    if on_p and on_q:
        return (p + q) / 2.0
    if on_p:
        return p.copy()
    if on_q:
        return q.copy()
    if (sp > 0) == (sq > 0):
        return None
    t = sp / (sp - sq)
    return p + t * (q - p)


def signed_distance_to_line(xs, point, direction) -> np.ndarray:
    """Positive on the left of ``direction``."""
    xs = np.asarray(xs, dtype=float).reshape(-1, 2)
    u = np.asarray(direction, dtype=float)
    u = u / np.hypot(*u)
    rel = xs - np.asarray(point, dtype=float)
    return u[0] * rel[:, 1] - u[1] * rel[:, 0]


def as_point(x: Sequence[float]) -> np.ndarray:
    p = np.asarray(x, dtype=float).reshape(-1)
    if p.shape != (2,) or not np.all(np.isfinite(p)):
        raise GeometryError(f"expected a finite 2D point, got {x!r}")
    return p
