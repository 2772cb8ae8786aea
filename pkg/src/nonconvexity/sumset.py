"""Minkowski sums and the subadditivity machinery built on them.

The central piece is :class:`SumsetDecomposer`, which places a point ``x`` of
``conv(A + B)`` either in a translate ``conv(A) + b`` / ``conv(B) + a`` or in
a parallelogram ``[a1, a2] + [b1, b2]`` whose sides are at most ``2 d(A)``
and ``2 d(B)``. The parallelogram is built by two rounds of the
closest-crossing-pair construction (:func:`min_crossing_pair`), first across
``B`` and then across ``A``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .geometry import (
    ConvexPolygon,
    GeometryError,
    Location,
    Tolerance,
    as_point,
    convex_hull,
    line_frame,
    locate_points,
    segment_line_intersection,
    signed_distance_to_line,
)
from .measures import d_exact
from .validation import PointSet, as_pointset


def _sum_points(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a[:, None, :] + b[None, :, :]).reshape(-1, 2)


def minkowski_finite(A, B) -> PointSet:
    """All pairwise sums ``a + b``, deduplicated."""
    A, B = as_pointset(A), as_pointset(B)
    dim = 1 if A.dim == 1 and B.dim == 1 else 2
    return PointSet(_sum_points(A.points, B.points), dim=dim, eps_rel=A.eps_rel)


def minkowski_segment_polygon(segment, polygon: ConvexPolygon) -> ConvexPolygon:
    """``[p, q] + P`` for a convex polygon ``P``: the hull of ``P + p`` and ``P + q``."""
    p, q = (as_point(s) for s in segment)
    v = polygon.vertices
    pts = np.vstack([v + p, v + q])
    return convex_hull(pts, Tolerance.for_points(pts, polygon.tol.eps_rel))


class _PolygonFamily:
    """Membership of many points in many convex polygons at once.

    Every polygon must have rank 2. ``inside(xs)`` returns a boolean matrix of
    shape ``(len(xs), len(polygons))`` with boundary points counted as inside.
    """

    def __init__(self, polygons: Sequence[ConvexPolygon], eps: float):
        starts, normals, offsets = [], [], []
        for poly in polygons:
            v = poly.vertices
            if len(v) < 3:
                raise GeometryError("requires full-dimensional sets")
            e = np.roll(v, -1, axis=0) - v
            n = np.column_stack([-e[:, 1], e[:, 0]]) / np.hypot(e[:, 0], e[:, 1])[:, None]
            starts.append(sum(len(x) for x in normals))
            normals.append(n)
            offsets.append((n * v).sum(axis=1))
        self.starts = np.array(starts, dtype=np.intp)
        self.normals = np.vstack(normals)
        self.offsets = np.concatenate(offsets)
        self.eps = eps

    def inside(self, xs: np.ndarray) -> np.ndarray:
        sd = xs @ self.normals.T - self.offsets
        return np.minimum.reduceat(sd, self.starts, axis=1) >= -self.eps


def _origin_shift(ps: PointSet) -> np.ndarray:
    # sorted points: the first one is the lexicographic minimum
    return ps.points[0].copy()


@dataclass(frozen=True)
class BoundaryDecompositionReport:
    """Agreement between ``conv(A + B)`` and ``conv(A) ∪ (∂conv(A) + conv(B))``.

    Both sides are evaluated after translating ``A`` and ``B`` so that their
    lexicographically smallest points sit at the origin.
    """

    samples: int
    in_sum: int
    mismatches: int
    mismatch_points: np.ndarray

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def boundary_decomposition_check(A, B, samples) -> BoundaryDecompositionReport:
    """Compare both sides of the boundary decomposition on ``samples``.

    ``samples`` are given in the original coordinates. Raises
    :class:`GeometryError` unless both sets have rank 2.
    """
    A, B = as_pointset(A), as_pointset(B)
    if A.rank < 2 or B.rank < 2:
        raise GeometryError("requires full-dimensional sets")
    xs = np.asarray(samples, dtype=float).reshape(-1, 2)
    a0, b0 = _origin_shift(A), _origin_shift(B)
    hull_a = A.hull.translated(-a0)
    hull_b = B.hull.translated(-b0)
    sum_pts = _sum_points(hull_a.vertices, hull_b.vertices)
    tol = Tolerance.for_points(sum_pts, A.eps_rel)
    sum_hull = convex_hull(sum_pts, tol)
    shifted = xs - (a0 + b0)
    lhs = locate_points(shifted, sum_hull, tol) != Location.OUTSIDE
    edge_sums = [minkowski_segment_polygon(e, hull_b) for e in hull_a.edges()]
    rhs = locate_points(shifted, hull_a, tol) != Location.OUTSIDE
    rhs |= _PolygonFamily(edge_sums, tol.eps).inside(shifted).any(axis=1)
    bad = lhs != rhs
    return BoundaryDecompositionReport(len(xs), int(lhs.sum()), int(bad.sum()), xs[bad])


def min_crossing_pair(S, point, direction, tol: Optional[Tolerance] = None) -> tuple[np.ndarray, np.ndarray]:
    """Closest pair ``(s1, s2)`` with ``s1`` left of the line and ``s2`` right of it.

    Both half-planes are closed: points within ``tol.eps`` of the line belong
    to both, so such a point pairs with itself at distance zero. Distances
    within ``tol.eps`` of the minimum tie, and ties go to the lexicographically
    smallest ``(s1, s2)``.
    """
    ps = as_pointset(S)
    pts = ps.points
    tol = tol or ps.tol
    sd = signed_distance_to_line(pts, as_point(point), as_point(direction))
    upper = np.flatnonzero(sd >= -tol.eps)
    lower = np.flatnonzero(sd <= tol.eps)
    if len(upper) == 0 or len(lower) == 0:
        raise GeometryError("line does not separate")
    diff = pts[upper][:, None, :] - pts[lower][None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    # row-major argmax over a boolean matrix picks the smallest (s1, s2) index pair;
    # sorted points make index order the lexicographic order
    i, j = np.unravel_index(np.argmax(dist <= dist.min() + tol.eps), dist.shape)
    return pts[upper[i]].copy(), pts[lower[j]].copy()


class DecompositionKind(enum.Enum):
    IN_A_TRANSLATE = "InATranslate"
    IN_B_TRANSLATE = "InBTranslate"
    WITNESS = "Witness"
    NOT_IN_HULL = "NotInHull"


@dataclass(frozen=True)
class ParallelogramWitness:
    """``x`` lies in ``[a1, a2] + [b1, b2]``, with ``a_i`` in A and ``b_i`` in B.

    ``d_a`` and ``d_b`` are the exact ``d`` values the side lengths are
    certified against; ``edge`` is the hull edge of ``conv(A)`` that seeded the
    construction.
    """

    a1: np.ndarray
    a2: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    d_a: float
    d_b: float
    edge: tuple

    @property
    def side_a(self) -> float:
        return float(np.hypot(*(self.a2 - self.a1)))

    @property
    def side_b(self) -> float:
        return float(np.hypot(*(self.b2 - self.b1)))

    def corners(self) -> np.ndarray:
        """``a1+b1, a2+b1, a2+b2, a1+b2`` (a closed parallelogram cycle)."""
        return np.array([self.a1 + self.b1, self.a2 + self.b1, self.a2 + self.b2, self.a1 + self.b2])

    def rectangle_bound(self) -> float:
        """Squared distance from the centre of an ``s_A`` by ``s_B`` rectangle to its corners."""
        return (self.side_a / 2.0) ** 2 + (self.side_b / 2.0) ** 2

    def as_dict(self) -> dict:
        return {
            "a1": self.a1.tolist(),
            "a2": self.a2.tolist(),
            "b1": self.b1.tolist(),
            "b2": self.b2.tolist(),
            "side_a": self.side_a,
            "side_b": self.side_b,
            "d_a": self.d_a,
            "d_b": self.d_b,
            "edge": [list(map(float, g)) for g in self.edge],
        }


@dataclass(frozen=True)
class Decomposition:
    """Outcome of :meth:`SumsetDecomposer.decompose`.

    ``translate`` is the ``b`` (or ``a``) of a translate branch and
    ``witness`` the parallelogram of a ``WITNESS`` branch.
    """

    kind: DecompositionKind
    x: np.ndarray
    translate: Optional[np.ndarray] = None
    witness: Optional[ParallelogramWitness] = None

    def as_dict(self) -> dict:
        out = {"kind": self.kind.value, "x": self.x.tolist()}
        if self.translate is not None:
            out["translate"] = self.translate.tolist()
        if self.witness is not None:
            out["witness"] = self.witness.as_dict()
        return out


class DecompositionError(RuntimeError):
    """The construction failed although its preconditions held."""

    def __init__(self, message: str, trace: dict):
        super().__init__(f"{message}; trace={trace}")
        self.trace = trace


class SumsetDecomposer:
    """Reusable decomposition of points of ``conv(A + B)`` for fixed ``A``, ``B``.

    Both sets must have rank 2. Internally the sets are translated so that
    their lexicographically smallest points are at the origin; all returned
    points are in the original coordinates.

    Parameters
    ----------
    A, B : array-like or PointSet
    check_slack : float, optional
        Absolute slack for the internal membership assertions. Defaults to
        ``100 * eps`` at the scale of ``A + B``.
    """

    def __init__(self, A, B, check_slack: Optional[float] = None):
        self.A, self.B = as_pointset(A), as_pointset(B)
        if self.A.rank < 2 or self.B.rank < 2:
            raise GeometryError("requires full-dimensional sets")
        self.a0, self.b0 = _origin_shift(self.A), _origin_shift(self.B)
        self._a = self.A.points - self.a0
        self._b = self.B.points - self.b0
        self.hull_a = self.A.hull.translated(-self.a0)
        self.hull_b = self.B.hull.translated(-self.b0)
        sum_pts = _sum_points(self.hull_a.vertices, self.hull_b.vertices)
        self.tol = Tolerance.for_points(sum_pts, self.A.eps_rel)
        self.hull_a = ConvexPolygon(self.hull_a.vertices, self.tol)
        self.hull_b = ConvexPolygon(self.hull_b.vertices, self.tol)
        self.sum_hull = convex_hull(sum_pts, self.tol)
        self.check_slack = 100.0 * self.tol.eps if check_slack is None else check_slack
        self.edges = self.hull_a.edges()
        self._edge_family = _PolygonFamily(
            [minkowski_segment_polygon(e, self.hull_b) for e in self.edges], self.tol.eps
        )
        self.d_a = d_exact(self.A).value
        self.d_b = d_exact(self.B).value
        self._sum_tree: Optional[cKDTree] = None

    @property
    def sum_tree(self) -> cKDTree:
        """KD-tree over ``A + B`` in the original coordinates."""
        if self._sum_tree is None:
            self._sum_tree = cKDTree(_sum_points(self.A.points, self.B.points))
        return self._sum_tree

    def distance_to_sumset(self, xs) -> np.ndarray:
        return self.sum_tree.query(np.asarray(xs, dtype=float).reshape(-1, 2))[0]

    def _first_inside(self, xs: np.ndarray, hull: ConvexPolygon) -> int:
        hit = np.flatnonzero(locate_points(xs, hull, self.tol) != Location.OUTSIDE)
        return int(hit[0]) if len(hit) else -1

    def _on_segment(self, z, p, q) -> float:
        d = q - p
        dd = float(d @ d)
        t = 0.0 if dd == 0 else min(1.0, max(0.0, float((z - p) @ d) / dd))
        return float(np.hypot(*(z - p - t * d)))

    def _cross_round(self, x, p, q, S, trace, stage):
        """Closest crossing pair of ``S`` on the line through ``x - p`` along ``q - p``.

        Returns the pair and checks ``x ∈ y + [p, q]`` where ``y`` is where
        the pair's segment meets the line.
        """
        base, direction = x - p, q - p
        try:
            s1, s2 = min_crossing_pair(PointSet(S, eps_rel=self.A.eps_rel), base, direction, self.tol)
        except GeometryError as exc:
            raise DecompositionError(f"{stage}: {exc}", trace) from exc
        y = segment_line_intersection(s1, s2, base, direction, self.tol)
        trace[stage] = {"s1": s1.tolist(), "s2": s2.tolist(), "y": None if y is None else y.tolist()}
        if y is None:
            raise DecompositionError(f"{stage}: pair segment misses the line", trace)
        miss = self._on_segment(x - y, p, q)
        if miss > self.check_slack:
            raise DecompositionError(f"{stage}: x - y off the seeding segment by {miss:.3e}", trace)
        return s1, s2

    def decompose(self, x) -> Decomposition:
        x_orig = as_point(x)
        xs = x_orig - self.a0 - self.b0
        shift_a, shift_b = self.a0, self.b0
        if locate_points(xs[None, :], self.sum_hull, self.tol)[0] == Location.OUTSIDE:
            return Decomposition(DecompositionKind.NOT_IN_HULL, x_orig)
        k = self._first_inside(xs - self._b, self.hull_a)
        if k >= 0:
            return Decomposition(DecompositionKind.IN_A_TRANSLATE, x_orig, translate=self._b[k] + shift_b)
        k = self._first_inside(xs - self._a, self.hull_b)
        if k >= 0:
            return Decomposition(DecompositionKind.IN_B_TRANSLATE, x_orig, translate=self._a[k] + shift_a)

        trace = {"x": x_orig.tolist(), "A": self.A.points.tolist(), "B": self.B.points.tolist()}
        hits = np.flatnonzero(self._edge_family.inside(xs[None, :])[0])
        if len(hits) == 0:
            raise DecompositionError("no hull edge of conv(A) covers x", trace)
        g1, g2 = self.edges[int(hits[0])]
        trace["edge"] = [(g1 + shift_a).tolist(), (g2 + shift_a).tolist()]

        b1, b2 = self._cross_round(xs, g1, g2, self._b, trace, "b-round")
        if np.hypot(*(b1 - b2)) <= self.tol.eps:
            # degenerate pair: x sits in conv(A) + b1 up to rounding
            return Decomposition(DecompositionKind.IN_A_TRANSLATE, x_orig, translate=b1 + shift_b)
        a1, a2 = self._cross_round(xs, b1, b2, self._a, trace, "a-round")
        if np.hypot(*(a1 - a2)) <= self.tol.eps:
            return Decomposition(DecompositionKind.IN_B_TRANSLATE, x_orig, translate=a1 + shift_a)

        w = ParallelogramWitness(
            a1 + shift_a, a2 + shift_a, b1 + shift_b, b2 + shift_b, self.d_a, self.d_b,
            (g1 + shift_a, g2 + shift_a),
        )
        self._assert_witness(w, x_orig, trace)
        return Decomposition(DecompositionKind.WITNESS, x_orig, witness=w)

    def _assert_witness(self, w: ParallelogramWitness, x: np.ndarray, trace: dict) -> None:
        slack = self.check_slack
        if w.side_a > 2.0 * w.d_a + slack:
            raise DecompositionError(f"side |a1-a2|={w.side_a} exceeds 2 d(A)={2 * w.d_a}", trace)
        if w.side_b > 2.0 * w.d_b + slack:
            raise DecompositionError(f"side |b1-b2|={w.side_b} exceeds 2 d(B)={2 * w.d_b}", trace)
        if not self.witness_contains(w, x, slack):
            raise DecompositionError("x outside the witness parallelogram", trace)

    def witness_contains(self, w: ParallelogramWitness, x, slack: Optional[float] = None) -> bool:
        slack = self.tol.eps if slack is None else slack
        corners = w.corners()
        poly = convex_hull(corners, Tolerance(self.tol.eps_rel, self.tol.scale))
        tol = Tolerance(slack / max(self.tol.scale, 1.0), self.tol.scale)
        return bool(locate_points(as_point(x)[None, :], poly, tol)[0] != Location.OUTSIDE)


def decompose(A, B, x) -> Decomposition:
    """One-shot :meth:`SumsetDecomposer.decompose`."""
    return SumsetDecomposer(A, B).decompose(x)


@dataclass(frozen=True)
class TranslateBoundReport:
    trials: int
    d_a: float
    max_slack: float
    violations: int
    worst_x: Optional[np.ndarray]

    @property
    def ok(self) -> bool:
        return self.violations == 0


def translate_bound_check(A, B, trials: int = 1000, seed: int = 0) -> TranslateBoundReport:
    """Sample ``x = (point of conv(A)) + b`` and check ``d(x, A + B) <= d(A)``.

    Points of ``conv(A)`` are Dirichlet(1, ..., 1) combinations of the hull
    vertices, mixed with hull vertices and edge points so that the boundary is
    exercised. ``max_slack`` is the largest ``d(x, A + B) - d(A)``.
    """
    A, B = as_pointset(A), as_pointset(B)
    rng = np.random.default_rng(seed)
    hv = A.hull.vertices
    w = rng.dirichlet(np.ones(len(hv)), size=trials)
    edge_mix = rng.random(trials) < 0.2
    if len(hv) > 1 and edge_mix.any():
        i = rng.integers(len(hv), size=int(edge_mix.sum()))
        t = rng.random(len(i))
        w[edge_mix] = 0.0
        rows = np.flatnonzero(edge_mix)
        w[rows, i] = 1.0 - t
        w[rows, (i + 1) % len(hv)] += t
    xs = w @ hv + B.points[rng.integers(len(B), size=trials)]
    dist = cKDTree(_sum_points(A.points, B.points)).query(xs)[0]
    d_a = d_exact(A).value
    slack = dist - d_a
    tol = Tolerance.for_points(np.vstack([xs, A.points]), A.eps_rel)
    k = int(np.argmax(slack)) if trials else -1
    return TranslateBoundReport(
        trials,
        d_a,
        float(slack[k]) if trials else -math.inf,
        int(np.sum(slack > tol.eps)),
        xs[k].copy() if trials else None,
    )


@dataclass(frozen=True)
class SubadditivityRecord:
    """``d`` of ``A``, ``B`` and ``A + B`` with their witnesses.

    ``ratio = dAB^2 / (dA^2 + dB^2)``; it is defined as ``1`` when all three
    values vanish and ``inf`` when only the denominator does.
    """

    dA: float
    dB: float
    dAB: float
    ratio: float
    witness_A: np.ndarray
    witness_B: np.ndarray
    witness_AB: np.ndarray

    def violated(self, tol: float = 1e-7) -> bool:
        return self.ratio > 1.0 + tol

    def as_dict(self) -> dict:
        return {
            "dA": self.dA,
            "dB": self.dB,
            "dAB": self.dAB,
            "ratio": self.ratio,
            "witness_A": self.witness_A.tolist(),
            "witness_B": self.witness_B.tolist(),
            "witness_AB": self.witness_AB.tolist(),
        }


def subadditivity_ratio(d_ab: float, d_a: float, d_b: float) -> float:
    den = d_a * d_a + d_b * d_b
    if den == 0:
        return 1.0 if d_ab == 0 else math.inf
    return d_ab * d_ab / den


def check_subadditivity(A, B) -> SubadditivityRecord:
    A, B = as_pointset(A), as_pointset(B)
    ra, rb = d_exact(A), d_exact(B)
    rab = d_exact(minkowski_finite(A, B))
    return SubadditivityRecord(
        ra.value, rb.value, rab.value, subadditivity_ratio(rab.value, ra.value, rb.value),
        ra.witness, rb.witness, rab.witness,
    )


class BoundViolation(AssertionError):
    pass


def _common_line(sets: list[PointSet]):
    """Origin and unit direction of a line parallel to every set, plus each set's coordinates on it."""
    direction = None
    for s in sets:
        if s.rank > 1:
            raise GeometryError("non-collinear input: a set has rank 2")
        if s.rank == 1:
            _, u = line_frame(s.points)
            if direction is None:
                direction = u
            elif abs(direction[0] * u[1] - direction[1] * u[0]) > 1e-9:
                raise GeometryError("non-collinear input: sets lie on non-parallel lines")
    if direction is None:
        direction = np.array([1.0, 0.0])
    return direction


def meyer_bound_1d(sets, strict: bool = True) -> tuple[float, float]:
    """``d`` of the iterated sum of collinear sets and its optimal bound.

    With ``d_1 >= ... >= d_m`` the bound is ``max_j (d_j - sum_{i > j} d_i)``.
    Sets may lie on different parallel lines; everything is projected to the
    common direction. Raises :class:`BoundViolation` when ``lhs`` exceeds the
    bound by more than the tolerance and ``strict`` is set.
    """
    psets = [as_pointset(s) for s in sets]
    if not psets:
        raise GeometryError("empty set")
    u = _common_line(psets)
    coords = [np.unique(s.points @ u) for s in psets]
    ds = sorted((d_exact(c).value for c in coords), reverse=True)
    tail = np.concatenate([np.cumsum(ds[::-1])[::-1][1:], [0.0]])
    bound = float(max(d - t for d, t in zip(ds, tail)))
    total = coords[0]
    for c in coords[1:]:
        total = (total[:, None] + c[None, :]).ravel()
        total = PointSet(total).points[:, 0]
    lhs = d_exact(total).value
    span = float(sum(c.max() - c.min() for c in coords))
    if strict and lhs > bound + Tolerance(scale=span).eps:
        raise BoundViolation(f"d of the sum {lhs} exceeds the bound {bound}")
    return lhs, bound
