"""Closed-form ``d`` for the vertex sets of triangles and parallelograms.

These are analytic references for :func:`nonconvexity.measures.d_exact`:

* acute triangle: the circumradius ``c / (2 sin(gamma))``;
* right triangle: half the hypotenuse;
* obtuse triangle with sides ``a <= b < c``: ``b / (2 cos(alpha))``, where
  ``alpha`` is opposite ``a``;
* parallelogram with sides ``a <= x`` and smaller angle ``gamma``: the
  diagonal-triangle circumradius while ``cos(gamma) <= a / x``, otherwise
  ``max(a / (2 cos(gamma)), h^2 / (2x - 2a cos(gamma)))`` with
  ``h^2 = a^2 + x^2 - 2ax cos(gamma)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .geometry import GeometryError, Orientation, Tolerance, orientation


class TriangleKind(enum.Enum):
    ACUTE = "acute"
    RIGHT = "right"
    OBTUSE = "obtuse"


@dataclass(frozen=True)
class TriangleSpec:
    """Triangle with sides ``a, b, c`` opposite vertices ``v1, v2, v3``."""

    v1: tuple
    v2: tuple
    v3: tuple

    def __post_init__(self):
        pts = [tuple(float(c) for c in v) for v in (self.v1, self.v2, self.v3)]
        for name, p in zip(("v1", "v2", "v3"), pts):
            object.__setattr__(self, name, p)
        if orientation(*pts, Tolerance.for_points(pts)) == Orientation.COLLINEAR:
            raise GeometryError("degenerate triangle")

    @classmethod
    def from_points(cls, points) -> "TriangleSpec":
        p = np.asarray(points, dtype=float).reshape(3, 2)
        return cls(tuple(p[0]), tuple(p[1]), tuple(p[2]))

    @property
    def a(self) -> float:
        return math.dist(self.v2, self.v3)

    @property
    def b(self) -> float:
        return math.dist(self.v1, self.v3)

    @property
    def c(self) -> float:
        return math.dist(self.v1, self.v2)

    def _angle(self, opposite: float, s1: float, s2: float) -> float:
        cos = (s1 * s1 + s2 * s2 - opposite * opposite) / (2 * s1 * s2)
        return math.acos(min(1.0, max(-1.0, cos)))

    @property
    def alpha(self) -> float:
        return self._angle(self.a, self.b, self.c)

    @property
    def beta(self) -> float:
        return self._angle(self.b, self.a, self.c)

    @property
    def gamma(self) -> float:
        return self._angle(self.c, self.a, self.b)

    def vertices(self) -> np.ndarray:
        return np.array([self.v1, self.v2, self.v3])


def classify_triangle(tri: TriangleSpec, eps_rel: Optional[float] = None) -> TriangleKind:
    """Acute/right/obtuse by the sign of ``longest^2 - (sum of the others' squares)``.

    Within ``eps_rel * longest^2`` of zero counts as right.
    """
    eps_rel = Tolerance().eps_rel if eps_rel is None else eps_rel
    s = sorted((tri.a, tri.b, tri.c))
    excess = s[2] ** 2 - s[0] ** 2 - s[1] ** 2
    if abs(excess) <= eps_rel * s[2] ** 2:
        return TriangleKind.RIGHT
    return TriangleKind.OBTUSE if excess > 0 else TriangleKind.ACUTE


def triangle_d(tri: TriangleSpec, eps_rel: Optional[float] = None) -> float:
    """Closed-form ``d`` of a triangle's vertex set."""
    kind = classify_triangle(tri, eps_rel)
    if kind is TriangleKind.RIGHT:
        return max(tri.a, tri.b, tri.c) / 2.0
    if kind is TriangleKind.ACUTE:
        return tri.c / (2.0 * math.sin(tri.gamma))
    # relabel so that a <= b < c; alpha is the angle opposite a
    a, b, c = sorted((tri.a, tri.b, tri.c))
    cos_alpha = (b * b + c * c - a * a) / (2.0 * b * c)
    return b / (2.0 * cos_alpha)


def obtuse_candidates(tri: TriangleSpec) -> tuple[float, float]:
    """``(b / (2 cos(alpha)), a / (2 cos(beta)))`` for sides ``a <= b < c``.

    The two bisector-crossing distances of an obtuse triangle; the first one
    always dominates.
    """
    a, b, c = sorted((tri.a, tri.b, tri.c))
    cos_alpha = (b * b + c * c - a * a) / (2.0 * b * c)
    cos_beta = (a * a + c * c - b * b) / (2.0 * a * c)
    return b / (2.0 * cos_alpha), a / (2.0 * cos_beta)


@dataclass(frozen=True)
class ParallelogramSpec:
    """Parallelogram with sides ``side_a <= side_x`` meeting at angle ``gamma``.

    ``gamma`` is in radians, in ``(0, pi/2]``.
    """

    side_a: float
    side_x: float
    gamma: float

    def __post_init__(self):
        if not (0 < self.side_a <= self.side_x and math.isfinite(self.side_x)):
            raise GeometryError(f"need 0 < a <= x, got a={self.side_a}, x={self.side_x}")
        if not (0 < self.gamma <= math.pi / 2):
            raise GeometryError(f"gamma must lie in (0, 90] degrees, got {math.degrees(self.gamma)}")

    @classmethod
    def from_degrees(cls, side_a: float, side_x: float, gamma_deg: float) -> "ParallelogramSpec":
        return cls(side_a, side_x, math.radians(gamma_deg))

    @property
    def cos_gamma(self) -> float:
        # cos(pi/2) is 6e-17 in floating point; the right angle is exact here
        return 0.0 if self.gamma == math.pi / 2 else math.cos(self.gamma)

    def corners(self) -> np.ndarray:
        """``v1, v2, w2, w1``: side ``x`` along the x-axis, side ``a`` at angle gamma."""
        a, x = self.side_a, self.side_x
        w1 = np.array([a * self.cos_gamma, a * math.sin(self.gamma)])
        return np.array([[0.0, 0.0], [x, 0.0], w1 + [x, 0.0], w1])


def _parallelogram_case1(a: float, x: float, cos_g: float, sin_g: float) -> float:
    return math.sqrt(a * a + x * x - 2 * a * x * cos_g) / (2.0 * sin_g)


def _parallelogram_case2(a: float, x: float, cos_g: float) -> float:
    h2 = a * a + x * x - 2 * a * x * cos_g
    return max(a / (2.0 * cos_g), h2 / (2.0 * x - 2.0 * a * cos_g))


def parallelogram_d(p: ParallelogramSpec, eps_rel: Optional[float] = None) -> float:
    """Closed-form ``d`` of a parallelogram's four corners.

    On the case boundary ``cos(gamma) = a / x`` both formulas are evaluated
    and must agree.
    """
    a, x = p.side_a, p.side_x
    cos_g, sin_g = p.cos_gamma, math.sin(p.gamma)
    ratio = a / x
    eps_rel = Tolerance().eps_rel if eps_rel is None else eps_rel
    if cos_g <= ratio:
        value = _parallelogram_case1(a, x, cos_g, sin_g)
        if cos_g > 0 and abs(cos_g - ratio) <= eps_rel:
            other = _parallelogram_case2(a, x, cos_g)
            if abs(other - value) > 1e3 * eps_rel * max(value, 1.0):
                raise ArithmeticError(f"case formulas disagree on the boundary: {value} vs {other}")
        return value
    return _parallelogram_case2(a, x, cos_g)


@dataclass(frozen=True)
class MonotonicityReport:
    gammas: np.ndarray
    values: np.ndarray
    right_angle_value: float
    max_excess: float
    max_decrease: float

    @property
    def max_violation(self) -> float:
        return max(self.max_excess, self.max_decrease)

    def ok(self, eps: float = 1e-9) -> bool:
        return self.max_violation <= eps


def parallelogram_monotonicity_audit(side_a: float, side_x: float, gammas: Iterable[float]) -> MonotonicityReport:
    """Check that ``d`` of the corners grows with the angle and peaks at 90 degrees.

    ``gammas`` are in radians and are evaluated in the given order.
    ``max_excess`` is the largest ``d(P_gamma) - d(P_90)``, ``max_decrease``
    the largest drop between consecutive grid angles; both should be ``<= 0``
    up to rounding.
    """
    g = np.asarray(list(gammas), dtype=float)
    vals = np.array([parallelogram_d(ParallelogramSpec(side_a, side_x, float(t))) for t in g])
    top = parallelogram_d(ParallelogramSpec(side_a, side_x, math.pi / 2))
    excess = float(np.max(vals - top)) if len(vals) else -math.inf
    decrease = float(np.max(vals[:-1] - vals[1:])) if len(vals) > 1 else -math.inf
    return MonotonicityReport(g, vals, top, excess, decrease)
