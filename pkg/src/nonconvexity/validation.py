"""Input validation helpers.

Everything public accepts either a :class:`PointSet` or an array-like of
points; :func:`as_pointset` is the single conversion path. One-dimensional
input (a flat sequence of reals or an ``(n, 1)`` array) is embedded on the
x-axis.
"""

from __future__ import annotations

from functools import cached_property
from typing import Optional

import numpy as np
from sklearn.utils import check_array

from .geometry import (
    ConvexPolygon,
    GeometryError,
    Tolerance,
    affine_rank,
    convex_hull,
    dedup_points,
)


def check_points(X, *, allow_1d: bool = True) -> tuple[np.ndarray, int]:
    """Validate coordinates and return ``(points (n, 2), declared dim)``.

    Raises :class:`GeometryError` for empty input and ``ValueError`` for
    non-finite or wrongly shaped coordinates.
    """
    if isinstance(X, PointSet):
        return X.points, X.dim
    try:
        empty = len(X) == 0
    except TypeError:
        empty = False
    if empty:
        raise GeometryError("empty set")
    arr = check_array(X, ensure_2d=False, dtype=float, ensure_all_finite=True, ensure_min_samples=1)
    if arr.ndim == 1:
        if not allow_1d:
            raise ValueError("expected 2D points, got a flat sequence")
        return np.column_stack([arr, np.zeros_like(arr)]), 1
    if arr.ndim != 2 or arr.shape[1] not in (1, 2):
        raise ValueError(f"points must have shape (n, 1) or (n, 2), got {arr.shape}")
    if arr.shape[1] == 1:
        if not allow_1d:
            raise ValueError("expected 2D points, got shape (n, 1)")
        return np.column_stack([arr[:, 0], np.zeros(len(arr))]), 1
    return np.array(arr, dtype=float), 2


class PointSet:
    """Finite planar point set, deduplicated and lexicographically sorted.

    Parameters
    ----------
    points : array-like of shape (n, 2), (n, 1) or (n,)
    dim : {1, 2}, optional
        Declared ambient dimension; inferred from the array shape when omitted.
    eps_rel : float, optional
        Relative epsilon; defaults to ``NONCONVEXITY_EPS`` or ``1e-9``.
    """

    def __init__(self, points, dim: Optional[int] = None, eps_rel: Optional[float] = None):
        pts, inferred = check_points(points)
        dim = inferred if dim is None else dim
        if dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {dim}")
        if dim == 1 and np.any(pts[:, 1] != 0):
            raise ValueError("dim=1 point sets must lie on the x-axis")
        self.tol = Tolerance.for_points(pts, eps_rel=eps_rel)
        self.points = dedup_points(pts, self.tol)
        self.points.setflags(write=False)
        self.dim = dim

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"PointSet(n={len(self)}, dim={self.dim}, rank={self.rank})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.points, other.points)

    __hash__ = None

    @property
    def eps_rel(self) -> float:
        return self.tol.eps_rel

    @cached_property
    def rank(self) -> int:
        return affine_rank(self.points, self.tol)

    @cached_property
    def hull(self) -> ConvexPolygon:
        return convex_hull(self.points, self.tol)

    def coordinates(self) -> list:
        """Plain Python coordinates (reals for ``dim=1``)."""
        if self.dim == 1:
            return self.points[:, 0].tolist()
        return self.points.tolist()

    def translated(self, t) -> "PointSet":
        t = np.asarray(t, dtype=float)
        return PointSet(self.points + t, dim=2 if np.any(t[1:] != 0) else self.dim, eps_rel=self.eps_rel)


def as_pointset(X, eps_rel: Optional[float] = None) -> PointSet:
    if isinstance(X, PointSet):
        if eps_rel is None or eps_rel == X.eps_rel:
            return X
        return PointSet(X.points, dim=X.dim, eps_rel=eps_rel)
    return PointSet(X, eps_rel=eps_rel)
