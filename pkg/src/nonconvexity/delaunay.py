"""Delaunay triangulation of a planar site set and its Voronoi skeleton.

Triangles come from qhull (through :mod:`scipy.spatial`); adjacency, hull
edges and the canonical choice of diagonal for cocircular quadruples are
computed here so the output is deterministic and auditable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import Delaunay, QhullError, cKDTree

from .geometry import GeometryError, Tolerance
from .validation import as_pointset


def _half_edges(tris: np.ndarray, n_sites: int):
    """Directed edges of CCW triangles and the index of each one's twin.

    Half-edge ``3 * t + k`` runs between the two vertices other than
    ``tris[t, k]``, so it is the edge opposite vertex ``k`` with triangle
    ``t`` on its left.
    """
    a = tris[:, [1, 2, 0]].ravel()
    b = tris[:, [2, 0, 1]].ravel()
    key = np.minimum(a, b).astype(np.int64) * n_sites + np.maximum(a, b)
    order = np.argsort(key, kind="stable")
    sk = key[order]
    twin = np.full(len(key), -1, dtype=np.int64)
    same = np.flatnonzero(sk[1:] == sk[:-1])
    twin[order[same]] = order[same + 1]
    twin[order[same + 1]] = order[same]
    return a, b, twin


def _circumcenters(sites: np.ndarray, tris: np.ndarray):
    p0 = sites[tris[:, 0]]
    b = sites[tris[:, 1]] - p0
    c = sites[tris[:, 2]] - p0
    den = 2.0 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    b2 = (b * b).sum(axis=1)
    c2 = (c * c).sum(axis=1)
    ux = (c[:, 1] * b2 - b[:, 1] * c2) / den
    uy = (b[:, 0] * c2 - c[:, 0] * b2) / den
    u = np.column_stack([ux, uy])
    radius = np.hypot(ux, uy)
    return p0 + u, radius


def _signed_area2(sites: np.ndarray, tris: np.ndarray) -> np.ndarray:
    p = sites[tris]
    return (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1]) - (p[:, 1, 1] - p[:, 0, 1]) * (
        p[:, 2, 0] - p[:, 0, 0]
    )


def _incircle_excess(sites: np.ndarray, tris: np.ndarray, q: np.ndarray) -> np.ndarray:
    """How far site ``q`` lies inside each CCW triangle's circumcircle, to first order.

    The in-circle determinant equals ``2 * area * (R^2 - |q - o|^2)`` and
    ``4 * area * R`` is the product of the side lengths, so dividing by that
    product gives ``R - |q - o|`` near the circle without forming the centre,
    which is far away and imprecise for slivers.
    """
    p = sites[tris] - sites[q][:, None, :]
    lift = (p**2).sum(axis=2)

    def cross(i, j):
        return p[:, i, 0] * p[:, j, 1] - p[:, i, 1] * p[:, j, 0]

    det = lift[:, 0] * cross(1, 2) + lift[:, 1] * cross(2, 0) + lift[:, 2] * cross(0, 1)
    s = sites[tris]
    sides = np.hypot(*(s - np.roll(s, 1, axis=1)).transpose(2, 0, 1)).prod(axis=1)
    return det / sides


def _canonical_flips(sites: np.ndarray, tris: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Flip edges that are not locally Delaunay, and resolve cocircular
    quadruples towards the diagonal with the smallest index.

    Sites are lexicographically sorted, so the smallest index is the
    lexicographically smallest endpoint. A strict violation (opposite site
    more than ``tol.eps`` inside the circumcircle, see
    :func:`_incircle_excess`) is always flipped; a
    cocircular one only when it lowers the smaller diagonal endpoint. The
    loop is capped in case rounding makes the two rules disagree.
    """
    tris = tris.copy()
    n = len(sites)
    for _ in range(4 * len(tris) + 1):
        a, b, twin = _half_edges(tris, n)
        h = np.flatnonzero(twin > np.arange(len(twin)))
        if len(h) == 0:
            return tris
        t1, t2 = h // 3, twin[h] // 3
        p = tris[t1, h % 3]
        q = tris[t2, twin[h] % 3]
        u, v = a[h], b[h]
        want = np.minimum(p, q) < np.minimum(u, v)
        excess = _incircle_excess(sites, tris[t1], q)
        cand = np.flatnonzero((want & (np.abs(excess) <= tol.eps)) | (excess > tol.eps))
        if len(cand) == 0:
            return tris
        touched = set()
        flipped = False
        for k in cand:
            i1, i2 = int(t1[k]), int(t2[k])
            if i1 in touched or i2 in touched:
                continue
            new1 = np.array([u[k], q[k], p[k]])
            new2 = np.array([q[k], v[k], p[k]])
            if min(_signed_area2(sites, np.stack([new1, new2]))) <= 0:
                continue
            tris[i1], tris[i2] = new1, new2
            touched.update((i1, i2))
            flipped = True
        if not flipped:
            return tris
    return tris


@dataclass(frozen=True, eq=False)
class Triangulation:
    """Delaunay triangles over lexicographically sorted ``sites``.

    ``neighbors[t, k]`` is the triangle across the edge opposite vertex ``k``
    of triangle ``t`` (``-1`` on the hull). ``hull_edges`` are directed
    counter-clockwise, interior on the left.
    """

    sites: np.ndarray
    triangles: np.ndarray
    neighbors: np.ndarray
    hull_edges: np.ndarray
    tol: Tolerance

    @cached_property
    def _circles(self):
        return _circumcenters(self.sites, self.triangles)

    @property
    def circumcenters(self) -> np.ndarray:
        return self._circles[0]

    @property
    def circumradii(self) -> np.ndarray:
        return self._circles[1]

    @cached_property
    def areas(self) -> np.ndarray:
        return 0.5 * _signed_area2(self.sites, self.triangles)

    def edges(self):
        """Undirected edges as ``(site pairs (E, 2), left triangle, right triangle)``.

        The right triangle is ``-1`` for hull edges; the site pair is directed
        with the left triangle on its left.
        """
        a, b, twin = _half_edges(self.triangles, len(self.sites))
        idx = np.arange(len(a))
        keep = (twin == -1) | (twin > idx)
        h = idx[keep]
        right = np.where(twin[h] >= 0, twin[h] // 3, -1)
        return np.column_stack([a[h], b[h]]), h // 3, right


def triangulate(points, tol: Tolerance | None = None) -> Triangulation:
    """Delaunay triangulation of a full-rank point set.

    Raises :class:`GeometryError` ("rank deficient") for collinear input.
    """
    ps = as_pointset(points)
    tol = tol or ps.tol
    if ps.rank < 2:
        raise GeometryError("rank deficient")
    sites = np.ascontiguousarray(ps.points)
    # qhull lifts to |a|^2; far from the origin that loses the digits that
    # separate nearby sites, so triangulate around the bounding-box centre
    centred = sites - (sites.min(axis=0) + sites.max(axis=0)) / 2.0
    try:
        dl = Delaunay(centred, qhull_options="Qbb Qc Qz Q12")
        if len(dl.coplanar):
            raise QhullError("sites dropped as coplanar")
    except QhullError:
        dl = Delaunay(centred, qhull_options="QJ")
    tris = dl.simplices.astype(np.int64)
    area2 = _signed_area2(sites, tris)
    tris = tris[area2 != 0]
    area2 = area2[area2 != 0]
    cw = area2 < 0
    tris[cw] = tris[cw][:, [0, 2, 1]]
    tris = _canonical_flips(sites, tris, tol)
    a, b, twin = _half_edges(tris, len(sites))
    neighbors = np.where(twin >= 0, twin // 3, -1).reshape(-1, 3)
    hull = np.flatnonzero(twin == -1)
    hull_edges = np.column_stack([a[hull], b[hull]])
    return Triangulation(sites, tris, neighbors, hull_edges, tol)


def audit_empty_circumcircle(tri: Triangulation, brute_force: bool = False) -> float:
    """Largest amount by which any site intrudes into a triangle's circumcircle.

    The triangulation is Delaunay (within tolerance) when the result is at most
    ``tri.tol.eps``. ``brute_force`` checks every (triangle, site) pair.
    """
    centers, radii = tri.circumcenters, tri.circumradii
    if brute_force:
        best = np.full(len(centers), np.inf)
        for start in range(0, len(tri.sites), 256):
            chunk = tri.sites[start : start + 256]
            d = np.hypot(centers[:, None, 0] - chunk[None, :, 0], centers[:, None, 1] - chunk[None, :, 1])
            best = np.minimum(best, d.min(axis=1))
    else:
        best, _ = cKDTree(tri.sites).query(centers)
    return float(np.max(radii - best)) if len(radii) else 0.0


@dataclass(frozen=True, eq=False)
class VoronoiSkeleton:
    """Voronoi vertices and edges dual to a :class:`Triangulation`.

    Finite edges are index pairs into ``vertices``. Unbounded edges are rays
    from ``vertices[ray_origins]`` along ``ray_directions``, stored with a
    finite proxy length that reaches well past the sites' hull.
    """

    vertices: np.ndarray
    triangle_vertex: np.ndarray
    segments: np.ndarray
    segment_sites: np.ndarray
    ray_origins: np.ndarray
    ray_directions: np.ndarray
    ray_sites: np.ndarray
    ray_lengths: np.ndarray

    def generators(self, k: int) -> np.ndarray:
        """Triangles whose circumcenters merged into Voronoi vertex ``k``."""
        return np.flatnonzero(self.triangle_vertex == k)

    def ray_endpoints(self) -> np.ndarray:
        start = self.vertices[self.ray_origins]
        return start + self.ray_directions * self.ray_lengths[:, None]


def _cluster(points: np.ndarray, radius: float) -> np.ndarray:
    """Representative index for each point; clusters are within ``radius``."""
    rep = np.arange(len(points))
    finite = np.all(np.isfinite(points), axis=1)
    idx = np.flatnonzero(finite)
    if len(idx) < 2:
        return rep
    # sliver triangles have huge centres whose squared norms overflow, so
    # search in the max norm and confirm with hypot
    sub = points[idx]
    pairs = cKDTree(sub).query_pairs(radius, p=np.inf, output_type="ndarray")
    if len(pairs):
        gap = np.hypot(*(sub[pairs[:, 0]] - sub[pairs[:, 1]]).T)
        pairs = pairs[gap <= radius]
    for i, j in sorted((min(p), max(p)) for p in pairs.tolist()):
        gi, gj = idx[i], idx[j]
        ri, rj = rep[gi], rep[gj]
        while rep[ri] != ri:
            ri = rep[ri]
        while rep[rj] != rj:
            rj = rep[rj]
        if ri != rj:
            rep[max(ri, rj)] = min(ri, rj)
    for k in range(len(rep)):
        r = rep[k]
        while rep[r] != r:
            r = rep[r]
        rep[k] = r
    return rep


def voronoi_skeleton(tri: Triangulation) -> VoronoiSkeleton:
    """Circumcenters joined across shared edges; hull edges become rays.

    Circumcenters closer than ``tol.eps`` (cocircular neighbours) are merged
    into one vertex, and edges collapsing to a point are dropped.
    """
    centers = tri.circumcenters
    rep = _cluster(centers, tri.tol.eps)
    reps, vertex_of = np.unique(rep, return_inverse=True)
    vertices = centers[reps]

    pairs, left, right = tri.edges()
    inner = right >= 0
    v1, v2 = vertex_of[left[inner]], vertex_of[right[inner]]
    keep = v1 != v2
    segments = np.column_stack([v1[keep], v2[keep]])
    segment_sites = pairs[inner][keep]

    hull_pairs = pairs[~inner]
    d = tri.sites[hull_pairs[:, 1]] - tri.sites[hull_pairs[:, 0]]
    outward = np.column_stack([d[:, 1], -d[:, 0]])
    outward /= np.hypot(outward[:, 0], outward[:, 1])[:, None]
    origins = vertex_of[left[~inner]]

    lo, hi = tri.sites.min(axis=0), tri.sites.max(axis=0)
    diam = float(np.hypot(*(hi - lo)))
    mid = (lo + hi) / 2.0
    reach = np.hypot(*(vertices[origins] - mid).T)
    lengths = np.maximum(4.0 * diam, reach + 2.0 * diam)
    return VoronoiSkeleton(
        vertices=vertices,
        triangle_vertex=vertex_of,
        segments=segments,
        segment_sites=segment_sites,
        ray_origins=origins,
        ray_directions=outward,
        ray_sites=hull_pairs,
        ray_lengths=lengths,
    )
