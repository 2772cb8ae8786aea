"""Static SVG drawings of a point set and its derived objects."""

from __future__ import annotations

import os
from typing import Iterable, Optional, Union

import numpy as np

from .delaunay import triangulate, voronoi_skeleton
from .geometry import GeometryError
from .measures import d_exact
from .sumset import Decomposition
from .validation import as_pointset

OVERLAYS = ("hull", "voronoi", "measure-circle", "witness")


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _points_attr(pts: np.ndarray) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)


def emit_svg(points, overlays: Iterable[str] = (), path: Union[str, os.PathLike, None] = None,
             decomposition: Optional[Decomposition] = None, size: int = 600) -> str:
    """Render sites and the requested overlays; optionally write to ``path``.

    Overlays: ``hull`` (polygon), ``voronoi`` (skeleton, rays clipped by the
    viewport), ``measure-circle`` (circle of radius ``d`` at the ``d``
    witness) and ``witness`` (the parallelogram of ``decomposition``). World
    coordinates are kept as-is under a y-flipping transform.
    """
    ps = as_pointset(points)
    overlays = set(overlays)
    unknown = overlays - set(OVERLAYS)
    if unknown:
        raise ValueError(f"unknown overlays {sorted(unknown)}; choose from {', '.join(OVERLAYS)}")
    pts = ps.points
    extra = [pts]
    circle = None
    if "measure-circle" in overlays:
        res = d_exact(ps)
        circle = (res.witness, res.value)
        extra.append(res.witness + np.array([[-res.value, -res.value], [res.value, res.value]]))
    corners = None
    if "witness" in overlays:
        if decomposition is None or decomposition.witness is None:
            raise GeometryError("witness overlay needs a decomposition with a parallelogram witness")
        corners = decomposition.witness.corners()
        extra += [corners, decomposition.x[None, :]]
    allpts = np.vstack(extra)
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    lo, hi = lo - 0.08 * span, hi + 0.08 * span
    w, h = hi - lo
    scale = size / max(w, h)
    dot = 0.006 * max(w, h)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w * scale)}" height="{_fmt(h * scale)}" '
        f'viewBox="0 0 {_fmt(w * scale)} {_fmt(h * scale)}">',
        f'<g transform="translate({_fmt(-lo[0] * scale)},{_fmt(hi[1] * scale)}) scale({_fmt(scale)},{_fmt(-scale)})" '
        'fill="none" stroke-width="1.5">',
    ]
    stroke = 'vector-effect="non-scaling-stroke"'
    if "voronoi" in overlays:
        if ps.rank < 2:
            raise GeometryError("voronoi overlay needs a full-rank set")
        sk = voronoi_skeleton(triangulate(ps))
        out.append(f'<g class="voronoi" stroke="#8a8a8a" {stroke}>')
        for i, j in sk.segments:
            (x1, y1), (x2, y2) = sk.vertices[i], sk.vertices[j]
            out.append(f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" {stroke}/>')
        for (x1, y1), (x2, y2) in zip(sk.vertices[sk.ray_origins], sk.ray_endpoints()):
            out.append(f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" {stroke}/>')
        out.append("</g>")
    if "hull" in overlays:
        out.append(f'<polygon class="hull" points="{_points_attr(ps.hull.vertices)}" stroke="#1f5fa8" {stroke}/>')
    if corners is not None:
        out.append(f'<polygon class="witness" points="{_points_attr(corners)}" stroke="#2d8a3e" '
                   f'fill="#2d8a3e" fill-opacity="0.15" {stroke}/>')
        x, y = decomposition.x
        out.append(f'<circle class="query" cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(dot * 1.2)}" fill="#2d8a3e"/>')
    if circle is not None:
        (cx, cy), r = circle
        out.append(f'<circle class="measure-circle" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" '
                   f'stroke="#c0392b" {stroke}/>')
        out.append(f'<circle class="measure-center" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(dot)}" fill="#c0392b"/>')
    out.append('<g class="sites" fill="black">')
    for x, y in pts:
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(dot)}"/>')
    out.append("</g></g></svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
