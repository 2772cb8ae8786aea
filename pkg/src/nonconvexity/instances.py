"""Point-set files and seeded random instances.

Instance files are either a JSON object ``{"dim": 1|2, "points": [...],
"label": "..."}``, a bare JSON list of points, or CSV text with one point per
line (``x`` or ``x,y``; blank lines and ``#`` comments are skipped).

Random instances use NumPy's ``default_rng`` (PCG64). Shapes:

``uniform-square``
    i.i.d. uniform points in ``[0, 1]^2``.
``annulus``
    angle uniform in ``[0, 2 pi)``, radius ``sqrt(0.25 + 0.75 U)`` so that
    points are uniform by area in the ring ``0.5 <= r <= 1``.
``grid-perturbed``
    ``n`` distinct cells of the ``k x k`` grid, ``k = ceil(sqrt(n))``, spacing
    ``1 / k``, each jittered by ``U(-0.05, 0.05)`` spacings per axis.
``collinear``
    ``origin + t * u`` with ``origin`` uniform in ``[0, 1]^2``, ``u`` a uniform
    random unit vector and ``t`` uniform in ``[0, 1]``.
"""

from __future__ import annotations

import json
import math
import os
import re
import sys
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .geometry import GeometryError
from .validation import PointSet

SHAPES = ("uniform-square", "annulus", "grid-perturbed", "collinear")
GENERATOR_NAME = "numpy.random.PCG64"


class InstanceError(GeometryError):
    """Malformed instance text; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


def _line_of(text: str, pattern: str) -> Optional[int]:
    m = re.search(pattern, text)
    return None if m is None else text.count("\n", 0, m.start()) + 1


def _coerce_point(p, dim: Optional[int], index: int, text: str):
    if isinstance(p, (int, float)) and not isinstance(p, bool):
        p = [p]
    if not isinstance(p, list) or not p or len(p) > 2 or not all(
        isinstance(c, (int, float)) and not isinstance(c, bool) for c in p
    ):
        raise InstanceError(f"point {index} is not a list of 1 or 2 numbers: {p!r}", _line_of(text, r'"points"'))
    if dim is not None and len(p) != dim and not (dim == 1 and len(p) == 1):
        raise InstanceError(f"point {index} has {len(p)} coordinates, expected {dim}", _line_of(text, r'"points"'))
    if not all(math.isfinite(c) for c in p):
        line = _line_of(text, r"NaN|-?Infinity|\d[eE]\+?\d{3,}")
        raise InstanceError(f"point {index} has a non-finite coordinate", line)
    return [float(c) for c in p]


def _parse_json(text: str, eps_rel: Optional[float]) -> PointSet:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(exc.msg, exc.lineno) from None
    dim = None
    if isinstance(obj, dict):
        unknown = set(obj) - {"dim", "points", "label"}
        if unknown:
            raise InstanceError(f"unknown keys {sorted(unknown)}", _line_of(text, re.escape(sorted(unknown)[0])))
        if "points" not in obj:
            raise InstanceError("missing 'points'", 1)
        dim = obj.get("dim")
        if dim not in (None, 1, 2):
            raise InstanceError(f"dim must be 1 or 2, got {dim!r}", _line_of(text, r'"dim"'))
        points = obj["points"]
    else:
        points = obj
    if not isinstance(points, list):
        raise InstanceError("'points' must be a list", _line_of(text, r'"points"') or 1)
    if not points:
        raise InstanceError("empty set")
    coords = [_coerce_point(p, dim, i, text) for i, p in enumerate(points)]
    widths = {len(c) for c in coords}
    if len(widths) > 1:
        raise InstanceError("points mix 1 and 2 coordinates", _line_of(text, r'"points"'))
    if dim is None:
        dim = widths.pop()
    if dim == 1:
        arr = np.array([c[0] for c in coords])
    else:
        arr = np.array(coords, dtype=float)
    try:
        return PointSet(arr, dim=dim, eps_rel=eps_rel)
    except ValueError as exc:
        raise InstanceError(str(exc)) from None


def _parse_csv(text: str, eps_rel: Optional[float]) -> PointSet:
    rows, width = [], None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f for f in re.split(r"[,\s;]+", line) if f]
        if len(fields) not in (1, 2):
            raise InstanceError(f"expected 1 or 2 coordinates, got {len(fields)}", lineno)
        if width is not None and len(fields) != width:
            raise InstanceError(f"expected {width} coordinates like the previous lines", lineno)
        width = len(fields)
        try:
            vals = [float(f) for f in fields]
        except ValueError:
            raise InstanceError(f"not a number: {line!r}", lineno) from None
        if not all(math.isfinite(v) for v in vals):
            raise InstanceError("non-finite coordinate", lineno)
        rows.append(vals)
    if not rows:
        raise InstanceError("empty set")
    if width == 1:
        return PointSet(np.array([r[0] for r in rows]), dim=1, eps_rel=eps_rel)
    return PointSet(np.array(rows), dim=2, eps_rel=eps_rel)


def _looks_like_path(source: str) -> bool:
    if "\n" in source or source.lstrip()[:1] in "[{":
        return False
    try:
        return Path(source).is_file()
    except OSError:
        return False


def parse_pointset(source: Union[str, os.PathLike], eps_rel: Optional[float] = None) -> PointSet:
    """Parse an instance from a file path or from inline text.

    A string naming an existing file is read from disk, ``"-"`` reads
    standard input, and anything else is parsed as text. Raises
    :class:`InstanceError` with the line number of the offending entry where
    one can be located.
    """
    if isinstance(source, os.PathLike):
        text = Path(source).read_text()
    elif source == "-":
        text = sys.stdin.read()
    elif _looks_like_path(source):
        text = Path(source).read_text()
    else:
        text = source
    stripped = text.strip()
    if not stripped:
        raise InstanceError("empty set")
    if stripped[0] in "[{":
        return _parse_json(text, eps_rel)
    return _parse_csv(text, eps_rel)


def format_pointset(ps: PointSet, label: Optional[str] = None) -> str:
    """JSON instance text; floats use the shortest round-tripping repr."""
    obj = {"dim": ps.dim, "points": ps.coordinates()}
    if label is not None:
        obj["label"] = label
    return json.dumps(obj)


def generate(seed, n: int, shape: str = "uniform-square", rng: Optional[np.random.Generator] = None) -> PointSet:
    """Random instance of ``n`` points; identical for identical ``(seed, n, shape)``.

    ``rng`` overrides ``seed`` when given. See the module docstring for the
    shape algorithms.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if shape not in SHAPES:
        raise ValueError(f"unknown shape {shape!r}; choose from {', '.join(SHAPES)}")
    rng = np.random.default_rng(seed) if rng is None else rng
    if shape == "uniform-square":
        pts = rng.random((n, 2))
    elif shape == "annulus":
        theta = rng.random(n) * 2 * math.pi
        r = np.sqrt(0.25 + 0.75 * rng.random(n))
        pts = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    elif shape == "grid-perturbed":
        k = math.ceil(math.sqrt(n))
        cells = rng.choice(k * k, size=n, replace=False)
        base = np.column_stack([cells % k, cells // k]).astype(float) / k
        pts = base + rng.uniform(-0.05, 0.05, (n, 2)) / k
    else:
        origin = rng.random(2)
        phi = rng.random() * 2 * math.pi
        t = rng.random(n)
        pts = origin + t[:, None] * np.array([math.cos(phi), math.sin(phi)])
    return PointSet(pts)
