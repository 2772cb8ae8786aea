"""Command-line interface.

Exit codes: 0 success, 1 property violation (or a failed construction), 2
usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import closed_forms as cf
from .audit import AUDITS, run_audit
from .geometry import EPS_ENV_VAR, GeometryError
from .instances import SHAPES, InstanceError, format_pointset, generate, parse_pointset
from .measures import d_exact, d_grid_oracle, rad, v_at_point, v_exact
from .sumset import DecompositionError, SumsetDecomposer, minkowski_finite
from .svg import OVERLAYS, emit_svg


class UsageError(Exception):
    pass


def _point(text: str) -> np.ndarray:
    try:
        vals = [float(t) for t in text.replace(";", ",").split(",")]
    except ValueError:
        raise UsageError(f"not a point: {text!r}") from None
    if len(vals) != 2 or not all(math.isfinite(v) for v in vals):
        raise UsageError(f"expected a finite point 'x,y', got {text!r}")
    return np.array(vals)


def _size_range(text: str) -> tuple[int, int]:
    parts = text.split("-")
    try:
        lo, hi = (int(parts[0]), int(parts[-1])) if len(parts) <= 2 else (None, None)
    except ValueError:
        lo = hi = None
    if lo is None or not (1 <= lo <= hi):
        raise UsageError(f"--size must be N or LO-HI with 1 <= LO <= HI, got {text!r}")
    return lo, hi


def _emit(args, payload: dict, text_lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        print("\n".join(text_lines))


def _write_or_print(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _fmt_point(p) -> str:
    return ",".join(repr(float(c)) for c in p)


def cmd_hull(args) -> int:
    ps = parse_pointset(args.instance)
    v = ps.hull.vertices
    _emit(args, {"rank": ps.rank, "vertices": v.tolist()},
          [f"rank: {ps.rank}"] + [_fmt_point(p) for p in v])
    return 0


def cmd_d(args) -> int:
    ps = parse_pointset(args.instance)
    res = d_grid_oracle(ps, args.resolution) if args.grid else d_exact(ps)
    _emit(args, res.as_dict(), [f"d: {res.value!r}", f"witness: {_fmt_point(res.witness)}",
                                f"method: {res.method}"] + ([f"step: {res.step!r}"] if args.grid else []))
    return 0


def cmd_v(args) -> int:
    ps = parse_pointset(args.instance)
    if args.at is not None:
        x = _point(args.at)
        value = v_at_point(ps, x)
        _emit(args, {"v_at": value, "x": x.tolist()}, [f"v_at: {value!r}", f"x: {_fmt_point(x)}"])
        return 0
    res = v_exact(ps)
    _emit(args, res.as_dict(), [f"v: {res.value!r}", f"witness: {_fmt_point(res.witness)}"])
    return 0


def cmd_rad(args) -> int:
    res = rad(parse_pointset(args.instance))
    _emit(args, res.as_dict(), [f"rad: {res.value!r}", f"center: {_fmt_point(res.witness)}"])
    return 0


def cmd_minkowski(args) -> int:
    s = minkowski_finite(parse_pointset(args.a), parse_pointset(args.b))
    _write_or_print(args, format_pointset(s, label="minkowski sum"))
    return 0


def cmd_closed_form(args) -> int:
    if args.shape == "triangle":
        if args.points is None:
            raise UsageError("closed-form triangle needs --points 'x1,y1;x2,y2;x3,y3' or an instance file")
        if os.path.isfile(args.points):
            pts = parse_pointset(args.points).points
        else:
            pts = np.array([_point(p) for p in args.points.split(";")])
        if len(pts) != 3:
            raise UsageError("a triangle needs exactly three points")
        tri = cf.TriangleSpec.from_points(pts)
        kind = cf.classify_triangle(tri)
        value = cf.triangle_d(tri)
        _emit(args, {"kind": kind.value, "d": value}, [f"kind: {kind.value}", f"d: {value!r}"])
        return 0
    if None in (args.a, args.x, args.gamma):
        raise UsageError("closed-form parallelogram needs --a, --x and --gamma (degrees)")
    p = cf.ParallelogramSpec.from_degrees(args.a, args.x, args.gamma)
    value = cf.parallelogram_d(p)
    case = 1 if p.cos_gamma <= p.side_a / p.side_x else 2
    _emit(args, {"case": case, "d": value, "corners": p.corners().tolist()}, [f"case: {case}", f"d: {value!r}"])
    return 0


def cmd_decompose(args) -> int:
    A, B = parse_pointset(args.a), parse_pointset(args.b)
    x = _point(args.x)
    try:
        dec = SumsetDecomposer(A, B)
        res = dec.decompose(x)
    except DecompositionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return 1
    payload = res.as_dict()
    lines = [f"kind: {res.kind.value}", f"x: {_fmt_point(x)}"]
    if res.translate is not None:
        lines.append(f"translate: {_fmt_point(res.translate)}")
    if res.witness is not None:
        w = res.witness
        dx = float(dec.distance_to_sumset(x)[0])
        payload["distance_to_sumset"] = dx
        lines += [f"a1: {_fmt_point(w.a1)}", f"a2: {_fmt_point(w.a2)}", f"b1: {_fmt_point(w.b1)}",
                  f"b2: {_fmt_point(w.b2)}", f"side_a: {w.side_a!r} (2 d(A) = {2 * w.d_a!r})",
                  f"side_b: {w.side_b!r} (2 d(B) = {2 * w.d_b!r})",
                  f"distance_to_sumset: {dx!r}", f"rectangle_bound: {math.sqrt(w.rectangle_bound())!r}"]
    if args.svg:
        overlays = ["hull"] + (["witness"] if res.witness is not None else [])
        emit_svg(minkowski_finite(A, B), overlays, args.svg, decomposition=res)
    _emit(args, payload, lines)
    return 0


def cmd_audit(args) -> int:
    size = _size_range(args.size) if args.size else (2, 40)
    report = run_audit(args.name, trials=args.trials, seed=args.seed, size=size, shape=args.shape,
                       resolution=args.resolution, samples=args.samples)
    text = json.dumps(report.as_dict()) if args.json else report.to_text(with_json=not args.no_blob)
    _write_or_print(args, text)
    if args.out:
        print(report.to_text(with_json=False))
    return 0 if report.ok else 1


def cmd_svg(args) -> int:
    ps = parse_pointset(args.instance)
    overlays = [o for o in (args.overlay or "").split(",") if o]
    decomposition = None
    if "witness" in overlays:
        if args.b is None or args.x is None:
            raise UsageError("the witness overlay needs --b and --x")
        B = parse_pointset(args.b)
        decomposition = SumsetDecomposer(ps, B).decompose(_point(args.x))
        ps = minkowski_finite(ps, B)
    text = emit_svg(ps, overlays, decomposition=decomposition)
    _write_or_print(args, text)
    return 0


def cmd_generate(args) -> int:
    try:
        n = int(args.size or 20)
    except ValueError:
        raise UsageError(f"--size must be an integer for generate, got {args.size!r}") from None
    if n < 1:
        raise UsageError("--size must be at least 1")
    shape = "uniform-square" if args.shape == "mixed" else args.shape
    ps = generate(args.seed, n, shape)
    _write_or_print(args, format_pointset(ps, label=f"{shape} seed={args.seed} n={n}"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, help=f"relative tolerance (overrides {EPS_ENV_VAR})")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", help="write the main output to this file")

    parser = argparse.ArgumentParser(prog="nonconvexity", description="Non-convexity measures of planar point sets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hull", parents=[common], help="convex hull vertices")
    p.add_argument("instance", help="instance file or inline text")
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("d", parents=[common], help="Hausdorff distance to the convex hull")
    p.add_argument("instance")
    p.add_argument("--grid", action="store_true", help="use the grid oracle instead of the exact algorithm")
    p.add_argument("--resolution", type=int, default=256)
    p.set_defaults(func=cmd_d)

    p = sub.add_parser("v", parents=[common], help="effective standard deviation")
    p.add_argument("instance")
    p.add_argument("--at", help="evaluate the pointwise value at x,y instead")
    p.set_defaults(func=cmd_v)

    p = sub.add_parser("rad", parents=[common], help="smallest enclosing circle radius")
    p.add_argument("instance")
    p.set_defaults(func=cmd_rad)

    p = sub.add_parser("minkowski", parents=[common], help="Minkowski sum of two instances")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_minkowski)

    p = sub.add_parser("closed-form", parents=[common], help="closed-form d of a triangle or parallelogram")
    p.add_argument("shape", choices=["triangle", "parallelogram"])
    p.add_argument("--points", help="triangle vertices 'x1,y1;x2,y2;x3,y3' or an instance file")
    p.add_argument("--a", type=float, help="shorter parallelogram side")
    p.add_argument("--x", type=float, help="longer parallelogram side")
    p.add_argument("--gamma", type=float, help="parallelogram angle in degrees, in (0, 90]")
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("decompose", parents=[common], help="place x of conv(A+B) in a translate or parallelogram")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--x", required=True, help="query point x,y")
    p.add_argument("--svg", help="also draw A+B with the witness to this file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("audit", parents=[common], help="seeded corpus audit; exit 1 on any violation")
    p.add_argument("name", choices=AUDITS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--size", help="set size range LO-HI (default 2-40)")
    p.add_argument("--shape", default="mixed", choices=("mixed",) + SHAPES)
    p.add_argument("--resolution", type=int, default=128, help="grid resolution for the oracle audit")
    p.add_argument("--samples", type=int, help="query points per instance where applicable")
    p.add_argument("--no-blob", action="store_true", help="omit the trailing JSON line")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("svg", parents=[common], help="draw an instance")
    p.add_argument("instance")
    p.add_argument("--overlay", help=f"comma-separated subset of {','.join(OVERLAYS)}")
    p.add_argument("--b", help="second instance (witness overlay)")
    p.add_argument("--x", help="query point (witness overlay)")
    p.set_defaults(func=cmd_svg)

    p = sub.add_parser("generate", parents=[common], help="seeded random instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", default="20", help="number of points")
    p.add_argument("--shape", default="uniform-square", choices=("mixed",) + SHAPES)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    saved = os.environ.get(EPS_ENV_VAR)
    if args.eps is not None:
        if not (math.isfinite(args.eps) and args.eps > 0):
            print("error: --eps must be a positive finite number", file=sys.stderr)
            return 2
        # every default Tolerance reads the variable, so this reaches all modules
        os.environ[EPS_ENV_VAR] = repr(args.eps)
    try:
        return args.func(args)
    except (UsageError, InstanceError, GeometryError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        if saved is None:
            os.environ.pop(EPS_ENV_VAR, None)
        else:
            os.environ[EPS_ENV_VAR] = saved


if __name__ == "__main__":
    sys.exit(main())
