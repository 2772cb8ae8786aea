"""Seeded corpus audits of the inequalities and constructions.

Every trial draws from its own generator ``default_rng([seed, trial])`` so
any single trial can be replayed without running the others. Each audit
returns an :class:`AuditReport` whose ``worst`` entry holds the worst trial's
instance inline; :func:`replay` re-evaluates it to the same numbers.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .closed_forms import ParallelogramSpec, TriangleSpec, parallelogram_d, triangle_d
from .geometry import GeometryError, Tolerance
from .instances import GENERATOR_NAME, SHAPES, generate
from .measures import d_exact, d_grid_oracle, profile, v_exact, v_squared_at_points, grid_samples
from .sumset import (
    DecompositionError,
    DecompositionKind,
    SumsetDecomposer,
    boundary_decomposition_check,
    meyer_bound_1d,
    minkowski_finite,
    subadditivity_ratio,
    translate_bound_check,
)
from .validation import PointSet

AUDITS = ("subadd", "starr", "cassels", "translate-bound", "eq32", "decompose", "meyer1d", "closedforms", "oracle")
RATIO_TOL = 1e-7


@dataclass
class AuditReport:
    """Outcome of one audit run.

    ``max_value`` is the audit's headline metric (named by ``metric``) over
    all trials; ``worst`` is the instance attaining it.
    """

    command: str
    seed: int
    trials: int
    violations: int
    metric: str
    max_value: float
    worst: Optional[dict]
    wall_time: float
    size: tuple = (2, 40)
    shape: str = "mixed"
    first_violation: Optional[int] = None
    extras: dict = field(default_factory=dict)
    generator: str = GENERATOR_NAME
    numpy_version: str = np.__version__

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "seed": self.seed,
            "trials": self.trials,
            "violations": self.violations,
            "metric": self.metric,
            "max_value": self.max_value,
            "first_violation": self.first_violation,
            "size": list(self.size),
            "shape": self.shape,
            "generator": self.generator,
            "numpy_version": self.numpy_version,
            "wall_time": self.wall_time,
            "extras": self.extras,
            "worst": self.worst,
        }

    def to_text(self, with_json: bool = True) -> str:
        lines = [
            f"command: {self.command}",
            f"seed: {self.seed}",
            f"trials: {self.trials}",
            f"violations: {self.violations}",
            f"{self.metric}: {self.max_value!r}",
            f"first_violation: {self.first_violation}",
            f"size: {self.size[0]}-{self.size[1]}",
            f"shape: {self.shape}",
            f"generator: {self.generator}",
            f"numpy: {self.numpy_version}",
            f"wall_time: {self.wall_time:.3f}",
        ]
        lines += [f"{k}: {v}" for k, v in self.extras.items()]
        if with_json:
            lines.append("json: " + json.dumps(self.as_dict()))
        return "\n".join(lines)


def _similarity(rng: np.random.Generator, pts: np.ndarray) -> np.ndarray:
    scale = 10.0 ** rng.uniform(-2, 2)
    phi = rng.uniform(0, 2 * math.pi)
    rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    return scale * pts @ rot.T + rng.uniform(-100, 100, 2)


def random_set(rng: np.random.Generator, size: tuple, shape: str = "mixed", full_rank: bool = False,
               transform: bool = True) -> PointSet:
    """One corpus set: size uniform in ``size``, shape random unless fixed."""
    lo, hi = size
    if full_rank:
        lo = max(lo, 3)
    for _ in range(100):
        n = int(rng.integers(lo, hi + 1))
        choices = [s for s in SHAPES if not (full_rank and s == "collinear")]
        sh = choices[int(rng.integers(len(choices)))] if shape == "mixed" else shape
        pts = generate(None, n, sh, rng=rng).points
        if transform and rng.random() < 0.5:
            pts = _similarity(rng, pts)
        ps = PointSet(pts)
        if not full_rank or ps.rank == 2:
            return ps
    raise GeometryError(f"could not draw a full-rank set of shape {shape}")


def random_pair(rng: np.random.Generator, size: tuple, shape: str = "mixed", full_rank: bool = False,
                equal_fraction: float = 0.1):
    A = random_set(rng, size, shape, full_rank)
    if rng.random() < equal_fraction:
        return A, A
    return A, random_set(rng, size, shape, full_rank)


def _pair_instance(A: PointSet, B: PointSet, **extra) -> dict:
    return {"A": A.points.tolist(), "B": B.points.tolist(), **extra}


# --- per-instance metrics -------------------------------------------------
# Each returns (value, violated, details); value is the report's metric.


def pair_profiles(A, B, with_v: bool = True):
    """Profiles of ``A``, ``B`` and ``A + B`` (``B``'s is ``A``'s when equal)."""
    pa = profile(A, with_v=with_v)
    pb = pa if B is A else profile(B, with_v=with_v)
    return pa, pb, profile(minkowski_finite(A, B), with_v=with_v)


def _order_violations(*profiles, with_v: bool) -> int:
    bad = 0
    for p in profiles:
        eps = 1e-9 * max(p.rad.value, 1.0)
        bad += p.d.value > p.rad.value + eps
        if with_v:
            bad += p.d.value > p.v.value + eps
    return int(bad)


def metric_subadd(inst: dict):
    A, B = PointSet(inst["A"]), PointSet(inst["B"])
    da, db = d_exact(A).value, d_exact(B).value
    dab = d_exact(minkowski_finite(A, B)).value
    r = subadditivity_ratio(dab, da, db)
    return r, r > 1 + RATIO_TOL, {"dA": da, "dB": db, "dAB": dab}


def metric_starr(inst: dict):
    A, B = PointSet(inst["A"]), PointSet(inst["B"])
    pa, pb, pab = pair_profiles(A, B, with_v=False)
    r = subadditivity_ratio(pab.d.value, pa.rad.value, pb.rad.value)
    order = _order_violations(pa, pb, pab, with_v=False)
    return r, r > 1 + RATIO_TOL or order > 0, {"order_violations": order}


def metric_cassels(inst: dict):
    A, B = PointSet(inst["A"]), PointSet(inst["B"])
    pa, pb, pab = pair_profiles(A, B)
    r = subadditivity_ratio(pab.v.value, pa.v.value, pb.v.value)
    order = _order_violations(pa, pb, pab, with_v=True)
    return r, r > 1 + RATIO_TOL or order > 0, {"order_violations": order}


def metric_translate_bound(inst: dict):
    rep = translate_bound_check(inst["A"], inst["B"], trials=inst.get("samples", 200), seed=inst.get("subseed", 0))
    return rep.max_slack, not rep.ok, {"violations": rep.violations}


def _sample_box(rng, pts: np.ndarray, count: int, margin: float = 0.1) -> np.ndarray:
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    pad = margin * (hi - lo) + 1e-12
    return rng.uniform(lo - pad, hi + pad, (count, 2))


def metric_eq32(inst: dict):
    A, B = PointSet(inst["A"]), PointSet(inst["B"])
    rng = np.random.default_rng(inst.get("subseed", 0))
    xs = _sample_box(rng, minkowski_finite(A, B).points, inst.get("samples", 1000))
    rep = boundary_decomposition_check(A, B, xs)
    return float(rep.mismatches), rep.mismatches > 0, {"in_sum": rep.in_sum}


def sample_in_sum_hull(rng, dec: SumsetDecomposer, count: int) -> np.ndarray:
    """Points of ``conv(A + B)``.

    Half are uniform by area (fan triangulation from the first vertex), the
    rest sparse Dirichlet mixes of the vertices; a tenth of all samples are
    moved onto hull edges.
    """
    v = dec.sum_hull.vertices + dec.a0 + dec.b0
    w = rng.dirichlet(np.full(len(v), 0.3), size=count)
    if len(v) >= 3:
        uni = np.flatnonzero(rng.random(count) < 0.5)
        e1, e2 = v[1:-1] - v[0], v[2:] - v[0]
        area = np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
        fan = rng.choice(len(area), size=len(uni), p=area / area.sum())
        r = rng.random((len(uni), 2))
        flip = r.sum(axis=1) > 1
        r[flip] = 1 - r[flip]
        w[uni] = 0.0
        w[uni, 0] = 1 - r.sum(axis=1)
        w[uni, fan + 1] = r[:, 0]
        w[uni, fan + 2] = r[:, 1]
    on_edge = rng.random(count) < 0.1
    if on_edge.any():
        rows = np.flatnonzero(on_edge)
        i = rng.integers(len(v), size=len(rows))
        t = rng.random(len(rows))
        w[rows] = 0.0
        w[rows, i] = 1.0 - t
        w[rows, (i + 1) % len(v)] += t
    return w @ v


def decompose_points(dec: SumsetDecomposer, xs: np.ndarray):
    """Decompose every point and measure the witness slacks.

    Returns ``(worst slack, failures, branch counts, worst x)`` where the
    slack is the largest of ``side - 2 d`` and ``d(x, A+B)^2 - rectangle
    bound`` over witnesses, and failures counts construction errors, points
    reported outside the hull, and slacks above ``1e-7``.
    """
    counts = {k.value: 0 for k in DecompositionKind}
    worst, worst_x, failures = -math.inf, None, 0
    dist = dec.distance_to_sumset(xs)
    for x, dx in zip(xs, dist):
        try:
            r = dec.decompose(x)
        except DecompositionError:
            failures += 1
            worst_x = x
            continue
        counts[r.kind.value] += 1
        if r.kind is DecompositionKind.NOT_IN_HULL:
            failures += 1
            continue
        if r.witness is None:
            continue
        w = r.witness
        slack = max(w.side_a - 2 * w.d_a, w.side_b - 2 * w.d_b, dx * dx - w.rectangle_bound())
        if not dec.witness_contains(w, x, dec.check_slack):
            failures += 1
        if slack > RATIO_TOL:
            failures += 1
        if slack > worst:
            worst, worst_x = slack, x
    return worst, failures, counts, worst_x


def metric_decompose(inst: dict):
    dec = SumsetDecomposer(inst["A"], inst["B"])
    rng = np.random.default_rng(inst.get("subseed", 0))
    xs = sample_in_sum_hull(rng, dec, inst.get("samples", 100))
    worst, failures, counts, _ = decompose_points(dec, xs)
    return worst, failures > 0, {"branches": counts, "failures": failures}


def metric_meyer1d(inst: dict):
    sets = [np.asarray(s, dtype=float) for s in inst["sets"]]
    lhs, bound = meyer_bound_1d(sets, strict=False)
    span = sum(float(np.ptp(s)) for s in sets)
    return lhs - bound, lhs - bound > Tolerance(scale=span).eps, {"lhs": lhs, "bound": bound}


def metric_closedforms(inst: dict):
    tri = TriangleSpec.from_points(inst["triangle"])
    exact_t = d_exact(tri.vertices()).value
    err_t = abs(triangle_d(tri) - exact_t) / exact_t
    p = ParallelogramSpec(*inst["parallelogram"])
    exact_p = d_exact(p.corners()).value
    err_p = abs(parallelogram_d(p) - exact_p) / exact_p
    err = max(err_t, err_p)
    return err, err > RATIO_TOL, {"triangle_rel_err": err_t, "parallelogram_rel_err": err_p}


def oracle_slack(points, resolution: int, with_v: bool = True) -> dict:
    """Sandwich slacks of the exact measures against grid oracles.

    ``d_low = oracle - d`` and ``d_high = d - oracle - step`` must both be
    ``<= 0``; likewise for ``v`` using ``v_squared_at_points`` on the same
    samples.
    """
    ps = PointSet(points)
    d = d_exact(ps).value
    orc = d_grid_oracle(ps, resolution)
    out = {"d": d, "d_oracle": orc.value, "step": orc.step,
           "d_low": orc.value - d, "d_high": d - orc.value - orc.step}
    if with_v:
        v = v_exact(ps).value
        xs, step = grid_samples(ps, resolution)
        v2 = v_squared_at_points(ps, xs)
        vo = math.sqrt(max(float(np.nanmax(v2)), 0.0))
        out.update({"v": v, "v_oracle": vo, "v_low": vo - v, "v_high": v - vo - step})
    return out


def metric_oracle(inst: dict):
    s = oracle_slack(inst["points"], inst.get("resolution", 128))
    eps = Tolerance.for_points(inst["points"]).eps
    value = max(s["d_low"], s["d_high"], s.get("v_low", -math.inf), s.get("v_high", -math.inf))
    return value, value > eps, s


METRICS: dict[str, Callable] = {
    "subadd": metric_subadd,
    "starr": metric_starr,
    "cassels": metric_cassels,
    "translate-bound": metric_translate_bound,
    "eq32": metric_eq32,
    "decompose": metric_decompose,
    "meyer1d": metric_meyer1d,
    "closedforms": metric_closedforms,
    "oracle": metric_oracle,
}

METRIC_NAMES = {
    "subadd": "max_ratio",
    "starr": "max_ratio",
    "cassels": "max_ratio",
    "translate-bound": "max_slack",
    "eq32": "max_mismatches",
    "decompose": "max_slack",
    "meyer1d": "max_slack",
    "closedforms": "max_rel_err",
    "oracle": "max_slack",
}


# --- instance generators --------------------------------------------------


def _meyer_family(rng, size: tuple) -> dict:
    m = int(rng.integers(1, 6))
    hi = min(size[1], 6)
    sets = []
    for _ in range(m):
        n = int(rng.integers(1, max(hi, 1) + 1))
        sets.append(np.sort(rng.uniform(0, rng.uniform(0.5, 10), n)))
    if rng.random() < 0.5:
        # parallel lines along a random direction
        phi = rng.uniform(0, 2 * math.pi)
        u = np.array([math.cos(phi), math.sin(phi)])
        nrm = np.array([-u[1], u[0]])
        out = [(s[:, None] * u + rng.uniform(-5, 5) * nrm).tolist() for s in sets]
    else:
        out = [s.tolist() for s in sets]
    return {"sets": out}


def _closedform_instance(rng) -> dict:
    while True:
        tri = rng.uniform(-10, 10, (3, 2))
        try:
            TriangleSpec.from_points(tri)
            break
        except GeometryError:
            continue
    a, x = sorted(rng.uniform(0.01, 10, 2))
    gamma = float(rng.uniform(1e-3, math.pi / 2))
    return {"triangle": tri.tolist(), "parallelogram": [float(a), float(x), gamma]}


def make_instance(command: str, rng: np.random.Generator, size: tuple, shape: str, resolution: int,
                  samples: Optional[int] = None) -> dict:
    if command in ("subadd", "starr", "cassels"):
        return _pair_instance(*random_pair(rng, size, shape))
    if command == "translate-bound":
        return _pair_instance(*random_pair(rng, size, shape), samples=samples or 200,
                              subseed=int(rng.integers(2**31)))
    if command in ("eq32", "decompose"):
        default = 1000 if command == "eq32" else 100
        return _pair_instance(*random_pair(rng, size, shape, full_rank=True), samples=samples or default,
                              subseed=int(rng.integers(2**31)))
    if command == "meyer1d":
        return _meyer_family(rng, size)
    if command == "closedforms":
        return _closedform_instance(rng)
    if command == "oracle":
        lo, hi = size
        ps = random_set(rng, (lo, min(hi, 12)), shape)
        return {"points": ps.points.tolist(), "resolution": resolution}
    raise ValueError(f"unknown audit {command!r}; choose from {', '.join(AUDITS)}")


def run_audit(command: str, trials: int = 100, seed: int = 0, size: tuple = (2, 40), shape: str = "mixed",
              resolution: int = 128, samples: Optional[int] = None) -> AuditReport:
    """Run the named audit over ``trials`` generated instances."""
    if command not in METRICS:
        raise ValueError(f"unknown audit {command!r}; choose from {', '.join(AUDITS)}")
    if shape != "mixed" and shape not in SHAPES:
        raise ValueError(f"unknown shape {shape!r}")
    metric = METRICS[command]
    start = time.perf_counter()
    violations, first, best, worst = 0, None, -math.inf, None
    extras: dict = {}
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        inst = make_instance(command, rng, size, shape, resolution, samples)
        value, bad, details = metric(inst)
        if bad:
            violations += 1
            if first is None:
                first = trial
        if command == "decompose":
            for k, c in details["branches"].items():
                extras[k] = extras.get(k, 0) + c
        if value > best or worst is None:
            best = value
            worst = {"trial": trial, "instance": inst, "value": value, "details": details}
    return AuditReport(command, seed, trials, violations, METRIC_NAMES[command], float(best), worst,
                       time.perf_counter() - start, tuple(size), shape, first, extras)


def replay(command: str, worst: dict):
    """Re-evaluate a report's worst instance; returns ``(value, violated, details)``."""
    return METRICS[command](worst["instance"])
