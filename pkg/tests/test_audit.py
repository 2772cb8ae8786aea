import json

import numpy as np
import pytest

from nonconvexity.audit import AUDITS, METRICS, make_instance, replay, run_audit

SMALL = {"oracle": dict(resolution=32), "eq32": dict(samples=200), "translate-bound": dict(samples=50)}


@pytest.mark.parametrize("name", AUDITS)
def test_audit_clean_and_replayable(name):
    rep = run_audit(name, trials=4, seed=11, size=(2, 10), **SMALL.get(name, {}))
    assert rep.violations == 0 and rep.ok
    value, bad, _ = replay(name, rep.worst)
    assert value == rep.max_value and not bad
    # the report survives a JSON round trip and still replays
    blob = json.loads(json.dumps(rep.as_dict()))
    assert replay(name, blob["worst"])[0] == rep.max_value


def test_deterministic_across_runs():
    a = run_audit("subadd", trials=5, seed=3, size=(2, 12))
    b = run_audit("subadd", trials=5, seed=3, size=(2, 12))
    assert a.as_dict()["worst"] == b.as_dict()["worst"]
    assert a.max_value == b.max_value


def test_trial_instances_independent_of_trial_count():
    rng = np.random.default_rng([9, 2])
    inst = make_instance("subadd", rng, (2, 8), "mixed", 64)
    rep = run_audit("subadd", trials=3, seed=9, size=(2, 8))
    assert METRICS["subadd"](inst)[0] <= rep.max_value


def test_decompose_branch_counts():
    rep = run_audit("decompose", trials=5, seed=1, size=(3, 6), samples=50)
    assert sum(rep.extras.values()) == 250


def test_report_text():
    rep = run_audit("closedforms", trials=2, seed=0)
    text = rep.to_text()
    assert text.splitlines()[0] == "command: closedforms"
    assert "generator: numpy.random.PCG64" in text and text.splitlines()[-1].startswith("json: ")


def test_unknown_audit():
    with pytest.raises(ValueError, match="unknown audit"):
        run_audit("bogus")
