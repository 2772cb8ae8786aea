import io
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nonconvexity import InstanceError, PointSet, format_pointset, generate, parse_pointset
from nonconvexity.instances import SHAPES


def test_parse_json_object():
    ps = parse_pointset('{"dim":2,"points":[[-2,0],[2,0],[0,1]]}')
    np.testing.assert_array_equal(ps.points, [[-2, 0], [0, 1], [2, 0]])
    assert ps.rank == 2


def test_parse_bare_list_and_one_dimensional():
    ps = parse_pointset("[[0, 0], [1, 1]]")
    assert len(ps) == 2 and ps.rank == 1
    ps = parse_pointset('{"dim": 1, "points": [4, 0, 2], "label": "line"}')
    assert ps.dim == 1 and ps.coordinates() == [0.0, 2.0, 4.0]


def test_parse_csv():
    ps = parse_pointset("0,0\n6,0")
    assert len(ps) == 2 and ps.rank == 1
    ps = parse_pointset("# header\n0 0\n\n1;2  # trailing\n3,\t4\n")
    np.testing.assert_array_equal(ps.points, [[0, 0], [1, 2], [3, 4]])


def test_parse_file_and_stdin(tmp_path, monkeypatch):
    path = tmp_path / "pts.json"
    path.write_text('{"points": [[1, 2], [3, 4]]}')
    assert len(parse_pointset(str(path))) == 2
    assert len(parse_pointset(path)) == 2
    monkeypatch.setattr("sys.stdin", io.StringIO("5,5\n"))
    assert len(parse_pointset("-")) == 1


@pytest.mark.parametrize(
    "text, message, line",
    [
        ("[]", "empty set", None),
        ("", "empty set", None),
        ("# nothing\n", "empty set", None),
        ("0,0\n1,x\n", "not a number", 2),
        ("0,0\n1,nan\n", "non-finite", 2),
        ("0,0\n1,2,3\n", "expected 1 or 2", 2),
        ("0,0\n1\n", "previous lines", 2),
        ('{\n  "dim": 2,\n  "points": [[0, 0], [1, NaN]]\n}', "non-finite", 3),
        ('{\n  "points": [[0, 0]],\n  "colour": 1\n}', "unknown keys", 3),
        ('{\n  "dim": 3,\n  "points": [[0, 0]]\n}', "dim must be 1 or 2", 2),
        ('{\n  "points": [[0, 0], [1, 2, 3]]\n}', "not a list of 1 or 2", 2),
        ('{"points": [[0, 0],\n [1, 2]', "delimiter", 2),
    ],
)
def test_parse_errors_carry_line_numbers(text, message, line):
    with pytest.raises(InstanceError, match=message) as info:
        parse_pointset(text)
    assert info.value.line == line
    if line is not None:
        assert str(info.value).startswith(f"line {line}: ")


@pytest.mark.parametrize("shape", SHAPES)
def test_generate_deterministic(shape):
    a, b = generate(5, 30, shape), generate(5, 30, shape)
    np.testing.assert_array_equal(a.points, b.points)
    assert not np.array_equal(a.points, generate(6, 30, shape).points)
    assert len(generate(1, 1, shape)) == 1


def test_generate_collinear_rank_one():
    assert generate(2, 20, "collinear").rank == 1


def test_generate_rejects_bad_arguments():
    with pytest.raises(ValueError):
        generate(0, 0)
    with pytest.raises(ValueError, match="unknown shape"):
        generate(0, 5, "spiral")


def test_annulus_and_grid_ranges():
    r = np.hypot(*generate(3, 500, "annulus").points.T)
    assert r.min() >= 0.5 - 1e-12 and r.max() <= 1 + 1e-12
    assert len(generate(3, 50, "grid-perturbed")) == 50


@given(st.integers(0, 2**63 - 1), st.integers(1, 40), st.sampled_from(SHAPES))
def test_round_trip(seed, n, shape):
    ps = generate(seed, n, shape)
    text = format_pointset(ps, label="x")
    assert json.loads(text)["label"] == "x"
    again = parse_pointset(text)
    np.testing.assert_array_equal(again.points, ps.points)


def test_round_trip_one_dimensional():
    ps = PointSet([0.1, 1 / 3, 2.0])
    again = parse_pointset(format_pointset(ps))
    assert again.dim == 1
    np.testing.assert_array_equal(again.points, ps.points)
