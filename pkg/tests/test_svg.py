import re

import pytest

from nonconvexity import SumsetDecomposer, minkowski_finite
from nonconvexity.geometry import GeometryError
from nonconvexity.svg import emit_svg

EXAMPLE = [[-2, 0], [2, 0], [0, 1]]
TRIANGLE = [(0, 0), (10, 0), (0, 10)]


def test_measure_circle_radius():
    text = emit_svg(EXAMPLE, ["measure-circle"])
    m = re.search(r'<circle class="measure-circle" cx="([^"]+)" cy="([^"]+)" r="([^"]+)"', text)
    assert m is not None
    assert [float(v) for v in m.groups()] == pytest.approx([-0.75, 0.0, 1.25])


def test_sites_only_without_overlays():
    text = emit_svg(EXAMPLE)
    assert 'class="sites"' in text
    for cls in ("hull", "voronoi", "measure-circle", "witness"):
        assert f'class="{cls}"' not in text


def test_all_overlays_and_file(tmp_path):
    dec = SumsetDecomposer(TRIANGLE, TRIANGLE).decompose((6, 6))
    path = tmp_path / "w.svg"
    text = emit_svg(minkowski_finite(TRIANGLE, TRIANGLE), ["hull", "voronoi", "measure-circle", "witness"],
                    path, decomposition=dec)
    assert path.read_text().strip() == text.strip()
    for cls in ("hull", "voronoi", "measure-circle", "witness", "query"):
        assert f'class="{cls}"' in text


def test_overlay_errors():
    with pytest.raises(ValueError, match="unknown overlays"):
        emit_svg(EXAMPLE, ["fill"])
    with pytest.raises(GeometryError):
        emit_svg(EXAMPLE, ["witness"])
    with pytest.raises(GeometryError):
        emit_svg([[0, 0], [1, 1]], ["voronoi"])
