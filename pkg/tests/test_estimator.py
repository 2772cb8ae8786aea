import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from nonconvexity import HullDistance

EXAMPLE = [[-2, 0], [2, 0], [0, 1]]


def test_fit_values():
    est = HullDistance().fit(EXAMPLE)
    assert est.d_ == pytest.approx(1.25)
    assert est.v_ == pytest.approx(2.0)
    assert est.rad_ == pytest.approx(2.0)
    assert est.rank_ == 2
    np.testing.assert_allclose(est.d_witness_, [-0.75, 0])


def test_without_v():
    est = HullDistance(with_v=False).fit(EXAMPLE)
    assert np.isnan(est.v_) and est.v_witness_ is None


def test_params_and_clone():
    est = HullDistance(eps_rel=1e-6, with_v=False)
    assert est.get_params() == {"eps_rel": 1e-6, "with_v": False}
    twin = clone(est)
    assert twin.get_params() == est.get_params() and not hasattr(twin, "d_")


def test_transform_and_predict():
    est = HullDistance().fit(EXAMPLE)
    dist = est.transform([[0, 0], [-2, 0]])
    assert dist.shape == (2, 1)
    np.testing.assert_allclose(dist[:, 0], [1, 0])
    np.testing.assert_array_equal(est.predict([[0, 0.5], [0, 0], [5, 5]]), [1, 0, -1])


def test_not_fitted():
    with pytest.raises(NotFittedError):
        HullDistance().transform([[0, 0]])


def test_pipeline():
    pipe = make_pipeline(StandardScaler(), HullDistance(with_v=False))
    out = pipe.fit_transform(np.array(EXAMPLE, dtype=float))
    assert out.shape == (3, 1)
    np.testing.assert_allclose(out, 0, atol=1e-12)
