"""scikit-learn style wrapper around the measures."""

from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .geometry import locate_points
from .measures import nearest_site_distance, profile
from .validation import PointSet, check_points


class HullDistance(TransformerMixin, BaseEstimator):
    """Fit the non-convexity measures of a point set.

    Parameters
    ----------
    eps_rel : float, optional
        Relative tolerance; ``None`` reads ``NONCONVEXITY_EPS`` or uses ``1e-9``.
    with_v : bool, default=True
        Also compute the effective standard deviation ``v``.

    Attributes
    ----------
    sites_ : ndarray of shape (n_sites, 2)
        Deduplicated, lexicographically sorted sites.
    rank_ : int
    hull_ : ConvexPolygon
    d_, v_, rad_ : float
        ``v_`` is ``nan`` when ``with_v`` is false.
    d_witness_, v_witness_, rad_center_ : ndarray of shape (2,)

    Examples
    --------
    >>> est = HullDistance().fit([[-2, 0], [2, 0], [0, 1]])
    >>> round(est.d_, 6), round(est.v_, 6), round(est.rad_, 6)
    (1.25, 2.0, 2.0)
    """

    def __init__(self, eps_rel: Optional[float] = None, with_v: bool = True):
        self.eps_rel = eps_rel
        self.with_v = with_v

    def fit(self, X, y=None):
        ps = PointSet(X, eps_rel=self.eps_rel)
        prof = profile(ps, with_v=self.with_v)
        self.sites_ = ps.points
        self.n_features_in_ = 2
        self.rank_ = ps.rank
        self.hull_ = ps.hull
        self.d_ = prof.d.value
        self.d_witness_ = prof.d.witness
        self.v_ = prof.v.value if prof.v is not None else float("nan")
        self.v_witness_ = prof.v.witness if prof.v is not None else None
        self.rad_ = prof.rad.value
        self.rad_center_ = prof.rad.witness
        return self

    def transform(self, X) -> np.ndarray:
        """Distance from each row of ``X`` to the nearest fitted site, shape ``(n, 1)``."""
        check_is_fitted(self, "sites_")
        xs, _ = check_points(X)
        return nearest_site_distance(self.sites_, xs)[:, None]

    def predict(self, X) -> np.ndarray:
        """Location of each row against the fitted hull: ``1`` inside, ``0`` boundary, ``-1`` outside."""
        check_is_fitted(self, "sites_")
        xs, _ = check_points(X)
        return locate_points(xs, self.hull_).astype(int)
