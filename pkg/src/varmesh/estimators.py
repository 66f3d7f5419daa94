"""scikit-learn compatible wrappers.

The mesh map ``xi -> x`` is exposed as a transformer: ``fit`` tabulates
``S`` for the configured weight and domain, ``transform`` maps computational
coordinates in ``[0, 1]`` to physical ones, ``inverse_transform`` goes back.
``X`` passed to ``fit`` is ignored (the weight, not data, defines the map),
which keeps the estimators usable inside ``Pipeline`` and with ``clone``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import InputError
from .mesh1d import PANELS_PER_SEGMENT, CumulativeWeight, generate_mesh
from .tensor_mesh import TensorMesh
from .weights import Constant, check_weight

__all__ = ["EquidistributionMesher", "TensorEquidistributionMesher"]


def _check_unit(X, name="X"):
    if np.any(X < 0.0) or np.any(X > 1.0):
        raise InputError(f"{name} must lie in [0, 1]")
    return X


class EquidistributionMesher(TransformerMixin, BaseEstimator):
    """1-d equidistribution map for a weight ``g``.

    Parameters
    ----------
    weight : WeightSpec, default=None
        Monitor function; ``None`` means a constant (uniform mesh).
    domain : tuple of float, default=(0.0, 1.0)
    n_segments : int, default=50
        Segments of the stored mesh (``mesh_``), not of ``transform``.
    panels_per_segment : int, default=32

    Attributes
    ----------
    mesh_ : Mesh1D
    nodes_ : ndarray of shape (n_segments + 1,)
    s_total_ : float
    """

    def __init__(self, weight=None, domain=(0.0, 1.0), n_segments=50, panels_per_segment=PANELS_PER_SEGMENT):
        self.weight = weight
        self.domain = domain
        self.n_segments = n_segments
        self.panels_per_segment = panels_per_segment

    def _weight(self):
        return Constant(1.0) if self.weight is None else self.weight

    def fit(self, X=None, y=None):
        spec = self._weight()
        check_weight(spec, self.domain)
        self.mesh_ = generate_mesh(spec, self.domain, self.n_segments, self.panels_per_segment)
        self.cumulative_ = CumulativeWeight(spec, self.domain, self.panels_per_segment * self.n_segments)
        self.nodes_ = self.mesh_.nodes
        self.s_total_ = self.cumulative_.s_total
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        """Physical coordinates of computational coordinates ``X`` in ``[0, 1]``."""
        check_is_fitted(self, "cumulative_")
        X = _check_unit(check_array(X, ensure_2d=False, dtype=np.float64))
        return self.cumulative_.inverse(X * self.s_total_)

    def inverse_transform(self, X):
        """Computational coordinates ``S(x) / S_total`` of physical points."""
        check_is_fitted(self, "cumulative_")
        X = check_array(X, ensure_2d=False, dtype=np.float64)
        return self.cumulative_(X) / self.s_total_


class TensorEquidistributionMesher(TransformerMixin, BaseEstimator):
    """Separable n-d map: one :class:`EquidistributionMesher` per axis.

    ``transform`` takes an ``(n_samples, n_axes)`` array of computational
    coordinates.
    """

    def __init__(self, weights=None, domains=((0.0, 1.0), (0.0, 1.0)), n_segments=(50, 50)):
        self.weights = weights
        self.domains = domains
        self.n_segments = n_segments

    def fit(self, X=None, y=None):
        domains = list(self.domains)
        weights = [None] * len(domains) if self.weights is None else list(self.weights)
        Ns = list(self.n_segments)
        if not (len(weights) == len(domains) == len(Ns)):
            raise InputError("weights, domains and n_segments must have equal length")
        self.axes_ = [
            EquidistributionMesher(w, d, n).fit() for w, d, n in zip(weights, domains, Ns)
        ]
        self.mesh_ = TensorMesh(tuple(m.mesh_ for m in self.axes_))
        self.n_features_in_ = len(domains)
        return self

    def _columns(self, X):
        check_is_fitted(self, "axes_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != len(self.axes_):
            raise InputError(f"expected {len(self.axes_)} columns, got {X.shape[1]}")
        return X

    def transform(self, X):
        X = self._columns(X)
        return np.column_stack([m.transform(X[:, d]) for d, m in enumerate(self.axes_)])

    def inverse_transform(self, X):
        X = self._columns(X)
        return np.column_stack([m.inverse_transform(X[:, d]) for d, m in enumerate(self.axes_)])
