"""Separable n-d meshes as products of independent 1-d equidistributed meshes.

For a product weight ``g(x) = prod_d g_d(x_d)`` the grid equations decouple
and each axis is meshed on its own; the per-axis normalisation constant is
that axis' ``S_total``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InputError
from .mesh1d import Mesh1D, generate_mesh
from .weights import Product, WeightSpec

__all__ = ["TensorMesh", "generate_tensor_mesh"]


@dataclass(frozen=True, eq=False)
class TensorMesh:
    """Ordered per-axis meshes; lattice point ``(i, j, ...)`` is ``(x_i, y_j, ...)``.

    Only per-axis nodes are stored.
    """

    axes: tuple

    def __post_init__(self):
        axes = tuple(self.axes)
        if not axes or not all(isinstance(m, Mesh1D) for m in axes):
            raise InputError("TensorMesh needs at least one Mesh1D axis")
        object.__setattr__(self, "axes", axes)

    @property
    def ndim(self):
        return len(self.axes)

    @property
    def dims(self):
        return tuple(len(m.nodes) for m in self.axes)

    @property
    def interior_dims(self):
        return tuple(len(m.nodes) - 2 for m in self.axes)

    @property
    def domains(self):
        return tuple(m.domain for m in self.axes)

    @property
    def s_totals(self):
        return tuple(m.s_total for m in self.axes)

    def lattice(self, interior=False):
        """Coordinate arrays from ``np.meshgrid(..., indexing='ij')``."""
        nodes = [m.interior() if interior else m.nodes for m in self.axes]
        return np.meshgrid(*nodes, indexing="ij")


def generate_tensor_mesh(specs, domains, Ns) -> TensorMesh:
    """Mesh each axis ``d`` with ``generate_mesh(specs[d], domains[d], Ns[d])``.

    ``specs`` may also be a :class:`~varmesh.weights.Product`, whose factors are
    used per axis.
    """
    if isinstance(specs, Product):
        specs = specs.factors
    elif isinstance(specs, WeightSpec):
        raise InputError("pass one 1-d weight per axis or a Product weight")
    specs, domains, Ns = list(specs), list(domains), list(Ns)
    if not (len(specs) == len(domains) == len(Ns)) or not specs:
        raise InputError(
            f"specs/domains/Ns must have equal non-zero length, got {len(specs)}/{len(domains)}/{len(Ns)}"
        )
    return TensorMesh(tuple(generate_mesh(s, d, n) for s, d, n in zip(specs, domains, Ns)))
