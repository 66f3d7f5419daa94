"""Sparse derivative operators on 1-d and tensor 2-d meshes.

Boundary condition is Dirichlet-zero: boundary nodes are eliminated, so an
operator on a mesh with ``N + 1`` nodes acts on the ``N - 1`` interior values.
2-d lattices are flattened row-major with the x index fastest,
``k = i + nx_interior * j``.

Operators are returned as ``scipy.sparse.csr_matrix``.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .exceptions import InputError, UnsupportedDimensionError
from .mesh1d import Mesh1D
from .stencil import first_derivative_coeffs, second_derivative_coeffs
from .tensor_mesh import TensorMesh

__all__ = [
    "assemble_d1_1d",
    "assemble_d2_1d",
    "assemble_laplacian_2d",
    "symmetrize",
    "symmetrization_weights",
    "is_symmetric",
    "write_coordinate",
    "read_coordinate",
]


def _tridiagonal(mesh, coeff_fn):
    if not isinstance(mesh, Mesh1D):
        raise InputError("expected a Mesh1D")
    if len(mesh.nodes) < 3:
        raise InputError("operator needs at least 3 nodes")
    h = mesh.spacings
    a, b, c, _ = coeff_fn(h[:-1], h[1:])
    a, b, c = (np.atleast_1d(v) for v in (a, b, c))
    n = b.size
    # a[0] and c[-1] multiply boundary values and are dropped
    return sp.diags([a[1:], b, c[:-1]], [-1, 0, 1], shape=(n, n), format="csr")


def assemble_d2_1d(mesh: Mesh1D) -> sp.csr_matrix:
    """Second-derivative operator on the interior nodes of ``mesh``."""
    return _tridiagonal(mesh, second_derivative_coeffs)


def assemble_d1_1d(mesh: Mesh1D) -> sp.csr_matrix:
    """First-derivative operator on the interior nodes of ``mesh``."""
    return _tridiagonal(mesh, first_derivative_coeffs)


def assemble_laplacian_2d(mesh: TensorMesh) -> sp.csr_matrix:
    """Kronecker sum ``D2x (+) D2y`` on the interior lattice, x index fastest."""
    if not isinstance(mesh, TensorMesh):
        raise InputError("expected a TensorMesh")
    if mesh.ndim != 2:
        raise UnsupportedDimensionError(f"Laplacian assembly supports 2-d meshes only, got {mesh.ndim}-d")
    dx = assemble_d2_1d(mesh.axes[0])
    dy = assemble_d2_1d(mesh.axes[1])
    ix = sp.identity(dx.shape[0], format="csr")
    iy = sp.identity(dy.shape[0], format="csr")
    lap = sp.kron(iy, dx, format="csr") + sp.kron(dy, ix, format="csr")
    lap.sum_duplicates()
    lap.sort_indices()
    return lap


def symmetrization_weights(mesh) -> np.ndarray:
    """Cell weights ``(h_{i-1} + h_i) / 2`` per interior node (product over axes)."""
    if isinstance(mesh, Mesh1D):
        return mesh.cell_weights()
    if isinstance(mesh, TensorMesh):
        w = np.ones(1)
        # x fastest -> last kron factor is axis 0
        for axis in reversed(mesh.axes):
            w = np.kron(w, axis.cell_weights())
        return w
    raise InputError("expected a Mesh1D or TensorMesh")


def symmetrize(A, mesh):
    """Similarity transform ``W^{1/2} A W^{-1/2}`` of a second-derivative operator.

    Returns ``(S, w)`` where ``w`` is the diagonal of ``W``.  Eigenvalues of
    ``S`` and ``A`` coincide; an eigenvector ``u`` of ``S`` maps back to
    ``v = u / sqrt(w)``.
    """
    w = symmetrization_weights(mesh)
    A = sp.csr_matrix(A)
    if A.shape != (w.size, w.size):
        raise InputError(f"operator shape {A.shape} does not match mesh interior size {w.size}")
    r = np.sqrt(w)
    S = sp.diags(r) @ A @ sp.diags(1.0 / r)
    S = sp.csr_matrix(S)
    # remove the rounding-level asymmetry left by the scaling
    S = sp.csr_matrix(0.5 * (S + S.T))
    S.sort_indices()
    return S, w


def is_symmetric(A, rtol=1e-12) -> bool:
    """``max |A_ij - A_ji| <= rtol * max |A|``."""
    A = sp.csr_matrix(A)
    if A.shape[0] != A.shape[1]:
        return False
    scale = abs(A).max() if A.nnz else 0.0
    diff = A - A.T
    return (abs(diff).max() if diff.nnz else 0.0) <= rtol * scale


def write_coordinate(A, path) -> Path:
    """Write ``nrows ncols nnz`` then one ``row col value`` line per entry."""
    A = sp.coo_matrix(A)
    A.sum_duplicates()
    order = np.lexsort((A.col, A.row))
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"{A.shape[0]} {A.shape[1]} {A.nnz}\n")
        for k in order:
            fh.write(f"{A.row[k]} {A.col[k]} {float(A.data[k])!r}\n")
    return path


def read_coordinate(path) -> sp.csr_matrix:
    with Path(path).open() as fh:
        nrows, ncols, nnz = (int(v) for v in fh.readline().split())
        data = np.loadtxt(fh, ndmin=2) if nnz else np.zeros((0, 3))
    if data.shape[0] != nnz:
        raise InputError(f"expected {nnz} entries, found {data.shape[0]}")
    return sp.csr_matrix((data[:, 2], (data[:, 0].astype(int), data[:, 1].astype(int))), shape=(nrows, ncols))
