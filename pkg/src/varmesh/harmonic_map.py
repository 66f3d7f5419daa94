"""Harmonic (scalar-diffusion Winslow) mapping for 2-d structured grids.

Solves ``div_xi((1/g(x)) grad_xi x) = 0`` for the physical coordinates of a
logically rectangular lattice.  Boundary nodes are Dirichlet data: each edge
carries the 1-d equidistributed mesh of ``g`` restricted to that edge.

Discretisation: five-point flux form in computational space.  The diffusion
coefficient on the face between two neighbouring nodes is ``1/g`` averaged
along the physical segment joining them (Gauss-Legendre), i.e. the
reciprocal of the continuous harmonic mean of ``g`` over that edge.  With
this choice a tensor-product equidistributed mesh is an exact discrete
solution whenever ``g`` is separable.

Solver: Picard iteration.  Face coefficients are frozen at the current
coordinates, the resulting linear system is solved directly for both
coordinate fields, and the loop repeats until the relative residual drops
below ``tol``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exceptions import ConvergenceError, InputError, MeshValidityError
from .mesh1d import generate_mesh
from .quadrature import gauss_legendre
from .weights import WeightSpec, check_weight, restrict

logger = logging.getLogger(__name__)

__all__ = ["MappedGrid2D", "solve_winslow", "cell_jacobians", "winslow_residual"]


@dataclass(frozen=True, eq=False)
class MappedGrid2D:
    """Physical coordinates ``x[i, j], y[i, j]`` of computational node ``(i, j)``.

    ``residual`` is relative to the domain diameter.
    """

    nx: int
    ny: int
    x: np.ndarray
    y: np.ndarray
    domain: tuple
    residual: float
    iterations: int
    history: tuple = field(default=(), repr=False)

    @property
    def xcoords(self):
        """Flattened x coordinates, x index fastest."""
        return self.x.T.ravel()

    @property
    def ycoords(self):
        return self.y.T.ravel()

    def min_jacobian(self):
        return float(cell_jacobians(self.x, self.y).min())


def cell_jacobians(x, y):
    """Cross product of the forward difference vectors at each cell's (i, j) corner."""
    dxi_x = x[1:, :-1] - x[:-1, :-1]
    dxi_y = y[1:, :-1] - y[:-1, :-1]
    deta_x = x[:-1, 1:] - x[:-1, :-1]
    deta_y = y[:-1, 1:] - y[:-1, :-1]
    return dxi_x * deta_y - deta_x * dxi_y


class _FaceCoefficients:
    def __init__(self, spec, n_quad):
        self.spec = spec
        self.t, self.w = gauss_legendre(n_quad)

    def mean_inverse(self, x0, y0, x1, y1):
        # average of 1/g along the straight segment (x0, y0) -> (x1, y1)
        t = self.t
        px = x0[..., None] + (x1 - x0)[..., None] * t
        py = y0[..., None] + (y1 - y0)[..., None] * t
        return (1.0 / self.spec._eval(px, py)) @ self.w

    def __call__(self, x, y):
        """Face coefficients: ``kx[i, j]`` between (i, j)-(i+1, j), ``ky[i, j]`` between (i, j)-(i, j+1)."""
        kx = self.mean_inverse(x[:-1, :], y[:-1, :], x[1:, :], y[1:, :])
        ky = self.mean_inverse(x[:, :-1], y[:, :-1], x[:, 1:], y[:, 1:])
        return kx, ky


def _node_flux(u, kx, ky, sx, sy):
    """Interior sum of scaled face fluxes and the matching coefficient sum."""
    e = sx * kx[1:, 1:-1] * (u[2:, 1:-1] - u[1:-1, 1:-1])
    w = sx * kx[:-1, 1:-1] * (u[:-2, 1:-1] - u[1:-1, 1:-1])
    n = sy * ky[1:-1, 1:] * (u[1:-1, 2:] - u[1:-1, 1:-1])
    s = sy * ky[1:-1, :-1] * (u[1:-1, :-2] - u[1:-1, 1:-1])
    diag = sx * (kx[1:, 1:-1] + kx[:-1, 1:-1]) + sy * (ky[1:-1, 1:] + ky[1:-1, :-1])
    return e + w + n + s, diag


def winslow_residual(spec, x, y, n_quad=8):
    """Max-norm residual of the discrete grid equations, in length units.

    Each node's flux imbalance is divided by its coefficient sum, which turns
    it into the displacement a Jacobi sweep would apply.
    """
    nx, ny = x.shape
    sx, sy = float(nx - 1) ** 2, float(ny - 1) ** 2
    kx, ky = _FaceCoefficients(spec, n_quad)(x, y)
    rx, d = _node_flux(x, kx, ky, sx, sy)
    ry, _ = _node_flux(y, kx, ky, sx, sy)
    if rx.size == 0:
        return 0.0
    return float(max(np.max(np.abs(rx / d)), np.max(np.abs(ry / d))))


def _assemble(kx, ky, sx, sy):
    """Matrix of the interior five-point operator (x index fastest)."""
    mx, my = kx.shape[0] - 1, ky.shape[1] - 1
    idx = np.arange(mx * my).reshape(my, mx).T  # idx[i, j] for interior (i+1, j+1)
    ke = sx * kx[1:, 1:-1]
    kw = sx * kx[:-1, 1:-1]
    kn = sy * ky[1:-1, 1:]
    ks = sy * ky[1:-1, :-1]
    rows = [idx.ravel()]
    cols = [idx.ravel()]
    vals = [-(ke + kw + kn + ks).ravel()]
    for coef, di, dj in ((ke, 1, 0), (kw, -1, 0), (kn, 0, 1), (ks, 0, -1)):
        ii, jj = np.meshgrid(np.arange(mx), np.arange(my), indexing="ij")
        ti, tj = ii + di, jj + dj
        inside = (ti >= 0) & (ti < mx) & (tj >= 0) & (tj < my)
        rows.append(idx[inside])
        cols.append(idx[ti[inside], tj[inside]])
        vals.append(coef[inside])
    A = sp.csc_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(mx * my, mx * my)
    )
    return A, idx, (ke, kw, kn, ks)


def _rhs(u, coeffs):
    ke, kw, kn, ks = coeffs
    b = np.zeros_like(ke)
    b[-1, :] -= ke[-1, :] * u[-1, 1:-1]
    b[0, :] -= kw[0, :] * u[0, 1:-1]
    b[:, -1] -= kn[:, -1] * u[1:-1, -1]
    b[:, 0] -= ks[:, 0] * u[1:-1, 0]
    return b


def boundary_lattice(spec, domain, nx, ny):
    """Uniform interior lattice with equidistributed edge traces."""
    (ax, bx), (ay, by) = domain
    x = np.empty((nx, ny))
    y = np.empty((nx, ny))
    xi = np.linspace(0.0, 1.0, nx)
    eta = np.linspace(0.0, 1.0, ny)
    x[:, :] = ax + (bx - ax) * xi[:, None]
    y[:, :] = ay + (by - ay) * eta[None, :]
    for j, yv in ((0, ay), (ny - 1, by)):
        x[:, j] = generate_mesh(restrict(spec, 0, (yv,)), (ax, bx), nx - 1).nodes
        y[:, j] = yv
    for i, xv in ((0, ax), (nx - 1, bx)):
        y[i, :] = generate_mesh(restrict(spec, 1, (xv,)), (ay, by), ny - 1).nodes
        x[i, :] = xv
    return x, y


def solve_winslow(spec: WeightSpec, domain, nx: int, ny: int, tol: float = 1e-8,
                  max_iter: int = 200, n_quad: int = 8) -> MappedGrid2D:
    """Harmonic map of the rectangle ``domain = ((ax, bx), (ay, by))`` for weight ``spec``.

    Parameters
    ----------
    spec : WeightSpec
        Two-dimensional weight (e.g. :class:`~varmesh.weights.Product`).
    nx, ny : int
        Node counts (>= 3) in the two computational directions.
    tol : float
        Target residual relative to the domain diameter.
    max_iter : int
        Maximum number of Picard iterations.

    Raises
    ------
    ConvergenceError
        ``max_iter`` reached; ``partial`` holds the last grid.
    MeshValidityError
        The converged grid has a cell with non-positive Jacobian.
    """
    if spec.ndim != 2:
        raise InputError("solve_winslow needs a 2-d weight")
    for name, v in (("nx", nx), ("ny", ny)):
        if isinstance(v, bool) or int(v) != v or v < 3:
            raise InputError(f"{name} must be an integer >= 3, got {v!r}")
    nx, ny = int(nx), int(ny)
    dom = np.asarray(domain, dtype=float)
    if dom.shape != (2, 2) or np.any(dom[:, 0] >= dom[:, 1]):
        raise InputError(f"domain must be ((ax, bx), (ay, by)) with a < b, got {domain!r}")
    domain = tuple(tuple(float(v) for v in row) for row in dom)
    check_weight(spec, domain, samples=200)
    diameter = float(np.hypot(*(dom[:, 1] - dom[:, 0])))

    x, y = boundary_lattice(spec, domain, nx, ny)
    faces = _FaceCoefficients(spec, n_quad)
    sx, sy = float(nx - 1) ** 2, float(ny - 1) ** 2
    history = []
    residual = winslow_residual(spec, x, y, n_quad) / diameter
    history.append(residual)
    it = 0
    while residual > tol:
        if it >= max_iter:
            partial = MappedGrid2D(nx, ny, x, y, domain, residual, it, tuple(history))
            raise ConvergenceError(
                f"harmonic map not converged after {it} iterations (residual {residual:.3g})",
                residual=residual, partial=partial,
            )
        kx, ky = faces(x, y)
        A, idx, coeffs = _assemble(kx, ky, sx, sy)
        lu = spla.splu(A)
        for u in (x, y):
            b = _rhs(u, coeffs)
            sol = lu.solve(b.T.ravel())
            u[1:-1, 1:-1] = sol.reshape(ny - 2, nx - 2).T
        it += 1
        residual = winslow_residual(spec, x, y, n_quad) / diameter
        history.append(residual)
        logger.debug("winslow iteration %d residual %.3e", it, residual)

    x.setflags(write=False)
    y.setflags(write=False)
    grid = MappedGrid2D(nx, ny, x, y, domain, residual, it, tuple(history))
    jmin = grid.min_jacobian()
    if not jmin > 0:
        raise MeshValidityError(f"folded cell detected (min Jacobian {jmin:.3g})")
    return grid
