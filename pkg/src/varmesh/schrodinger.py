"""2-d harmonic-oscillator bound states on uniform and equidistributed meshes.

Units are fm and MeV throughout; ``hbar^2 / 2m`` is formed from ``hbar c`` and
``m c^2`` so no SI factors appear.  The potential is the standard
``V = m omega^2 (x^2 + y^2) / 2``, written as
``(hbar omega)^2 / (4 hbar^2/2m) * (x^2 + y^2)``.

Exact levels are ``hbar omega (n_x + n_y + 1)`` with multiplicity
``n_x + n_y + 1``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
from scipy.special import eval_hermite

from .exceptions import InputError
from .harmonic_map import solve_winslow
from .mesh1d import mesh_from_nodes
from .operators import assemble_laplacian_2d, symmetrize
from .spectral import EigenResult, lowest_eigenpairs
from .tensor_mesh import TensorMesh, generate_tensor_mesh
from .weights import Constant, GaussianWell, Product

logger = logging.getLogger(__name__)

__all__ = [
    "PhysicalConstants",
    "HOProblem",
    "HOSolution",
    "ComparisonReport",
    "build_mesh",
    "build_hamiltonian",
    "potential",
    "exact_levels",
    "solve_ho",
    "compare_meshes",
]

# hbar^2 / (2 m_p) in MeV fm^2 from the CODATA 2018 constants below
KINETIC_PREFACTOR_REF = 20.7498
MESH_KINDS = ("uniform", "variable", "harmonic-map")


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values."""

    hbar_c: float = 197.3269804  # MeV fm
    proton_mass_c2: float = 938.27208816  # MeV

    def __post_init__(self):
        if not (self.hbar_c > 0 and self.proton_mass_c2 > 0):
            raise InputError("physical constants must be positive")

    @property
    def kinetic_prefactor(self):
        """``hbar^2 / 2m`` in MeV fm^2."""
        return self.hbar_c**2 / (2.0 * self.proton_mass_c2)


@dataclass(frozen=True)
class HOProblem:
    """Configuration of the oscillator benchmark.

    ``counting="nodes"`` reads ``nodes_per_axis`` as the node count including
    both boundary nodes (so 50 nodes give a 48 x 48 interior and a
    2304-dimensional Hamiltonian); ``counting="segments"`` reads it as the
    number of segments (51 nodes, 49 x 49 interior).
    """

    domain: tuple = (-25.0, 25.0)
    nodes_per_axis: int = 50
    counting: str = "nodes"
    hbar_omega: float = 10.0
    weight_depth: float = 0.9
    mesh_kind: str = "variable"
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)

    def __post_init__(self):
        a, b = (float(v) for v in self.domain)
        if not a < b:
            raise InputError(f"empty domain {self.domain}")
        object.__setattr__(self, "domain", (a, b))
        if self.counting not in ("nodes", "segments"):
            raise InputError(f"counting must be 'nodes' or 'segments', got {self.counting!r}")
        if self.mesh_kind not in MESH_KINDS:
            raise InputError(f"mesh_kind must be one of {MESH_KINDS}, got {self.mesh_kind!r}")
        if int(self.nodes_per_axis) != self.nodes_per_axis or self.n_segments < 3:
            raise InputError(f"nodes_per_axis too small: {self.nodes_per_axis}")
        if not self.hbar_omega > 0:
            raise InputError("hbar_omega must be positive")
        if self.constants == PhysicalConstants():
            k = self.kinetic_prefactor
            assert float(f"{k:.6g}") == KINETIC_PREFACTOR_REF, k

    @property
    def n_segments(self):
        n = int(self.nodes_per_axis)
        return n - 1 if self.counting == "nodes" else n

    @property
    def kinetic_prefactor(self):
        return self.constants.kinetic_prefactor

    @property
    def oscillator_length(self):
        """``b = sqrt(hbar / (m omega))`` in fm."""
        return math.sqrt(2.0 * self.kinetic_prefactor / self.hbar_omega)

    @property
    def potential_strength(self):
        """Coefficient of ``x^2 + y^2`` in ``V``, MeV / fm^2."""
        return self.hbar_omega**2 / (4.0 * self.kinetic_prefactor)

    def axis_weight(self):
        a, b = self.domain
        if self.mesh_kind == "uniform":
            return Constant(1.0)
        return GaussianWell(depth=self.weight_depth, center=0.5 * (a + b), width=b - a)


def potential(problem: HOProblem, x, y):
    """Oscillator potential in MeV at ``(x, y)`` fm."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return problem.potential_strength * (x * x + y * y)


def exact_levels(problem: HOProblem, k: int) -> np.ndarray:
    """The ``k`` lowest exact energies, multiplicities included."""
    levels = []
    n = 0
    while len(levels) < k:
        levels.extend([problem.hbar_omega * (n + 1)] * (n + 1))
        n += 1
    return np.array(levels[:k])


def _level_index(k):
    out, n = [], 0
    while len(out) < k:
        out.extend([n] * (n + 1))
        n += 1
    return out[:k]


def build_mesh(problem: HOProblem) -> TensorMesh:
    """Tensor mesh for ``problem.mesh_kind``.

    ``harmonic-map`` solves the 2-d grid equations for the product weight and
    collapses the (numerically separable) result back to per-axis nodes.
    """
    a, b = problem.domain
    n = problem.n_segments
    g = problem.axis_weight()
    if problem.mesh_kind != "harmonic-map":
        return generate_tensor_mesh([g, g], [(a, b)] * 2, [n, n])
    grid = solve_winslow(Product((g, g)), ((a, b), (a, b)), n + 1, n + 1)
    xs = grid.x.mean(axis=1)
    ys = grid.y.mean(axis=0)
    spread = max(np.max(np.abs(grid.x - xs[:, None])), np.max(np.abs(grid.y - ys[None, :])))
    if spread > 1e-6 * (b - a):
        raise InputError(f"harmonic-map grid is not a tensor lattice (spread {spread:.3g} fm)")
    xs[0], xs[-1], ys[0], ys[-1] = a, b, a, b
    return TensorMesh((mesh_from_nodes(xs), mesh_from_nodes(ys)))


def build_hamiltonian(problem: HOProblem, mesh: TensorMesh):
    """Symmetrised Hamiltonian on the interior lattice and its similarity weights.

    ``H = -(hbar^2/2m) Laplacian + diag(V)``; the returned matrix is
    ``W^{1/2} H W^{-1/2}`` and ``w`` is the diagonal of ``W``.
    """
    if not isinstance(mesh, TensorMesh) or mesh.ndim != 2:
        raise InputError("build_hamiltonian needs a 2-d TensorMesh")
    for d, dom in enumerate(mesh.domains):
        if not np.allclose(dom, problem.domain, rtol=0, atol=1e-12 * (problem.domain[1] - problem.domain[0])):
            raise InputError(f"mesh axis {d} domain {dom} does not match problem domain {problem.domain}")
    lap = assemble_laplacian_2d(mesh)
    X, Y = mesh.lattice(interior=True)
    v = potential(problem, X, Y).T.ravel()  # x index fastest
    H = -problem.kinetic_prefactor * lap + sp.diags(v)
    return symmetrize(H, mesh)


@dataclass(frozen=True, eq=False)
class HOSolution:
    """Eigen-solve of one mesh configuration.

    ``psi[n, i, j]`` is state ``n`` at interior node ``(x_{i+1}, y_{j+1})``,
    normalised so ``sum w_ij psi_ij^2 = 1``.
    """

    problem: HOProblem
    mesh: TensorMesh
    eigen: EigenResult
    psi: np.ndarray
    weights: np.ndarray
    exact: np.ndarray
    overlaps: np.ndarray

    @property
    def energies(self):
        return self.eigen.values

    @property
    def abs_errors(self):
        return np.abs(self.eigen.values - self.exact)

    @property
    def dimension(self):
        return self.weights.size


def _hermite_function(n, x, b):
    u = x / b
    norm = 1.0 / math.sqrt(2.0**n * math.factorial(n) * math.sqrt(math.pi) * b)
    return norm * eval_hermite(n, u) * np.exp(-0.5 * u * u)


def analytic_overlaps(problem, mesh, psi, weights):
    """Squared projection of each state onto its exact degenerate multiplet."""
    b = problem.oscillator_length
    x, y = (m.interior() for m in mesh.axes)
    w = weights.reshape(len(y), len(x)).T
    out = []
    for n, state in zip(_level_index(psi.shape[0]), psi):
        total = 0.0
        for nx in range(n + 1):
            phi = np.outer(_hermite_function(nx, x, b), _hermite_function(n - nx, y, b))
            total += float(np.sum(w * phi * state)) ** 2
        out.append(total)
    return np.array(out)


def solve_ho(problem: HOProblem, k: int = 6, tol: float = 1e-9, method: str = "auto", seed: int = 0,
             mesh: TensorMesh | None = None) -> HOSolution:
    """Lowest ``k`` oscillator states on the mesh selected by ``problem.mesh_kind``."""
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise InputError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    mesh = build_mesh(problem) if mesh is None else mesh
    H, w = build_hamiltonian(problem, mesh)
    eig = lowest_eigenpairs(H, k, tol=tol, method=method, seed=seed)
    nx, ny = mesh.interior_dims
    vecs = eig.vectors / np.sqrt(w)[:, None]
    norms = np.sqrt(np.sum(w[:, None] * vecs**2, axis=0))
    vecs = vecs / norms
    psi = np.stack([vecs[:, n].reshape(ny, nx).T for n in range(k)])
    overlaps = analytic_overlaps(problem, mesh, psi, w)
    logger.info("%s mesh: E = %s", problem.mesh_kind, np.array2string(eig.values, precision=6))
    return HOSolution(problem, mesh, eig, psi, w, exact_levels(problem, k), overlaps)


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    """Uniform vs variable mesh at identical Hamiltonian dimension."""

    uniform: HOSolution
    variable: HOSolution

    @property
    def dimension(self):
        return self.uniform.dimension

    @property
    def e0_error_ratio(self):
        """``|E0 - exact|`` uniform over variable (> 1 means the variable mesh wins)."""
        return float(self.uniform.abs_errors[0] / self.variable.abs_errors[0])

    def spacing_stats(self):
        out = {}
        for name, sol in (("uniform", self.uniform), ("variable", self.variable)):
            h = np.concatenate([m.spacings for m in sol.mesh.axes])
            out[name] = (float(h.min()), float(h.max()))
        return out

    def rows(self):
        """One row per level: index, exact, E_uniform, err_uniform, E_variable, err_variable."""
        u, v = self.uniform, self.variable
        return [
            (n, float(u.exact[n]), float(u.energies[n]), float(u.abs_errors[n]),
             float(v.energies[n]), float(v.abs_errors[n]))
            for n in range(len(u.exact))
        ]


def compare_meshes(problem: HOProblem, k: int = 6, **solve_kwargs) -> ComparisonReport:
    """Solve on the uniform and the equidistributed mesh with equal node counts."""
    uni = solve_ho(replace(problem, mesh_kind="uniform"), k, **solve_kwargs)
    kind = problem.mesh_kind if problem.mesh_kind != "uniform" else "variable"
    var = solve_ho(replace(problem, mesh_kind=kind), k, **solve_kwargs)
    if uni.mesh.dims != var.mesh.dims or uni.dimension != var.dimension:
        raise AssertionError("uniform and variable meshes differ in size")
    return ComparisonReport(uni, var)
