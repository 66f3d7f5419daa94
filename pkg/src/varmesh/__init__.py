"""Variable-step finite differences on equidistributed meshes."""

from .estimators import EquidistributionMesher, TensorEquidistributionMesher
from .exceptions import (
    ConvergenceError,
    DomainError,
    InputError,
    MeshValidityError,
    NumericalError,
    VarmeshError,
    WeightValidationError,
)
from .harmonic_map import MappedGrid2D, solve_winslow
from .mesh1d import Mesh1D, cumulative_s, generate_mesh, invert_s, mesh_from_nodes
from .operators import (
    assemble_d1_1d,
    assemble_d2_1d,
    assemble_laplacian_2d,
    is_symmetric,
    symmetrize,
)
from .schrodinger import HOProblem, compare_meshes, solve_ho
from .spectral import EigenResult, lowest_eigenpairs
from .stencil import differentiate, first_derivative_coeffs, second_derivative_coeffs
from .tensor_mesh import TensorMesh, generate_tensor_mesh
from .weights import Constant, GaussianWell, Product, Table, evaluate, validate

__version__ = "0.1.0"
