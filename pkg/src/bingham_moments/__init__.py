"""Partition function and moments of the Bingham distribution on the sphere.

Fast three-region piecewise approximation (asymptotic series far from the
origin, tabulated Hermite interpolation near it) with a slow adaptive
quadrature oracle as ground truth, a precomputed-table pipeline, and a
rigorous truncation error bound.
"""

from .backend import USING_NUMBA
from .errbound import ErrorBoundReport, suggest_params, theorem1_bound
from .errors import (BinghamError, ConvergenceError, DomainError, TableError,
                     TableChecksumError, TableCountError, TableFormatError,
                     TableStateError, TableTruncationError, TableVersionError)
from .evaluator import (ApproxParams, CanonicalDiag, MomentSet, eig3_sym,
                        moment_derivative, moments, reduce_monomial, z_diag)
from .gridinterp import HermiteGrid2D, z_near
from .quadrature import QuadratureSpec, z_general_oracle, z_nm_oracle
from .series import FarParams, GmDerivGrid, build_gm_grid, gm_deriv, z_far, z_mixed
from .tables import (MomentTables, TableHeader, generate_tables, load_tables,
                     read_tables, save_tables, write_tables)

__version__ = "0.1.0"

__all__ = [
    "USING_NUMBA", "__version__",
    "ErrorBoundReport", "suggest_params", "theorem1_bound",
    "BinghamError", "ConvergenceError", "DomainError", "TableError",
    "TableChecksumError", "TableCountError", "TableFormatError",
    "TableStateError", "TableTruncationError", "TableVersionError",
    "ApproxParams", "CanonicalDiag", "MomentSet", "eig3_sym",
    "moment_derivative", "moments", "reduce_monomial", "z_diag",
    "HermiteGrid2D", "z_near",
    "QuadratureSpec", "z_general_oracle", "z_nm_oracle",
    "FarParams", "GmDerivGrid", "build_gm_grid", "gm_deriv", "z_far", "z_mixed",
    "MomentTables", "TableHeader", "generate_tables", "load_tables",
    "read_tables", "save_tables", "write_tables",
]
