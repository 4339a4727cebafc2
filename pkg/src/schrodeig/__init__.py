"""Spectral and mortar spectral element eigensolvers for the operator
-Lap u + (c^2/|x|^2) u with Dirichlet conditions.

Modules
-------
orthopoly  generalized Jacobi polynomials and Gauss rules
specfun    fractional-order Bessel J, zeros, exact reference spectra
eiglin     symmetric pencils, banded/dense eigensolvers, null-space reduction
ball       singularity-adapted and baseline solvers on the unit ball
sector     the same machinery on planar circular sectors
mortar     mortar spectral elements on the square and L-shape domains
validate   runtime oracle suites (also exposed through the CLI)
"""

__version__ = "0.1.0"

from .ball import BallProblem, assemble_mode, beta, harmonic_dim, solve_ball
from .eiglin import (
    DenseSymMatrix,
    NotPositiveDefiniteError,
    Spectrum,
    SymBandedMatrix,
    nullspace,
    reduce_constrained_gevp,
    solve_gevp,
)
from .mortar import GordonHallMap, MortarMesh, MsemResult, build_mesh, solve_msem
from .orthopoly import (
    JacobiParam,
    QuadratureRule,
    connection_split,
    gauss_rule,
    jacobi_derivative,
    jacobi_eval,
    jacobi_norm,
)
from .sector import SectorProblem, beta_sector, solve_sector
from .specfun import bessel_j, bessel_zero, reference_spectrum

__all__ = [
    "__version__",
    "BallProblem",
    "DenseSymMatrix",
    "GordonHallMap",
    "JacobiParam",
    "MortarMesh",
    "MsemResult",
    "NotPositiveDefiniteError",
    "QuadratureRule",
    "SectorProblem",
    "Spectrum",
    "SymBandedMatrix",
    "assemble_mode",
    "bessel_j",
    "bessel_zero",
    "beta",
    "beta_sector",
    "build_mesh",
    "connection_split",
    "gauss_rule",
    "harmonic_dim",
    "jacobi_derivative",
    "jacobi_eval",
    "jacobi_norm",
    "nullspace",
    "reduce_constrained_gevp",
    "reference_spectrum",
    "solve_ball",
    "solve_gevp",
    "solve_msem",
    "solve_sector",
]
