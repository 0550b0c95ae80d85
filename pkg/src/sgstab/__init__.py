"""Stability-preserving stochastic Galerkin projection of random-parameter ODEs.

The package projects x' = A(p) x (or x' = f(x, p)) with a random parameter p
onto an orthonormal polynomial basis of the parameter density, and provides
the Lyapunov/Cholesky basis transformation under which the projected system
provably stays asymptotically stable.
"""

from .errors import (
    ConfigError,
    EigenConvergenceError,
    IntegrationError,
    LyapunovSolveError,
    NotPositiveDefiniteError,
    NumericsError,
    SingularMatrixError,
    StabilizationError,
)
from .galerkin import (
    GalerkinMatrix,
    StabilizedPoint,
    assemble_linear,
    assemble_stabilized_linear,
    nonlinear_galerkin_jacobian,
    nonlinear_galerkin_rhs,
    reconstruct,
    stabilize_point,
    stabilized_nonlinear_jacobian,
    stabilized_nonlinear_rhs,
    stabilized_system,
)
from .matops import (
    cholesky,
    eigenvalues,
    lu_solve,
    lyapunov_solve,
    spectral_abscissa,
    symmetric_part,
)
from .model import (
    ParametricLinearSystem,
    ParametricNonlinearSystem,
    equilibrium_jacobian,
    lift_linear,
    paper_linear_system,
    paper_quadratic_system,
    shift_system,
)
from .odesolve import NewtonReport, Trajectory, newton_solve, trapezoidal_integrate
from .orthopoly import (
    Density,
    OrthonormalBasis,
    QuadratureRule,
    basis_matrix,
    basis_new,
    beta_density,
    evaluate_basis,
    inner_product,
    project,
    quadrature_new,
    uniform_density,
)

__version__ = "0.1.0"
