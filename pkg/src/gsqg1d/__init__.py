"""Self-similar blow-up profiles for 1D reductions of generalized SQG.

The package discretizes the singular integral operators of the reduced
models by cubic-spline product integration on graded meshes, iterates the
associated nonlinear fixed-point maps to the self-similar profile, and
verifies the shape invariants (monotonicity, square-root convexity,
barriers) that the maps provably preserve.

Layout:

    specfun       auxiliary kernel functions F1, F2 and their derivatives
    params        alpha and every alpha-derived constant
    mesh          power / sinh / uniform graded meshes
    quadrature    dense product-integration operator matrices
    operators_r2  full-plane functionals and nonlinear map
    operators_hp  half-plane functionals and nonlinear map
    membership    invariant-set and lemma-bound checks
    fixedpoint    iteration drivers, limits, alpha sweeps
    field2d       2D half-plane velocity evaluation (FFT convolution)
    cli           solve / sweep / verify / limits / field2d commands
"""

from .errors import (
    AssemblyError,
    DegenerateProfile,
    DomainError,
    GridError,
    GSQGError,
    NegativeT,
    NewtonFail,
    NoFeasibleT0,
    TailFitError,
)
from .params import AlphaParams, make_alpha_params
from .mesh import Mesh, power_mesh, refine, sinh_mesh, uniform_mesh

__all__ = [
    "AlphaParams",
    "AssemblyError",
    "DegenerateProfile",
    "DomainError",
    "GridError",
    "GSQGError",
    "Mesh",
    "NegativeT",
    "NewtonFail",
    "NoFeasibleT0",
    "TailFitError",
    "make_alpha_params",
    "power_mesh",
    "refine",
    "sinh_mesh",
    "uniform_mesh",
]

__version__ = "0.1.0"
