"""Method-of-lines solver for ``u_t = a(u) u_x`` on periodic grids."""
from .integrators import (
    ConvergenceRow,
    ConvergenceStudy,
    EvolveResult,
    IntegratorSpec,
    convergence_study,
    evolve,
    step_fe,
    step_ssprk3,
)
from .problems import PROBLEMS, GridFunction, Problem, advection, burgers, grid
from .schemes import (
    FunctionScheme,
    LinearStencilScheme,
    SpatialScheme,
    UpwindScheme,
    WenoScheme,
    make_upwind_stencil,
    rhs,
)

__all__ = [
    "ConvergenceRow", "ConvergenceStudy", "EvolveResult", "IntegratorSpec",
    "convergence_study", "evolve", "step_fe", "step_ssprk3",
    "PROBLEMS", "GridFunction", "Problem", "advection", "burgers", "grid",
    "FunctionScheme", "LinearStencilScheme", "SpatialScheme", "UpwindScheme",
    "WenoScheme", "make_upwind_stencil", "rhs",
]
