from caipart.solvers.reduction.lifts import lift
from caipart.solvers.reduction.matches import ConfigKind, ConfigMatch, detect
from caipart.solvers.reduction.solver import ReductionOptions, ReductionTrace, SubcubicResult, solve_subcubic
from caipart.solvers.reduction.steps import ReductionStep, Subproblem, reduce

__all__ = [
    "ConfigKind",
    "ConfigMatch",
    "ReductionOptions",
    "ReductionStep",
    "ReductionTrace",
    "SubcubicResult",
    "Subproblem",
    "detect",
    "lift",
    "reduce",
    "solve_subcubic",
]
