from .engine import (
    DEFAULT_BUDGET,
    EXIT_BUDGET,
    EXIT_SAT,
    EXIT_UNSAT,
    KERNEL_NAME,
    SolveReport,
    brute_force_count,
    solve,
)
from .analysis import (
    DegreeReport,
    NearSolutionReport,
    SelfUnsatReport,
    degree_stats,
    near_solutions,
    self_unsat_analysis,
)

__all__ = [
    "DEFAULT_BUDGET",
    "EXIT_BUDGET",
    "EXIT_SAT",
    "EXIT_UNSAT",
    "KERNEL_NAME",
    "SolveReport",
    "brute_force_count",
    "solve",
    "DegreeReport",
    "NearSolutionReport",
    "SelfUnsatReport",
    "degree_stats",
    "near_solutions",
    "self_unsat_analysis",
]
