"""Workbench for symmetric random binary CSP instances.

Generation with a regular shared base relation, exact solving and counting,
satisfiability-flipping symmetry mappings, log-encoding to CNF, closed-form
moment analytics, and a reproducible experiment harness.
"""

from .params import AlphaReport, RbParams, derive_params, validate_alpha
from .relation import Relation, apply_permutation, gen_base_relation
from .instance import Constraint, Instance, gen_instance, materialize
from .problem import Problem, from_instance, restrict
from .rng import rng_stream
from .search import (
    KERNEL_NAME,
    SolveReport,
    brute_force_count,
    degree_stats,
    near_solutions,
    self_unsat_analysis,
    solve,
)
from .symmetry import (
    FlipOutcome,
    SwapPair,
    apply_symmetry_mapping,
    find_swap_pair,
    fixed_point_trial,
    flip_sat_to_unsat,
    flip_unsat_to_sat,
    subproblem_invariance_check,
)
from .analytics import (
    MomentReport,
    expected_near_solutions,
    expected_solution_count,
    second_moment,
    thresholds,
)
from .encode import Cnf, bits_per_var, decode_assignment, encode_log, parse_dimacs, write_dimacs
from .harness import (
    ExperimentRecord,
    SweepConfig,
    load,
    persist,
    run_flip_suite,
    run_phase_sweep,
    run_threshold_suite,
    wilson_interval,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaReport", "RbParams", "derive_params", "validate_alpha",
    "Relation", "apply_permutation", "gen_base_relation",
    "Constraint", "Instance", "gen_instance", "materialize",
    "Problem", "from_instance", "restrict",
    "rng_stream",
    "KERNEL_NAME", "SolveReport", "brute_force_count", "degree_stats",
    "near_solutions", "self_unsat_analysis", "solve",
    "FlipOutcome", "SwapPair", "apply_symmetry_mapping", "find_swap_pair",
    "fixed_point_trial", "flip_sat_to_unsat", "flip_unsat_to_sat",
    "subproblem_invariance_check",
    "MomentReport", "expected_near_solutions", "expected_solution_count",
    "second_moment", "thresholds",
    "Cnf", "bits_per_var", "decode_assignment", "encode_log", "parse_dimacs",
    "write_dimacs",
    "ExperimentRecord", "SweepConfig", "load", "persist", "run_flip_suite",
    "run_phase_sweep", "run_threshold_suite", "wilson_interval",
    "__version__",
]
