"""Near-solutions, self-unsatisfiability flags, and degree diagnostics.

A near-solution for constraint C is an assignment violating C and nothing
else.  Counting them is a single exact solve on the instance with C's
permitted set complemented, which is equivalent to checking every assignment
directly but reuses the search kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from ..errors import BudgetExceededError
from ..instance import Assignment, Instance
from ..problem import from_instance, replace_relation
from .engine import solve


@dataclass(frozen=True)
class NearSolutionReport:
    constraint_index: int
    count: Optional[int]  # exact when the search completed
    witness: Optional[Assignment]
    nodes: int


@dataclass(frozen=True)
class SelfUnsatReport:
    per_constraint: tuple[bool, ...]
    per_variable: tuple[bool, ...]
    is_self_unsat_formula: bool


@dataclass(frozen=True)
class DegreeReport:
    degrees: tuple[int, ...]
    min_degree: int
    mean_degree: float
    threshold: float  # r * k * ln(d) / 100
    below_threshold_count: int

    def to_dict(self) -> dict:
        return {
            "degrees": list(self.degrees),
            "min_degree": self.min_degree,
            "mean_degree": self.mean_degree,
            "threshold": self.threshold,
            "below_threshold_count": self.below_threshold_count,
        }


def _complemented(instance: Instance, constraint_index: int):
    problem = from_instance(instance)
    rel = problem.constraints[constraint_index].relation
    return replace_relation(problem, constraint_index, rel.complement())


def near_solutions(
    instance: Instance,
    constraint_index: int,
    mode: str = "count",
    budget: int | None = None,
) -> NearSolutionReport:
    """Count or exhibit assignments violating exactly this constraint.

    mode="count" gives the exact tally; mode="witness" stops at the first
    (lexicographically smallest) one.
    """
    if not 0 <= constraint_index < len(instance.constraints):
        raise ValueError(f"constraint index {constraint_index} out of range")
    if mode not in ("count", "witness"):
        raise ValueError(f"unknown mode {mode!r}")
    problem = _complemented(instance, constraint_index)
    if mode == "count":
        report = solve(problem, mode="count", budget=budget)
        if report.status == "BUDGET_EXHAUSTED":
            raise BudgetExceededError(
                f"near-solution count for constraint {constraint_index} exceeded the budget"
            )
        return NearSolutionReport(constraint_index, report.count, None, report.nodes)
    report = solve(problem, mode="enumerate", cap=1, budget=budget)
    if report.status == "BUDGET_EXHAUSTED":
        raise BudgetExceededError(
            f"near-solution witness for constraint {constraint_index} exceeded the budget"
        )
    witness = report.solutions[0] if report.solutions else None
    return NearSolutionReport(constraint_index, report.count, witness, report.nodes)


def self_unsat_analysis(instance: Instance, budget: int | None = None) -> SelfUnsatReport:
    """Flag constraints and variables that can fail alone.

    A constraint is self-unsatisfiable if some assignment violates it and
    nothing else; a variable inherits the flag from any constraint containing
    it; the whole instance qualifies only if it is unsatisfiable and every
    variable is flagged.
    """
    flags = []
    for ci in range(len(instance.constraints)):
        problem = _complemented(instance, ci)
        report = solve(problem, mode="decide", budget=budget)
        if report.status == "BUDGET_EXHAUSTED":
            raise BudgetExceededError(f"self-unsat probe for constraint {ci} exceeded the budget")
        flags.append(report.status == "SAT")

    per_variable = [False] * instance.n
    for ci, c in enumerate(instance.constraints):
        if flags[ci]:
            for var in c.scope:
                per_variable[var] = True

    verdict = solve(instance, mode="decide", budget=budget)
    if verdict.status == "BUDGET_EXHAUSTED":
        raise BudgetExceededError("satisfiability verdict exceeded the budget")
    formula = verdict.status == "UNSAT" and all(per_variable)
    return SelfUnsatReport(tuple(flags), tuple(per_variable), formula)


def degree_stats(instance: Instance) -> DegreeReport:
    """Per-variable constraint membership counts."""
    degrees = [0] * instance.n
    for c in instance.constraints:
        for var in c.scope:
            degrees[var] += 1
    p = instance.params
    threshold = p.r * p.k * math.log(p.d) / 100
    return DegreeReport(
        degrees=tuple(degrees),
        min_degree=min(degrees),
        mean_degree=sum(degrees) / instance.n,
        threshold=threshold,
        below_threshold_count=sum(1 for deg in degrees if deg <= threshold),
    )
