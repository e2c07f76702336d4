"""Satisfiability-flipping symmetry mappings for binary constraints.

The mapping exchanges two values u, u' in one coordinate of one constraint's
permitted set (realized by composing that coordinate's permutation with the
transposition).  With the value pair chosen against a witness assignment, the
exchange moves exactly one tuple of interest across the permitted/forbidden
boundary, so a satisfiable instance can be made to lose its solution and an
unsatisfiable one to gain it — while every subproblem obtained by assigning
the touched variable a value outside {u, u'} stays bit-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .errors import (
    BudgetExceededError,
    NoSelfUnsatConstraintError,
    NoSwapPairError,
    ParamError,
)
from .instance import Assignment, Constraint, Instance
from .problem import from_instance, restrict
from .relation import Relation, compose, transposition
from .search.analysis import near_solutions
from .search.engine import solve

SAT_TO_UNSAT = "sat_to_unsat"
UNSAT_TO_SAT = "unsat_to_sat"


@dataclass(frozen=True)
class SwapPair:
    u: int
    u_prime: int
    v: int
    v_prime: int
    constraint_index: int
    coord: int


@dataclass(frozen=True)
class FlipOutcome:
    direction: str
    swap: SwapPair
    pre_status: str
    post_status: str
    avoid_set: tuple[int, ...]
    subproblems_unchanged: bool
    witness: Optional[Assignment] = None  # the assignment driving the swap

    def to_json(self) -> str:
        return json.dumps(
            {
                "direction": self.direction,
                "constraint_index": self.swap.constraint_index,
                "coord": self.swap.coord,
                "u": self.swap.u,
                "u_prime": self.swap.u_prime,
                "v": self.swap.v,
                "v_prime": self.swap.v_prime,
                "pre_status": self.pre_status,
                "post_status": self.post_status,
                "avoid": list(self.avoid_set),
                "subproblems_unchanged": self.subproblems_unchanged,
            },
            separators=(",", ":"),
        )


def _pair(coord: int, a: int, b: int) -> tuple[int, int]:
    """Tuple with a at position ``coord`` and b at the other position."""
    return (a, b) if coord == 0 else (b, a)


def find_swap_pair(
    relation: Relation,
    coord: int,
    u: int,
    v: int,
    direction: str,
    avoid_set: Iterable[int] = (),
    constraint_index: int = -1,
) -> SwapPair:
    """Smallest (u', v') completing the exchange pattern for ``direction``.

    sat_to_unsat starts from a permitted (u, v) and finds u', v' with
    (u', v') permitted but (u, v') and (u', v) forbidden, so exchanging
    u and u' forbids (u, v).  unsat_to_sat starts from a forbidden (u, v)
    and finds u', v' with (u, v') and (u', v) permitted but (u', v')
    forbidden, so the exchange permits (u, v).  u' is never drawn from
    ``avoid_set``.
    """
    if relation.arity != 2:
        raise ParamError("swap pairs are defined for binary relations only")
    d = relation.d
    avoid = frozenset(avoid_set)
    present = _pair(coord, u, v) in relation
    if direction == SAT_TO_UNSAT and not present:
        raise ParamError(f"({u},{v}) must be permitted for {direction}")
    if direction == UNSAT_TO_SAT and present:
        raise ParamError(f"({u},{v}) must be forbidden for {direction}")

    for u_prime in range(d):
        if u_prime == u or u_prime in avoid:
            continue
        if direction == SAT_TO_UNSAT:
            if _pair(coord, u_prime, v) in relation:
                continue
            for v_prime in range(d):
                if _pair(coord, u_prime, v_prime) in relation and _pair(coord, u, v_prime) not in relation:
                    return SwapPair(u, u_prime, v, v_prime, constraint_index, coord)
        elif direction == UNSAT_TO_SAT:
            if _pair(coord, u_prime, v) not in relation:
                continue
            for v_prime in range(d):
                if _pair(coord, u, v_prime) in relation and _pair(coord, u_prime, v_prime) not in relation:
                    return SwapPair(u, u_prime, v, v_prime, constraint_index, coord)
        else:
            raise ParamError(f"unknown direction {direction!r}")
    raise NoSwapPairError(
        f"no admissible exchange partner for value {u} at coordinate {coord} "
        f"(avoid set of size {len(avoid)})"
    )


def apply_symmetry_mapping(
    instance: Instance, constraint_index: int, coord: int, u: int, u_prime: int
) -> Instance:
    """Exchange values u and u' in one coordinate of one constraint.

    Everything else is untouched; any planted assignment is dropped since the
    exchange may invalidate it.
    """
    if instance.k != 2:
        raise ParamError("the symmetry mapping is defined for k=2 instances")
    if u == u_prime or not (0 <= u < instance.d and 0 <= u_prime < instance.d):
        raise ParamError("need two distinct domain values")
    if not 0 <= coord < instance.k:
        raise ParamError(f"coordinate {coord} out of range")
    c = instance.constraints[constraint_index]
    swap = transposition(instance.d, u, u_prime)
    perms = list(c.perms)
    perms[coord] = compose(swap, perms[coord])
    cs = list(instance.constraints)
    cs[constraint_index] = Constraint(c.scope, tuple(perms))
    return replace(instance, constraints=tuple(cs), planted=None)


def _solved_status(instance: Instance, budget) -> str:
    return solve(instance, mode="decide", budget=budget).status


def flip_sat_to_unsat(
    instance: Instance,
    solution: Assignment,
    x: int,
    avoid_set: Iterable[int] = (),
    budget: int | None = None,
) -> tuple[Instance, FlipOutcome]:
    """Exchange the solution's value of x in its lowest-index constraint.

    The exchange removes the given solution; whether the result is actually
    unsatisfiable is verified by solving, never assumed (new solutions can
    appear elsewhere, roughly with probability inverse in the domain size).
    """
    avoid = tuple(sorted(set(avoid_set)))
    if not instance.satisfies(solution):
        raise ParamError("the given assignment does not satisfy the instance")
    containing = instance.constraints_of(x)
    if not containing:
        raise ParamError(f"variable {x} appears in no constraint")
    ci = containing[0]
    c = instance.constraints[ci]
    coord = c.scope.index(x)
    other = c.scope[1 - coord]
    u, v = solution[x], solution[other]
    rel = instance.materialized(ci)
    swap = find_swap_pair(rel, coord, u, v, SAT_TO_UNSAT, avoid, constraint_index=ci)
    post = apply_symmetry_mapping(instance, ci, coord, u, swap.u_prime)
    pre_status = _solved_status(instance, budget)
    post_status = _solved_status(post, budget)
    unchanged = subproblem_invariance_check(instance, post, x, avoid)
    outcome = FlipOutcome(
        SAT_TO_UNSAT, swap, pre_status, post_status, avoid, unchanged, witness=tuple(solution)
    )
    return post, outcome


def flip_unsat_to_sat(
    instance: Instance,
    x: int,
    avoid_set: Iterable[int] = (),
    budget: int | None = None,
) -> tuple[Instance, FlipOutcome]:
    """Make a near-solution of some constraint containing x into a solution.

    Scans x's constraints in index order for one with a near-solution witness
    tau, then exchanges tau's value of x with a partner u' so tau's tuple
    becomes permitted.  tau satisfies the result by construction (only the
    scanned constraint changed, and it now permits tau), which the returned
    statuses confirm by solving.
    """
    avoid = tuple(sorted(set(avoid_set)))
    pre_status = _solved_status(instance, budget)
    if pre_status != "UNSAT":
        raise ParamError(f"instance must be unsatisfiable, got {pre_status}")
    containing = instance.constraints_of(x)
    if not containing:
        raise ParamError(f"variable {x} appears in no constraint")
    tau = None
    ci = -1
    for candidate in containing:
        report = near_solutions(instance, candidate, mode="witness", budget=budget)
        if report.witness is not None:
            tau, ci = report.witness, candidate
            break
    if tau is None:
        raise NoSelfUnsatConstraintError(
            f"no constraint containing variable {x} has a near-solution"
        )
    c = instance.constraints[ci]
    coord = c.scope.index(x)
    other = c.scope[1 - coord]
    u, w = tau[x], tau[other]
    rel = instance.materialized(ci)
    swap = find_swap_pair(rel, coord, u, w, UNSAT_TO_SAT, avoid, constraint_index=ci)
    post = apply_symmetry_mapping(instance, ci, coord, u, swap.u_prime)
    post_status = _solved_status(post, budget)
    unchanged = subproblem_invariance_check(instance, post, x, avoid)
    outcome = FlipOutcome(
        UNSAT_TO_SAT, swap, pre_status, post_status, avoid, unchanged, witness=tau
    )
    return post, outcome


def subproblem_invariance_check(
    pre_instance: Instance,
    post_instance: Instance,
    x: int,
    avoid_set: Iterable[int],
) -> bool:
    """True iff assigning x any avoided value yields identical subproblems.

    Exact canonical-form equality, no tolerance: whenever the exchanged pair
    u, u' lies outside the avoid set this must hold, because the exchange
    only rewrites rows u and u' of x's coordinate.
    """
    pre = from_instance(pre_instance)
    post = from_instance(post_instance)
    return all(
        restrict(pre, x, v).canonical() == restrict(post, x, v).canonical()
        for v in avoid_set
    )


@dataclass(frozen=True)
class FixedPointTrace:
    steps: tuple[FlipOutcome, ...]
    class_exited: bool
    final_instance: Instance


def default_flip_variable(instance: Instance) -> int:
    """Smallest variable that appears in some constraint."""
    for x in range(instance.n):
        if instance.constraints_of(x):
            return x
    raise ParamError("instance has no constraints")


def _classify(instance: Instance, budget) -> tuple:
    report = solve(instance, mode="enumerate", cap=2, budget=budget)
    if report.status == "BUDGET_EXHAUSTED":
        raise BudgetExceededError("class membership check exceeded the budget")
    return report.solutions


def fixed_point_trial(
    instance: Instance,
    rounds: int,
    avoid_set: Iterable[int] = (),
    budget: int | None = None,
) -> FixedPointTrace:
    """Alternate directional flips, verifying class membership each step.

    The instance must start with exactly one solution or none.  Satisfiable
    steps flip that unique solution away; unsatisfiable steps flip a
    near-solution in.  A step leaving two or more solutions exits the
    unique-or-unsatisfiable class and terminates the trace.  Flip errors
    (no swap pair, no near-solution) propagate.
    """
    sols = _classify(instance, budget)
    if len(sols) >= 2:
        raise ParamError("instance has at least two solutions; not in the flip class")
    x = default_flip_variable(instance)
    steps: list[FlipOutcome] = []
    exited = False
    cur = instance
    for _ in range(rounds):
        if len(sols) == 1:
            cur, outcome = flip_sat_to_unsat(cur, sols[0], x, avoid_set, budget=budget)
        else:
            cur, outcome = flip_unsat_to_sat(cur, x, avoid_set, budget=budget)
        steps.append(outcome)
        sols = _classify(cur, budget)
        if len(sols) >= 2:
            exited = True
            break
    return FixedPointTrace(tuple(steps), exited, cur)
