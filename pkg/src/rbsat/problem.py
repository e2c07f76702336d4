"""Solvable normal form and the subproblem restriction operation.

A Problem is what the solver actually runs on: a set of variables (which keep
their original ids across restrictions), a shared domain size, per-variable
unary allowed-value sets, and constraints with fully materialized relations.
Restricting a variable to a value removes it, projects every constraint that
mentions it (a binary constraint becomes a unary allowed-value set; higher
arities lose one coordinate), and leaves everything else bit-identical —
which is exactly what the subproblem-invariance checks compare.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

from .errors import ParamError
from .relation import Relation

if TYPE_CHECKING:
    from .instance import Instance


@dataclass(frozen=True)
class PConstraint:
    scope: tuple[int, ...]  # original variable ids, in scope order
    relation: Relation


@dataclass(frozen=True)
class Problem:
    d: int
    variables: tuple[int, ...]  # strictly increasing original ids
    constraints: tuple[PConstraint, ...]
    unary: dict[int, tuple[int, ...]] = field(default_factory=dict)
    contradiction: bool = False

    def allowed_values(self, var: int) -> tuple[int, ...]:
        return self.unary.get(var, tuple(range(self.d)))

    def satisfies(self, assignment: tuple[int, ...]) -> bool:
        """Check a value tuple aligned with ``variables``."""
        if self.contradiction or len(assignment) != len(self.variables):
            return False
        value = dict(zip(self.variables, assignment))
        for var, v in value.items():
            if v not in self.allowed_values(var):
                return False
        return all(
            tuple(value[x] for x in c.scope) in c.relation for c in self.constraints
        )

    def canonical(self) -> str:
        """Canonical text form; equal strings mean equal subproblems."""
        parts = [f"d={self.d}", f"vars={list(self.variables)}",
                 f"contradiction={self.contradiction}"]
        for var in sorted(self.unary):
            parts.append(f"u{var}={sorted(self.unary[var])}")
        for c in self.constraints:
            parts.append(f"c{list(c.scope)}:{sorted(c.relation.allowed)}")
        return ";".join(parts)


def from_instance(inst: "Instance") -> Problem:
    constraints = tuple(
        PConstraint(c.scope, inst.materialized(i))
        for i, c in enumerate(inst.constraints)
    )
    return Problem(d=inst.d, variables=tuple(range(inst.n)), constraints=constraints)


def replace_relation(problem: Problem, index: int, relation: Relation) -> Problem:
    cs = list(problem.constraints)
    cs[index] = PConstraint(cs[index].scope, relation)
    return replace(problem, constraints=tuple(cs))


def restrict(problem: Problem, var: int, value: int) -> Problem:
    """Assign ``var := value`` and project it out.

    Solutions of the result are in bijection with solutions of ``problem``
    that assign ``value`` to ``var`` (drop the ``var`` entry).
    """
    if var not in problem.variables:
        raise ParamError(f"variable {var} is not part of this problem")
    if not 0 <= value < problem.d:
        raise ParamError(f"value {value} outside [0, {problem.d})")

    contradiction = problem.contradiction or value not in problem.allowed_values(var)
    unary = {x: vals for x, vals in problem.unary.items() if x != var}
    kept: list[PConstraint] = []
    for c in problem.constraints:
        if var not in c.scope:
            kept.append(c)
            continue
        coord = c.scope.index(var)
        projected = tuple(
            t[:coord] + t[coord + 1:] for t in c.relation.allowed if t[coord] == value
        )
        new_scope = c.scope[:coord] + c.scope[coord + 1:]
        if len(new_scope) == 1:
            y = new_scope[0]
            values = frozenset(t[0] for t in projected)
            merged = tuple(sorted(
                values.intersection(unary.get(y, tuple(range(problem.d))))
            ))
            unary[y] = merged
        else:
            kept.append(PConstraint(new_scope, Relation(len(new_scope), problem.d, projected)))

    return Problem(
        d=problem.d,
        variables=tuple(v for v in problem.variables if v != var),
        constraints=tuple(kept),
        unary=unary,
        contradiction=contradiction,
    )
