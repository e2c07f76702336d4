"""Exact solving: decide / count / enumerate with a node budget.

The hot loop lives in a compiled extension when available (built from
``_kernel.pyx``); otherwise the pure-Python twin ``_pykernel`` runs.  Set
RBSAT_PURE_PYTHON=1 to force the fallback.  Both kernels produce identical
reports (status, counts, solutions, node counts), so results never depend on
which one happens to be installed — only the wall time does.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass
from typing import Union

from ..errors import OracleGuardError, RbsatError
from ..instance import Instance
from ..problem import Problem, from_instance
from . import _pykernel

if os.environ.get("RBSAT_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _kernel as _compiled
    except ImportError:
        _compiled = None

KERNEL_NAME = "compiled" if _compiled is not None else "python"

DEFAULT_BUDGET = 10**8
ORACLE_GUARD = 10**7
_BITMAP_GUARD = 20_000_000

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_BUDGET = 30

Solvable = Union[Instance, Problem]


@dataclass(frozen=True)
class SolveReport:
    status: str  # SAT | UNSAT | BUDGET_EXHAUSTED
    mode: str  # decide | count | enumerate
    count: int | None
    solutions: tuple[tuple[int, ...], ...]
    nodes: int

    @property
    def exit_code(self) -> int:
        return {"SAT": EXIT_SAT, "UNSAT": EXIT_UNSAT, "BUDGET_EXHAUSTED": EXIT_BUDGET}[self.status]

    def to_json(self) -> str:
        return json.dumps(
            {
                "status": self.status,
                "count": self.count,
                "nodes": self.nodes,
                "solutions": [list(s) for s in self.solutions],
            },
            separators=(",", ":"),
        )


class _KernelInput:
    __slots__ = (
        "nv", "d", "contradiction", "variables",
        "values_off", "values_flat",
        "scope_off", "scope_flat",
        "bmp_off", "bmp_flat",
        "checks_off", "checks_flat",
    )


def as_problem(obj: Solvable) -> Problem:
    return from_instance(obj) if isinstance(obj, Instance) else obj


def prepare(problem: Problem) -> _KernelInput:
    """Flatten a problem into the array form both kernels consume."""
    inp = _KernelInput()
    nv = len(problem.variables)
    inp.nv = nv
    inp.d = problem.d
    inp.contradiction = problem.contradiction
    inp.variables = problem.variables
    pos = {v: i for i, v in enumerate(problem.variables)}

    values_off = [0]
    values_flat: list[int] = []
    for var in problem.variables:
        values_flat.extend(problem.allowed_values(var))
        values_off.append(len(values_flat))
    inp.values_off = values_off
    inp.values_flat = values_flat

    scope_off = [0]
    scope_flat: list[int] = []
    bmp_off = [0]
    bmp_parts: list[bytearray] = []
    triggers: list[int] = []
    total_bits = 0
    for c in problem.constraints:
        positions = [pos[x] for x in c.scope]
        scope_flat.extend(positions)
        scope_off.append(len(scope_flat))
        size = problem.d ** c.relation.arity
        total_bits += size
        if total_bits > _BITMAP_GUARD:
            raise RbsatError("constraint relations too large to tabulate")
        bmp = bytearray(size)
        for t in c.relation.allowed:
            index = 0
            for v in t:
                index = index * problem.d + v
            bmp[index] = 1
        bmp_parts.append(bmp)
        bmp_off.append(total_bits)
        triggers.append(max(positions) if positions else 0)
    inp.scope_off = scope_off
    inp.scope_flat = scope_flat
    inp.bmp_off = bmp_off
    inp.bmp_flat = bytearray().join(bmp_parts)

    checks_off = [0]
    checks_flat: list[int] = []
    for depth in range(nv):
        for ci, trig in enumerate(triggers):
            if trig == depth:
                checks_flat.append(ci)
        checks_off.append(len(checks_flat))
    inp.checks_off = checks_off
    inp.checks_flat = checks_flat
    return inp


def solve(
    obj: Solvable,
    mode: str = "decide",
    cap: int = 100,
    budget: int | None = None,
) -> SolveReport:
    """Exact verdict by chronological backtracking.

    decide: stop at the first solution.  count: exact solution count.
    enumerate: up to ``cap`` solutions in lexicographic order (the count is
    exact when the search finished without hitting the cap).  An exhausted
    node budget yields status BUDGET_EXHAUSTED, never a guessed verdict.
    """
    if mode not in ("decide", "count", "enumerate"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "enumerate" and cap < 1:
        raise ValueError("enumerate needs cap >= 1")
    budget = DEFAULT_BUDGET if budget is None else budget

    problem = as_problem(obj)
    inp = prepare(problem)
    kmode = _pykernel.MODE_COUNT if mode == "count" else _pykernel.MODE_ENUM
    kcap = 1 if mode == "decide" else cap
    kernel = _compiled if _compiled is not None else _pykernel
    stop, count, sols, nodes = kernel.run(inp, kmode, kcap, budget)

    solutions = tuple(tuple(int(v) for v in s) for s in sols)
    if stop == _pykernel.STOP_BUDGET:
        return SolveReport("BUDGET_EXHAUSTED", mode, None, solutions, nodes)
    if mode == "count":
        return SolveReport("SAT" if count else "UNSAT", mode, count, solutions, nodes)
    if mode == "decide":
        return SolveReport("SAT" if count else "UNSAT", mode, None, solutions, nodes)
    if stop == _pykernel.STOP_CAP:
        # stopped early: solutions exist but the total is unknown
        return SolveReport("SAT", mode, None, solutions, nodes)
    return SolveReport("SAT" if count else "UNSAT", mode, count, solutions, nodes)


def brute_force_count(obj: Solvable) -> int:
    """Count solutions by enumerating the full assignment space.

    Deliberately naive (no backtracking, no pruning): this is the oracle the
    search kernels are checked against.  Guarded to 10^7 assignments.
    """
    problem = as_problem(obj)
    if problem.contradiction:
        return 0
    values = [problem.allowed_values(v) for v in problem.variables]
    space = math.prod(len(vs) for vs in values)
    if space > ORACLE_GUARD:
        raise OracleGuardError(f"assignment space {space} exceeds the {ORACLE_GUARD} guard")
    pos = {v: i for i, v in enumerate(problem.variables)}
    cons = [
        (tuple(pos[x] for x in c.scope), c.relation) for c in problem.constraints
    ]
    count = 0
    for assignment in itertools.product(*values):
        for scope_pos, rel in cons:
            if tuple(assignment[p] for p in scope_pos) not in rel:
                break
        else:
            count += 1
    return count
