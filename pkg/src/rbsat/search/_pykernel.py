"""Pure-Python backtracking kernel.

Reference implementation of the search loop; the compiled kernel in
``_kernel.pyx`` mirrors it statement for statement so both report identical
node counts, solution order, and stop reasons.

Traversal: variables in static order, values ascending.  One node = one
attempted (variable, value) extension, counted before its consistency check.
"""

from __future__ import annotations

STOP_COMPLETE = 0
STOP_CAP = 1
STOP_BUDGET = 2

MODE_COUNT = 0
MODE_ENUM = 1


def run(inp, mode: int, cap: int, budget: int):
    """Returns (stop_reason, count, solutions, nodes)."""
    if inp.contradiction:
        return STOP_COMPLETE, 0, [], 0

    nv = inp.nv
    d = inp.d
    values_off = inp.values_off
    values_flat = inp.values_flat
    scope_off = inp.scope_off
    scope_flat = inp.scope_flat
    bmp_off = inp.bmp_off
    bmp_flat = inp.bmp_flat
    checks_off = inp.checks_off
    checks_flat = inp.checks_flat

    assign = [0] * nv
    idx = [0] * (nv + 1)
    nodes = 0
    count = 0
    sols: list[tuple[int, ...]] = []
    stop = STOP_COMPLETE
    depth = 0

    while True:
        if depth == nv:
            count += 1
            if mode == MODE_ENUM:
                sols.append(tuple(assign))
                if count >= cap:
                    stop = STOP_CAP
                    break
            depth -= 1
            if depth < 0:
                break
            continue
        i = idx[depth]
        if i >= values_off[depth + 1] - values_off[depth]:
            depth -= 1
            if depth < 0:
                break
            continue
        v = values_flat[values_off[depth] + i]
        idx[depth] = i + 1
        nodes += 1
        if nodes > budget:
            stop = STOP_BUDGET
            break
        assign[depth] = v
        ok = True
        for cptr in range(checks_off[depth], checks_off[depth + 1]):
            ci = checks_flat[cptr]
            index = 0
            for sptr in range(scope_off[ci], scope_off[ci + 1]):
                index = index * d + assign[scope_flat[sptr]]
            if not bmp_flat[bmp_off[ci] + index]:
                ok = False
                break
        if ok:
            depth += 1
            idx[depth] = 0

    return stop, count, sols, nodes
