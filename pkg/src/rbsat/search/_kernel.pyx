# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backtracking kernel; mirrors _pykernel.run exactly."""

import numpy as np


def run(inp, int mode, long long cap, long long budget):
    """Returns (stop_reason, count, solutions, nodes)."""
    if inp.contradiction:
        return 0, 0, [], 0

    cdef int nv = inp.nv
    cdef long long d = inp.d

    cdef long long[::1] values_off = np.asarray(inp.values_off, dtype=np.int64)
    cdef int[::1] values_flat = np.asarray(inp.values_flat, dtype=np.int32)
    cdef long long[::1] scope_off = np.asarray(inp.scope_off, dtype=np.int64)
    cdef int[::1] scope_flat = np.asarray(inp.scope_flat, dtype=np.int32)
    cdef long long[::1] bmp_off = np.asarray(inp.bmp_off, dtype=np.int64)
    cdef unsigned char[::1] bmp_flat = inp.bmp_flat
    cdef long long[::1] checks_off = np.asarray(inp.checks_off, dtype=np.int64)
    cdef int[::1] checks_flat = np.asarray(inp.checks_flat, dtype=np.int32)

    cdef long long[::1] assign = np.zeros(max(nv, 1), dtype=np.int64)
    cdef long long[::1] idx = np.zeros(nv + 1, dtype=np.int64)

    cdef long long nodes = 0
    cdef long long count = 0
    cdef long long i, v, index, cptr, sptr, ci
    cdef int depth = 0
    cdef int stop = 0
    cdef bint ok
    sols = []

    while True:
        if depth == nv:
            count += 1
            if mode == 1:
                sols.append(tuple([assign[j] for j in range(nv)]))
                if count >= cap:
                    stop = 1
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
            stop = 2
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
