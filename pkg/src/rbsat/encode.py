"""Log-encoding to CNF and DIMACS I/O.

Each d-valued variable becomes B = ceil(log2 d) Boolean variables holding its
value little-endian; variable i's bit j is CNF variable 1 + i*B + j.  Every
forbidden tuple of every constraint yields one clause of length k*B saying
"some bit disagrees with this tuple", and every non-value w in [d, 2^B)
yields a length-B exclusion clause per variable.  Satisfying CNF models are
therefore in bijection with solutions, so model counts carry over exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import DimacsError, ParamError
from .instance import Instance
from .params import RbParams

Clause = list[int]
# clause provenance: ("forbidden", constraint_index, tuple) or ("domain", var, pattern)
Origin = tuple


@dataclass
class Cnf:
    num_vars: int
    clauses: list[Clause] = field(default_factory=list)
    origin: Optional[list[Origin]] = None
    comments: tuple[str, ...] = ()


def bits_per_var(d: int) -> int:
    """Booleans needed per variable: ceil(log2 d)."""
    if d < 2:
        raise ParamError("domain size must be at least 2")
    return (d - 1).bit_length()


def _disagree_literals(first_cnf_var: int, value: int, bits: int) -> list[int]:
    """Literals, one per bit, each true iff the model differs from value there."""
    lits = []
    for j in range(bits):
        var = first_cnf_var + j
        lits.append(-var if (value >> j) & 1 else var)
    return lits


def encode_log(instance: Instance) -> Cnf:
    """Encode an instance; clause order and content are deterministic."""
    n, d, k = instance.n, instance.d, instance.k
    bits = bits_per_var(d)
    num_vars = n * bits
    clauses: list[Clause] = []
    origin: list[Origin] = []

    for ci, c in enumerate(instance.constraints):
        rel = instance.materialized(ci)
        for t in rel.forbidden():
            clause: Clause = []
            for coord, var in enumerate(c.scope):
                clause.extend(_disagree_literals(1 + var * bits, t[coord], bits))
            clauses.append(clause)
            origin.append(("forbidden", ci, t))

    for var in range(n):
        for pattern in range(d, 1 << bits):
            clauses.append(_disagree_literals(1 + var * bits, pattern, bits))
            origin.append(("domain", var, pattern))

    comments = (
        f"seed={instance.params.seed}",
        "params=" + json.dumps(instance.params.to_dict(), separators=(",", ":")),
    )
    return Cnf(num_vars, clauses, origin, comments)


def expected_clause_count(params: RbParams) -> int:
    """m*(d^k - b*d^(k-1)) + n*(2^B - d)."""
    d, k, b = params.d, params.k, params.b
    bits = bits_per_var(d)
    return params.m * (d**k - b * d ** (k - 1)) + params.n * ((1 << bits) - d)


def decode_assignment(model, params: RbParams) -> tuple[int, ...]:
    """Rebuild the value tuple from a full Boolean model.

    ``model`` is a sequence of n*B truth values, bit j of variable i at index
    i*B + j.  Values at or above d mean the model breaks a domain-exclusion
    clause and are rejected.
    """
    bits = bits_per_var(params.d)
    model = list(model)
    if len(model) != params.n * bits:
        raise ParamError(f"model must assign all {params.n * bits} variables")
    values = []
    for i in range(params.n):
        value = 0
        for j in range(bits):
            if model[i * bits + j]:
                value |= 1 << j
        if value >= params.d:
            raise ParamError(f"decoded value {value} for variable {i} is outside [0, {params.d})")
        values.append(value)
    return tuple(values)


def model_from_assignment(assignment, params: RbParams) -> list[bool]:
    """Inverse of decode_assignment for a value tuple."""
    bits = bits_per_var(params.d)
    model = []
    for value in assignment:
        for j in range(bits):
            model.append(bool((value >> j) & 1))
    return model


def write_dimacs(cnf: Cnf, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for comment in cnf.comments:
            fh.write(f"c {comment}\n")
        fh.write(f"p cnf {cnf.num_vars} {len(cnf.clauses)}\n")
        for clause in cnf.clauses:
            fh.write(" ".join(str(lit) for lit in clause))
            fh.write(" 0\n")


def parse_dimacs(path) -> Cnf:
    """Parse a DIMACS CNF file (clauses may span or share lines)."""
    num_vars = num_clauses = None
    tokens: list[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped or stripped.startswith("c"):
                continue
            if stripped.startswith("p"):
                if num_vars is not None:
                    raise DimacsError("malformed header: duplicate problem line")
                parts = stripped.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise DimacsError(f"malformed header: {stripped!r}")
                try:
                    num_vars, num_clauses = int(parts[2]), int(parts[3])
                except ValueError:
                    raise DimacsError(f"malformed header: {stripped!r}") from None
                if num_vars < 0 or num_clauses < 0:
                    raise DimacsError(f"malformed header: {stripped!r}")
                continue
            if num_vars is None:
                raise DimacsError("malformed header: clause before problem line")
            tokens.extend(stripped.split())
    if num_vars is None:
        raise DimacsError("malformed header: no problem line")

    clauses: list[Clause] = []
    current: Clause = []
    for tok in tokens:
        try:
            lit = int(tok)
        except ValueError:
            raise DimacsError(f"literal out of range: {tok!r} is not an integer") from None
        if lit == 0:
            clauses.append(current)
            current = []
            continue
        if abs(lit) > num_vars:
            raise DimacsError(f"literal out of range: {lit} exceeds {num_vars} variables")
        current.append(lit)
    if current:
        raise DimacsError("missing clause terminator at end of file")
    if len(clauses) != num_clauses:
        raise DimacsError(
            f"clause count mismatch: header says {num_clauses}, found {len(clauses)}"
        )
    return Cnf(num_vars, clauses, None, ())
