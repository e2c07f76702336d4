"""Instance generation and canonical serialization.

Each constraint stores its scope plus one permutation per coordinate applied
to a shared base relation (coordinate 0 is generated as the identity, the
rest uniformly at random), so all permitted sets are isomorphic images of the
base.  Serialization is canonical — fixed key order, sorted tuples, no
insignificant whitespace — so identical seeds give byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Optional

from .errors import ParamError
from .params import RbParams, derive_params
from .relation import Relation, apply_permutation, gen_base_relation, _check_bijection
from .rng import rng_stream

FORMAT_VERSION = 1

Assignment = tuple[int, ...]


@dataclass(frozen=True)
class Constraint:
    scope: tuple[int, ...]
    perms: tuple[tuple[int, ...], ...]  # one per coordinate


@dataclass(frozen=True)
class Instance:
    params: RbParams
    base: Relation
    base_is_circulant: bool
    constraints: tuple[Constraint, ...]
    planted: Optional[Assignment]

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def k(self) -> int:
        return self.params.k

    def materialized(self, i: int) -> Relation:
        return materialize(self.constraints[i], self.base)

    def constraint_satisfied(self, i: int, assignment: Assignment) -> bool:
        c = self.constraints[i]
        t = tuple(assignment[v] for v in c.scope)
        return _premap(t, c.perms) in self.base

    def satisfies(self, assignment: Assignment) -> bool:
        if len(assignment) != self.n or any(not 0 <= v < self.d for v in assignment):
            raise ParamError("assignment must give every variable a value in [0, d)")
        return all(self.constraint_satisfied(i, assignment) for i in range(len(self.constraints)))

    def violated_constraints(self, assignment: Assignment) -> list[int]:
        return [
            i for i in range(len(self.constraints))
            if not self.constraint_satisfied(i, assignment)
        ]

    def constraints_of(self, var: int) -> list[int]:
        return [i for i, c in enumerate(self.constraints) if var in c.scope]

    def to_json(self) -> str:
        base_obj: dict
        if self.base_is_circulant:
            base_obj = {"kind": "circulant", "b": self.params.b}
        else:
            base_obj = {"kind": "explicit", "tuples": [list(t) for t in self.base.allowed]}
        obj = {
            "format": FORMAT_VERSION,
            "params": self.params.to_dict(),
            "base": base_obj,
            "constraints": [
                {"scope": list(c.scope), "perms": [list(p) for p in c.perms]}
                for c in self.constraints
            ],
            "planted": list(self.planted) if self.planted is not None else None,
        }
        return json.dumps(obj, separators=(",", ":"))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        obj = json.loads(text)
        if obj.get("format") != FORMAT_VERSION:
            raise ParamError(f"unsupported instance format {obj.get('format')!r}")
        params = RbParams.from_dict(obj["params"])
        base_obj = obj["base"]
        if base_obj["kind"] == "circulant":
            base = gen_base_relation(params.d, params.k, base_obj["b"])
            circulant = True
        elif base_obj["kind"] == "explicit":
            base = Relation(params.k, params.d, tuple(map(tuple, base_obj["tuples"])))
            circulant = False
        else:
            raise ParamError(f"unknown base kind {base_obj['kind']!r}")
        constraints = tuple(
            Constraint(tuple(c["scope"]), tuple(map(tuple, c["perms"])))
            for c in obj["constraints"]
        )
        planted = tuple(obj["planted"]) if obj["planted"] is not None else None
        inst = cls(params, base, circulant, constraints, planted)
        _validate(inst)
        return inst

    @classmethod
    def load(cls, path) -> "Instance":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def _premap(t: tuple[int, ...], perms) -> tuple[int, ...]:
    """Pull a materialized tuple back through the coordinate permutations."""
    inv = tuple(_invert(p) for p in perms)
    return tuple(inv[j][t[j]] for j in range(len(t)))


def _invert(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, v in enumerate(perm):
        inv[v] = i
    return tuple(inv)


def materialize(constraint: Constraint, base: Relation) -> Relation:
    """Apply the coordinate permutations to the base relation."""
    rel = base
    for coord, perm in enumerate(constraint.perms):
        if perm != tuple(range(base.d)):
            rel = apply_permutation(rel, coord, perm)
    return rel


def _validate(inst: Instance) -> None:
    p = inst.params
    if len(inst.constraints) != p.m:
        raise ParamError(f"expected {p.m} constraints, found {len(inst.constraints)}")
    if not inst.base_is_circulant and not inst.base.is_regular(p.b):
        raise ParamError("explicit base relation is not regular")
    for c in inst.constraints:
        if len(c.scope) != p.k or len(set(c.scope)) != p.k:
            raise ParamError(f"scope {c.scope} must hold {p.k} distinct variables")
        if any(not 0 <= v < p.n for v in c.scope):
            raise ParamError(f"scope {c.scope} out of range")
        if len(c.perms) != p.k:
            raise ParamError("need one permutation per coordinate")
        for perm in c.perms:
            _check_bijection(perm, p.d)
    if inst.planted is not None and not inst.satisfies(inst.planted):
        raise ParamError("planted assignment does not satisfy the instance")


def gen_instance(params: RbParams, planted: bool = False) -> Instance:
    """Generate the seeded random instance for ``params``.

    Scopes are drawn independently per constraint (duplicates across
    constraints allowed; variables within a scope distinct).  In planted mode
    a uniform assignment is drawn first and each constraint's coordinate-1
    permutation is shifted by a cyclic translation so the assignment's tuple
    is permitted; the shift preserves regularity and is re-verified before
    returning.
    """
    if params.n < params.k:
        raise ParamError("need at least k variables")
    if planted and params.k != 2:
        raise ParamError("planted generation is only defined for k=2")

    d, k, n, seed = params.d, params.k, params.n, params.seed
    base = gen_base_relation(d, k, params.b)
    identity = tuple(range(d))

    sigma: Optional[Assignment] = None
    if planted:
        s = rng_stream(seed, "planted", 0)
        sigma = tuple(s.bounded(d) for _ in range(n))

    constraints = []
    for i in range(params.m):
        scope = rng_stream(seed, "scope", i).ordered_subset(n, k)
        perm_stream = rng_stream(seed, "perm", i)
        perms = [identity] + [perm_stream.permutation(d) for _ in range(k - 1)]
        if planted:
            x, y = scope
            row = sorted(t[1] for t in base.row(0, sigma[x]))
            pick = rng_stream(seed, "planted", i + 1).bounded(len(row))
            shift = (sigma[y] - perms[1][row[pick]]) % d
            perms[1] = tuple((v + shift) % d for v in perms[1])
        constraints.append(Constraint(scope, tuple(perms)))

    inst = Instance(params, base, True, tuple(constraints), sigma)
    if planted and not inst.satisfies(sigma):
        raise ParamError("internal error: planted assignment not satisfying")
    return inst


def fixture_instance(
    n: int,
    d: int,
    b: int,
    constraints: tuple[Constraint, ...],
    base: Relation | None = None,
    k: int = 2,
    seed: int = 0,
) -> Instance:
    """Hand-built instance for tests and worked examples.

    Derives a parameter set whose m matches the constraint list (p is set
    from b/d; r chosen so m rounds exactly).
    """
    import math

    m = len(constraints)
    params = derive_params(
        n=n, alpha=math.log(d) / math.log(n) if n > 1 else 1.0,
        p=1 - b / d, k=k, seed=seed,
        mode="explicit", r=m / (n * math.log(d)), d=d,
    )
    if params.m != m or params.b != b:
        raise ParamError("fixture parameters did not round as expected")
    circulant = base is None
    inst = Instance(params, base if base is not None else gen_base_relation(d, k, b),
                    circulant, constraints, None)
    _validate(inst)
    return inst


def drop_planted(inst: Instance) -> Instance:
    return replace(inst, planted=None)
