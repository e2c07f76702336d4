"""Permitted-tuple sets and the regular base relation.

A Relation is an arity-k set of allowed value tuples over [0, d).  Generated
bases are *regular*: every value of every coordinate appears in exactly
b * d^(k-2) allowed tuples, so all domain values play symmetric roles.  The
shipped construction is circulant: a tuple is allowed iff the difference
(t_1 + ... + t_{k-1}) - t_0 falls in {0, ..., b-1} modulo d.  Arbitrary
explicit tuple sets are also representable (projections and complements are
generally irregular; regularity is a checked property, not a constructor
requirement).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ParamError


@dataclass(frozen=True)
class Relation:
    arity: int
    d: int
    allowed: tuple[tuple[int, ...], ...]  # sorted, deduplicated
    _index: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        canon = tuple(sorted(set(map(tuple, self.allowed))))
        object.__setattr__(self, "allowed", canon)
        object.__setattr__(self, "_index", frozenset(canon))
        for t in canon:
            if len(t) != self.arity or any(not 0 <= v < self.d for v in t):
                raise ParamError(f"tuple {t} is not an arity-{self.arity} tuple over [0,{self.d})")

    def __contains__(self, t) -> bool:
        return tuple(t) in self._index

    def __len__(self) -> int:
        return len(self.allowed)

    def row(self, coord: int, value: int) -> tuple[tuple[int, ...], ...]:
        """Allowed tuples whose coordinate ``coord`` equals ``value``."""
        return tuple(t for t in self.allowed if t[coord] == value)

    def coordinate_degrees(self, coord: int) -> list[int]:
        counts = [0] * self.d
        for t in self.allowed:
            counts[t[coord]] += 1
        return counts

    def is_regular(self, b: int) -> bool:
        """Exact regularity check: size b*d^(k-1), per-value degree b*d^(k-2)."""
        if len(self.allowed) != b * self.d ** (self.arity - 1):
            return False
        expected = b * self.d ** (self.arity - 2) if self.arity >= 2 else b
        return all(
            count == expected
            for coord in range(self.arity)
            for count in self.coordinate_degrees(coord)
        )

    def complement(self) -> "Relation":
        """All tuples over [0,d)^k not in this relation."""
        forbidden = [
            t for t in itertools.product(range(self.d), repeat=self.arity)
            if t not in self._index
        ]
        return Relation(self.arity, self.d, tuple(forbidden))

    def forbidden(self) -> tuple[tuple[int, ...], ...]:
        return self.complement().allowed


def gen_base_relation(d: int, k: int, b: int) -> Relation:
    """Circulant regular base: b offsets per row of each coordinate."""
    if k < 2:
        raise ParamError("arity k must be at least 2")
    if not 1 <= b <= d - 1:
        raise ParamError(f"b={b} must lie in [1, {d - 1}]")
    tuples = []
    for rest in itertools.product(range(d), repeat=k - 1):
        total = sum(rest) % d
        for offset in range(b):
            tuples.append(((total - offset) % d, *rest))
    return Relation(k, d, tuple(tuples))


def apply_permutation(relation: Relation, coord: int, perm: tuple[int, ...]) -> Relation:
    """Replace coordinate ``coord`` of every tuple by its image under ``perm``."""
    if not 0 <= coord < relation.arity:
        raise ParamError(f"coordinate {coord} out of range for arity {relation.arity}")
    _check_bijection(perm, relation.d)
    mapped = tuple(
        t[:coord] + (perm[t[coord]],) + t[coord + 1:] for t in relation.allowed
    )
    return Relation(relation.arity, relation.d, mapped)


def transposition(d: int, u: int, u_prime: int) -> tuple[int, ...]:
    """The permutation of [0, d) exchanging u and u_prime."""
    perm = list(range(d))
    perm[u], perm[u_prime] = perm[u_prime], perm[u]
    return tuple(perm)


def compose(outer: tuple[int, ...], inner: tuple[int, ...]) -> tuple[int, ...]:
    """Composition outer(inner(x))."""
    return tuple(outer[inner[x]] for x in range(len(inner)))


def _check_bijection(perm, d: int) -> None:
    if len(perm) != d or sorted(perm) != list(range(d)):
        raise ParamError("permutation must be a bijection on [0, d)")
