import itertools

import pytest
from hypothesis import given, settings, strategies as st

from rbsat.errors import ParamError
from rbsat.instance import Constraint, materialize
from rbsat.relation import Relation, apply_permutation, gen_base_relation, transposition
from rbsat.rng import rng_stream

# the worked 4x4 block example, shifted to 0-based values
BLOCK_4 = ((0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3))


def test_circulant_4_2_2_rows():
    rel = gen_base_relation(4, 2, 2)
    assert len(rel) == 8
    for u in range(4):
        assert {t[1] for t in rel.row(0, u)} == {u, (u + 1) % 4}
    assert rel.is_regular(2)


def test_block_fixture_is_regular():
    rel = Relation(2, 4, BLOCK_4)
    assert rel.is_regular(2)


def test_circulant_3_3_1_against_enumeration():
    rel = gen_base_relation(3, 3, 1)
    # oracle: filter the full product by the defining predicate
    expected = sorted(
        t for t in itertools.product(range(3), repeat=3)
        if (t[1] + t[2] - t[0]) % 3 < 1
    )
    assert list(rel.allowed) == expected
    assert len(rel) == 9
    for coord in range(3):
        assert rel.coordinate_degrees(coord) == [3, 3, 3]


@given(st.integers(2, 7), st.integers(2, 3), st.data())
@settings(max_examples=60)
def test_circulant_matches_predicate_oracle(d, k, data):
    b = data.draw(st.integers(1, d - 1))
    rel = gen_base_relation(d, k, b)
    expected = sorted(
        t for t in itertools.product(range(d), repeat=k)
        if (sum(t[1:]) - t[0]) % d < b
    )
    assert list(rel.allowed) == expected
    assert rel.is_regular(b)


def test_gen_base_relation_rejects_bad_b():
    with pytest.raises(ParamError):
        gen_base_relation(4, 2, 0)
    with pytest.raises(ParamError):
        gen_base_relation(4, 2, 4)


def test_apply_permutation_worked_example():
    # f(1)=3, f(2)=1, f(3)=4, f(4)=2 in 1-based values, on coordinate 0
    rel = Relation(2, 4, BLOCK_4)
    perm = (2, 0, 3, 1)
    mapped = apply_permutation(rel, 0, perm)
    expected = sorted(
        [(2, 0), (2, 1), (0, 0), (0, 1), (3, 2), (3, 3), (1, 2), (1, 3)]
    )
    assert list(mapped.allowed) == expected


def test_apply_permutation_identity_and_inverse():
    rel = gen_base_relation(5, 2, 2)
    identity = tuple(range(5))
    assert apply_permutation(rel, 1, identity) == rel
    perm = (2, 0, 4, 1, 3)
    inverse = tuple(perm.index(i) for i in range(5))
    assert apply_permutation(apply_permutation(rel, 0, perm), 0, inverse) == rel


def test_apply_permutation_rejects_non_bijection():
    rel = gen_base_relation(4, 2, 2)
    with pytest.raises(ParamError):
        apply_permutation(rel, 0, (0, 0, 1, 2))
    with pytest.raises(ParamError):
        apply_permutation(rel, 0, (0, 1, 2))


@given(st.integers(0, 2**32), st.integers(3, 8))
@settings(max_examples=60)
def test_permutation_preserves_regularity(seed, d):
    b = d // 2
    rel = gen_base_relation(d, 2, b)
    stream = rng_stream(seed, "perm", 0)
    for coord in (0, 1):
        rel = apply_permutation(rel, coord, stream.permutation(d))
    assert len(rel) == b * d
    assert rel.is_regular(b)


def test_materialize_identity_and_invariants():
    base = gen_base_relation(6, 2, 3)
    identity = tuple(range(6))
    assert materialize(Constraint((0, 1), (identity, identity)), base) == base
    stream = rng_stream(5, "perm", 0)
    for _ in range(50):
        c = Constraint((0, 1), (identity, stream.permutation(6)))
        rel = materialize(c, base)
        assert rel.is_regular(3)


def test_transposition_and_complement():
    assert transposition(4, 1, 3) == (0, 3, 2, 1)
    rel = gen_base_relation(4, 2, 1)
    comp = rel.complement()
    assert len(comp) == 12
    assert not set(rel.allowed) & set(comp.allowed)
    assert sorted(rel.allowed + comp.allowed) == sorted(
        itertools.product(range(4), repeat=2)
    )
