import itertools

import pytest

from rbsat.encode import (
    Cnf,
    bits_per_var,
    decode_assignment,
    encode_log,
    expected_clause_count,
    model_from_assignment,
    parse_dimacs,
    write_dimacs,
)
from rbsat.errors import DimacsError, ParamError
from rbsat.instance import Constraint, fixture_instance, gen_instance
from rbsat.params import derive_params
from rbsat.search import brute_force_count, solve

from conftest import cnf_model_count, tiny_instance


@pytest.mark.parametrize("d,bits", [(2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (40, 6), (64, 6), (65, 7)])
def test_bits_per_var(d, bits):
    assert bits_per_var(d) == bits


def test_bits_per_var_rejects_unit_domain():
    with pytest.raises(ParamError):
        bits_per_var(1)


def test_power_of_two_domain_has_no_exclusions():
    params = derive_params(4, 1.0, 0.5, 2, seed=1)
    cnf = encode_log(gen_instance(params))
    assert all(origin[0] == "forbidden" for origin in cnf.origin)
    assert len(cnf.clauses) == expected_clause_count(params)


def test_single_constraint_census():
    identity = tuple(range(4))
    inst = fixture_instance(
        n=2, d=4, b=2, constraints=(Constraint((0, 1), (identity, identity)),)
    )
    cnf = encode_log(inst)
    # d^2 - b*d = 16 - 8 = 8 forbidden-tuple clauses of length k*B = 4
    assert cnf.num_vars == 4
    assert len(cnf.clauses) == 8
    assert all(len(clause) == 4 for clause in cnf.clauses)
    # oracle: enumerate the circulant complement directly
    complement = [
        t for t in itertools.product(range(4), repeat=2) if (t[1] - t[0]) % 4 >= 2
    ]
    assert sorted(origin[2] for origin in cnf.origin) == sorted(complement)


def test_clause_census_formula():
    for seed in range(20):
        inst = tiny_instance(seed)
        cnf = encode_log(inst)
        assert len(cnf.clauses) == expected_clause_count(inst.params)
        bits = bits_per_var(inst.d)
        assert cnf.num_vars == inst.n * bits
        for clause, origin in zip(cnf.clauses, cnf.origin):
            if origin[0] == "forbidden":
                assert len(clause) == inst.k * bits
            else:
                assert len(clause) == bits
            assert len(set(map(abs, clause))) == len(clause)


def test_model_count_bijection():
    for seed in range(25):
        inst = tiny_instance(seed)
        cnf = encode_log(inst)
        if cnf.num_vars > 14:
            continue
        assert cnf_model_count(cnf) == brute_force_count(inst), f"seed {seed}"


def test_decode_roundtrip_planted():
    params = derive_params(5, 1.0, 0.5, 2, seed=9)
    inst = gen_instance(params, planted=True)
    model = model_from_assignment(inst.planted, params)
    assert decode_assignment(model, params) == inst.planted


def test_decode_all_zero_model():
    params = derive_params(4, 1.0, 0.5, 2, seed=0)
    bits = bits_per_var(params.d)
    assert decode_assignment([False] * (params.n * bits), params) == (0,) * params.n


def test_decode_rejects_out_of_domain():
    params = derive_params(4, 1.0, 0.5, 2, seed=0, d=3)
    bits = bits_per_var(params.d)
    model = [True] * (params.n * bits)  # value 3 >= d
    with pytest.raises(ParamError):
        decode_assignment(model, params)
    with pytest.raises(ParamError):
        decode_assignment([False] * 3, params)


def test_satisfying_models_decode_to_solutions():
    checked = 0
    for seed in range(40):
        inst = tiny_instance(seed)
        cnf = encode_log(inst)
        if cnf.num_vars > 12:
            continue
        masks = []
        for clause in cnf.clauses:
            pos = neg = 0
            for lit in clause:
                if lit > 0:
                    pos |= 1 << (lit - 1)
                else:
                    neg |= 1 << (-lit - 1)
            masks.append((pos, neg))
        for model_bits in range(1 << cnf.num_vars):
            if all(
                (model_bits & pos) != 0 or (model_bits & neg) != neg
                for pos, neg in masks
            ):
                model = [(model_bits >> i) & 1 for i in range(cnf.num_vars)]
                assignment = decode_assignment(model, inst.params)
                assert inst.satisfies(assignment)
                checked += 1
                break
    assert checked >= 10


def test_dimacs_roundtrip(tmp_path):
    import random

    rnd = random.Random(5)
    for case in range(100):
        num_vars = rnd.randint(1, 9)
        clauses = [
            [rnd.choice([-1, 1]) * rnd.randint(1, num_vars) for _ in range(rnd.randint(1, 4))]
            for _ in range(rnd.randint(0, 12))
        ]
        cnf = Cnf(num_vars, clauses, None, (f"case {case}",))
        path = tmp_path / f"case{case}.cnf"
        write_dimacs(cnf, path)
        parsed = parse_dimacs(path)
        assert parsed.num_vars == cnf.num_vars
        assert parsed.clauses == cnf.clauses


def test_dimacs_empty_clause_list(tmp_path):
    path = tmp_path / "empty.cnf"
    write_dimacs(Cnf(7, []), path)
    text = path.read_text()
    assert text == "p cnf 7 0\n"
    parsed = parse_dimacs(path)
    assert parsed.num_vars == 7 and parsed.clauses == []


def test_dimacs_header_count_matches_lines(tmp_path):
    inst = tiny_instance(6)
    cnf = encode_log(inst)
    path = tmp_path / "t.cnf"
    write_dimacs(cnf, path)
    lines = path.read_text().splitlines()
    header = next(line for line in lines if line.startswith("p "))
    clause_lines = [line for line in lines if line and not line[0] in "cp"]
    assert int(header.split()[3]) == len(clause_lines) == len(cnf.clauses)


def test_dimacs_comments_carry_provenance(tmp_path):
    inst = tiny_instance(2)
    cnf = encode_log(inst)
    path = tmp_path / "p.cnf"
    write_dimacs(cnf, path)
    text = path.read_text()
    assert f"c seed={inst.params.seed}" in text
    parsed = parse_dimacs(path)  # comments ignored
    assert parsed.clauses == cnf.clauses


@pytest.mark.parametrize(
    "content,message",
    [
        ("p dnf 2 1\n1 2 0\n", "malformed header"),
        ("p cnf 2\n1 2 0\n", "malformed header"),
        ("1 2 0\n", "malformed header"),
        ("p cnf 2 1\n1 3 0\n", "literal out of range"),
        ("p cnf 2 1\n1 x 0\n", "literal out of range"),
        ("p cnf 2 1\n1 2\n", "missing clause terminator"),
        ("p cnf 2 2\n1 2 0\n", "clause count mismatch"),
    ],
)
def test_dimacs_parse_errors(tmp_path, content, message):
    path = tmp_path / "bad.cnf"
    path.write_text(content)
    with pytest.raises(DimacsError, match=message):
        parse_dimacs(path)


def test_exponent_bookkeeping_power_of_two():
    # with d = 2^B the CSP space d^n equals the CNF space 2^N exactly
    params = derive_params(5, 1.0, 0.5, 2, seed=0, d=8)
    bits = bits_per_var(params.d)
    n_bool = params.n * bits
    assert params.d**params.n == 2**n_bool
    assert expected_clause_count(params) == params.m * (
        params.d**2 - params.b * params.d
    )
