import itertools

import pytest

from rbsat.errors import OracleGuardError
from rbsat.instance import Constraint, gen_instance, fixture_instance
from rbsat.params import derive_params
from rbsat.problem import PConstraint, Problem, from_instance
from rbsat.relation import Relation, gen_base_relation
from rbsat.search import brute_force_count, solve

from conftest import tiny_instance


def test_oracle_agreement_sample():
    for seed in range(60):
        inst = tiny_instance(seed)
        report = solve(inst, mode="count")
        assert report.count == brute_force_count(inst), f"seed {seed}"
        assert (report.status == "SAT") == (report.count >= 1)


def test_unconstrained_problem_counts_domain_product():
    problem = Problem(d=4, variables=(0, 1, 2), constraints=())
    assert solve(problem, mode="count").count == 64
    assert brute_force_count(problem) == 64


def test_two_var_single_constraint_counts_relation_size():
    base = gen_base_relation(5, 2, 2)
    identity = tuple(range(5))
    inst = fixture_instance(
        n=2, d=5, b=2, constraints=(Constraint((0, 1), (identity, identity)),)
    )
    assert solve(inst, mode="count").count == len(base) == 10


def test_empty_relation_is_unsat():
    empty = Relation(2, 3, ())
    problem = Problem(d=3, variables=(0, 1), constraints=(PConstraint((0, 1), empty),))
    report = solve(problem, mode="count")
    assert report.status == "UNSAT" and report.count == 0
    assert brute_force_count(problem) == 0


def test_planted_instance_is_sat():
    params = derive_params(7, 1.0, 0.5, 2, seed=21)
    inst = gen_instance(params, planted=True)
    report = solve(inst, mode="decide")
    assert report.status == "SAT"
    assert inst.satisfies(report.solutions[0])


def test_enumerate_lexicographic_and_capped():
    problem = Problem(d=3, variables=(0, 1), constraints=())
    report = solve(problem, mode="enumerate", cap=100)
    assert report.count == 9
    assert list(report.solutions) == sorted(itertools.product(range(3), repeat=2))
    capped = solve(problem, mode="enumerate", cap=4)
    assert capped.count is None
    assert list(capped.solutions) == sorted(itertools.product(range(3), repeat=2))[:4]
    assert capped.status == "SAT"


def test_enumerated_solutions_verified():
    for seed in (3, 14, 25):
        inst = tiny_instance(seed)
        report = solve(inst, mode="enumerate", cap=50)
        for sol in report.solutions:
            assert inst.satisfies(sol)
        assert list(report.solutions) == sorted(set(report.solutions))


def test_budget_exhaustion_never_wrong():
    inst = tiny_instance(8)
    full = solve(inst, mode="count")
    starved = solve(inst, mode="count", budget=3)
    assert starved.status == "BUDGET_EXHAUSTED"
    assert starved.count is None
    assert starved.nodes <= 4
    assert full.status in ("SAT", "UNSAT")


def test_decide_nodes_never_exceed_count_nodes():
    for seed in range(40):
        inst = tiny_instance(seed)
        decide = solve(inst, mode="decide")
        count = solve(inst, mode="count")
        assert decide.nodes <= count.nodes


def test_unary_restrictions_respected():
    problem = Problem(
        d=4, variables=(0, 1), constraints=(), unary={0: (1, 3), 1: (0,)}
    )
    report = solve(problem, mode="enumerate", cap=10)
    assert list(report.solutions) == [(1, 0), (3, 0)]
    assert brute_force_count(problem) == 2


def test_contradiction_problem():
    problem = Problem(d=3, variables=(0,), constraints=(), contradiction=True)
    report = solve(problem, mode="count")
    assert report.status == "UNSAT" and report.count == 0 and report.nodes == 0


def test_zero_variables():
    assert solve(Problem(d=3, variables=(), constraints=()), mode="count").count == 1


def test_oracle_guard():
    params = derive_params(10, 1.0, 0.5, 2, seed=0)
    with pytest.raises(OracleGuardError):
        brute_force_count(gen_instance(params))


def test_report_json_fields():
    inst = tiny_instance(5)
    report = solve(inst, mode="count")
    import json

    obj = json.loads(report.to_json())
    assert list(obj) == ["status", "count", "nodes", "solutions"]
