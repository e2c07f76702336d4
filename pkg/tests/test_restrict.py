import pytest

from rbsat.errors import ParamError
from rbsat.problem import from_instance, restrict
from rbsat.search import brute_force_count, solve

from conftest import tiny_instance


def test_counting_identity_over_all_values():
    for seed in range(25):
        inst = tiny_instance(seed)
        problem = from_instance(inst)
        total = brute_force_count(problem)
        for var in range(inst.n):
            split = sum(
                brute_force_count(restrict(problem, var, v)) for v in range(inst.d)
            )
            assert split == total, f"seed {seed} var {var}"


def test_solution_bijection():
    inst = tiny_instance(12)
    problem = from_instance(inst)
    var, value = 0, 1
    sub = restrict(problem, var, value)
    full = solve(problem, mode="enumerate", cap=10000).solutions
    expected = sorted(
        tuple(v for i, v in enumerate(s) if i != var) for s in full if s[var] == value
    )
    assert list(solve(sub, mode="enumerate", cap=10000).solutions) == expected


def test_restriction_commutes():
    for seed in (2, 9, 17):
        inst = tiny_instance(seed)
        if inst.n < 3:
            continue
        problem = from_instance(inst)
        a = restrict(restrict(problem, 0, 1), 2, 0)
        b = restrict(restrict(problem, 2, 0), 0, 1)
        assert a.canonical() == b.canonical()
        assert a == b


def test_unary_sets_intersect():
    # two constraints sharing y both project onto y; the unary sets intersect
    from rbsat.instance import Constraint, fixture_instance

    identity = tuple(range(4))
    shift = (1, 2, 3, 0)
    inst = fixture_instance(
        n=3, d=4, b=2,
        constraints=(
            Constraint((0, 1), (identity, identity)),
            Constraint((2, 1), (identity, shift)),
        ),
    )
    problem = from_instance(inst)
    step = restrict(problem, 0, 0)
    row0 = {t[1] for t in problem.constraints[0].relation.row(0, 0)}
    assert set(step.unary[1]) == row0
    step2 = restrict(step, 2, 1)
    row1 = {t[1] for t in problem.constraints[1].relation.row(0, 1)}
    assert set(step2.unary[1]) == row0 & row1


def test_restrict_to_excluded_value_contradicts():
    inst = tiny_instance(4)
    problem = from_instance(inst)
    sub = restrict(problem, 0, 0)
    if not sub.variables:
        return
    y = sub.variables[0]
    allowed = set(sub.allowed_values(y))
    missing = next((v for v in range(sub.d) if v not in allowed), None)
    if missing is None:
        return
    dead = restrict(sub, y, missing)
    assert dead.contradiction
    assert brute_force_count(dead) == 0
    assert solve(dead, mode="count").count == 0


def test_restrict_variable_without_constraints():
    from rbsat.problem import Problem

    problem = Problem(d=3, variables=(0, 1), constraints=())
    sub = restrict(problem, 1, 2)
    assert sub.variables == (0,)
    assert brute_force_count(sub) == 3


def test_restrict_ternary_projects_to_binary():
    inst = tiny_instance(1, k_choices=(3,))
    problem = from_instance(inst)
    c = problem.constraints[0]
    var = c.scope[0]
    sub = restrict(problem, var, 0)
    projected = [pc for pc in sub.constraints if set(pc.scope) < set(c.scope)]
    assert all(pc.relation.arity == 2 for pc in projected)
    # counting identity still holds through the mixed-arity path
    total = brute_force_count(problem)
    split = sum(brute_force_count(restrict(problem, var, v)) for v in range(inst.d))
    assert split == total


def test_restrict_rejects_bad_arguments():
    inst = tiny_instance(3)
    problem = from_instance(inst)
    with pytest.raises(ParamError):
        restrict(problem, 99, 0)
    with pytest.raises(ParamError):
        restrict(problem, 0, problem.d)
