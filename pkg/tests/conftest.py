import math
import random

import pytest
from hypothesis import settings

from rbsat import derive_params, gen_instance

settings.register_profile("default", deadline=None)
settings.load_profile("default")


def tiny_instance(seed, max_n=5, max_d=4, k_choices=(2, 2, 2, 3), planted=False):
    """Deterministic small random instance; shape chosen by stdlib random."""
    rnd = random.Random(seed)
    k = rnd.choice(k_choices)
    n = rnd.randint(max(k, 2), max_n)
    d = rnd.randint(2, max_d)
    p = rnd.choice((0.3, 0.5, 0.7))
    target_m = rnd.randint(1, int(2 * n * math.log(d)) + 1)
    params = derive_params(
        n=n,
        alpha=math.log(d) / math.log(n),
        p=p,
        k=k,
        seed=rnd.getrandbits(63),
        mode="explicit",
        r=target_m / (n * math.log(d)),
        d=d,
    )
    assert params.m == target_m
    return gen_instance(params, planted=planted and k == 2)


def cnf_model_count(cnf) -> int:
    """Brute-force CNF model count over all 2^N assignments (bitmask oracle)."""
    masks = []
    for clause in cnf.clauses:
        pos = neg = 0
        for lit in clause:
            if lit > 0:
                pos |= 1 << (lit - 1)
            else:
                neg |= 1 << (-lit - 1)
        masks.append((pos, neg))
    count = 0
    for model in range(1 << cnf.num_vars):
        for pos, neg in masks:
            if (model & pos) == 0 and (model & neg) == neg:
                break
        else:
            count += 1
    return count


@pytest.fixture
def tmp_path_file(tmp_path):
    def make(name):
        return str(tmp_path / name)

    return make
