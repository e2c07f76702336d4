"""Experiment orchestration: phase sweeps, threshold suites, flip suites.

Every trial derives its own instance seed (and any auxiliary draws) from
(master seed, point index, trial index), so single trials can be replayed in
isolation and parallel runs aggregate to exactly the same records as serial
ones.  Records store raw counts only; frequencies and Wilson intervals are
derived on demand.  Wall time is tracked per record but deliberately kept out
of the persisted files so identical seeds give byte-identical output.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

from .errors import (
    BudgetExceededError,
    NoSelfUnsatConstraintError,
    NoSwapPairError,
    SchemaError,
)
from .instance import gen_instance
from .params import derive_params, validate_alpha
from .rng import rng_stream
from .search.analysis import self_unsat_analysis
from .search.engine import DEFAULT_BUDGET, solve
from .symmetry import default_flip_variable, flip_sat_to_unsat, flip_unsat_to_sat

#: (n, d) pairs at p=0.5, k=2 small enough for exact counting in minutes
REFERENCE_SCALES = ((8, 8), (10, 10), (12, 12))

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SweepConfig:
    n: int
    alpha: float
    p: float
    k: int
    trials: int
    seed: int
    budget: int = DEFAULT_BUDGET
    r_points: tuple[float, ...] = ()

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial per point")
        if self.r_points and list(self.r_points) != sorted(self.r_points):
            object.__setattr__(self, "r_points", tuple(sorted(self.r_points)))

    @classmethod
    def from_grid(cls, n, alpha, p, k, r_min, r_max, steps, trials, seed, budget=DEFAULT_BUDGET):
        if steps < 1:
            raise ValueError("need at least one grid step")
        if steps == 1:
            points = (r_min,)
        else:
            width = (r_max - r_min) / (steps - 1)
            points = tuple(r_min + i * width for i in range(steps))
        return cls(n, alpha, p, k, trials, seed, budget, points)

    @classmethod
    def from_factors(cls, n, alpha, p, k, factors, trials, seed, budget=DEFAULT_BUDGET):
        """Points expressed as multiples of the critical density."""
        probe = derive_params(n, alpha, p, k, seed=0)
        points = tuple(f * probe.r_cr for f in factors)
        return cls(n, alpha, p, k, trials, seed, budget, points)


def reference_threshold_config(n, d, trials, seed, budget=DEFAULT_BUDGET) -> SweepConfig:
    """Threshold-mode config for a reference (n, d) scale at p=0.5, k=2."""
    alpha = math.log(d) / math.log(n)
    return SweepConfig(n, alpha, 0.5, 2, trials, seed, budget, ())


@dataclass(frozen=True)
class ExperimentRecord:
    suite: str
    point_index: int
    n: int
    alpha: float
    p: float
    k: int
    d: int
    b: int
    p_eff: float
    r: float
    m: int
    seed: int
    avoid_size: int = 0
    trials: int = 0
    sat_count: int = 0
    unsat_count: int = 0
    budget_exhausted_count: int = 0
    unique_solution_count: int = 0
    self_unsat_formula_count: int = 0
    analysis_incomplete_count: int = 0
    flip_s2u_attempts: int = 0
    flip_s2u_success: int = 0
    flip_u2s_attempts: int = 0
    flip_u2s_success: int = 0
    swap_fail_count: int = 0
    witness_fail_count: int = 0
    class_exit_count: int = 0
    invariance_checked: int = 0
    invariance_ok: int = 0
    u_in_avoid_count: int = 0
    witness_ok_count: int = 0
    sum_solutions: int = 0
    sum_solutions_sq: int = 0
    sum_nodes: int = 0
    wall_time: float = field(default=0.0, compare=False)

    @property
    def mean_nodes(self) -> float:
        return self.sum_nodes / self.trials if self.trials else 0.0


#: persisted columns, in order (wall time is intentionally not persisted)
CSV_COLUMNS = tuple(f.name for f in fields(ExperimentRecord) if f.name != "wall_time")

_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentRecord)}


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials == 0:
        return (0.0, 1.0)
    phat = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def trial_stream(master_seed: int, point_index: int, trial: int):
    """The dedicated randomness stream of one trial."""
    return rng_stream(master_seed, "harness", (point_index << 32) | trial)


def _point_params(config: SweepConfig, r: float | None, seed: int):
    if r is None:
        return derive_params(config.n, config.alpha, config.p, config.k, seed, mode="threshold")
    return derive_params(config.n, config.alpha, config.p, config.k, seed, mode="explicit", r=r)


# ---------------------------------------------------------------------------
# per-trial workers (module level so process pools can pickle them)

def phase_trial(config: SweepConfig, point_index: int, r: float, trial: int) -> dict:
    seed = trial_stream(config.seed, point_index, trial).next_uint64()
    params = _point_params(config, r, seed)
    report = solve(gen_instance(params), mode="decide", budget=config.budget)
    return {
        "sat_count": int(report.status == "SAT"),
        "unsat_count": int(report.status == "UNSAT"),
        "budget_exhausted_count": int(report.status == "BUDGET_EXHAUSTED"),
        "sum_nodes": report.nodes,
    }


def threshold_trial(config: SweepConfig, point_index: int, trial: int) -> dict:
    seed = trial_stream(config.seed, point_index, trial).next_uint64()
    params = _point_params(config, None, seed)
    instance = gen_instance(params)
    report = solve(instance, mode="count", budget=config.budget)
    out = {
        "sat_count": 0, "unsat_count": 0, "budget_exhausted_count": 0,
        "unique_solution_count": 0, "self_unsat_formula_count": 0,
        "analysis_incomplete_count": 0,
        "sum_solutions": 0, "sum_solutions_sq": 0, "sum_nodes": report.nodes,
    }
    if report.status == "BUDGET_EXHAUSTED":
        out["budget_exhausted_count"] = 1
        return out
    x = report.count
    out["sum_solutions"] = x
    out["sum_solutions_sq"] = x * x
    if x >= 1:
        out["sat_count"] = 1
        out["unique_solution_count"] = int(x == 1)
    else:
        out["unsat_count"] = 1
        try:
            analysis = self_unsat_analysis(instance, budget=config.budget)
            out["self_unsat_formula_count"] = int(analysis.is_self_unsat_formula)
        except BudgetExceededError:
            out["analysis_incomplete_count"] = 1
    return out


def flip_trial(config: SweepConfig, point_index: int, trial: int, avoid_size: int) -> dict:
    stream = trial_stream(config.seed, point_index, trial)
    seed = stream.next_uint64()
    params = _point_params(config, None, seed)
    instance = gen_instance(params)
    avoid = stream.ordered_subset(params.d, avoid_size) if avoid_size else ()

    out = {
        "sat_count": 0, "unsat_count": 0, "budget_exhausted_count": 0,
        "unique_solution_count": 0,
        "flip_s2u_attempts": 0, "flip_s2u_success": 0,
        "flip_u2s_attempts": 0, "flip_u2s_success": 0,
        "swap_fail_count": 0, "witness_fail_count": 0,
        "class_exit_count": 0,
        "invariance_checked": 0, "invariance_ok": 0,
        "u_in_avoid_count": 0, "witness_ok_count": 0,
        "sum_nodes": 0,
    }
    classify = solve(instance, mode="enumerate", cap=2, budget=config.budget)
    out["sum_nodes"] = classify.nodes
    if classify.status == "BUDGET_EXHAUSTED":
        out["budget_exhausted_count"] = 1
        return out
    sols = classify.solutions
    out["sat_count"] = int(len(sols) >= 1)
    out["unsat_count"] = int(len(sols) == 0)
    out["unique_solution_count"] = int(len(sols) == 1)
    if len(sols) >= 2:
        return out  # outside the unique-or-unsatisfiable class

    x = default_flip_variable(instance)
    try:
        if len(sols) == 1:
            post, outcome = flip_sat_to_unsat(
                instance, sols[0], x, avoid, budget=config.budget
            )
            out["flip_s2u_attempts"] = 1
            out["flip_s2u_success"] = int(outcome.post_status == "UNSAT")
        else:
            post, outcome = flip_unsat_to_sat(instance, x, avoid, budget=config.budget)
            out["flip_u2s_attempts"] = 1
            out["flip_u2s_success"] = int(outcome.post_status == "SAT")
            out["witness_ok_count"] = int(post.satisfies(outcome.witness))
    except NoSwapPairError:
        out["swap_fail_count"] = 1
        return out
    except NoSelfUnsatConstraintError:
        out["witness_fail_count"] = 1
        return out

    if outcome.swap.u in avoid:
        out["u_in_avoid_count"] = 1
    else:
        out["invariance_checked"] = 1
        out["invariance_ok"] = int(outcome.subproblems_unchanged)

    post_classify = solve(post, mode="enumerate", cap=2, budget=config.budget)
    if post_classify.status != "BUDGET_EXHAUSTED":
        out["class_exit_count"] = int(len(post_classify.solutions) >= 2)
    return out


# ---------------------------------------------------------------------------

def _aggregate(config, suite, point_index, r, avoid_size, tallies) -> ExperimentRecord:
    params = _point_params(config, r, 0)
    totals: dict[str, int] = {}
    for t in tallies:
        for key, value in t.items():
            totals[key] = totals.get(key, 0) + value
    return ExperimentRecord(
        suite=suite,
        point_index=point_index,
        n=config.n,
        alpha=config.alpha,
        p=config.p,
        k=config.k,
        d=params.d,
        b=params.b,
        p_eff=params.p_eff,
        r=params.r,
        m=params.m,
        seed=config.seed,
        avoid_size=avoid_size,
        trials=config.trials,
        **totals,
    )


def _map_trials(worker_args, jobs: int):
    if jobs <= 1:
        return [_dispatch(args) for args in worker_args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_dispatch, worker_args, chunksize=8))


def _dispatch(args):
    kind = args[0]
    if kind == "phase":
        return phase_trial(*args[1:])
    if kind == "threshold":
        return threshold_trial(*args[1:])
    return flip_trial(*args[1:])


def default_jobs() -> int:
    return int(os.environ.get("RB_JOBS", "1"))


def run_phase_sweep(config: SweepConfig, jobs: int | None = None) -> list[ExperimentRecord]:
    """Empirical satisfiability probability across the density grid."""
    if not config.r_points:
        raise ValueError("phase sweep needs r_points")
    jobs = default_jobs() if jobs is None else jobs
    records = []
    for point_index, r in enumerate(config.r_points):
        start = time.perf_counter()
        args = [("phase", config, point_index, r, t) for t in range(config.trials)]
        tallies = _map_trials(args, jobs)
        record = _aggregate(config, "phase", point_index, r, 0, tallies)
        records.append(replace(record, wall_time=time.perf_counter() - start))
    return records


def run_threshold_suite(config: SweepConfig, jobs: int | None = None) -> ExperimentRecord:
    """Exact counting statistics at the threshold density."""
    jobs = default_jobs() if jobs is None else jobs
    start = time.perf_counter()
    args = [("threshold", config, 0, t) for t in range(config.trials)]
    tallies = _map_trials(args, jobs)
    record = _aggregate(config, "threshold", 0, None, 0, tallies)
    return replace(record, wall_time=time.perf_counter() - start)


def run_flip_suite(
    config: SweepConfig,
    jobs: int | None = None,
    avoid_sizes: tuple[int, ...] | None = None,
) -> list[ExperimentRecord]:
    """Directional flips over the unique-or-unsatisfiable class, per avoid size."""
    if config.k != 2:
        raise ValueError("flip suites need k=2")
    jobs = default_jobs() if jobs is None else jobs
    probe = _point_params(config, None, 0)
    if avoid_sizes is None:
        avoid_sizes = (0, math.isqrt(probe.d - 1) + 1)  # ceil(sqrt(d))
    records = []
    for point_index, avoid_size in enumerate(avoid_sizes):
        start = time.perf_counter()
        args = [("flip", config, point_index, t, avoid_size) for t in range(config.trials)]
        tallies = _map_trials(args, jobs)
        record = _aggregate(config, "flip", point_index, None, avoid_size, tallies)
        records.append(replace(record, wall_time=time.perf_counter() - start))
    return records


def summarize(record: ExperimentRecord) -> dict:
    """Frequencies with Wilson 95% intervals, plus the alpha-condition flags."""
    params = derive_params(record.n, record.alpha, record.p, record.k, 0)
    decided = record.sat_count + record.unsat_count

    def rate(successes, trials):
        lo, hi = wilson_interval(successes, trials)
        return {
            "successes": successes,
            "trials": trials,
            "rate": successes / trials if trials else None,
            "wilson95": [lo, hi],
        }

    out = {
        "suite": record.suite,
        "point_index": record.point_index,
        "r": record.r,
        "m": record.m,
        "d": record.d,
        "avoid_size": record.avoid_size,
        "sat": rate(record.sat_count, decided),
        "unique_solution": rate(record.unique_solution_count, decided),
        "self_unsat_formula_given_unsat": rate(
            record.self_unsat_formula_count,
            record.unsat_count - record.analysis_incomplete_count,
        ),
        "flip_s2u_success": rate(record.flip_s2u_success, record.flip_s2u_attempts),
        "flip_u2s_success": rate(record.flip_u2s_success, record.flip_u2s_attempts),
        "class_exit": rate(
            record.class_exit_count, record.flip_s2u_attempts + record.flip_u2s_attempts
        ),
        "invariance": rate(record.invariance_ok, record.invariance_checked),
        "mean_nodes": record.mean_nodes,
        "mean_solutions": record.sum_solutions / decided if decided else None,
        "alpha_condition": validate_alpha(params).to_dict(),
    }
    return out


# ---------------------------------------------------------------------------
# persistence

def _record_to_row(record: ExperimentRecord) -> list:
    return [getattr(record, col) for col in CSV_COLUMNS]


def _record_from_dict(data: dict) -> ExperimentRecord:
    kwargs = {}
    for col in CSV_COLUMNS:
        raw = data[col]
        ftype = _FIELD_TYPES[col]
        if ftype == "int":
            kwargs[col] = int(raw)
        elif ftype == "float":
            kwargs[col] = float(raw)
        else:
            kwargs[col] = str(raw)
    return ExperimentRecord(**kwargs)


def persist(records, path, fmt: str | None = None) -> None:
    """Write records as CSV or JSON (inferred from the extension)."""
    fmt = fmt or ("json" if str(path).endswith(".json") else "csv")
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for record in records:
                writer.writerow(_record_to_row(record))
    elif fmt == "json":
        obj = {
            "schema": SCHEMA_VERSION,
            "records": [dict(zip(CSV_COLUMNS, _record_to_row(r))) for r in records],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, separators=(",", ":"))
            fh.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def load(path, fmt: str | None = None) -> list[ExperimentRecord]:
    fmt = fmt or ("json" if str(path).endswith(".json") else "csv")
    if fmt == "csv":
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(header) != CSV_COLUMNS:
                raise SchemaError(f"CSV header does not match schema version {SCHEMA_VERSION}")
            return [_record_from_dict(dict(zip(CSV_COLUMNS, row))) for row in reader]
    if fmt == "json":
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        if obj.get("schema") != SCHEMA_VERSION:
            raise SchemaError(f"expected schema {SCHEMA_VERSION}, found {obj.get('schema')!r}")
        return [_record_from_dict(d) for d in obj["records"]]
    raise ValueError(f"unknown format {fmt!r}")
