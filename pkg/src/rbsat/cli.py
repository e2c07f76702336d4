"""Command-line interface.

Subcommands: gen, solve, analyze, flip, encode, moments, sweep, suite.
``rb solve`` exits 10 for SAT, 20 for UNSAT, 30 when the node budget ran out.
RB_JOBS sets the default for --jobs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import harness
from .analytics import second_moment, thresholds
from .encode import encode_log, write_dimacs
from .errors import RbsatError
from .instance import Instance, gen_instance
from .params import derive_params, validate_alpha
from .search.analysis import degree_stats, self_unsat_analysis
from .search.engine import solve
from .symmetry import flip_sat_to_unsat, flip_unsat_to_sat, default_flip_variable


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
    else:
        print(text)


def _alpha_for(args) -> float:
    if args.d is not None:
        return math.log(args.d) / math.log(args.n)
    if args.alpha is None:
        raise SystemExit("either --alpha or --d is required")
    return args.alpha


def _params_from_args(args):
    alpha = _alpha_for(args)
    mode = "explicit" if getattr(args, "r", None) is not None else "threshold"
    return derive_params(
        args.n, alpha, args.p, args.k, args.seed,
        mode=mode, r=getattr(args, "r", None), d=args.d,
    )


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok != "")


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok != "")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rb", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="search node budget")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--jobs", type=int, default=None,
                        help="parallel trial workers (default: RB_JOBS or 1)")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--n", type=int, required=True)
    model.add_argument("--alpha", type=float, default=None)
    model.add_argument("--d", type=int, default=None, help="explicit domain size")
    model.add_argument("--p", type=float, default=0.5)
    model.add_argument("--k", type=int, default=2)

    p_gen = sub.add_parser("gen", parents=[common, model], help="generate an instance")
    p_gen.add_argument("--r", type=float, default=None, help="explicit density (default: threshold)")
    p_gen.add_argument("--planted", action="store_true", help="force a planted solution")

    p_solve = sub.add_parser("solve", parents=[common], help="solve an instance exactly")
    p_solve.add_argument("instance")
    p_solve.add_argument("--mode", choices=("decide", "count", "enumerate"), default="decide")
    p_solve.add_argument("--cap", type=int, default=100)

    p_analyze = sub.add_parser("analyze", parents=[common], help="degree and structure reports")
    p_analyze.add_argument("instance")
    p_analyze.add_argument("--self-unsat", action="store_true",
                           help="also run the (solver-heavy) self-unsatisfiability analysis")

    p_flip = sub.add_parser("flip", parents=[common], help="apply a satisfiability flip")
    p_flip.add_argument("instance")
    p_flip.add_argument("--direction", choices=("sat_to_unsat", "unsat_to_sat"), required=True)
    p_flip.add_argument("--var", type=int, default=None, help="variable to flip on")
    p_flip.add_argument("--avoid", default="", help="comma-separated avoid values")
    p_flip.add_argument("--post", default=None, help="write the flipped instance here")

    p_encode = sub.add_parser("encode", parents=[common], help="log-encode to DIMACS CNF")
    p_encode.add_argument("instance")
    p_encode.add_argument("-o", dest="out_cnf", default=None, help="output CNF path")

    p_moments = sub.add_parser("moments", parents=[common, model], help="closed-form moments")
    p_moments.add_argument("--r", type=float, default=None)
    p_moments.add_argument("--unrounded", action="store_true",
                           help="use the unrounded constraint count r*n*ln(d)")
    p_moments.add_argument("--csv", default=None, help="write per-overlap terms as CSV here")

    p_sweep = sub.add_parser("sweep", parents=[common, model], help="phase-transition sweep")
    p_sweep.add_argument("--trials", type=int, required=True)
    p_sweep.add_argument("--r-min", type=float, default=None)
    p_sweep.add_argument("--r-max", type=float, default=None)
    p_sweep.add_argument("--steps", type=int, default=None)
    p_sweep.add_argument("--r-factors", default=None,
                         help="comma-separated multiples of the critical density")

    p_suite = sub.add_parser("suite", parents=[common, model], help="threshold or flip suite")
    p_suite.add_argument("--kind", choices=("threshold", "flip"), required=True)
    p_suite.add_argument("--trials", type=int, required=True)
    p_suite.add_argument("--avoid-sizes", default=None,
                         help="comma-separated avoid-set sizes for the flip suite")
    return parser


def _cmd_gen(args) -> int:
    params = _params_from_args(args)
    instance = gen_instance(params, planted=args.planted)
    _emit(instance.to_json(), args.out)
    return 0


def _cmd_solve(args) -> int:
    instance = Instance.load(args.instance)
    report = solve(instance, mode=args.mode, cap=args.cap, budget=args.budget)
    _emit(report.to_json(), args.out)
    return report.exit_code


def _cmd_analyze(args) -> int:
    instance = Instance.load(args.instance)
    obj = {
        "degree": degree_stats(instance).to_dict(),
        "alpha_condition": validate_alpha(instance.params).to_dict(),
        "self_unsat": None,
    }
    if args.self_unsat:
        report = self_unsat_analysis(instance, budget=args.budget)
        obj["self_unsat"] = {
            "per_constraint": list(report.per_constraint),
            "per_variable": list(report.per_variable),
            "is_self_unsat_formula": report.is_self_unsat_formula,
        }
    _emit(json.dumps(obj, separators=(",", ":")), args.out)
    return 0


def _cmd_flip(args) -> int:
    instance = Instance.load(args.instance)
    avoid = _parse_int_list(args.avoid)
    x = args.var if args.var is not None else default_flip_variable(instance)
    if args.direction == "sat_to_unsat":
        found = solve(instance, mode="decide", budget=args.budget)
        if found.status != "SAT":
            raise RbsatError(f"instance is {found.status}; cannot flip a solution away")
        post, outcome = flip_sat_to_unsat(
            instance, found.solutions[0], x, avoid, budget=args.budget
        )
    else:
        post, outcome = flip_unsat_to_sat(instance, x, avoid, budget=args.budget)
    if args.post:
        post.save(args.post)
    _emit(outcome.to_json(), args.out)
    return 0


def _cmd_encode(args) -> int:
    instance = Instance.load(args.instance)
    cnf = encode_log(instance)
    out = args.out_cnf or args.out
    if not out:
        raise SystemExit("encode needs an output path (-o or --out)")
    write_dimacs(cnf, out)
    return 0


def _cmd_moments(args) -> int:
    params = _params_from_args(args)
    report = second_moment(params, unrounded_m=args.unrounded)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("S,term,log_term\n")
            for big_s, (term, log_term) in enumerate(zip(report.terms, report.term_logs)):
                fh.write(f"{big_s},{term!r},{log_term!r}\n")
    payload = json.loads(report.to_json())
    payload["thresholds"] = thresholds(
        params.p_eff, params.k, params.alpha, params.n, params.d
    ).to_dict()
    _emit(json.dumps(payload, separators=(",", ":")), args.out)
    return 0


def _sweep_config(args) -> harness.SweepConfig:
    alpha = _alpha_for(args)
    budget = args.budget if args.budget is not None else harness.DEFAULT_BUDGET
    if args.r_factors:
        return harness.SweepConfig.from_factors(
            args.n, alpha, args.p, args.k, _parse_float_list(args.r_factors),
            args.trials, args.seed, budget,
        )
    if args.r_min is None or args.r_max is None or args.steps is None:
        raise SystemExit("sweep needs either --r-factors or --r-min/--r-max/--steps")
    return harness.SweepConfig.from_grid(
        args.n, alpha, args.p, args.k, args.r_min, args.r_max, args.steps,
        args.trials, args.seed, budget,
    )


def _cmd_sweep(args) -> int:
    config = _sweep_config(args)
    records = harness.run_phase_sweep(config, jobs=args.jobs)
    if args.out:
        harness.persist(records, args.out, args.format)
    print(json.dumps([harness.summarize(r) for r in records], separators=(",", ":")))
    return 0


def _cmd_suite(args) -> int:
    alpha = _alpha_for(args)
    budget = args.budget if args.budget is not None else harness.DEFAULT_BUDGET
    config = harness.SweepConfig(args.n, alpha, args.p, args.k, args.trials, args.seed, budget)
    if args.kind == "threshold":
        records = [harness.run_threshold_suite(config, jobs=args.jobs)]
    else:
        sizes = _parse_int_list(args.avoid_sizes) if args.avoid_sizes else None
        records = harness.run_flip_suite(config, jobs=args.jobs, avoid_sizes=sizes)
    if args.out:
        harness.persist(records, args.out, args.format)
    print(json.dumps([harness.summarize(r) for r in records], separators=(",", ":")))
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "analyze": _cmd_analyze,
    "flip": _cmd_flip,
    "encode": _cmd_encode,
    "moments": _cmd_moments,
    "sweep": _cmd_sweep,
    "suite": _cmd_suite,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except RbsatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
