"""Closed-form expectations for solution and near-solution counts.

All quantities are evaluated in log-space with the effective tightness p_eff
and either the generated (integer) constraint count m or its unrounded value
r * n * ln d.  At the threshold density with the unrounded count, the
expected number of solutions is exactly one half.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ParamError, RbsatError
from .params import RbParams

SECOND_MOMENT_N_GUARD = 10**4


def _m_value(params: RbParams, unrounded_m: bool) -> float:
    return params.r * params.n_ln_d() if unrounded_m else float(params.m)


def log_expected_solution_count(n: int, d: int, p_eff: float, m: float) -> float:
    """ln of d^n * (1 - p_eff)^m."""
    return n * math.log(d) + m * math.log(1 - p_eff)


def expected_solution_count(params: RbParams, unrounded_m: bool = False) -> float:
    """Expected number of solutions, d^n (1-p_eff)^m."""
    return math.exp(
        log_expected_solution_count(params.n, params.d, params.p_eff, _m_value(params, unrounded_m))
    )


def expected_near_solutions(params: RbParams, unrounded_m: bool = False) -> float:
    """Expected assignments violating exactly one fixed constraint.

    d^n (1-p_eff)^(m-1) p_eff, i.e. the expected solution count scaled by
    p_eff / (1 - p_eff).
    """
    if params.m < 1:
        raise ParamError("need at least one constraint")
    m = _m_value(params, unrounded_m)
    return math.exp(
        log_expected_solution_count(params.n, params.d, params.p_eff, m - 1)
        + math.log(params.p_eff)
    )


def overlap_term_logs(params: RbParams, unrounded_m: bool = False) -> list[float]:
    """ln of the second-moment summand for each overlap count S = 0..n.

    The summand for S (the number of variables where an assignment pair
    agrees, s = S/n) is
        C(n,S) (1-1/d)^(n-S) (1/d)^S [1 + p_eff/(1-p_eff) * s^k]^m.
    """
    n, d, k, p = params.n, params.d, params.k, params.p_eff
    if n > SECOND_MOMENT_N_GUARD:
        raise ParamError(f"n={n} exceeds the summation guard {SECOND_MOMENT_N_GUARD}")
    m = _m_value(params, unrounded_m)
    q = p / (1 - p)
    log_stay = math.log1p(-1.0 / d)
    log_match = -math.log(d)
    logs = []
    for big_s in range(n + 1):
        s = big_s / n
        log_binom = (
            math.lgamma(n + 1) - math.lgamma(big_s + 1) - math.lgamma(n - big_s + 1)
        )
        logs.append(
            log_binom
            + (n - big_s) * log_stay
            + big_s * log_match
            + m * math.log1p(q * s**k)
        )
    return logs


def _log_sum_exp(logs: list[float]) -> float:
    mx = max(logs)
    # compensated accumulation, largest terms first
    total = math.fsum(sorted((math.exp(lv - mx) for lv in logs), reverse=True))
    return mx + math.log(total)


@dataclass(frozen=True)
class MomentReport:
    ex: float  # expected solution count
    ex2: float  # second moment of the solution count
    ratio: float  # ex2 / ex^2 (the sum of the overlap terms)
    en: float  # expected near-solutions per constraint
    terms: tuple[float, ...]  # overlap summands, S = 0..n
    term_logs: tuple[float, ...]
    log_ex: float
    log_ex2: float
    term_zero_overlap: float  # value at S=0
    term_full_overlap: float  # value at S=n, equals 1/ex
    ratio_bound: float  # 1 + 1/ex, the two-dominant-terms approximation
    sat_probability_lower_bound: float  # ex^2/ex2, by the Cauchy inequality

    def to_json(self) -> str:
        obj = {
            "ex": self.ex,
            "ex2": self.ex2,
            "ratio": self.ratio,
            "en": self.en,
            "log_ex": self.log_ex,
            "log_ex2": self.log_ex2,
            "term_zero_overlap": self.term_zero_overlap,
            "term_full_overlap": self.term_full_overlap,
            "ratio_bound": self.ratio_bound,
            "sat_probability_lower_bound": self.sat_probability_lower_bound,
            "terms": list(self.terms),
        }
        return json.dumps(obj, separators=(",", ":"))


def second_moment(params: RbParams, unrounded_m: bool = False) -> MomentReport:
    """Second-moment report: ex2 = ex^2 * sum of overlap terms."""
    logs = overlap_term_logs(params, unrounded_m)
    log_ratio = _log_sum_exp(logs)
    log_ex = log_expected_solution_count(
        params.n, params.d, params.p_eff, _m_value(params, unrounded_m)
    )
    log_ex2 = 2 * log_ex + log_ratio
    ex = math.exp(log_ex)
    return MomentReport(
        ex=ex,
        ex2=math.exp(log_ex2),
        ratio=math.exp(log_ratio),
        en=expected_near_solutions(params, unrounded_m),
        terms=tuple(math.exp(lv) for lv in logs),
        term_logs=tuple(logs),
        log_ex=log_ex,
        log_ex2=log_ex2,
        term_zero_overlap=math.exp(logs[0]),
        term_full_overlap=math.exp(logs[-1]),
        ratio_bound=1 + math.exp(-log_ex),
        sat_probability_lower_bound=math.exp(-log_ratio),
    )


@dataclass(frozen=True)
class ThresholdReport:
    r_cr: float
    delta: float
    omega: float
    r_threshold: float
    omega_probe: float  # finite-size exponent (ln n + ln d - p k r ln d)/ln n
    looseness_product_positive: bool  # p_eff*k + ln(1-p_eff) > 0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def thresholds(p_eff: float, k: int, alpha: float, n: int, d: int) -> ThresholdReport:
    """Critical density, threshold shift, and the omega exponent.

    omega is computed both as 1 + alpha(1 - r_cr * p_eff * k) and as
    1 + alpha(1 + p_eff * k / ln(1-p_eff)); the two must agree to 1e-12
    relative, which guards the arithmetic.
    """
    if not 0 < p_eff < 1:
        raise ParamError("p_eff must lie strictly between 0 and 1")
    log_loss = math.log(1 - p_eff)
    r_cr = -1.0 / log_loss
    delta = -math.log(2) / log_loss
    omega = 1 + alpha * (1 - r_cr * p_eff * k)
    omega_alt = 1 + alpha * (1 + p_eff * k / log_loss)
    if abs(omega - omega_alt) > 1e-12 * max(1.0, abs(omega)):
        raise RbsatError(f"omega forms disagree: {omega} vs {omega_alt}")
    n_ln_d = n * math.log(d)
    r_threshold = r_cr + delta / n_ln_d
    omega_probe = (
        math.log(n) + math.log(d) - p_eff * k * r_threshold * math.log(d)
    ) / math.log(n)
    return ThresholdReport(
        r_cr=r_cr,
        delta=delta,
        omega=omega,
        r_threshold=r_threshold,
        omega_probe=omega_probe,
        looseness_product_positive=p_eff * k + log_loss > 0,
    )
