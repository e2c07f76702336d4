"""Model parameters and threshold arithmetic.

An instance family is driven by (n, alpha, p, k): n variables over domains of
size d = round(n^alpha), constraints of arity k, and m = round(r * n * ln d)
constraints.  The per-row degree b = round((1-p) * d) is an integer, so all
analytics run on the effective tightness p_eff = 1 - b/d rather than the
requested p.

The critical density is r_cr = 1 / (-ln(1 - p_eff)).  "Threshold mode" places
the instance at r = r_cr + delta / (n ln d) with delta = ln 2 / (-ln(1 - p_eff)),
the point where the expected number of solutions equals 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParamError

#: largest |p_eff - p| tolerated before tightness is considered degenerate
MAX_TIGHTNESS_DRIFT = 0.25


def _round_half_up(x: float) -> int:
    """Deterministic rounding: halves go up.  Assumes x >= 0."""
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class RbParams:
    """All model parameters plus derived thresholds.

    Field order matches the canonical JSON serialization.
    """

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
    r_cr: float
    delta: float
    omega: float

    def n_ln_d(self) -> float:
        return self.n * math.log(self.d)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": self.alpha,
            "p": self.p,
            "k": self.k,
            "d": self.d,
            "b": self.b,
            "p_eff": self.p_eff,
            "r": self.r,
            "m": self.m,
            "seed": self.seed,
            "r_cr": self.r_cr,
            "delta": self.delta,
            "omega": self.omega,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RbParams":
        return cls(**{f: data[f] for f in cls.__dataclass_fields__})


def derive_params(
    n: int,
    alpha: float,
    p: float,
    k: int,
    seed: int,
    mode: str = "threshold",
    r: float | None = None,
    d: int | None = None,
) -> RbParams:
    """Derive a full parameter set.

    mode="threshold" picks r = r_cr + delta/(n ln d); mode="explicit" uses the
    given r.  An explicit d overrides round(n^alpha) (the instance family then
    no longer follows the polynomial-domain scaling, which is fine for
    fixtures and off-grid experiments).
    """
    if not (isinstance(n, int) and n >= 2):
        raise ParamError("n must be an integer >= 2")
    if not alpha > 0:
        raise ParamError("alpha must be positive")
    if not 0 < p < 1:
        raise ParamError("p must lie strictly between 0 and 1")
    if not (isinstance(k, int) and k >= 2):
        raise ParamError("k must be an integer >= 2")
    if not 0 <= seed <= (1 << 64) - 1:
        raise ParamError("seed must fit in 64 bits")

    if d is None:
        d = _round_half_up(n**alpha)
    if d < 2:
        raise ParamError(f"domain size d={d} is below 2; increase alpha or n")

    b = _round_half_up((1 - p) * d)
    b = min(max(b, 1), d - 1)
    p_eff = 1 - b / d
    if abs(p_eff - p) > MAX_TIGHTNESS_DRIFT:
        raise ParamError(
            f"tightness p={p} is degenerate at d={d}: effective value {p_eff:.4f} "
            f"drifts by more than {MAX_TIGHTNESS_DRIFT}"
        )

    log_loss = -math.log(1 - p_eff)
    r_cr = 1.0 / log_loss
    delta = math.log(2) / log_loss
    omega = 1 + alpha * (1 - r_cr * p_eff * k)

    n_ln_d = n * math.log(d)
    if mode == "threshold":
        if r is not None:
            raise ParamError("r is only accepted in explicit mode")
        r = r_cr + delta / n_ln_d
    elif mode == "explicit":
        if r is None or r <= 0:
            raise ParamError("explicit mode needs a positive r")
    else:
        raise ParamError(f"unknown mode {mode!r}")

    m = max(1, _round_half_up(r * n_ln_d))
    return RbParams(
        n=n, alpha=alpha, p=p, k=k, d=d, b=b, p_eff=p_eff,
        r=r, m=m, seed=seed, r_cr=r_cr, delta=delta, omega=omega,
    )


@dataclass(frozen=True)
class AlphaReport:
    """Which of the asymptotic conditions on alpha a parameter set meets.

    Purely informational: desk-scale instances legitimately violate these
    asymptotic preconditions, so nothing here rejects.
    """

    alpha: float
    bound_one: float
    bound_omega: float
    bound_degree_tail: float
    bound_selfunsat_cover: float
    exceeds_one: bool
    exceeds_omega: bool
    exceeds_degree_tail: bool
    exceeds_selfunsat_cover: bool
    k_at_least_inverse_looseness: bool
    omega_negative: bool
    binding_bound: float
    satisfies_all: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def validate_alpha(params: RbParams) -> AlphaReport:
    """Report how alpha compares against each asymptotic lower bound.

    The four bounds: the constant 1; the value above which omega turns
    negative; the Chernoff bound that keeps every variable degree above
    r*k*ln(d)/100; and the bound that makes per-variable self-unsatisfiability
    failures vanish.
    """
    p, k, alpha = params.p_eff, params.k, params.alpha
    log_loss = math.log(1 - p)  # negative

    slope = 1 + p * k / log_loss
    bound_omega = -1.0 / slope if slope < 0 else math.inf
    bound_degree_tail = -2 * (100 / 99) ** 2 * log_loss / k
    bound_selfunsat_cover = 100 * log_loss / (k * math.log(1 - p / 3))

    bounds = (1.0, bound_omega, bound_degree_tail, bound_selfunsat_cover)
    exceeds = tuple(alpha > bd for bd in bounds)
    return AlphaReport(
        alpha=alpha,
        bound_one=bounds[0],
        bound_omega=bounds[1],
        bound_degree_tail=bounds[2],
        bound_selfunsat_cover=bounds[3],
        exceeds_one=exceeds[0],
        exceeds_omega=exceeds[1],
        exceeds_degree_tail=exceeds[2],
        exceeds_selfunsat_cover=exceeds[3],
        k_at_least_inverse_looseness=k >= 1 / (1 - p),
        omega_negative=params.omega < 0,
        binding_bound=max(bounds),
        satisfies_all=all(exceeds),
    )
