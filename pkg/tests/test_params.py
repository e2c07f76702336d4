import math

import pytest
from hypothesis import given, strategies as st

from rbsat.errors import ParamError
from rbsat.params import derive_params, validate_alpha


def test_frb100_40_shape():
    params = derive_params(100, math.log(40) / math.log(100), 0.5, 2, seed=0)
    assert params.d == 40
    assert params.b == 20
    assert params.p_eff == 0.5


def test_half_tightness_thresholds():
    params = derive_params(10, 1.0, 0.5, 2, seed=0)
    assert params.p_eff == 0.5
    assert params.r_cr == pytest.approx(1 / math.log(2), rel=1e-12)
    assert params.delta == pytest.approx(1.0, rel=1e-12)


def test_small_threshold_and_explicit_m():
    # n=4, d=4, p=1/2: r_cr*n*ln d = 4*ln4/ln2 = 8 exactly, so
    # threshold m = round(8 + delta) = 9 and explicit r_cr gives m = 8.
    params = derive_params(4, 1.0, 0.5, 2, seed=0)
    assert (params.d, params.b, params.m) == (4, 2, 9)
    explicit = derive_params(4, 1.0, 0.5, 2, seed=0, mode="explicit", r=params.r_cr)
    assert explicit.m == 8


def test_threshold_m_rounding_invariant():
    for n, alpha, p in [(5, 1.0, 0.5), (9, 1.2, 0.4), (20, 0.8, 0.6)]:
        params = derive_params(n, alpha, p, 2, seed=0)
        assert abs(params.m - params.r * n * math.log(params.d)) <= 0.5


@given(st.floats(0.05, 0.95), st.integers(4, 200))
def test_parameter_identities(p, d):
    try:
        params = derive_params(16, 1.0, p, 2, seed=0, d=d)
    except ParamError:
        return
    assert abs(params.r_cr * -math.log(1 - params.p_eff) - 1) < 1e-12
    assert abs((1 - params.p_eff) ** params.delta - 0.5) < 1e-12


def test_explicit_domain_override():
    params = derive_params(10, 1.0, 0.5, 2, seed=0, d=16)
    assert params.d == 16 and params.b == 8


def test_degenerate_tightness_rejected():
    with pytest.raises(ParamError):
        derive_params(4, 1.0, 0.999, 2, seed=0, d=2)
    with pytest.raises(ParamError):
        derive_params(4, 1.0, 0.001, 2, seed=0, d=2)


def test_domain_too_small_rejected():
    with pytest.raises(ParamError):
        derive_params(2, 0.1, 0.5, 2, seed=0)


def test_bad_inputs_rejected():
    with pytest.raises(ParamError):
        derive_params(1, 1.0, 0.5, 2, seed=0)
    with pytest.raises(ParamError):
        derive_params(4, 1.0, 0.5, 1, seed=0)
    with pytest.raises(ParamError):
        derive_params(4, 1.0, 1.5, 2, seed=0)
    with pytest.raises(ParamError):
        derive_params(4, 1.0, 0.5, 2, seed=0, mode="explicit")  # r missing
    with pytest.raises(ParamError):
        derive_params(4, 1.0, 0.5, 2, seed=0, mode="threshold", r=1.0)


def test_m_floor_is_one():
    params = derive_params(4, 1.0, 0.5, 2, seed=0, mode="explicit", r=1e-9)
    assert params.m == 1


def test_alpha_report_equality_case():
    params = derive_params(8, 1.0, 0.5, 2, seed=0)
    report = validate_alpha(params)
    # k = 1/(1 - p_eff) holds with equality at p_eff = 1/2, k = 2
    assert report.k_at_least_inverse_looseness
    # alpha = 1 is not strictly greater than the first bound
    assert not report.exceeds_one
    assert not report.satisfies_all


def test_alpha_report_omega_bound():
    # at p_eff=1/2, k=2 the omega bound is -1/(1 + 1/ln(1/2)) ~ 2.2589
    params = derive_params(8, 10.0, 0.5, 2, seed=0, d=8)
    report = validate_alpha(params)
    assert report.bound_omega == pytest.approx(-1 / (1 + 1 / math.log(0.5)), rel=1e-12)
    assert report.exceeds_omega
    assert report.omega_negative
    assert params.omega == pytest.approx(1 + 10 * (1 + 1 / math.log(0.5)), rel=1e-12)


def test_alpha_report_binding_bound():
    params = derive_params(8, 1.0, 0.5, 2, seed=0)
    report = validate_alpha(params)
    bounds = (
        report.bound_one,
        report.bound_omega,
        report.bound_degree_tail,
        report.bound_selfunsat_cover,
    )
    assert report.binding_bound == max(bounds)
    assert all(b > 0 for b in bounds)
