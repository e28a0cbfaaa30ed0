from __future__ import annotations

import math

import pytest

from elem import (
    eval_region_21,
    eval_region_22,
    eval_region_23,
    eval_region_24_25,
    g_series,
    log_h,
    log_h_tilde,
    mappings,
    normalizers,
    oscillatory_sums,
    wronskian_delta,
)
from errors import DomainError
from refseries import uv_series
from scaled import FunctionQuad, RegionTag

SQRT2 = math.sqrt(2.0)


def _assert_matches(got: FunctionQuad, want: FunctionQuad, gam: float, tol: float) -> None:
    """Compare against the reference series on the U / Γ·V envelope."""
    tol = max(tol, got.err_estimate)
    env = math.hypot(want.U.value, gam * want.V.value)
    denv = math.hypot(want.dU.value, gam * want.dV.value)
    assert abs(got.U.value - want.U.value) <= tol * env
    assert abs(gam * (got.V.value - want.V.value)) <= tol * env
    assert abs(got.dU.value - want.dU.value) <= tol * denv
    assert abs(gam * (got.dV.value - want.dV.value)) <= tol * denv


def test_mappings() -> None:
    m = mappings(1.5)
    assert m.tau == pytest.approx(0.5 * (1.5 / math.sqrt(1.25) - 1.0), rel=1e-14)
    assert m.xi == pytest.approx(0.5 * (1.5 * math.sqrt(1.25) - math.acosh(1.5)), rel=1e-14)
    assert m.tau_tilde == pytest.approx(0.5 * (1.5 / math.sqrt(3.25) - 1.0), rel=1e-14)
    with pytest.raises(DomainError):
        _ = m.eta
    m0 = mappings(0.0)
    assert m0.eta == pytest.approx(math.pi / 4, rel=1e-15)
    assert m0.tau_tilde == -0.5
    with pytest.raises(DomainError):
        _ = m0.xi


def test_normalizers() -> None:
    for mu in (0.7, 5.0, 100.0):
        assert log_h(mu) + log_h_tilde(mu) == pytest.approx(-0.5 * math.log(2.0) - math.log(mu), abs=1e-10)
    g, used, err = g_series(10.0)
    assert g == pytest.approx(1.0 + 1.0 / 2400.0, rel=1e-6)
    assert used >= 2
    assert 0.0 < err < 1e-10
    assert normalizers(10.0).g_err == err
    nz = normalizers(5.0, 12.5)
    assert nz.log_gamma_half_mu2 == pytest.approx(math.lgamma(13.0), rel=1e-14)
    with pytest.raises(DomainError):
        normalizers(0.0)


def test_region_21_wronskian_measure_matches_table() -> None:
    _, sums = eval_region_21(5.0, 1.5, 4)
    assert 7.1e-9 / 3 <= wronskian_delta(sums) <= 7.1e-9 * 3
    _, sums = eval_region_21(5.0, 1.1, 4)
    assert 5.1e-2 / 3 <= wronskian_delta(sums) <= 5.1e-2 * 3


def test_region_24_wronskian_measure_matches_table() -> None:
    _, sums = eval_region_24_25(5.0, 1.0, 4)
    assert 2.7e-12 / 3 <= wronskian_delta(sums) <= 2.7e-12 * 3
    _, sums = eval_region_24_25(5.0, 0.0, 4)
    assert 3.2e-10 / 3 <= wronskian_delta(sums) <= 3.2e-10 * 3


def test_oscillatory_sums_terms() -> None:
    sums = oscillatory_sums(5.0, 0.0, 2)
    assert sums.terms == 3
    assert sums.Uo == 0.0  # odd u_s vanish at t = 0


@pytest.mark.parametrize("t", [1.5, 2.5])
def test_region_21_22_against_series(t: float) -> None:
    mu = 5.0
    z = mu * t * SQRT2
    gam = math.gamma(13.0)
    quad, _ = eval_region_21(mu, t, half_mu2=12.5)
    assert quad.region is RegionTag.ELEM_21
    _assert_matches(quad, uv_series(-12.5, z), gam, 1e-12)
    assert quad.wronskian_residual() <= 4.0 * quad.err_estimate + 1e-12

    neg = eval_region_22(mu, t, half_mu2=12.5)
    assert neg.region is RegionTag.ELEM_22
    _assert_matches(neg, uv_series(-12.5, -z), gam, 1e-12)
    assert neg.wronskian_residual() <= 4.0 * neg.err_estimate + 1e-12


@pytest.mark.parametrize("mu", [5.0, 6.0, 7.0])
@pytest.mark.parametrize("t", [1.3, 1.5, 2.0, 3.0])
def test_region_21_error_estimate_bounds_true_error(mu: float, t: float) -> None:
    half_mu2 = 0.5 * mu * mu
    quad, _ = eval_region_21(mu, t, half_mu2=half_mu2)
    ref = uv_series(-half_mu2, mu * t * SQRT2)
    bound = quad.err_estimate + 1e-13
    assert quad.U.rel_diff(ref.U) <= bound
    assert quad.dU.rel_diff(ref.dU) <= bound
    assert quad.V.rel_diff(ref.V) <= bound
    assert quad.dV.rel_diff(ref.dV) <= bound


def test_fixed_order_is_no_better_than_optimal() -> None:
    fixed, _ = eval_region_21(5.0, 1.5, 2)
    best, _ = eval_region_21(5.0, 1.5)
    assert best.err_estimate <= fixed.err_estimate


@pytest.mark.parametrize("t", [0.0, 0.3, -0.5])
def test_region_23_against_series(t: float) -> None:
    mu = 5.0
    quad = eval_region_23(mu, t, half_mu2=12.5)
    assert quad.region is RegionTag.ELEM_23
    _assert_matches(quad, uv_series(-12.5, mu * t * SQRT2), math.gamma(13.0), 1e-12)
    assert quad.wronskian_residual() <= 4.0 * quad.err_estimate + 1e-12


def test_region_23_estimate_counts_g_truncation() -> None:
    quad = eval_region_23(5.0, 0.0, half_mu2=12.5)
    assert quad.err_estimate >= normalizers(5.0, 12.5).g_err


@pytest.mark.parametrize("t", [0.4, 1.0, 2.0])
def test_region_24_25_against_series(t: float) -> None:
    mu = 5.0
    z = mu * t * SQRT2
    pos, _ = eval_region_24_25(mu, t, a_exact=12.5)
    assert pos.region is RegionTag.ELEM_24
    ref = uv_series(12.5, z)
    _assert_matches(pos, ref, 1.0, 1e-12)
    assert pos.U.rel_diff(ref.U) <= pos.err_estimate + 1e-13
    assert pos.wronskian_residual() <= 2.0 * pos.err_estimate + 1e-12

    neg, _ = eval_region_24_25(mu, t, negative_z=True, a_exact=12.5)
    assert neg.region is RegionTag.ELEM_25
    _assert_matches(neg, uv_series(12.5, -z), 1.0, 1e-12)
    assert neg.wronskian_residual() <= 2.0 * neg.err_estimate + 1e-12


@pytest.mark.parametrize("a, z", [(6.637, -36.94), (113.5, -2.93), (4999.99, -0.54), (17.1, -200.0)])
def test_region_25_wronskian_without_cancellation(a: float, z: float) -> None:
    # V is dominated by sin(πa)·U(a,z) here; the plain U·V' - U'·V cancels
    mu = math.sqrt(2.0 * a)
    neg, _ = eval_region_24_25(mu, abs(z) / (2.0 * math.sqrt(a)), negative_z=True, a_exact=a)
    assert neg.parts is not None
    assert neg.wronskian_residual() <= 2.0 * neg.err_estimate + 1e-12


def test_domain_errors() -> None:
    with pytest.raises(DomainError):
        eval_region_21(5.0, 0.9)
    with pytest.raises(DomainError):
        eval_region_22(5.0, 1.0)
    with pytest.raises(DomainError):
        eval_region_23(5.0, 1.0)
    with pytest.raises(DomainError):
        eval_region_24_25(5.0, -0.1)
