from __future__ import annotations

import logging
import math

import mpmath
import numpy as np
import pytest

from airy import (
    SOLUTIONS,
    airy_coeffs,
    airy_eval,
    backward_limit,
    eval_airy,
    eval_airy_modified,
    eval_airy_olver,
    solve_maclaurin_FG,
    t_of_zeta,
    zeta_map,
    zeta_of_t,
)
from config import AiryConfig
from elem import eval_region_21
from errors import DomainError, TooCloseToTurningPoint
from exactpoly import airy_wronskian_series
from refseries import uv_series
from scaled import FunctionQuad, RegionTag

SQRT2 = math.sqrt(2.0)
GAMMA_13 = math.gamma(13.0)


def _assert_matches(got: FunctionQuad, want: FunctionQuad, gam: float, tol: float) -> None:
    env = math.hypot(want.U.value, gam * want.V.value)
    denv = math.hypot(want.dU.value, gam * want.dV.value)
    assert abs(got.U.value - want.U.value) <= tol * env
    assert abs(gam * (got.V.value - want.V.value)) <= tol * env
    assert abs(got.dU.value - want.dU.value) <= tol * denv
    assert abs(gam * (got.dV.value - want.dV.value)) <= tol * denv


@pytest.mark.parametrize("x", [-15.0, -5.0, 0.0, 5.0, 15.0])
def test_airy_wronskian(x: float) -> None:
    w = airy_eval(x).wronskian().value
    assert abs(math.pi * w - 1.0) <= 1e-12


@pytest.mark.parametrize("x", [-12.0, -3.0, 0.0, 2.5, 12.0])
def test_airy_eval_against_mpmath(x: float) -> None:
    q = airy_eval(x)
    ai, bi = float(mpmath.airyai(x)), float(mpmath.airybi(x))
    dai, dbi = float(mpmath.airyai(x, 1)), float(mpmath.airybi(x, 1))
    if x <= 0.0:
        # oscillatory side: compare on the modulus
        env = math.hypot(ai, bi)
        denv = math.hypot(dai, dbi)
        assert abs(q.Ai.value - ai) <= 1e-12 * env
        assert abs(q.Bi.value - bi) <= 1e-12 * env
        assert abs(q.dAi.value - dai) <= 1e-12 * denv
        assert abs(q.dBi.value - dbi) <= 1e-12 * denv
    else:
        assert q.Ai.value == pytest.approx(ai, rel=1e-12)
        assert q.Bi.value == pytest.approx(bi, rel=1e-12)
        assert q.dAi.value == pytest.approx(dai, rel=1e-12)
        assert q.dBi.value == pytest.approx(dbi, rel=1e-12)


def test_zeta_map_signs_and_turning_point() -> None:
    assert zeta_of_t(1.0) == 0.0
    assert zeta_of_t(1.5) > 0.0
    assert zeta_of_t(0.5) < 0.0
    assert zeta_of_t(-0.5) < zeta_of_t(0.5)
    tp = zeta_map(1.0)
    assert tp.phi == pytest.approx(2.0 ** (-1.0 / 6.0), rel=1e-12)


def test_zeta_series_joins_closed_form() -> None:
    # series inside the window against the closed form
    t = 1.05
    xi = 0.5 * (t * math.sqrt(t * t - 1.0) - math.acosh(t))
    assert zeta_of_t(t) == pytest.approx((1.5 * xi) ** (2.0 / 3.0), rel=1e-11)
    assert zeta_of_t(1.0499999) == pytest.approx(zeta_of_t(1.0500001), rel=1e-5)


@pytest.mark.parametrize("t", [0.9, 1.02, 1.2])
def test_t_of_zeta_inverts(t: float) -> None:
    assert t_of_zeta(zeta_of_t(t)) == pytest.approx(t, rel=1e-12)


def test_zeta_of_t_domain() -> None:
    with pytest.raises(DomainError):
        zeta_of_t(-1.0)


def test_airy_coeffs_near_turning_point() -> None:
    with pytest.raises(TooCloseToTurningPoint):
        airy_coeffs(1.0, 4)


def test_airy_coeffs_leading_terms() -> None:
    co = airy_coeffs(2.0, 3)
    assert co.a[0] == 1.0
    assert co.d[0] == 1.0
    assert len(co.a) == len(co.b) == 4


def test_olver_form_matches_region_21() -> None:
    got = eval_airy_olver(10.0, 2.0)
    want, _ = eval_region_21(10.0, 2.0)
    tol = got.err_estimate + want.err_estimate + 1e-12
    assert tol <= 1e-9
    for name in ("U", "V", "dU", "dV"):
        assert getattr(got, name).rel_diff(getattr(want, name)) <= tol


def test_eval_airy_monotone_side_relative_error() -> None:
    got = eval_airy(5.0, 1.5, half_mu2=12.5)
    want = uv_series(-12.5, 5.0 * 1.5 * SQRT2)
    tol = got.err_estimate + 1e-11
    for name in ("U", "V", "dU", "dV"):
        assert getattr(got, name).rel_diff(getattr(want, name)) <= tol
    # region 21 is usable here only within its own estimate
    elem, _ = eval_region_21(5.0, 1.5, half_mu2=12.5)
    assert elem.U.rel_diff(want.U) <= elem.err_estimate + 1e-12


@pytest.mark.parametrize("t", [0.9, 1.0, 1.1])
def test_eval_airy_near_turning_point(t: float) -> None:
    got = eval_airy(5.0, t, half_mu2=12.5)
    want = uv_series(-12.5, 5.0 * t * SQRT2)
    assert got.region is RegionTag.AIRY_PLUS
    assert got.err_estimate <= 1e-10
    _assert_matches(got, want, GAMMA_13, got.err_estimate + 1e-12)
    assert got.wronskian_residual() <= 1e-9


@pytest.mark.parametrize("t", [0.9, 1.1])
def test_eval_airy_negative_z(t: float) -> None:
    got = eval_airy(5.0, t, negative_z=True, half_mu2=12.5)
    want = uv_series(-12.5, -5.0 * t * SQRT2)
    assert got.region is RegionTag.AIRY_MINUS
    _assert_matches(got, want, GAMMA_13, 1e-8)


def test_olver_form_domain() -> None:
    with pytest.raises(DomainError):
        eval_airy_olver(2.0, 2.0)
    with pytest.raises(DomainError):
        eval_airy_olver(10.0, -0.95)


def test_maclaurin_normalization() -> None:
    sol = solve_maclaurin_FG(6.0)
    c, d, mu4 = sol.c, sol.d, 6.0**4
    w0 = mu4 * c[0] ** 2 + c[0] * d[1] - c[1] * d[0]
    assert w0 == pytest.approx(math.exp(sol.wronskian_target), rel=1e-12)
    # μ⁴·2√π μ h²/Γ(½+½μ²) against its asymptotic series
    assert math.exp(sol.wronskian_target) / mu4 == pytest.approx(
        airy_wronskian_series(6.0) / mu4, rel=1e-8
    )


def test_maclaurin_domain() -> None:
    with pytest.raises(DomainError):
        solve_maclaurin_FG(0.5)
    with pytest.raises(DomainError):
        solve_maclaurin_FG(6.0, N=10)


def test_solution_cache_reuses_and_clears() -> None:
    cfg = AiryConfig()
    SOLUTIONS.clear()
    first = SOLUTIONS.get(7.0, cfg)
    assert SOLUTIONS.get(7.0, cfg) is first
    SOLUTIONS.clear()
    assert SOLUTIONS.get(7.0, cfg) is not first


def test_backward_limit() -> None:
    assert backward_limit(5.0) == 87
    assert backward_limit(2.0) == 14


@pytest.mark.parametrize("N", [40, 45, 50, 60])
def test_maclaurin_small_mu_runs_forward(N: int) -> None:
    sol = solve_maclaurin_FG(2.0, N=N)
    assert sol.direction == "forward"
    assert np.all(np.isfinite(sol.c)) and np.all(np.isfinite(sol.d))
    assert 0.0 < sol.data_err <= 1e-12


def test_maclaurin_forward_independent_of_degree() -> None:
    low = solve_maclaurin_FG(2.0, N=41)
    high = solve_maclaurin_FG(2.0, N=60)
    for zeta in (-0.5, 0.0, 0.5):
        for x, y in zip(low.FG(zeta), high.FG(zeta)):
            assert x == pytest.approx(y, rel=1e-12, abs=1e-14)


def test_maclaurin_forward_data_matches_wronskian(caplog: pytest.LogCaptureFixture) -> None:
    # turning-point data already satisfy the exact Wronskian; renormalizing stays silent
    with caplog.at_level(logging.WARNING, logger="pcf.airy"):
        sol = solve_maclaurin_FG(3.0, N=80)
    assert sol.direction == "forward"
    assert not [r for r in caplog.records if r.name == "pcf.airy"]
    c, d, mu4 = sol.c, sol.d, 3.0**4
    w0 = mu4 * c[0] ** 2 + c[0] * d[1] - c[1] * d[0]
    assert w0 == pytest.approx(math.exp(sol.wronskian_target), rel=1e-12)


def test_maclaurin_backward_at_larger_mu() -> None:
    sol = solve_maclaurin_FG(5.0)
    assert sol.direction == "backward"
    assert sol.N <= backward_limit(5.0)
    assert sol.iterations >= 1


@pytest.mark.parametrize("t", [0.5, 0.8, 0.9, 1.0, 1.1, 1.2, 1.5])
def test_eval_airy_modified_small_mu(t: float) -> None:
    got = eval_airy_modified(2.0, t, half_mu2=2.0)
    want = uv_series(-2.0, 2.0 * t * SQRT2)
    assert got.err_estimate <= 1e-10
    _assert_matches(got, want, math.gamma(2.5), got.err_estimate + 1e-12)
    assert got.wronskian_residual() <= 1e-9


def test_eval_airy_modified_against_mpmath() -> None:
    got = eval_airy_modified(2.0, 1.1, half_mu2=2.0)
    z = 2.0 * 1.1 * SQRT2
    with mpmath.workdps(30):
        u = float(mpmath.pcfu(-2.0, z))
        v = float(mpmath.pcfv(-2.0, z))
    assert got.U.value == pytest.approx(u, rel=got.err_estimate + 1e-11)
    assert got.V.value == pytest.approx(v, rel=got.err_estimate + 1e-11)


def test_solution_cache_explicit_degree() -> None:
    cfg = AiryConfig()
    SOLUTIONS.clear()
    sol = SOLUTIONS.get(6.0, cfg, 86)
    assert sol.N == 86
    assert SOLUTIONS.get(6.0, cfg, 86) is sol
    assert SOLUTIONS.get(6.0, cfg) is not sol
