from __future__ import annotations

import math

import mpmath

from scaled import SQRT_2_OVER_PI, ConnectionParts, FunctionQuad, RegionTag, ScaledValue


def test_make_normalizes_mantissa() -> None:
    v = ScaledValue.make(1e300, 500.0)
    assert math.exp(-0.5) <= abs(v.mantissa) <= math.exp(0.5)
    assert math.isclose(v.log_abs, math.log(1e300) + 500.0, rel_tol=1e-14)


def test_arithmetic_far_outside_double_range() -> None:
    big = ScaledValue.from_log(1.0, 2000.0)
    small = ScaledValue.from_log(-1.0, -2000.0)
    prod = big * small
    assert math.isclose(prod.value, -1.0, rel_tol=1e-13)
    total = big + ScaledValue.from_log(1.0, 2000.0)
    assert math.isclose(total.log_abs, 2000.0 + math.log(2.0), rel_tol=1e-14)


def test_unscaled_saturates_with_flag() -> None:
    value, over = ScaledValue.from_log(-1.0, 800.0).unscaled()
    assert value == -math.inf
    assert over
    assert ScaledValue.from_log(1.0, -800.0).value == 0.0


def test_from_mpf_handles_huge_exponents() -> None:
    x = mpmath.mpf(10) ** 1000
    v = ScaledValue.from_mpf(-x)
    assert v.mantissa < 0
    assert math.isclose(v.log_abs, 1000 * math.log(10.0), rel_tol=1e-14)


def test_rel_diff() -> None:
    a = ScaledValue.of(1.0 + 1e-12)
    assert math.isclose(a.rel_diff(ScaledValue.of(1.0)), 1e-12, rel_tol=1e-3)
    assert ScaledValue.of(0.0).rel_diff(ScaledValue.of(0.0)) == 0.0


def test_function_quad_wronskian_and_dict() -> None:
    # U = e^{-x}, V = e^{x} scaled so that U V' - U' V = sqrt(2/pi)
    k = SQRT_2_OVER_PI / 2
    quad = FunctionQuad(
        U=ScaledValue.from_log(1.0, -900.0),
        dU=ScaledValue.from_log(-1.0, -900.0),
        V=ScaledValue.from_log(1.0, 900.0) * k,
        dV=ScaledValue.from_log(1.0, 900.0) * k,
        region=RegionTag.ELEM_21,
        err_estimate=1e-12,
    )
    assert quad.wronskian_residual() < 1e-14
    plain = quad.to_dict()
    assert plain["region"] == "ELEM_21"
    assert plain["U"] == 0.0
    assert set(plain["overflow"]) == {"V", "dV"}
    scaled = quad.to_dict(scaled=True)
    assert set(scaled["V"]) == {"mantissa", "logScale"}
    assert "overflow" not in scaled


def test_rel_diff_saturates_across_huge_scale_gaps() -> None:
    far = ScaledValue.from_log(1.0, 1500.0)
    assert far.rel_diff(ScaledValue.of(1.0)) == math.inf
    near = ScaledValue.from_log(1.0, 650.0)
    assert math.isclose(near.rel_diff(ScaledValue.of(1.0)), math.exp(650.0), rel_tol=1e-12)
    assert ScaledValue.of(1.0).rel_diff(far) == 1.0


def test_scale_log_renormalizes() -> None:
    v = ScaledValue(40.0, 0.0).scale_log(10.0)
    w = ScaledValue(-0.01, 5.0).scale_log(-3.0)
    for x in (v, w):
        assert math.exp(-0.5) <= abs(x.mantissa) <= math.exp(0.5)
    assert math.isclose(v.value, 40.0 * math.exp(10.0), rel_tol=1e-14)
    assert math.isclose(w.value, -0.01 * math.exp(2.0), rel_tol=1e-14)


def test_connection_parts_replace_plain_wronskian() -> None:
    # U = e^{-x}, U(-x) = e^{x}: -(U U'(-x) + U' U(-x)) = 2 at any x
    x = 600.0
    conn = ScaledValue.of(SQRT_2_OVER_PI / 2)
    parts = ConnectionParts(
        U_here=ScaledValue.from_log(1.0, -x),
        dU_here=ScaledValue.from_log(-1.0, -x),
        U_mirror=ScaledValue.from_log(1.0, x),
        dU_mirror=ScaledValue.from_log(-1.0, x),
        conn=conn,
    )
    junk = ScaledValue.from_log(1.0, 3.0 * x)
    quad = FunctionQuad(parts.U_here, parts.dU_here, junk, junk, RegionTag.ELEM_24, parts=parts)
    assert quad.wronskian_residual() < 1e-14
    assert quad.with_region(RegionTag.ELEM_25).parts is parts
