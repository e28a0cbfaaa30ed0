from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from fpmath import cospi, mp_precision, sincos_half_pi_mu2, sinpi, two_prod, two_sum


def test_two_sum_is_exact() -> None:
    s, e = two_sum(1.0, 1e-17)
    assert s == 1.0
    assert Fraction(s) + Fraction(e) == Fraction(1.0) + Fraction(1e-17)


def test_two_prod_is_exact() -> None:
    a, b = 0.1, 3.0000000000000004
    p, e = two_prod(a, b)
    assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)


def test_sinpi_cospi_exact_zeros() -> None:
    for n in range(-6, 7):
        assert sinpi(float(n)) == 0.0
        assert cospi(n + 0.5) == 0.0
    assert sinpi(0.5) == 1.0
    assert cospi(1.0) == -1.0


def test_sinpi_large_argument() -> None:
    x = 1e6 + 0.25
    assert math.isclose(sinpi(x), math.sqrt(0.5), rel_tol=1e-15)


def test_sincos_half_pi_mu2_uses_exact_half_mu2() -> None:
    s, c = sincos_half_pi_mu2(5.0, exact=12.5)
    assert s == 1.0
    assert c == 0.0
    # without the exact value μ² is carried as a double-double pair
    mu = math.sqrt(2 * 12.3)
    s2, _ = sincos_half_pi_mu2(mu)
    assert math.isclose(s2, math.sin(math.pi * 12.3), rel_tol=1e-12)


def test_mp_precision_restores_context() -> None:
    before = mpmath.mp.prec
    with mp_precision(300):
        assert mpmath.mp.prec == 300
    assert mpmath.mp.prec == before
