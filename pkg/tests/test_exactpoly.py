from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from errors import DomainError, InternalError
from exactpoly import (
    QuadraticSurd,
    RationalPoly,
    airy_alpha,
    airy_beta,
    airy_wronskian_series,
    appendix_fk,
    bernoulli,
    big_h,
    check_degrees,
    check_phi_tilde,
    check_printed,
    check_u_vs_phi,
    coeff_tables,
    constants,
    family_json,
    fk_polynomials,
    gamma_coeffs,
    generate_phi,
    generate_psi,
    generate_uv,
    pn_polynomials,
)

F = Fraction


def test_rational_poly_arithmetic() -> None:
    x = RationalPoly.x("t")
    p = (x + 1) * (x - 1)
    assert p == RationalPoly((F(-1), F(0), F(1)), "t")
    assert p.degree == 2
    assert p.deriv() == x * 2
    assert p.integ().coeff(3) == F(1, 3)
    assert p.compose(x + 1) == x * x + x * 2
    assert p.shift(1) == x * x + x * 2
    assert p(F(3)) == 8
    assert p(0.5) == -0.75
    assert RationalPoly((F(1), F(0), F(0))).degree == 0  # trailing zeros trimmed
    assert (x * x * 3).div_xk(2) == 3
    with pytest.raises(InternalError):
        p.div_xk(1)


def test_phi_psi_printed() -> None:
    phi = generate_phi(2)
    psi = generate_psi(2)
    assert phi[0] == 1
    assert phi[1].coeffs == (F(0), F(-3, 4), F(-5, 2), F(-5, 3))
    assert psi[1].coeffs == (F(0), F(5, 4), F(7, 2), F(7, 3))
    assert psi[2].lowest_power == 2
    assert phi[2](F(1)) == F(53017, 288)


def test_u_v_low_orders() -> None:
    u, r, v = generate_uv(2)
    t = RationalPoly.x("t")
    assert u[1] == t * (t * t - 6) * F(1, 24)
    assert v[1] == t * (t * t + 6) * F(1, 24)
    assert u[2].coeffs == (F(145, 1152), F(0), F(249, 1152), F(0), F(-9, 1152))
    assert r[0] == (t * t * 3 + 2) * F(1, 8)


def test_printed_and_structural_checks() -> None:
    assert all(check_printed().values())
    assert check_degrees(8)
    assert check_u_vs_phi(4, 20) <= 1e-12


def test_phi_tilde_pipeline_matches_phi() -> None:
    assert check_phi_tilde(4, 20)
    pipe = appendix_fk(4, F(3, 4))
    assert pipe.rho == F(1, 3)
    assert pipe.fk[0] == 1
    assert pipe.fk[1] == F(-11, 288)
    for k in range(5):
        assert pipe.phi_tilde(k) == generate_phi(4)[k](F(-1, 4))


def test_appendix_domain() -> None:
    with pytest.raises(DomainError):
        appendix_fk(2, F(1, 4))
    with pytest.raises(DomainError):
        appendix_fk(2, F(1))


def test_fk_and_pn_polynomials() -> None:
    p = fk_polynomials(3)
    assert p[0] == 1
    assert p[1](F(3, 4)) == F(-11, 96)
    assert [q.degree for q in p] == [0, 2, 4, 6]
    pn = pn_polynomials(3)
    a = RationalPoly.x("a")
    assert pn[0] == 1
    assert pn[1] == F(1, 2)
    assert pn[2] == a + F(3, 4)


def test_constants() -> None:
    assert bernoulli(2) == F(1, 6)
    assert bernoulli(4) == F(-1, 30)
    assert bernoulli(5) == 0
    assert gamma_coeffs(3) == [F(1), F(-1, 24), F(1, 1152), F(1003, 414720)]
    assert airy_alpha(1) == F(5, 48)
    assert airy_beta(1) == F(-7, 48)
    g, gam, alpha, beta = constants(3)
    assert g == [F(1), F(1, 24), F(0), g[3]]
    assert g[3] == generate_uv(3)[0][3].leading
    assert len(gam) == len(alpha) == len(beta) == 4


def test_normalization_series() -> None:
    mu = 10.0
    assert big_h(mu) == pytest.approx(1.0 + 1.0 / (48 * 50.0), rel=1e-6)
    assert airy_wronskian_series(mu) / mu**4 == pytest.approx(1.0 + 1.0 / (12 * mu * mu), rel=1e-6)


def test_coeff_tables_float_copies() -> None:
    tables = coeff_tables(4)
    assert len(tables.u) == len(tables.v) == 10
    assert len(tables.phi) == 5
    t = 0.37
    for s in range(5):
        assert np.polynomial.polynomial.polyval(t, tables.phi_f[s]) == pytest.approx(
            tables.phi[s](t), rel=1e-14, abs=1e-300
        )
    with pytest.raises(DomainError):
        tables.family("nope")


def test_family_json() -> None:
    out = family_json("phi", 1)
    assert out["family"] == "phi"
    assert out["order"] == 1
    assert out["coeffs"] == ["0", "-3/4", "-5/2", "-5/3"]
    assert family_json("u", 1)["coeffs"] == ["0", "-1/4", "0", "1/24"]
    assert family_json("P", 0)["coeffs"] == ["1"]
    with pytest.raises(DomainError):
        family_json("w", 1)


def test_quadratic_surd() -> None:
    sigma = F(3, 4)
    root = QuadraticSurd(F(0), F(1), sigma)
    assert (root * root).is_rational
    assert (root * root).p == sigma
    x = QuadraticSurd(F(1), F(2), sigma)
    assert ((x / x) - 1).p == 0
    assert float(x) == pytest.approx(1 + 2 * (0.75**0.5), rel=1e-15)
