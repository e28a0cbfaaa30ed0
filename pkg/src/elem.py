"""
Elementary-function uniform expansions of U(a,z), V(a,z) in scaled form.

Parametrization for a < 0: a = -½μ², z = μt√2.
- region 21: t > 1 (monotonic side), modified φ_s/ψ_s sums.
- region 22: z = -μt√2 with t > 1, by reflection from region 21.
- region 23: |t| < 1 (oscillatory side), Olver's u_s/v_s sums with g(μ).
Parametrization for a >= 0: a = ½μ², z = ±μt√2, t >= 0.
- regions 24/25: modified sums in τ̃ with V from the connection formula.

Derivatives are with respect to z. Every exponential and h(μ) factor lives
in the log-scale of a ScaledValue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from errors import DomainError
from exactpoly import CoeffTables, coeff_tables
from fpmath import sincos_half_pi_mu2, sinpi
from logs import get_logger
from refseries import log_gamma_half
from scaled import ConnectionParts, FunctionQuad, RegionTag, ScaledValue

log = get_logger("pcf.elem")

MAX_ORDER = 12
# Multiplies the two first omitted terms in every truncation error estimate.
ERR_SAFETY = 10.0
_LN2 = math.log(2.0)
_LN_PI = math.log(math.pi)
_SQRT2 = math.sqrt(2.0)
_SQRT_PI = math.sqrt(math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def tables_for(order: int) -> CoeffTables:
    """Tables deep enough for ``order`` plus the two first omitted terms."""
    return coeff_tables(max(order, MAX_ORDER) + 2)


# ------------ Mappings ------------


@dataclass(frozen=True)
class ElemMappings:
    t: float
    xi_: Optional[float]
    tau_: Optional[float]
    eta_: Optional[float]
    xi_tilde: float
    tau_tilde: float

    @property
    def xi(self) -> float:
        if self.xi_ is None:
            raise DomainError(f"xi needs |t| >= 1, got t={self.t}")
        return self.xi_

    @property
    def tau(self) -> float:
        if self.tau_ is None:
            raise DomainError(f"tau needs |t| > 1, got t={self.t}")
        return self.tau_

    @property
    def eta(self) -> float:
        if self.eta_ is None:
            raise DomainError(f"eta needs |t| <= 1, got t={self.t}")
        return self.eta_


def mappings(t: float) -> ElemMappings:
    """ξ, τ (|t| >= 1), η (|t| <= 1), ξ̃ and τ̃ (all t)."""
    at = abs(t)
    xi = tau = eta = None
    if at >= 1.0:
        s = math.sqrt((at - 1.0) * (at + 1.0))
        xi = 0.5 * (at * s - math.log1p(at - 1.0 + s))
        if s > 0.0:
            tau = 1.0 / (2.0 * s * (at + s))
    if at <= 1.0:
        eta = 0.5 * math.acos(t) - 0.5 * t * math.sqrt((1.0 - t) * (1.0 + t))
    r = math.hypot(1.0, t)
    xi_t = 0.5 * (t * r + math.asinh(t))
    tau_t = -1.0 / (2.0 * r * (t + r)) if t >= 0.0 else 0.5 * (t / r - 1.0)
    return ElemMappings(t, xi, tau, eta, xi_t, tau_t)


# ------------ Normalizers ------------


@dataclass(frozen=True)
class NormalizerSet:
    mu: float
    log_h: float
    log_h_tilde: float
    log_g: float
    g_terms: int
    log_gamma_half_mu2: float
    g_err: float = 0.0


def log_h(mu: float) -> float:
    m2 = mu * mu
    return -(0.25 * m2 + 0.25) * _LN2 - 0.25 * m2 + (0.5 * m2 - 0.5) * math.log(mu)


def log_h_tilde(mu: float) -> float:
    m2 = mu * mu
    return 0.25 * m2 - (0.5 * m2 + 0.5) * math.log(mu) + (0.25 * m2 - 0.25) * _LN2


def g_series(mu: float, tables: Optional[CoeffTables] = None) -> Tuple[float, int, float]:
    """Σ g_s μ^{-2s} stopped before the terms start to grow.

    Returns (sum, terms used, relative truncation error). The error is
    ERR_SAFETY times the first omitted term, or the last kept term when
    the table runs out first.
    """
    tables = tables or tables_for(MAX_ORDER)
    eps = 1.0 / (mu * mu)
    total = 1.0
    last = 1.0
    used = 1
    omitted = None
    for s in range(1, len(tables.g)):
        g = float(tables.g[s])
        if g == 0.0:
            continue
        term = g * eps**s
        if abs(term) >= last:
            omitted = abs(term)
            break
        total += term
        last = abs(term)
        used = s + 1
    tail = omitted if omitted is not None else last
    return total, used, ERR_SAFETY * tail / abs(total)


@lru_cache(maxsize=256)
def normalizers(mu: float, half_mu2: Optional[float] = None) -> NormalizerSet:
    """ln h, ln h̃, ln g and ln Γ(½+½μ²); ``half_mu2`` passes ½μ² exactly when known."""
    if mu <= 0.0:
        raise DomainError(f"mu must be positive, got {mu}")
    lh = log_h(mu)
    gs, used, g_err = g_series(mu)
    x = half_mu2 if half_mu2 is not None else 0.5 * mu * mu
    return NormalizerSet(
        mu=mu,
        log_h=lh,
        log_h_tilde=log_h_tilde(mu),
        log_g=lh - math.log(abs(gs)),
        g_terms=used,
        log_gamma_half_mu2=log_gamma_half(x).log_abs,
        g_err=g_err,
    )


# ------------ Series sums ------------


@dataclass(frozen=True)
class SeriesSums:
    F: float
    G: float
    P: float
    Q: float
    terms: int
    err: float = 0.0


def _eval_all(coeffs: Sequence[np.ndarray], x: float, n: int) -> np.ndarray:
    return np.array([npoly.polyval(x, coeffs[s]) for s in range(n)])


def _choose_order(mags: np.ndarray, S: Optional[int], max_order: int) -> int:
    """Fixed S, or the S <= max_order whose two first omitted terms are smallest.

    Pairs keep an accidental zero of a single coefficient at this argument
    from picking the order.
    """
    if S is not None:
        return S
    pairs = mags[1 : max_order + 2] + mags[2 : max_order + 3]
    return int(np.argmin(pairs))


def _truncation_error(mags: np.ndarray, k: int, scale: float) -> float:
    return ERR_SAFETY * float(mags[k] + mags[k + 1]) / scale


def modified_sums(
    tau: float,
    mu: float,
    S: Optional[int],
    *,
    alternate_fg: bool,
    max_order: int = MAX_ORDER,
    tables: Optional[CoeffTables] = None,
) -> SeriesSums:
    """F, G, P, Q from φ_s(τ), ψ_s(τ).

    ``alternate_fg`` puts the (-1)^s factor on F and G (the τ̃ sums),
    otherwise on P and Q.
    """
    order = S if S is not None else max_order
    tables = tables or tables_for(order)
    n = order + 3
    eps = 1.0 / (mu * mu)
    powers = eps ** np.arange(n)
    signs = (-1.0) ** np.arange(n)
    phi = _eval_all(tables.phi_f, tau, n) * powers
    psi = _eval_all(tables.psi_f, tau, n) * powers
    mags = np.maximum(np.abs(phi), np.abs(psi))
    S_used = _choose_order(mags, S, max_order)
    k = S_used + 1
    plain_phi, plain_psi = phi[:k].sum(), psi[:k].sum()
    alt_phi, alt_psi = (signs[:k] * phi[:k]).sum(), (signs[:k] * psi[:k]).sum()
    if alternate_fg:
        F, G, P, Q = alt_phi, alt_psi, plain_phi, plain_psi
    else:
        F, G, P, Q = plain_phi, plain_psi, alt_phi, alt_psi
    scale = min(abs(F), abs(G), abs(P), abs(Q)) or 1.0
    return SeriesSums(F, G, P, Q, terms=k, err=_truncation_error(mags, k, scale))


# ------------ Region 2.1 / 2.2 ------------


def eval_region_21(
    mu: float,
    t: float,
    S: Optional[int] = None,
    *,
    max_order: int = MAX_ORDER,
    half_mu2: Optional[float] = None,
) -> Tuple[FunctionQuad, SeriesSums]:
    """U, V and derivatives at a = -½μ², z = μt√2, t > 1."""
    if not t > 1.0:
        raise DomainError(f"region 21 needs t > 1, got t={t}")
    m = mappings(t)
    nz = normalizers(mu, half_mu2)
    sums = modified_sums(m.tau, mu, S, alternate_fg=False, max_order=max_order)
    L = mu * mu * m.xi
    lq = 0.25 * math.log((t - 1.0) * (t + 1.0))
    lh = nz.log_h
    quad = FunctionQuad(
        U=ScaledValue.make(sums.F, lh - L - lq),
        dU=ScaledValue.make(-(mu / _SQRT2) * sums.G, lh + lq - L),
        V=ScaledValue.make(sums.P / (mu * _SQRT_PI), L - lh - lq),
        dV=ScaledValue.make(sums.Q / _SQRT_2PI, L + lq - lh),
        region=RegionTag.ELEM_21,
        err_estimate=sums.err,
    )
    return quad, sums


def reflect_negative_a(
    quad: FunctionQuad, mu: float, region: RegionTag, half_mu2: Optional[float] = None
) -> FunctionQuad:
    """Map U, V at (a, z) to (a, -z) for a = -½μ² < 0."""
    s, c = sincos_half_pi_mu2(mu, half_mu2)
    nz = normalizers(mu, half_mu2)
    gam = ScaledValue.from_log(1.0, nz.log_gamma_half_mu2)
    inv_gam = ScaledValue.from_log(1.0, -nz.log_gamma_half_mu2)
    U = quad.U * s + gam * quad.V * c
    V = inv_gam * quad.U * c - quad.V * s
    dU = -(quad.dU * s + gam * quad.dV * c)
    dV = -(inv_gam * quad.dU * c - quad.dV * s)
    return FunctionQuad(U, dU, V, dV, region, quad.err_estimate)


def eval_region_22(
    mu: float,
    t: float,
    S: Optional[int] = None,
    *,
    max_order: int = MAX_ORDER,
    half_mu2: Optional[float] = None,
) -> FunctionQuad:
    """U, V and derivatives at a = -½μ², z = -μt√2, t > 1."""
    if not t > 1.0:
        raise DomainError(f"region 22 needs t > 1, got t={t}")
    quad, _ = eval_region_21(mu, t, S, max_order=max_order, half_mu2=half_mu2)
    return reflect_negative_a(quad, mu, RegionTag.ELEM_22, half_mu2)


# ------------ Region 2.3 ------------


@dataclass(frozen=True)
class OscillatorySums:
    Ue: float
    Uo: float
    Ve: float
    Vo: float
    terms: int
    err: float = 0.0


def oscillatory_sums(
    mu: float,
    t: float,
    S: Optional[int],
    *,
    max_order: int = MAX_ORDER,
    tables: Optional[CoeffTables] = None,
) -> OscillatorySums:
    """Even/odd sums of u_s(t), v_s(t) with (1-t²)^{-3s/2} μ^{-2s} weights."""
    order = S if S is not None else max_order
    tables = tables or tables_for(order)
    n = order + 3
    om = (1.0 - t) * (1.0 + t)
    w = 1.0 / (om**1.5 * mu * mu)
    idx = np.arange(2 * n)
    weights = w**idx
    u = _eval_all(tables.u_f, t, 2 * n) * weights
    v = _eval_all(tables.v_f, t, 2 * n) * weights
    sign = (-1.0) ** np.arange(n)
    ue, uo = sign * u[0::2], sign * u[1::2]
    ve, vo = sign * v[0::2], sign * v[1::2]
    mags = np.max(np.abs(np.vstack([ue, uo, ve, vo])), axis=0)
    S_used = _choose_order(mags, S, max_order)
    k = S_used + 1
    Ue, Uo, Ve, Vo = ue[:k].sum(), uo[:k].sum(), ve[:k].sum(), vo[:k].sum()
    scale = max(abs(Ue), abs(Ve)) or 1.0
    return OscillatorySums(Ue, Uo, Ve, Vo, terms=k, err=_truncation_error(mags, k, scale))


def eval_region_23(
    mu: float,
    t: float,
    S: Optional[int] = None,
    *,
    max_order: int = MAX_ORDER,
    half_mu2: Optional[float] = None,
) -> FunctionQuad:
    """U, V and derivatives at a = -½μ², z = μt√2, |t| < 1."""
    if not abs(t) < 1.0:
        raise DomainError(f"region 23 needs |t| < 1, got t={t}")
    m = mappings(t)
    nz = normalizers(mu, half_mu2)
    sums = oscillatory_sums(mu, t, S, max_order=max_order)
    theta = mu * mu * m.eta
    cA, sA = math.cos(theta - math.pi / 4), math.sin(theta - math.pi / 4)
    cB, sB = math.cos(theta + math.pi / 4), math.sin(theta + math.pi / 4)
    lq = 0.25 * math.log((1.0 - t) * (1.0 + t))
    lg, lG = nz.log_g, nz.log_gamma_half_mu2
    dk = mu * _SQRT2
    return FunctionQuad(
        U=ScaledValue.make(2.0 * (cA * sums.Ue - sA * sums.Uo), lg - lq),
        dU=ScaledValue.make(dk * (sA * sums.Ve + cA * sums.Vo), lg + lq),
        V=ScaledValue.make(2.0 * (cB * sums.Ue - sB * sums.Uo), lg - lq - lG),
        dV=ScaledValue.make(dk * (sB * sums.Ve + cB * sums.Vo), lg + lq - lG),
        region=RegionTag.ELEM_23,
        err_estimate=sums.err + nz.g_err,
    )


# ------------ Region 2.4 / 2.5 ------------


def eval_region_24_25(
    mu: float,
    t: float,
    S: Optional[int] = None,
    *,
    negative_z: bool = False,
    max_order: int = MAX_ORDER,
    a_exact: Optional[float] = None,
) -> Tuple[FunctionQuad, SeriesSums]:
    """U, V and derivatives at a = ½μ², z = ±μt√2, t >= 0."""
    if t < 0.0:
        raise DomainError(f"regions 24/25 take t >= 0 and a sign flag, got t={t}")
    a = a_exact if a_exact is not None else 0.5 * mu * mu
    m = mappings(t)
    nz = normalizers(mu, a)
    sums = modified_sums(m.tau_tilde, mu, S, alternate_fg=True, max_order=max_order)
    L = mu * mu * m.xi_tilde
    lq = 0.25 * math.log1p(t * t)
    lG = nz.log_gamma_half_mu2
    k = -(mu / _SQRT2)

    Ur = ScaledValue.make(sums.F, nz.log_h_tilde - L - lq)
    dUr = ScaledValue.make(k * sums.G, nz.log_h_tilde + lq - L)
    Ud = ScaledValue.make(_SQRT_2PI * sums.P, nz.log_h + L - lq - lG)
    dUd = ScaledValue.make(k * _SQRT_2PI * sums.Q, nz.log_h + L + lq - lG)

    sa = sinpi(a)
    conn = ScaledValue.from_log(1.0, lG - _LN_PI)
    if not negative_z:
        U, dU = Ur, dUr
        V = conn * (Ur * sa + Ud)
        dV = conn * (dUr * sa - dUd)
        region = RegionTag.ELEM_24
        parts = ConnectionParts(Ur, dUr, Ud, dUd, conn)
    else:
        U, dU = Ud, dUd
        V = conn * (Ud * sa + Ur)
        dV = conn * (dUd * sa - dUr)
        region = RegionTag.ELEM_25
        parts = ConnectionParts(Ud, dUd, Ur, dUr, conn)
    return FunctionQuad(U, dU, V, dV, region, sums.err, parts), sums


def wronskian_delta(sums: SeriesSums) -> float:
    """|½(FQ + GP) - 1|; zero when the truncated sums satisfy the exact Wronskian."""
    return abs(0.5 * (sums.F * sums.Q + sums.G * sums.P) - 1.0)
