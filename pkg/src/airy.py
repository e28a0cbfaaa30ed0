"""
Airy-type uniform expansions near the turning points t = ±1.

- airy_eval: Ai, Ai', Bi, Bi' in scaled form (Maclaurin series in mpmath for
  moderate |x|, the standard asymptotic series beyond).
- zeta_map: ζ(t), φ(ζ), χ(ζ) and the Maclaurin coefficients of Ψ(ζ).
- airy_coeffs / eval_airy_olver: Olver's A, B, C, D sums from u_s, v_s.
- solve_maclaurin_FG / eval_airy_modified: the modified F, G functions from
  their Maclaurin system, solved by iterated backward recursion (or a
  forward run from turning-point data at small μ) and
  normalized with the exact Wronskian.

Parametrization: a = -½μ², z = μt√2; derivatives are with respect to z.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from numpy.polynomial import polynomial as npoly

from config import AiryConfig
from elem import ERR_SAFETY, log_h, mappings, normalizers, reflect_negative_a, tables_for
from errors import DomainError, InternalError, NonConvergence, TooCloseToTurningPoint
from exactpoly import airy_alpha, airy_beta
from fpmath import mp_precision
from logs import get_logger, timed
from refseries import uv_series
from scaled import ZERO, FunctionQuad, RegionTag, ScaledValue

log = get_logger("pcf.airy")

_SQRT_PI = math.sqrt(math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT2 = math.sqrt(2.0)
_SERIES_BITS = 200
_SERIES_TERMS = 90
_NEAR_T = 0.05
_CHI_SERIES_ZETA = 0.3
_ASYMPTOTIC_TERMS = 60


# ------------ Ai, Bi ------------


@dataclass(frozen=True)
class AiryQuad:
    Ai: ScaledValue
    dAi: ScaledValue
    Bi: ScaledValue
    dBi: ScaledValue

    def wronskian(self) -> ScaledValue:
        """Ai·Bi' - Ai'·Bi, equal to 1/π."""
        return self.Ai * self.dBi - self.dAi * self.Bi


def _airy_maclaurin(x: float) -> AiryQuad:
    theta = 2.0 / 3.0 * abs(x) ** 1.5
    bits = 64 + int(math.ceil(2.0 * theta / math.log(2.0)))
    with mp_precision(bits):
        X = mpmath.mpf(x)
        X3 = X**3
        eps = mpmath.ldexp(1, -bits)
        # f: a0=1, a1=0; g: a0=0, a1=1; a_{n+3} = a_n / ((n+2)(n+3))
        f = df = g = dg = mpmath.mpf(0)
        af, ag = mpmath.mpf(1), mpmath.mpf(1)
        xp = mpmath.mpf(1)  # X^n
        n = 0
        while True:
            tf, tg = af * xp, ag * xp * X
            f += tf
            g += tg
            if n and X:
                df += n * af * xp / X
            dg += (n + 1) * ag * xp
            if n > 6 and abs(tf) <= eps * abs(f) and abs(tg) <= eps * abs(g):
                break
            af /= (n + 2) * (n + 3)
            ag /= (n + 3) * (n + 4)
            xp *= X3
            n += 3
        c1 = mpmath.power(3, -mpmath.mpf(2) / 3) / mpmath.gamma(mpmath.mpf(2) / 3)
        c2 = mpmath.power(3, -mpmath.mpf(1) / 3) / mpmath.gamma(mpmath.mpf(1) / 3)
        s3 = mpmath.sqrt(3)
        return AiryQuad(
            Ai=ScaledValue.from_mpf(c1 * f - c2 * g),
            dAi=ScaledValue.from_mpf(c1 * df - c2 * dg),
            Bi=ScaledValue.from_mpf(s3 * (c1 * f + c2 * g)),
            dBi=ScaledValue.from_mpf(s3 * (c1 * df + c2 * dg)),
        )


@lru_cache(maxsize=1)
def _uv_airy() -> Tuple[np.ndarray, np.ndarray]:
    """u_k = α_k (2/3)^k, v_k = β_k (2/3)^k of the Airy asymptotic series."""
    u = np.array([float(airy_alpha(k)) * (2.0 / 3.0) ** k for k in range(_ASYMPTOTIC_TERMS)])
    v = np.array([float(airy_beta(k)) * (2.0 / 3.0) ** k for k in range(_ASYMPTOTIC_TERMS)])
    return u, v


def _truncated(terms: np.ndarray) -> float:
    """Sum up to (excluding) the smallest term."""
    mags = np.abs(terms)
    stop = int(np.argmin(mags[1:])) + 1 if len(mags) > 1 else 1
    return float(terms[:stop].sum())


def _airy_asymptotic(x: float) -> AiryQuad:
    y = abs(x)
    theta = 2.0 / 3.0 * y**1.5
    u, v = _uv_airy()
    k = np.arange(len(u))
    inv = theta ** (-k.astype(float))
    q = y**0.25
    if x > 0:
        alt = (-1.0) ** k
        su_alt, sv_alt = _truncated(alt * u * inv), _truncated(alt * v * inv)
        su, sv = _truncated(u * inv), _truncated(v * inv)
        return AiryQuad(
            Ai=ScaledValue.make(su_alt / (2.0 * _SQRT_PI * q), -theta),
            dAi=ScaledValue.make(-q * sv_alt / (2.0 * _SQRT_PI), -theta),
            Bi=ScaledValue.make(su / (_SQRT_PI * q), theta),
            dBi=ScaledValue.make(q * sv / _SQRT_PI, theta),
        )
    half = len(u) // 2
    j = np.arange(half)
    sgn = (-1.0) ** j
    ue = _truncated(sgn * u[0::2][:half] * inv[0::2][:half])
    uo = _truncated(sgn * u[1::2][:half] * inv[1::2][:half])
    ve = _truncated(sgn * v[0::2][:half] * inv[0::2][:half])
    vo = _truncated(sgn * v[1::2][:half] * inv[1::2][:half])
    c, s = math.cos(theta - math.pi / 4), math.sin(theta - math.pi / 4)
    return AiryQuad(
        Ai=ScaledValue.of((c * ue + s * uo) / (_SQRT_PI * q)),
        dAi=ScaledValue.of(q * (s * ve - c * vo) / _SQRT_PI),
        Bi=ScaledValue.of((-s * ue + c * uo) / (_SQRT_PI * q)),
        dBi=ScaledValue.of(q * (c * ve + s * vo) / _SQRT_PI),
    )


def airy_eval(x: float, cutoff: float = 9.0) -> AiryQuad:
    """Ai(x), Ai'(x), Bi(x), Bi'(x); exponential factors kept in the log-scale."""
    if abs(x) <= cutoff:
        return _airy_maclaurin(x)
    return _airy_asymptotic(x)


# ------------ Power-series helpers (mpmath) ------------


def _ser_mul(a: Sequence, b: Sequence, n: int) -> List:
    return [mpmath.fsum(a[j] * b[k - j] for j in range(k + 1) if j < len(a) and k - j < len(b)) for k in range(n)]


def _ser_pow(a: Sequence, alpha, n: int) -> List:
    """a(x)^alpha for a[0] > 0 (J.C.P. Miller recurrence)."""
    out = [mpmath.power(a[0], alpha)]
    for m in range(1, n):
        acc = mpmath.fsum(((alpha + 1) * k - m) * a[k] * out[m - k] for k in range(1, m + 1) if k < len(a))
        out.append(acc / (m * a[0]))
    return out


# ------------ ζ(t) ------------


@dataclass(frozen=True)
class ZetaSeries:
    """Series data around the turning point, computed once."""

    zeta_of_x: Tuple[float, ...]  # ζ = Σ zeta_of_x[k] x^k, x = t - 1
    t_of_zeta: Tuple[float, ...]  # t = Σ t_of_zeta[k] ζ^k
    s_of_zeta: Tuple[float, ...]  # (t²-1)/ζ
    chi_of_zeta: Tuple[float, ...]
    psi_coeffs: Tuple[float, ...]  # Ψ(ζ) = Σ psi_coeffs[n] ζ^n


@lru_cache(maxsize=1)
def zeta_series() -> ZetaSeries:
    n = _SERIES_TERMS
    with mp_precision(_SERIES_BITS), timed(log, "turning-point series"):
        half = mpmath.mpf(1) / 2
        c = [mpmath.binomial(half, k) * mpmath.power(2, -k) / (k + mpmath.mpf(3) / 2) for k in range(n + 2)]
        B = [3 / mpmath.sqrt(2) * ck for ck in c]
        b = _ser_pow(B, mpmath.mpf(2) / 3, n + 2)  # ζ = x·b(x)
        zeta_x = [mpmath.mpf(0)] + b[: n + 1]

        # Lagrange inversion: x = Σ w_k ζ^k, w_k = [x^{k-1}] b^{-k} / k
        w = [mpmath.mpf(0)]
        for k in range(1, n + 2):
            w.append(_ser_pow(b, -k, k)[k - 1] / k)
        t_z = [mpmath.mpf(1)] + w[1:]

        X2 = _ser_mul(w, w, n + 3)
        s = [2 * w[k + 1] + X2[k + 1] for k in range(n + 1)]
        ds = [(k + 1) * s[k + 1] for k in range(n)]
        inv_s = _ser_pow(s, -1, n)
        chi = [-v / 4 for v in _ser_mul(ds, inv_s, n)]

        # Ψ ζ² = 5/16 - (3t²+2)/(4 s³), 3t²+2 = 5 + 6X + 3X²
        top = [5 + 6 * w[0] + 3 * X2[0]] + [6 * w[k] + 3 * X2[k] for k in range(1, n + 1)]
        s_m3 = _ser_pow(s, -3, n + 1)
        num = [-v / 4 for v in _ser_mul(top, s_m3, n + 1)]
        num[0] += mpmath.mpf(5) / 16
        if abs(num[0]) > mpmath.mpf(10) ** (-40) or abs(num[1]) > mpmath.mpf(10) ** (-40):
            raise InternalError("leading terms of the Psi series do not cancel")
        psi = num[2:]

        def floats(xs: Sequence) -> Tuple[float, ...]:
            return tuple(float(v) for v in xs)

        return ZetaSeries(floats(zeta_x), floats(t_z), floats(s), floats(chi), floats(psi))


@dataclass(frozen=True)
class TurningPointMap:
    t: float
    zeta: float
    phi: float  # (ζ/(t²-1))^{1/4}
    chi: float  # φ'(ζ)/φ(ζ)
    dzeta_dt: float
    psi_coeffs: Tuple[float, ...]
    t_of_zeta_coeffs: Tuple[float, ...]


def zeta_of_t(t: float) -> float:
    if t <= -1.0:
        raise DomainError(f"zeta(t) needs t > -1, got t={t}")
    x = t - 1.0
    if abs(x) <= _NEAR_T:
        return float(npoly.polyval(x, zeta_series().zeta_of_x))
    m = mappings(t)
    if t > 1.0:
        return (1.5 * m.xi) ** (2.0 / 3.0)
    return -((1.5 * m.eta) ** (2.0 / 3.0))


def t_of_zeta(zeta: float) -> float:
    return float(npoly.polyval(zeta, zeta_series().t_of_zeta))


def zeta_map(t: float) -> TurningPointMap:
    ser = zeta_series()
    zeta = zeta_of_t(t)
    if abs(t - 1.0) <= _NEAR_T:
        s = float(npoly.polyval(zeta, ser.s_of_zeta))
    else:
        s = (t - 1.0) * (t + 1.0) / zeta
    phi = s ** -0.25
    if abs(zeta) < _CHI_SERIES_ZETA:
        chi = float(npoly.polyval(zeta, ser.chi_of_zeta))
    else:
        chi = (1.0 - 2.0 * t * phi**6) / (4.0 * zeta)
    return TurningPointMap(
        t=t,
        zeta=zeta,
        phi=phi,
        chi=chi,
        dzeta_dt=math.sqrt(s),
        psi_coeffs=ser.psi_coeffs,
        t_of_zeta_coeffs=ser.t_of_zeta,
    )


# ------------ Olver coefficients ------------


@dataclass(frozen=True)
class AiryCoeffSet:
    a: Tuple[float, ...]
    b: Tuple[float, ...]
    c: Tuple[float, ...]
    d: Tuple[float, ...]
    A: float = math.nan
    B: float = math.nan
    C: float = math.nan
    D: float = math.nan
    err: float = 0.0


def airy_coeffs(
    t: float, s_max: int, mu: Optional[float] = None, *, zeta_min: float = 0.35
) -> AiryCoeffSet:
    """a_s..d_s for s <= s_max; with mu, also the sums and a truncation error from two extra terms."""
    tp = zeta_map(t)
    zeta = tp.zeta
    if abs(zeta) < zeta_min:
        raise TooCloseToTurningPoint(f"|zeta|={abs(zeta):.3g} < {zeta_min} at t={t}")
    n = s_max + 3
    tables = tables_for(n)
    u = np.array([npoly.polyval(t, tables.u_f[k]) for k in range(2 * n + 1)])
    v = np.array([npoly.polyval(t, tables.v_f[k]) for k in range(2 * n + 1)])
    alpha = [float(x) for x in tables.alpha]
    beta = [float(x) for x in tables.beta]
    om = (t - 1.0) * (t + 1.0)
    w = om**-3
    p = tp.phi**-6
    a_s, b_s, c_s, d_s = [], [], [], []
    for s in range(n):
        ws = w**s
        a_s.append(ws * sum(beta[m] * p**m * u[2 * s - m] for m in range(2 * s + 1)))
        d_s.append(ws * sum(alpha[m] * p**m * v[2 * s - m] for m in range(2 * s + 1)))
        b_s.append(-ws * sum(alpha[m] * p**m * u[2 * s + 1 - m] for m in range(2 * s + 2)) / (zeta * zeta * p))
        c_s.append(-ws * sum(beta[m] * p**m * v[2 * s + 1 - m] for m in range(2 * s + 2)) / (zeta * p))
    if mu is None:
        k = s_max + 1
        return AiryCoeffSet(tuple(a_s[:k]), tuple(b_s[:k]), tuple(c_s[:k]), tuple(d_s[:k]))
    q = mu**-4
    k = s_max + 1
    A = sum(a_s[s] * q**s for s in range(k))
    B = sum(b_s[s] * q**s for s in range(k))
    C = sum(c_s[s] * q**s for s in range(k))
    D = sum(d_s[s] * q**s for s in range(k))
    err = ERR_SAFETY * sum(
        max(abs(a_s[j]), abs(b_s[j]), abs(c_s[j]), abs(d_s[j])) * q**j for j in (k, k + 1)
    )
    return AiryCoeffSet(
        tuple(a_s[:k]), tuple(b_s[:k]), tuple(c_s[:k]), tuple(d_s[:k]), A, B, C, D, float(err)
    )


def eval_airy_olver(
    mu: float,
    t: float,
    s_max: int = 4,
    cfg: Optional[AiryConfig] = None,
    half_mu2: Optional[float] = None,
) -> FunctionQuad:
    """U, V and derivatives at a = -½μ², z = μt√2 from Olver's Airy-type expansion."""
    cfg = cfg or AiryConfig()
    if mu < cfg.mu_min:
        raise DomainError(f"Olver Airy form needs mu >= {cfg.mu_min}, got {mu}")
    if t <= -1.0 + cfg.delta:
        raise DomainError(f"Olver Airy form needs t > -1 + {cfg.delta}, got {t}")
    tp = zeta_map(t)
    co = airy_coeffs(t, s_max, mu, zeta_min=cfg.zeta_min)
    nz = normalizers(mu, half_mu2)
    x = mu ** (4.0 / 3.0) * tp.zeta
    aq = airy_eval(x, cfg.series_cutoff)
    m83 = mu ** (-8.0 / 3.0)
    m43 = mu ** (-4.0 / 3.0)

    lu = math.log(2.0 * _SQRT_PI * mu ** (1.0 / 3.0) * tp.phi) + nz.log_g
    ld = math.log(_SQRT_2PI * mu ** (2.0 / 3.0) / tp.phi) + nz.log_g
    lG = nz.log_gamma_half_mu2
    U = (aq.Ai * co.A + aq.dAi * (co.B * m83)).scale_log(lu)
    dU = (aq.Ai * (co.C * m43) + aq.dAi * co.D).scale_log(ld)
    V = (aq.Bi * co.A + aq.dBi * (co.B * m83)).scale_log(lu - lG)
    dV = (aq.Bi * (co.C * m43) + aq.dBi * co.D).scale_log(ld - lG)
    return FunctionQuad(U, dU, V, dV, RegionTag.AIRY_PLUS, co.err + nz.g_err)


# ------------ Modified F, G via Maclaurin system ------------

# Fast solutions of the system grow with n up to n ≈ 2μ²; backward sweeps
# stay clean while N <= _BACKWARD_SPAN·μ².
_BACKWARD_SPAN = 3.5
_CHECK_STEP = 10
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class MaclaurinSolution:
    mu: float
    N: int
    c: np.ndarray
    d: np.ndarray
    radius: float
    wronskian_target: float  # ln of μ⁴·2√π μ h²/Γ(½+½μ²)
    iterations: int
    direction: str = "backward"
    data_err: float = 0.0  # relative error of the ζ = 0 data behind a forward run

    def FG(self, zeta: float) -> Tuple[float, float, float, float]:
        """F, F', G, G' at ζ."""
        c, d = self.c, self.d
        n = np.arange(1, len(c))
        return (
            float(npoly.polyval(zeta, c)),
            float(npoly.polyval(zeta, n * c[1:])),
            float(npoly.polyval(zeta, d)),
            float(npoly.polyval(zeta, n * d[1:])),
        )


def default_degree(mu: float, cfg: AiryConfig) -> int:
    n = max(40, int(math.ceil(10.0 + 6.0 * cfg.radius * mu ** (4.0 / 3.0))))
    return min(n, cfg.max_degree)


def backward_limit(mu: float) -> int:
    """Largest truncation degree the backward sweep handles at this μ."""
    return int(_BACKWARD_SPAN * mu * mu)


def _backward_pass(c: np.ndarray, d: np.ndarray, psi: np.ndarray, mu4: float, N: int) -> None:
    for n in range(N, -1, -1):
        rho = float(np.dot(psi[: n + 1], c[n::-1]))
        c2 = c[n + 2] if n + 2 <= N else 0.0
        d[n] = (rho - (n + 2) * (n + 1) * c2) / (2 * n + 1)
        if n + 1 <= N:
            sigma = float(np.dot(psi[: n + 1], d[n::-1]))
            d2 = d[n + 2] if n + 2 <= N else 0.0
            c[n + 1] = (sigma - (n + 2) * (n + 1) * d2) / (2.0 * mu4 * (n + 1))


def _forward_pass(c: np.ndarray, d: np.ndarray, psi: np.ndarray, mu4: float, N: int) -> None:
    for n in range(N - 1):
        rho = float(np.dot(psi[: n + 1], c[n::-1]))
        sigma = float(np.dot(psi[: n + 1], d[n::-1]))
        k = (n + 2) * (n + 1)
        c[n + 2] = (rho - (2 * n + 1) * d[n]) / k
        d[n + 2] = (sigma - 2.0 * mu4 * (n + 1) * c[n + 1]) / k


def _psi_array(N: int) -> np.ndarray:
    coeffs = zeta_series().psi_coeffs
    out = np.zeros(N + 1)
    k = min(len(coeffs), N + 1)
    out[:k] = coeffs[:k]
    return out


def _backward_solve(mu: float, N: int, psi: np.ndarray, cfg: AiryConfig) -> Tuple[np.ndarray, np.ndarray, int]:
    mu4 = mu**4
    c = np.zeros(N + 1)
    d = np.zeros(N + 1)
    c[0] = 1.0
    for it in range(1, cfg.max_iterations + 1):
        c_old, d_old = c.copy(), d.copy()
        _backward_pass(c, d, psi, mu4, N)
        c[0] = 1.0
        scale = max(np.max(np.abs(c)), np.max(np.abs(d)))
        change = max(np.max(np.abs(c - c_old)), np.max(np.abs(d - d_old))) / scale
        if not math.isfinite(change):
            break
        if change < cfg.tolerance:
            return c, d, it
    raise NonConvergence(f"Maclaurin F/G iteration did not settle for mu={mu}, N={N}")


def _turning_point_data(mu: float) -> Tuple[Tuple[float, float, float, float], float]:
    """F(0), F'(0), G(0), G'(0) inverted from U, V at z = μ√2, with their relative error."""
    half_mu2 = 0.5 * mu * mu
    try:
        ref = uv_series(-half_mu2, mu * _SQRT2)
    except DomainError as exc:
        raise DomainError(f"no turning-point data for a forward Maclaurin run at mu={mu}: {exc}") from exc
    tp = zeta_map(1.0)
    nz = normalizers(mu, half_mu2)
    lk = -(2.0 / 3.0) * math.log(mu) - nz.log_h
    lU = nz.log_gamma_half_mu2 + lk
    d_div = 1.0 / (mu * _SQRT2 * tp.phi)
    bU = ref.U.scale_log(-lU).value / tp.phi
    bV = ref.V.scale_log(-lk).value / tp.phi
    dbU = ref.dU.scale_log(-lU).value / d_div
    dbV = ref.dV.scale_log(-lk).value / d_div

    aq = airy_eval(0.0)
    ai, dai, bi, dbi = aq.Ai.value, aq.dAi.value, aq.Bi.value, aq.dBi.value
    # Ai·Bi' - Ai'·Bi = 1/π
    F0 = math.pi * (bU * dbi - bV * dai)
    G0 = math.pi * (ai * bV - bi * bU) * mu ** (8.0 / 3.0)
    c_ai = math.pi * (dbU * dbi - dbV * dai)
    c_dai = math.pi * (ai * dbV - bi * dbU)
    dF0 = c_ai - tp.chi * F0
    dG0 = (c_dai * mu ** (-4.0 / 3.0) - F0) * mu**4 - tp.chi * G0
    return (F0, dF0, G0, dG0), ref.err_estimate * mu**4


def solve_maclaurin_FG(mu: float, N: Optional[int] = None, cfg: Optional[AiryConfig] = None) -> MaclaurinSolution:
    """c_n, d_n of F = Σc_nζ^n, G = Σd_nζ^n, normalized by the exact Wronskian at ζ = 0.

    Up to ``backward_limit(mu)`` the coefficients come from iterated backward
    sweeps. Past it the sweep is dominated by the fast solutions, so the
    recursion runs forward from F, G, F', G' at ζ = 0 inverted from the
    reference series at the turning point.
    """
    cfg = cfg or AiryConfig()
    if mu < 1.0:
        raise DomainError(f"Maclaurin solver needs mu >= 1, got {mu}")
    N = N if N is not None else default_degree(mu, cfg)
    if N < 20:
        raise DomainError(f"Maclaurin solver needs N >= 20, got {N}")
    mu4 = mu**4
    psi = _psi_array(N)
    if N <= backward_limit(mu):
        c, d, it = _backward_solve(mu, N, psi, cfg)
        direction, data_err = "backward", 0.0
    else:
        start, data_err = _turning_point_data(mu)
        c = np.zeros(N + 1)
        d = np.zeros(N + 1)
        c[0], c[1], d[0], d[1] = start
        _forward_pass(c, d, psi, mu4, N)
        it, direction = 0, "forward"
    log.debug("Maclaurin F/G: mu=%s N=%d %s, %d iterations", mu, N, direction, it)

    nz = normalizers(mu)
    log_target = 4.0 * math.log(mu) + math.log(2.0 * _SQRT_PI) + math.log(mu) + 2.0 * log_h(mu) - nz.log_gamma_half_mu2
    w0 = mu4 * c[0] ** 2 + c[0] * d[1] - c[1] * d[0]
    if not w0 > 0.0:
        raise NonConvergence(f"Maclaurin F/G: non-positive Wronskian {w0} for mu={mu}, N={N}")
    factor = math.exp(0.5 * (log_target - math.log(w0)))
    if direction == "forward" and abs(factor - 1.0) > 1e-8:
        log.warning("turning-point data off the exact Wronskian by %.2e at mu=%s", factor - 1.0, mu)
    return MaclaurinSolution(mu, N, c * factor, d * factor, cfg.radius, log_target, it, direction, data_err)


class _SolutionCache:
    """Per-(μ, N) memo shared by worker threads."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._data: Dict[Tuple[float, int], MaclaurinSolution] = {}

    def get(self, mu: float, cfg: AiryConfig, N: Optional[int] = None) -> MaclaurinSolution:
        key = (mu, N if N is not None else default_degree(mu, cfg))
        with self._lock:
            sol = self._data.get(key)
        if sol is None:
            sol = solve_maclaurin_FG(mu, key[1], cfg)
            with self._lock:
                sol = self._data.setdefault(key, sol)
        return sol

    def clear(self) -> None:
        with self._lock:
            self._data.clear()


SOLUTIONS = _SolutionCache()


def _magnitude(terms: Sequence[Tuple[ScaledValue, float]]) -> ScaledValue:
    total = ZERO
    for p, x in terms:
        total = total + ScaledValue(abs(p.mantissa), p.log_scale) * abs(x)
    return total


def _gap_ratio(airy: Tuple[ScaledValue, ScaledValue], gap: Tuple[float, float], ref: Tuple[float, float]) -> float:
    """Σ|p_i δ_i| / Σ|p_i x_i|: a relative error that stays finite through zeros of the sum."""
    num = _magnitude(tuple(zip(airy, gap)))
    if num.mantissa == 0.0:
        return 0.0
    den = _magnitude(tuple(zip(airy, ref)))
    return math.exp(min(num.log_abs - den.log_abs, 700.0))


def eval_airy_modified(
    mu: float,
    t: float,
    cfg: Optional[AiryConfig] = None,
    half_mu2: Optional[float] = None,
) -> FunctionQuad:
    """U, V and derivatives at a = -½μ², z = μt√2 for |ζ(t)| <= R.

    The error estimate is the gap to the solution of degree N + 10, taken
    term by term against the Ai and Bi combinations. A forward solution adds
    the error of its turning-point data, grown by Bi/Ai for ζ > 0.
    """
    cfg = cfg or AiryConfig()
    tp = zeta_map(t)
    if abs(tp.zeta) > cfg.radius:
        raise DomainError(f"modified Airy form needs |zeta| <= {cfg.radius}, got {tp.zeta:.3g}")
    sol = SOLUTIONS.get(mu, cfg)
    check = SOLUTIONS.get(mu, cfg, sol.N + _CHECK_STEP)
    nz = normalizers(mu, half_mu2)
    x = mu ** (4.0 / 3.0) * tp.zeta
    aq = airy_eval(x, cfg.series_cutoff)
    m83 = mu ** (-8.0 / 3.0)
    m43 = mu ** (4.0 / 3.0)
    mu4 = mu**-4
    phi, chi, zeta = tp.phi, tp.chi, tp.zeta

    def weights(F: float, dF: float, G: float, dG: float) -> Tuple[float, float, float, float]:
        # multipliers of (Ai, Ai') in U and of (Ai, Ai') in U'; V uses Bi the same way
        return (F, G * m83, chi * F + dF + zeta * G, m43 * (F + mu4 * (chi * G + dG)))

    main = sol.FG(zeta)
    w = weights(*main)
    g = weights(*(p - q for p, q in zip(check.FG(zeta), main)))
    bU = aq.Ai * w[0] + aq.dAi * w[1]
    bV = aq.Bi * w[0] + aq.dBi * w[1]
    cU = aq.Ai * w[2] + aq.dAi * w[3]
    cV = aq.Bi * w[2] + aq.dBi * w[3]
    spread = max(
        _gap_ratio(pair, g[i : i + 2], w[i : i + 2])
        for pair in ((aq.Ai, aq.dAi), (aq.Bi, aq.dBi))
        for i in (0, 2)
    )

    data_err = max(sol.data_err, check.data_err)
    if sol.direction == "forward":
        data_err += sol.N * _EPS
        if x > 0.0:
            data_err *= math.exp(min(4.0 / 3.0 * x**1.5, 700.0))

    lk = -(2.0 / 3.0) * math.log(mu) - nz.log_h
    lU = nz.log_gamma_half_mu2 + lk
    d_div = 1.0 / (mu * _SQRT2 * phi)
    U = bU.scale_log(lU) * phi
    V = bV.scale_log(lk) * phi
    dU = cU.scale_log(lU) * d_div
    dV = cV.scale_log(lk) * d_div
    return FunctionQuad(U, dU, V, dV, RegionTag.AIRY_PLUS, ERR_SAFETY * spread + data_err)


def eval_airy(
    mu: float,
    t: float,
    negative_z: bool = False,
    cfg: Optional[AiryConfig] = None,
    s_max: int = 4,
    half_mu2: Optional[float] = None,
) -> FunctionQuad:
    """Modified form when |ζ| <= R, otherwise Olver's form; reflected for z < 0."""
    cfg = cfg or AiryConfig()
    if abs(zeta_of_t(t)) <= cfg.radius:
        quad = eval_airy_modified(mu, t, cfg, half_mu2)
    else:
        quad = eval_airy_olver(mu, t, s_max, cfg, half_mu2)
    if negative_z:
        return reflect_negative_a(quad, mu, RegionTag.AIRY_MINUS, half_mu2)
    return quad
