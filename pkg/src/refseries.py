"""
Reference evaluation of U(a,z), V(a,z) and their derivatives from the
Maclaurin (Kummer 1F1) representation, plus the double-precision log-gamma
kernel used by the asymptotic evaluators.

Working precision starts at ``series.base_bits`` and is raised by the measured
cancellation until enough digits survive; mpmath carries the arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Optional, Tuple

import mpmath

from config import SeriesConfig
from errors import AccuracyLoss, DomainError, NonConvergence, Pole, PoleInC
from exactpoly import gamma_coeffs
from fpmath import cospi, mp_precision
from logs import get_logger
from scaled import ConnectionParts, FunctionQuad, RegionTag, ScaledValue

log = get_logger("pcf.refseries")

_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_LN_PI = math.log(math.pi)
_GAMMA_SHIFT = 20.0
_GAMMA_TERMS = 12
_TARGET_DIGITS = 16.0


# ------------ Types ------------


@dataclass(frozen=True)
class SeriesResult:
    """A summed series with its cost and cancellation (log10 of max term / |sum|)."""

    value: Any
    term_count: int
    cancellation_digits: float


@dataclass(frozen=True)
class GammaValue:
    """Γ(½+x) = sign · exp(log_abs)."""

    log_abs: float
    sign: int

    @property
    def value(self) -> float:
        return self.sign * math.exp(self.log_abs)


# ------------ Kummer 1F1 ------------


def kummer_1f1(a: Any, c: Any, z: Any, *, max_terms: int = 10_000) -> SeriesResult:
    """Σ (a)_n/(c)_n z^n/n! at the current mpmath precision."""
    a, c, z = mpmath.mpf(a), mpmath.mpf(c), mpmath.mpf(z)
    if c <= 0 and c == mpmath.floor(c):
        raise PoleInC(f"1F1 lower parameter is a non-positive integer: c={c}")

    eps = mpmath.ldexp(1, -mpmath.mp.prec)
    total = mpmath.mpf(1)
    term = mpmath.mpf(1)
    biggest = mpmath.mpf(1)
    small_run = 0
    n = 0
    while small_run < 3:
        if n >= max_terms:
            raise NonConvergence(f"1F1({a}, {c}, {z}) needs more than {max_terms} terms")
        term = term * (a + n) / (c + n) * z / (n + 1)
        n += 1
        total += term
        mag = abs(term)
        if mag > biggest:
            biggest = mag
        small_run = small_run + 1 if mag <= eps * abs(total) else 0

    if total == 0:
        cancel = math.inf
    else:
        cancel = max(0.0, float(mpmath.log10(biggest / abs(total))))
    return SeriesResult(value=total, term_count=n + 1, cancellation_digits=cancel)


# ------------ U, V from the Maclaurin form ------------


def _combine_digits(*terms: Any) -> Tuple[Any, float]:
    """Sum terms; return (sum, digits lost to cancellation)."""
    total = mpmath.fsum(terms)
    biggest = max(abs(t) for t in terms)
    if biggest == 0:
        return total, 0.0
    if total == 0:
        return total, math.inf
    return total, max(0.0, float(mpmath.log10(biggest / abs(total))))


def _uv_at_precision(
    a: Any, z: Any, max_terms: int, *, with_mirror: bool = False
) -> Tuple[Tuple[Any, ...], float]:
    """U, U', V, V' at (a, z); with ``with_mirror`` also U(a,-z) and U'(a,-z)."""
    a, z = mpmath.mpf(a), mpmath.mpf(z)
    X = z * z / 2
    alpha = a / 2 + mpmath.mpf(1) / 4
    beta = a / 2 + mpmath.mpf(3) / 4
    E = mpmath.exp(-z * z / 4)

    sums = [
        kummer_1f1(alpha, mpmath.mpf(1) / 2, X, max_terms=max_terms),
        kummer_1f1(alpha + 1, mpmath.mpf(3) / 2, X, max_terms=max_terms),
        kummer_1f1(beta, mpmath.mpf(3) / 2, X, max_terms=max_terms),
        kummer_1f1(beta + 1, mpmath.mpf(5) / 2, X, max_terms=max_terms),
    ]
    m1, m1p, m2, m2p = (s.value for s in sums)
    lost = max(s.cancellation_digits for s in sums)

    y1 = E * m1
    y2 = z * E * m2
    d_inner, c1 = _combine_digits(-m1 / 2, 2 * alpha * m1p)
    dy1 = z * E * d_inner
    d_inner2, c2 = _combine_digits(m2 * (1 - X), z * z * (beta / mpmath.mpf(1.5)) * m2p)
    dy2 = E * d_inner2
    lost = max(lost, c1, c2)

    q = mpmath.root(2, 4)  # 2^(1/4)
    x = a / 2 + mpmath.mpf(1) / 4
    ga, gb = mpmath.rgamma(mpmath.mpf(3) / 4 + a / 2), mpmath.rgamma(mpmath.mpf(1) / 4 + a / 2)
    gc, gd = mpmath.rgamma(mpmath.mpf(3) / 4 - a / 2), mpmath.rgamma(mpmath.mpf(1) / 4 - a / 2)
    sx, cx = mpmath.sinpi(x), mpmath.cospi(x)
    pu = mpmath.sqrt(mpmath.pi) * mpmath.power(2, -a / 2)
    pv = mpmath.power(2, a / 2 + mpmath.mpf(1) / 2)

    out = []
    for f1, f2 in ((y1, y2), (dy1, dy2)):
        out.append(_combine_digits(pu * f1 * ga / q, -pu * q * f2 * gb))
    for f1, f2 in ((y1, y2), (dy1, dy2)):
        out.append(_combine_digits(pv * sx * f1 * gc / q, pv * q * cx * f2 * gd))
    if with_mirror:
        # y1, dy2 even and y2, dy1 odd in z
        out.append(_combine_digits(pu * y1 * ga / q, pu * q * y2 * gb))
        out.append(_combine_digits(-pu * dy1 * ga / q, -pu * q * dy2 * gb))
    lost = max([lost] + [c for _, c in out])
    return tuple(v for v, _ in out), lost


def uv_series(a: float, z: float, cfg: Optional[SeriesConfig] = None) -> FunctionQuad:
    """U, U', V, V' at (a, z) with adaptive working precision.

    For a >= 0 the result also carries U(a,-z), U'(a,-z) so the Wronskian
    can be formed through the connection formula.
    """
    cfg = cfg or SeriesConfig()
    if abs(a) > cfg.a_max or abs(z) > cfg.z_max:
        raise DomainError(
            f"reference series limited to |a| <= {cfg.a_max}, |z| <= {cfg.z_max}; got a={a}, z={z}"
        )
    with_mirror = a >= 0.0
    bits = cfg.base_bits
    while True:
        with mp_precision(bits):
            values, lost = _uv_at_precision(
                mpmath.mpf(a), mpmath.mpf(z), cfg.max_terms, with_mirror=with_mirror
            )
            digits = bits * math.log10(2.0) - lost
            if digits >= _TARGET_DIGITS or bits >= cfg.max_bits:
                if with_mirror:
                    conn = ScaledValue.from_mpf(mpmath.gamma(mpmath.mpf(a) + mpmath.mpf(1) / 2) / mpmath.pi)
                break
        need = (_TARGET_DIGITS - digits) / math.log10(2.0) + 32
        new_bits = min(cfg.max_bits, bits + int(math.ceil(need)))
        log.debug("series a=%s z=%s: %.1f digits at %d bits, retry at %d", a, z, digits, bits, new_bits)
        bits = new_bits

    if digits < cfg.min_digits:
        raise AccuracyLoss(
            f"reference series keeps {digits:.1f} digits at a={a}, z={z}",
            {"a": a, "z": z, "bits": bits, "cancellationDigits": lost, "digits": digits},
        )
    U, dU, V, dV, *mirror = (ScaledValue.from_mpf(x) for x in values)
    parts = ConnectionParts(U, dU, mirror[0], mirror[1], conn) if with_mirror else None
    return FunctionQuad(
        U, dU, V, dV, RegionTag.SERIES, err_estimate=10.0 ** (-min(digits, 17.0)), parts=parts
    )


# ------------ log Γ(½ + x) ------------


@lru_cache(maxsize=1)
def _gamma_floats() -> Tuple[float, ...]:
    return tuple(float(g) for g in gamma_coeffs(_GAMMA_TERMS))


def _log_gamma_half_large(y: float) -> float:
    series = 0.0
    for g in reversed(_gamma_floats()):
        series = series / y + g
    return _LN_SQRT_2PI - y + y * math.log(y) + math.log(series)


def log_gamma_half(x: float) -> GammaValue:
    """ln|Γ(½+x)| and its sign."""
    if x < 0.0:
        c = cospi(x)
        if c == 0.0:
            raise Pole(f"Gamma(1/2 + x) has a pole at x={x}")
        inner = log_gamma_half(-x)
        return GammaValue(_LN_PI - math.log(abs(c)) - inner.log_abs, 1 if c > 0 else -1)

    shift = 0
    prod = 1.0
    y = x
    while y < _GAMMA_SHIFT:
        prod *= 0.5 + y
        y += 1.0
        shift += 1
    value = _log_gamma_half_large(y)
    if shift:
        value -= math.log(prod)
    return GammaValue(value, 1)
