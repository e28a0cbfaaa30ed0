"""
Double-precision kernels shared by the evaluators.

- Error-free transformations (two_sum, two_prod) with a Dekker split when
  ``math.fma`` is not available.
- sinpi / cospi with exact reduction modulo 2, so half-integers give exact zeros.
- sin(½πμ²), cos(½πμ²) with μ² carried as a double-double pair.
- mp_precision: mpmath working precision under a process-wide lock (the
  mpmath context is global, so worker threads take turns).
"""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from typing import Iterator, Optional, Tuple

import mpmath

_SPLITTER = 134217729.0  # 2**27 + 1


def _split(a: float) -> Tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_sum(a: float, b: float) -> Tuple[float, float]:
    """Return (s, e) with s = fl(a + b) and s + e == a + b exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def two_prod(a: float, b: float) -> Tuple[float, float]:
    """Return (p, e) with p = fl(a * b) and p + e == a * b exactly."""
    p = a * b
    fma = getattr(math, "fma", None)
    if fma is not None:
        return p, fma(a, b, -p)
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


def _reduce2(hi: float, lo: float = 0.0) -> float:
    """(hi + lo) mod 2 mapped into [-1, 1]; the fmod step is exact."""
    r = math.fmod(hi, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    r += lo
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    return r


def _sinpi_reduced(r: float) -> float:
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    if r == 0.0:
        return 0.0
    if r == 0.5:
        return 1.0
    if r == -0.5:
        return -1.0
    return math.sin(math.pi * r)


def _cospi_reduced(r: float) -> float:
    r = abs(r)
    if r == 0.5:
        return 0.0
    if r == 0.0:
        return 1.0
    if r == 1.0:
        return -1.0
    if r > 0.5:
        return -math.sin(math.pi * (r - 0.5))
    return math.sin(math.pi * (0.5 - r))


def sinpi(x: float, lo: float = 0.0) -> float:
    """sin(π(x + lo)) with exact argument reduction of x."""
    return _sinpi_reduced(_reduce2(x, lo))


def cospi(x: float, lo: float = 0.0) -> float:
    """cos(π(x + lo)) with exact argument reduction of x."""
    return _cospi_reduced(_reduce2(x, lo))


def half_mu_squared(mu: float, exact: Optional[float] = None) -> Tuple[float, float]:
    """½μ² as a (hi, lo) pair. ``exact`` short-circuits when ½μ² = -a is known."""
    if exact is not None:
        return exact, 0.0
    hi, lo = two_prod(mu, mu)
    return 0.5 * hi, 0.5 * lo


def sincos_half_pi_mu2(mu: float, exact: Optional[float] = None) -> Tuple[float, float]:
    """(sin(½πμ²), cos(½πμ²))."""
    hi, lo = half_mu_squared(mu, exact)
    return sinpi(hi, lo), cospi(hi, lo)


MP_LOCK = threading.RLock()


@contextmanager
def mp_precision(bits: int) -> Iterator[None]:
    """Hold MP_LOCK and run the block at ``bits`` of mpmath precision."""
    with MP_LOCK, mpmath.workprec(bits):
        yield
