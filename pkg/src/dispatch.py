"""
Route (a, z) to an evaluation method and return a scaled FunctionQuad.

Routing (a < 0: μ = √(-2a), t = z/(2√(-a)); a >= 0: μ = √(2a), t = |z|/(2√a)):
- μ >= mu_switch: |t| <= t_inner -> ELEM_23, |t| < t_outer -> AIRY_PLUS/MINUS,
  otherwise ELEM_21/22.
- μ < mu_switch: ELEM_21/22 when |t| >= t_outer and |a| + |z| >= positive_sum,
  otherwise SERIES.
- a >= 0: ELEM_24/25 when a + |z| >= positive_sum, otherwise SERIES.

When a method's error estimate exceeds ``eval.target_rel_error`` the next
admissible method is tried; the returned tag names the method used.
"""

from __future__ import annotations

import math
from typing import Callable, List, Optional, Tuple

from airy import eval_airy
from config import AppConfig
from elem import eval_region_21, eval_region_22, eval_region_23, eval_region_24_25
from errors import AccuracyLoss, PcfError, Unsupported
from logs import get_logger
from refseries import uv_series
from scaled import FunctionQuad, RegionTag

log = get_logger("pcf.dispatch")

# |a| below this is evaluated with the a >= 0 expansions at μ = MU_FLOOR
A_TINY = 5e-17
MU_FLOOR = 1e-8

_FALLBACKS = {
    RegionTag.ELEM_21: (RegionTag.AIRY_PLUS, RegionTag.SERIES),
    RegionTag.ELEM_22: (RegionTag.AIRY_MINUS, RegionTag.SERIES),
    RegionTag.ELEM_23: (RegionTag.AIRY_PLUS, RegionTag.SERIES),
    RegionTag.AIRY_PLUS: (RegionTag.SERIES,),
    RegionTag.AIRY_MINUS: (RegionTag.SERIES,),
    RegionTag.ELEM_24: (RegionTag.SERIES,),
    RegionTag.ELEM_25: (RegionTag.SERIES,),
    RegionTag.SERIES: (),
}


def parametrize(a: float, z: float) -> Tuple[float, float]:
    """(μ, t) with t >= 0 for a >= 0 and signed t for a < 0."""
    if a < -A_TINY:
        mu = math.sqrt(-2.0 * a)
        return mu, z / (2.0 * math.sqrt(-a))
    if a <= A_TINY:
        return MU_FLOOR, abs(z) / (MU_FLOOR * math.sqrt(2.0))
    return math.sqrt(2.0 * a), abs(z) / (2.0 * math.sqrt(a))


def region_select(a: float, z: float, cfg: Optional[AppConfig] = None) -> RegionTag:
    """Deterministic region tag; boundary values go to the lower-numbered region."""
    if not (math.isfinite(a) and math.isfinite(z)):
        raise Unsupported(f"non-finite input a={a}, z={z}", {"a": a, "z": z})
    ev = (cfg or AppConfig()).eval
    mu, t = parametrize(a, z)
    if a >= -A_TINY:
        if a + abs(z) >= ev.positive_sum:
            return RegionTag.ELEM_24 if z >= 0 else RegionTag.ELEM_25
        return RegionTag.SERIES
    at = abs(t)
    outer = RegionTag.ELEM_21 if z >= 0 else RegionTag.ELEM_22
    if mu >= ev.mu_switch:
        if at <= ev.t_inner:
            return RegionTag.ELEM_23
        if at < ev.t_outer:
            return RegionTag.AIRY_PLUS if z >= 0 else RegionTag.AIRY_MINUS
        return outer
    if at >= ev.t_outer and abs(a) + abs(z) >= ev.positive_sum:
        return outer
    return RegionTag.SERIES


def _method(tag: RegionTag, a: float, z: float, cfg: AppConfig, order: Optional[int]) -> Callable[[], FunctionQuad]:
    mu, t = parametrize(a, z)
    ev = cfg.eval
    half = -a if a < 0 else None
    if tag is RegionTag.ELEM_21:
        return lambda: eval_region_21(mu, t, order, max_order=ev.max_order, half_mu2=half)[0]
    if tag is RegionTag.ELEM_22:
        return lambda: eval_region_22(mu, -t, order, max_order=ev.max_order, half_mu2=half)
    if tag is RegionTag.ELEM_23:
        return lambda: eval_region_23(mu, t, order, max_order=ev.max_order, half_mu2=half)
    if tag in (RegionTag.ELEM_24, RegionTag.ELEM_25):
        return lambda: eval_region_24_25(
            mu, t, order, negative_z=z < 0, max_order=ev.max_order, a_exact=a
        )[0]
    if tag in (RegionTag.AIRY_PLUS, RegionTag.AIRY_MINUS):
        s_max = order if order is not None else ev.order
        return lambda: eval_airy(mu, abs(t), negative_z=z < 0, cfg=cfg.airy, s_max=s_max, half_mu2=half)
    return lambda: uv_series(a, z, cfg.series)


def candidates(a: float, z: float, cfg: Optional[AppConfig] = None) -> List[RegionTag]:
    """Primary region followed by its admissible fallbacks."""
    cfg = cfg or AppConfig()
    first = region_select(a, z, cfg)
    chain = [first]
    for tag in _FALLBACKS[first]:
        if tag in (RegionTag.AIRY_PLUS, RegionTag.AIRY_MINUS) and a >= -A_TINY:
            continue
        chain.append(tag)
    return chain


def evaluate(
    a: float,
    z: float,
    cfg: Optional[AppConfig] = None,
    order: Optional[int] = None,
) -> FunctionQuad:
    """U(a,z), U'(a,z), V(a,z), V'(a,z).

    ``order`` fixes the expansion order S; None picks the order with the
    smallest first omitted term up to ``eval.max_order``.

    Raises:
        Unsupported: when no method yields a result (the reference series
        losing accuracy included).
    """
    cfg = cfg or AppConfig()
    target = cfg.eval.target_rel_error
    chain = candidates(a, z, cfg)
    log.debug("a=%s z=%s -> %s", a, z, [t.value for t in chain])

    best: Optional[FunctionQuad] = None
    failures: dict[str, str] = {}
    for tag in chain:
        try:
            quad = _method(tag, a, z, cfg, order)()
        except AccuracyLoss as exc:
            failures[tag.value] = str(exc)
            if tag is chain[0] or best is None:
                raise Unsupported(
                    f"no trustworthy method for a={a}, z={z}",
                    {"a": a, "z": z, "failures": failures, **exc.diagnostics},
                ) from exc
            continue
        except PcfError as exc:
            log.debug("%s failed at a=%s z=%s: %s", tag.value, a, z, exc)
            failures[tag.value] = str(exc)
            continue
        if best is None or quad.err_estimate < best.err_estimate:
            best = quad
        if quad.err_estimate <= target:
            return quad
        log.debug("%s error estimate %.2e above target at a=%s z=%s", tag.value, quad.err_estimate, a, z)

    if best is None:
        raise Unsupported(f"no method covers a={a}, z={z}", {"a": a, "z": z, "failures": failures})
    log.warning(
        "returning %s at a=%s z=%s with error estimate %.2e (target %.0e)",
        best.region.value,
        a,
        z,
        best.err_estimate,
        target,
    )
    return best
