"""
Value types shared by every evaluator.

- ScaledValue: mantissa x e^(log_scale); carries the e^(±μ²ξ) and h(μ)
  magnitudes without overflow.
- RegionTag: which method produced a result.
- FunctionQuad: U, U', V, V' plus region tag and relative error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import mpmath

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_MAX_LOG = math.log(1.7976931348623157e308)


@dataclass(frozen=True)
class ScaledValue:
    """value = mantissa * exp(log_scale), |mantissa| in [e^-1/2, e^1/2] unless zero."""

    mantissa: float
    log_scale: float = 0.0

    # ------------ constructors ------------

    @staticmethod
    def make(mantissa: float, log_scale: float = 0.0) -> "ScaledValue":
        if mantissa == 0.0 or not math.isfinite(mantissa):
            return ScaledValue(mantissa, 0.0 if mantissa == 0.0 else log_scale)
        k = round(math.log(abs(mantissa)))
        if k == 0:
            return ScaledValue(mantissa, log_scale)
        return ScaledValue(mantissa * math.exp(-k), log_scale + k)

    @staticmethod
    def of(x: float) -> "ScaledValue":
        return ScaledValue.make(float(x), 0.0)

    @staticmethod
    def from_log(sign: float, log_abs: float) -> "ScaledValue":
        if sign == 0.0:
            return ScaledValue(0.0, 0.0)
        return ScaledValue.make(math.copysign(1.0, sign), log_abs)

    @staticmethod
    def from_mpf(x: Any) -> "ScaledValue":
        """Convert an mpmath number of any exponent range without overflow."""
        x = mpmath.mpf(x)
        if not x:
            return ScaledValue(0.0, 0.0)
        return ScaledValue.from_log(1.0 if x > 0 else -1.0, float(mpmath.log(abs(x))))

    # ------------ arithmetic ------------

    def __mul__(self, other: object) -> "ScaledValue":
        if isinstance(other, ScaledValue):
            return ScaledValue.make(self.mantissa * other.mantissa, self.log_scale + other.log_scale)
        if isinstance(other, (int, float)):
            return ScaledValue.make(self.mantissa * float(other), self.log_scale)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self) -> "ScaledValue":
        return ScaledValue(-self.mantissa, self.log_scale)

    def __add__(self, other: "ScaledValue") -> "ScaledValue":
        if self.mantissa == 0.0:
            return other
        if other.mantissa == 0.0:
            return self
        top = max(self.log_scale, other.log_scale)
        m = self.mantissa * math.exp(self.log_scale - top) + other.mantissa * math.exp(
            other.log_scale - top
        )
        return ScaledValue.make(m, top)

    def __sub__(self, other: "ScaledValue") -> "ScaledValue":
        return self + (-other)

    def scale_log(self, delta: float) -> "ScaledValue":
        """Multiply by exp(delta)."""
        return ScaledValue.make(self.mantissa, self.log_scale + delta)

    # ------------ accessors ------------

    @property
    def log_abs(self) -> float:
        if self.mantissa == 0.0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.log_scale

    @property
    def overflows(self) -> bool:
        return self.mantissa != 0.0 and self.log_abs > _MAX_LOG

    def unscaled(self) -> Tuple[float, bool]:
        """(value, overflow_flag); saturates to ±inf instead of raising."""
        if self.mantissa == 0.0:
            return 0.0, False
        if self.overflows:
            return math.copysign(math.inf, self.mantissa), True
        return self.mantissa * math.exp(self.log_scale), False

    @property
    def value(self) -> float:
        return self.unscaled()[0]

    def rel_diff(self, other: "ScaledValue") -> float:
        """|self - other| / |other| evaluated in log space; saturates to inf."""
        if other.mantissa == 0.0:
            return 0.0 if self.mantissa == 0.0 else math.inf
        d = self - other
        if d.mantissa == 0.0:
            return 0.0
        if not math.isfinite(d.mantissa):
            return math.inf
        log_ratio = d.log_abs - other.log_abs
        if log_ratio > _MAX_LOG:
            return math.inf
        return math.exp(log_ratio)

    def to_dict(self) -> Dict[str, float]:
        return {"mantissa": self.mantissa, "logScale": self.log_scale}


ZERO = ScaledValue(0.0, 0.0)
ONE = ScaledValue(1.0, 0.0)


class RegionTag(str, Enum):
    SERIES = "SERIES"
    ELEM_21 = "ELEM_21"
    ELEM_22 = "ELEM_22"
    ELEM_23 = "ELEM_23"
    ELEM_24 = "ELEM_24"
    ELEM_25 = "ELEM_25"
    AIRY_PLUS = "AIRY_PLUS"
    AIRY_MINUS = "AIRY_MINUS"


@dataclass(frozen=True)
class ConnectionParts:
    """
    U(a,±z) and U'(a,±z) behind a connection-formula V for a >= 0.

    With V = conn * (sin(pi a) U(a,z) + U(a,-z)) the sin(pi a) terms drop
    out of U V' - U' V, leaving -conn * (U(z) U'(-z) + U'(z) U(-z)) where
    U'(-z) is the derivative evaluated at -z.
    """

    U_here: ScaledValue
    dU_here: ScaledValue
    U_mirror: ScaledValue
    dU_mirror: ScaledValue
    conn: ScaledValue

    def wronskian(self) -> ScaledValue:
        return -(self.conn * (self.U_here * self.dU_mirror + self.dU_here * self.U_mirror))


@dataclass(frozen=True)
class FunctionQuad:
    """U(a,z), U'(a,z), V(a,z), V'(a,z) with provenance."""

    U: ScaledValue
    dU: ScaledValue
    V: ScaledValue
    dV: ScaledValue
    region: RegionTag
    err_estimate: float = 0.0
    parts: Optional[ConnectionParts] = None

    def wronskian(self) -> ScaledValue:
        if self.parts is not None:
            return self.parts.wronskian()
        return self.U * self.dV - self.dU * self.V

    def wronskian_residual(self) -> float:
        """|U V' - U' V| relative to sqrt(2/pi), minus one."""
        return self.wronskian().rel_diff(ScaledValue.of(SQRT_2_OVER_PI))

    def with_region(self, region: RegionTag) -> "FunctionQuad":
        return replace(self, region=region)

    def to_dict(self, scaled: bool = False) -> Dict[str, Any]:
        out: Dict[str, Any] = {"region": self.region.value, "errEstimate": self.err_estimate}
        for name in ("U", "dU", "V", "dV"):
            sv: ScaledValue = getattr(self, name)
            if scaled:
                out[name] = sv.to_dict()
            else:
                val, over = sv.unscaled()
                out[name] = val
                if over:
                    out.setdefault("overflow", []).append(name)
        return out
