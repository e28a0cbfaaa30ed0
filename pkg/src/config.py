# src/config.py
"""
Configuration loader with validation and safe error handling.

- Reads optional pcf.toml (or a provided path).
- Provides defaults if file is absent.
- Validates thresholds, orders and precisions.
- Exposes a typed configuration object used by the CLI and the evaluators.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from errors import ConfigLoadError

ALLOWED_PRECISIONS = (64, 128, 256, 320)


class EvalConfig(BaseModel):
    """Routing thresholds and truncation orders for dispatch and elem."""

    order: int = Field(5, ge=0, le=12, description="Order of the Olver Airy-type sums")
    max_order: int = Field(12, ge=1, le=12, description="Largest order tried")
    mu_switch: float = Field(5.0, gt=0.0)
    t_inner: float = Field(0.8, gt=0.0, lt=1.0)
    t_outer: float = Field(1.2, gt=1.0)
    positive_sum: float = Field(30.0, gt=0.0, description="a + |z| threshold for a >= 0")
    target_rel_error: float = Field(1e-10, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _orders_consistent(self) -> "EvalConfig":
        if self.order > self.max_order:
            raise ValueError("order must not exceed max_order")
        return self


class SeriesConfig(BaseModel):
    """Limits of the reference (Maclaurin / 1F1) evaluation."""

    a_max: float = Field(30.0, gt=0.0)
    z_max: float = Field(30.0, gt=0.0)
    base_bits: int = Field(106, ge=53)
    max_bits: int = Field(2048, ge=106)
    max_terms: int = Field(10_000, ge=10)
    min_digits: float = Field(12.0, gt=0.0)


class AiryConfig(BaseModel):
    """Turning-point expansion settings."""

    zeta_min: float = Field(0.35, gt=0.0)
    radius: float = Field(1.0, gt=0.0, le=1.5)
    delta: float = Field(0.1, gt=0.0, lt=1.0)
    mu_min: float = Field(4.0, gt=0.0)
    series_cutoff: float = Field(9.0, gt=0.0)
    max_iterations: int = Field(50, ge=1)
    tolerance: float = Field(1e-14, gt=0.0)
    max_degree: int = Field(200, ge=20)


class VerifyConfig(BaseModel):
    """Extended-precision table reproduction."""

    precision_bits: int = 256
    tolerance_factor: float = Field(3.0, ge=1.0)

    @field_validator("precision_bits", mode="after")
    @classmethod
    def _allowed_precision(cls, v: int) -> int:
        if v not in ALLOWED_PRECISIONS:
            raise ValueError(f"precision_bits must be one of {ALLOWED_PRECISIONS}")
        return v


class AppConfig(BaseModel):
    """Root application configuration object."""

    eval: EvalConfig = EvalConfig()
    series: SeriesConfig = SeriesConfig()
    airy: AiryConfig = AiryConfig()
    verify: VerifyConfig = VerifyConfig()

    @staticmethod
    def load(path: Optional[Path] = None) -> "AppConfig":
        """
        Load config from TOML if present; otherwise return defaults.

        Load order:
          1) Provided path (if any).
          2) ./pcf.toml in the current working directory.
        Env overrides:
          - PCF_PRECISION_BITS: overrides verify.precision_bits

        Raises:
            ConfigLoadError: if a TOML file exists but cannot be read or validated,
            or if the env override is not an allowed precision.
        """
        data: dict[str, Any] = {}
        toml_path = path or (Path.cwd() / "pcf.toml")

        if path is not None and not toml_path.exists():
            raise ConfigLoadError(f"Config file not found: {toml_path}")

        if toml_path.exists():
            import tomllib

            try:
                raw_text = toml_path.read_text(encoding="utf-8")
            except OSError as exc:
                raise ConfigLoadError(
                    f"Failed to read config file: {toml_path}"
                ) from exc

            try:
                data = tomllib.loads(raw_text)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigLoadError(
                    f"Invalid TOML in config file: {toml_path}"
                ) from exc

        bits_env = os.getenv("PCF_PRECISION_BITS")
        if bits_env:
            try:
                bits = int(bits_env)
            except ValueError as exc:
                raise ConfigLoadError(
                    f"Invalid PCF_PRECISION_BITS value: {bits_env}"
                ) from exc
            data.setdefault("verify", {})["precision_bits"] = bits

        try:
            return AppConfig(**data)
        except ValidationError as exc:
            where = toml_path if toml_path.exists() else "environment"
            raise ConfigLoadError(f"Invalid configuration values in {where}") from exc
