"""
CLI entrypoint:
- eval: U, U', V, V' at one (a, z), plain or scaled
- table: reproduce an accuracy table and compare it with the published values
- coeffs: dump one coefficient polynomial as exact rationals (JSON)
- check: identity suite, table reproduction and Wronskian scan
"""

from __future__ import annotations

import json
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

import typer

from config import ALLOWED_PRECISIONS, AppConfig
from dispatch import evaluate
from errors import ConfigLoadError, DomainError, PcfError, Unsupported
from exactpoly import family_json
from logs import get_logger, init_logging
from verify import compare_published, delta_table, run_checks

SCHEMA_VERSION = 1
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    help="Parabolic cylinder functions U(a,z), V(a,z) for real a and z",
)

log = get_logger("pcf")


class OutputFormat(str, Enum):
    text = "text"
    json = "json"
    csv = "csv"


class Table(str, Enum):
    t51 = "5.1"
    t52 = "5.2"
    t53 = "5.3"


class Family(str, Enum):
    phi = "phi"
    psi = "psi"
    u = "u"
    r = "r"
    v = "v"
    f = "f"
    P = "P"


@app.callback()
def main(
    verbose: bool = typer.Option(
        False, "--verbose", "-v", help="Enable verbose (DEBUG) logging"
    ),
) -> None:
    init_logging(level="DEBUG" if verbose else "WARNING")
    global log
    log = get_logger("pcf.cli")
    if verbose:
        log.debug("Verbose logging enabled")


def _decimal(text: str, name: str) -> Fraction:
    """Exact value of a decimal literal such as -12.5 or 1e-3."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise typer.BadParameter(f"not a decimal number: {text!r}", param_hint=name)


def _load(config_file: Optional[Path], precision_bits: Optional[int] = None) -> AppConfig:
    try:
        cfg = AppConfig.load(config_file)
    except ConfigLoadError as exc:
        log.error(f"[red]Error:[/] {exc}")
        raise typer.Exit(code=EXIT_USAGE)
    if precision_bits is not None:
        if precision_bits not in ALLOWED_PRECISIONS:
            raise typer.BadParameter(
                f"must be one of {', '.join(map(str, ALLOWED_PRECISIONS))}",
                param_hint="--precision-bits",
            )
        cfg = cfg.model_copy(
            update={"verify": cfg.verify.model_copy(update={"precision_bits": precision_bits})}
        )
    return cfg


def _emit_json(payload: Dict[str, Any]) -> None:
    typer.echo(json.dumps({"schemaVersion": SCHEMA_VERSION, **payload}, ensure_ascii=False, indent=2))


# ------------------------------- eval -----------------------------------------


@app.command("eval")
def eval_cmd(
    a: str = typer.Option(..., "--a", help="Parameter a (decimal)"),
    z: str = typer.Option(..., "--z", help="Argument z (decimal)"),
    scaled: bool = typer.Option(
        False, "--scaled", help="Print mantissa and log-scale instead of plain values"
    ),
    terms: Optional[int] = typer.Option(
        None, "--terms", min=1, max=12, help="Fixed expansion order S (default: optimal)"
    ),
    fmt: OutputFormat = typer.Option(OutputFormat.text, "--format", help="text or json"),
    config_file: Optional[Path] = typer.Option(
        None, "--config", "-c", help="Path to pcf.toml"
    ),
) -> None:
    """Evaluate U(a,z), U'(a,z), V(a,z), V'(a,z)."""
    if fmt is OutputFormat.csv:
        raise typer.BadParameter("eval prints text or json", param_hint="--format")
    av, zv = _decimal(a, "--a"), _decimal(z, "--z")
    cfg = _load(config_file)
    try:
        quad = evaluate(float(av), float(zv), cfg, order=terms)
    except Unsupported as exc:
        log.error(f"[red]Unsupported:[/] {exc}")
        typer.echo(json.dumps({"error": str(exc), "diagnostics": exc.diagnostics}, default=str), err=True)
        raise typer.Exit(code=EXIT_UNSUPPORTED)
    except PcfError as exc:
        log.error(f"[red]Error:[/] {exc}")
        raise typer.Exit(code=EXIT_FAILED)

    if fmt is OutputFormat.json:
        _emit_json({"a": a, "z": z, **quad.to_dict(scaled=scaled)})
        return

    for label, name in (("U", "U"), ("U'", "dU"), ("V", "V"), ("V'", "dV")):
        sv = getattr(quad, name)
        value, over = sv.unscaled()
        if scaled or over:
            typer.echo(f"{label:<3}= {sv.mantissa:.16e} * exp({sv.log_scale:.16e})")
        else:
            typer.echo(f"{label:<3}= {value:.16e}")
    typer.echo(f"region = {quad.region.value}")
    typer.echo(f"errEstimate = {quad.err_estimate:.2e}")


# ------------------------------- table ----------------------------------------


@app.command("table")
def table_cmd(
    which: Table = typer.Option(..., "--which", help="Table to reproduce"),
    fmt: OutputFormat = typer.Option(OutputFormat.text, "--format", help="text, csv or json"),
    precision_bits: Optional[int] = typer.Option(
        None, "--precision-bits", help="Working precision (64, 128, 256, 320)"
    ),
    config_file: Optional[Path] = typer.Option(
        None, "--config", "-c", help="Path to pcf.toml"
    ),
) -> None:
    """Δ(μ, t) grid plus the verdict against the published table (exit 1 on mismatch)."""
    cfg = _load(config_file, precision_bits)
    try:
        grid = delta_table(which.value, cfg.verify)
        cmp = compare_published(grid, cfg.verify.tolerance_factor)
    except DomainError as exc:
        log.error(f"[red]Error:[/] {exc}")
        raise typer.Exit(code=EXIT_FAILED)

    verdict = "PASS" if cmp.passed else "FAIL"
    if fmt is OutputFormat.csv:
        typer.echo(grid.to_csv(), nl=False)
        log.info(f"table {which.value}: {verdict}")
    elif fmt is OutputFormat.json:
        payload = grid.to_dict()
        payload["verdict"] = verdict
        payload["failures"] = [
            {"mu": str(c.mu), "t": str(c.t), "computed": c.computed, "published": c.published}
            for c in cmp.failures
        ]
        _emit_json(payload)
    else:
        by_cell = {(c.t, c.mu): c for c in cmp.cells}
        header = "t \\ mu".ljust(8) + "".join(f"{str(m):>18}" for m in grid.mu_values)
        typer.echo(f"Table {which.value}: {grid.terms} terms, {grid.precision_bits} bits")
        typer.echo(header)
        for t in grid.t_values:
            row = f"{float(t):<8.2f}"
            for mu in grid.mu_values:
                c = by_cell[(t, mu)]
                # "!" marks cells outside the acceptance band
                row += f"{c.computed:>17.1e}{' ' if c.passed else '!'}"
            typer.echo(row)
        typer.echo(f"verdict: {verdict} ({len(cmp.cells) - len(cmp.failures)}/{len(cmp.cells)} within x{cmp.factor:g})")
    if not cmp.passed:
        raise typer.Exit(code=EXIT_FAILED)


# ------------------------------- coeffs ---------------------------------------


@app.command("coeffs")
def coeffs_cmd(
    family: Family = typer.Option(..., "--family", help="Coefficient family"),
    order: int = typer.Option(..., "--order", min=0, help="Index s of the polynomial"),
) -> None:
    """Print one polynomial of a coefficient family as exact rationals (JSON)."""
    try:
        payload = family_json(family.value, order)
    except PcfError as exc:
        log.error(f"[red]Error:[/] {exc}")
        raise typer.Exit(code=EXIT_FAILED)
    _emit_json(payload)


# ------------------------------- check ----------------------------------------


@app.command("check")
def check_cmd(
    fmt: OutputFormat = typer.Option(OutputFormat.text, "--format", help="text or json"),
    workers: int = typer.Option(4, "--workers", min=1, help="Threads for the Wronskian scan"),
    config_file: Optional[Path] = typer.Option(
        None, "--config", "-c", help="Path to pcf.toml"
    ),
) -> None:
    """Run the identity suite; exit 0 iff every check passes."""
    cfg = _load(config_file)
    try:
        results = run_checks(cfg, scan_workers=workers)
    except Exception:
        log.exception("Unexpected error during check")
        raise typer.Exit(code=EXIT_FAILED)

    if fmt is OutputFormat.json:
        _emit_json(
            {
                "passed": all(r.passed for r in results),
                "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
            }
        )
    else:
        for r in results:
            typer.echo(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<22} {r.detail}")
    if not all(r.passed for r in results):
        raise typer.Exit(code=EXIT_FAILED)
