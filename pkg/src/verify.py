"""
Accuracy verification.

- Δ(μ, t) tables for the oscillatory, monotonic and positive-a expansions,
  computed from the truncated coefficient sums at extended mpmath precision
  with μ and t taken as exact decimals.
- Side-by-side comparison against the published two-digit tables.
- Wronskian scans of dispatch.evaluate over an (a, z) grid, fanned out to a
  thread pool.
- The identity suite behind ``pcf check``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from numpy.polynomial import hermite_e
from numpy.polynomial import polynomial as npoly

from airy import SOLUTIONS, airy_eval, default_degree, solve_maclaurin_FG
from config import AiryConfig, AppConfig, VerifyConfig
from dispatch import evaluate
from errors import DomainError, PcfError
from exactpoly import check_degrees, check_phi_tilde, check_printed, check_u_vs_phi, coeff_tables
from fpmath import mp_precision
from logs import get_logger, timed
from refseries import log_gamma_half
from scaled import ScaledValue

log = get_logger("pcf.verify")

TABLES = ("5.1", "5.2", "5.3")
TERMS = {"5.1": 3, "5.2": 5, "5.3": 5}

MU_VALUES: Tuple[Fraction, ...] = tuple(Fraction(m) for m in (5, 10, 25, 50, 100))
T_VALUES: Dict[str, Tuple[Fraction, ...]] = {
    "5.1": tuple(Fraction(k, 10) for k in range(10)),
    "5.2": tuple(Fraction(s) for s in ("1.1", "1.2", "1.3", "1.4", "1.5", "2.0", "2.5", "5.0", "10.0", "25.0")),
    "5.3": tuple(Fraction(s) for s in ("0", "0.25", "0.5", "0.75", "1.0", "1.5", "2.0", "2.5", "5.0", "10.0")),
}


def _rows(text: str) -> Tuple[Tuple[float, ...], ...]:
    return tuple(tuple(float(x) for x in line.split()) for line in text.strip().splitlines())


# rows follow T_VALUES, columns follow MU_VALUES
PUBLISHED: Dict[str, Tuple[Tuple[float, ...], ...]] = {
    "5.1": _rows(
        """
        .32e-09 .78e-13 .13e-17 .32e-21 .78e-25
        .26e-09 .63e-13 .11e-17 .26e-21 .63e-25
        .81e-10 .20e-13 .33e-18 .82e-22 .20e-25
        .16e-08 .39e-12 .65e-17 .16e-20 .39e-24
        .88e-08 .22e-11 .36e-16 .89e-20 .22e-23
        .51e-07 .13e-10 .21e-15 .52e-19 .13e-22
        .40e-06 .99e-10 .17e-14 .40e-18 .99e-22
        .53e-05 .13e-08 .22e-13 .54e-17 .13e-20
        .20e-03 .50e-07 .84e-12 .20e-15 .50e-19
        .35e-00 .24e-04 .41e-09 .10e-12 .25e-16
        """
    ),
    "5.2": _rows(
        """
        .51e-01 .48e-05 .72e-10 .18e-13 .43e-17
        .39e-04 .79e-08 .13e-12 .32e-16 .78e-20
        .83e-06 .19e-09 .32e-14 .78e-18 .19e-21
        .56e-07 .13e-10 .23e-15 .55e-19 .13e-22
        .71e-08 .17e-11 .29e-16 .70e-20 .17e-23
        .10e-10 .25e-14 .43e-19 .10e-22 .25e-26
        .21e-12 .52e-16 .87e-21 .21e-24 .52e-28
        .12e-16 .28e-20 .48e-25 .12e-28 .28e-32
        .20e-20 .48e-24 .81e-29 .20e-32 .48e-36
        .30e-25 .73e-29 .12e-33 .30e-37 .73e-41
        """
    ),
    "5.3": _rows(
        """
        .32e-09 .78e-13 .13e-17 .32e-21 .78e-25
        .12e-09 .28e-13 .47e-18 .12e-21 .28e-25
        .45e-11 .11e-14 .19e-19 .46e-23 .11e-26
        .57e-11 .14e-14 .24e-19 .58e-23 .14e-26
        .27e-11 .65e-15 .11e-19 .27e-23 .65e-27
        .29e-13 .70e-17 .12e-21 .29e-25 .70e-29
        .20e-13 .48e-17 .81e-22 .20e-25 .48e-29
        .43e-14 .11e-17 .18e-22 .43e-26 .11e-29
        .45e-17 .11e-20 .18e-25 .45e-29 .11e-32
        .16e-20 .38e-24 .64e-29 .16e-32 .38e-36
        """
    ),
}


# ------------ Δ grids ------------


@dataclass(frozen=True)
class DeltaGrid:
    """Δ(μ, t) for one table; ``delta[i][j]`` belongs to (t_values[i], mu_values[j])."""

    which: str
    mu_values: Tuple[Fraction, ...]
    t_values: Tuple[Fraction, ...]
    terms: int
    precision_bits: int
    delta: Tuple[Tuple[Any, ...], ...]

    def cells(self) -> Iterable[Tuple[Fraction, Fraction, Any]]:
        for i, t in enumerate(self.t_values):
            for j, mu in enumerate(self.mu_values):
                yield mu, t, self.delta[i][j]

    def to_csv(self) -> str:
        lines = ["mu,t,delta"]
        lines += [f"{_dec(mu)},{_dec(t)},{_fmt(d)}" for mu, t, d in self.cells()]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "table": self.which,
            "terms": self.terms,
            "precisionBits": self.precision_bits,
            "mu": [_dec(m) for m in self.mu_values],
            "t": [_dec(t) for t in self.t_values],
            "delta": [[_fmt(d) for d in row] for row in self.delta],
        }


def _dec(x: Fraction) -> str:
    """Exact decimal text of a terminating fraction."""
    if x.denominator == 1:
        return str(x.numerator)
    digits = 0
    while (x * 10**digits).denominator != 1:
        digits += 1
    return f"{float(x):.{digits}f}"


def _fmt(d: Any) -> str:
    return mpmath.nstr(d, 2, min_fixed=1, max_fixed=0) if d != 0 else "0"


def _mpf(x: Fraction) -> Any:
    return mpmath.mpf(x.numerator) / x.denominator


def _delta_oscillatory(mu: Any, t: Any, S: int, tables: Any) -> Any:
    w = 1 / ((1 - t * t) ** mpmath.mpf(1.5) * mu * mu)
    Ue = Uo = Ve = Vo = mpmath.mpf(0)
    for s in range(S + 1):
        sign = -1 if s % 2 else 1
        we, wo = w ** (2 * s), w ** (2 * s + 1)
        Ue += sign * tables.u[2 * s](t) * we
        Uo += sign * tables.u[2 * s + 1](t) * wo
        Ve += sign * tables.v[2 * s](t) * we
        Vo += sign * tables.v[2 * s + 1](t) * wo
    W = Ue * Ve + Uo * Vo
    m4 = mu**4
    norm = 1 - 1 / (576 * m4) + mpmath.mpf(2021) / (2488320 * m4 * m4)
    return abs(W / norm - 1)


def _delta_modified(mu: Any, tau: Any, S: int, tables: Any, alternate_fg: bool) -> Any:
    eps = 1 / (mu * mu)
    plain = [mpmath.mpf(0), mpmath.mpf(0)]
    alt = [mpmath.mpf(0), mpmath.mpf(0)]
    for s in range(S + 1):
        p, q = tables.phi[s](tau) * eps**s, tables.psi[s](tau) * eps**s
        sign = -1 if s % 2 else 1
        plain[0] += p
        plain[1] += q
        alt[0] += sign * p
        alt[1] += sign * q
    if alternate_fg:
        (F, G), (P, Q) = alt, plain
    else:
        (F, G), (P, Q) = plain, alt
    return abs((F * Q + G * P) / 2 - 1)


def _tau(t: Any) -> Any:
    s = mpmath.sqrt((t - 1) * (t + 1))
    return 1 / (2 * s * (t + s))


def _tau_tilde(t: Any) -> Any:
    r = mpmath.sqrt(1 + t * t)
    return -1 / (2 * r * (t + r))


def _grid(
    which: str,
    mu_values: Sequence[Fraction],
    t_values: Sequence[Fraction],
    terms: int,
    bits: int,
    cell: Callable[[Any, Any, int, Any], Any],
) -> DeltaGrid:
    S = terms - 1
    tables = coeff_tables(max(S, 1))
    with timed(log, f"delta table {which}"), mp_precision(bits):
        delta = tuple(
            tuple(+cell(_mpf(Fraction(mu)), _mpf(Fraction(t)), S, tables) for mu in mu_values)
            for t in t_values
        )
    return DeltaGrid(
        which=which,
        mu_values=tuple(Fraction(m) for m in mu_values),
        t_values=tuple(Fraction(t) for t in t_values),
        terms=terms,
        precision_bits=bits,
        delta=delta,
    )


def delta_table_51(
    mu_values: Sequence[Fraction] = MU_VALUES,
    t_values: Sequence[Fraction] = T_VALUES["5.1"],
    *,
    terms: int = TERMS["5.1"],
    precision_bits: int = 256,
) -> DeltaGrid:
    """Oscillatory-region Δ: the even/odd u·v product normalized by its expansion."""
    for t in t_values:
        if not abs(Fraction(t)) < 1:
            raise DomainError(f"table 5.1 needs |t| < 1, got t={t}")
    return _grid("5.1", mu_values, t_values, terms, precision_bits, _delta_oscillatory)


def delta_table_52_53(
    mu_values: Sequence[Fraction],
    t_values: Sequence[Fraction],
    which: str,
    *,
    terms: int = 5,
    precision_bits: int = 256,
) -> DeltaGrid:
    """Δ = |½(FQ + GP) - 1| with τ(t) (5.2, t > 1) or τ̃(t) with alternating F, G (5.3, t >= 0)."""
    if which == "5.2":
        if any(not Fraction(t) > 1 for t in t_values):
            raise DomainError("table 5.2 needs t > 1")

        def cell(mu: Any, t: Any, S: int, tables: Any) -> Any:
            return _delta_modified(mu, _tau(t), S, tables, alternate_fg=False)

    elif which == "5.3":
        if any(Fraction(t) < 0 for t in t_values):
            raise DomainError("table 5.3 needs t >= 0")

        def cell(mu: Any, t: Any, S: int, tables: Any) -> Any:
            return _delta_modified(mu, _tau_tilde(t), S, tables, alternate_fg=True)

    else:
        raise DomainError(f"unknown table: {which}")
    return _grid(which, mu_values, t_values, terms, precision_bits, cell)


def delta_table(which: str, cfg: Optional[VerifyConfig] = None) -> DeltaGrid:
    """One of the three published grids at the configured precision."""
    bits = (cfg or VerifyConfig()).precision_bits
    if which == "5.1":
        return delta_table_51(precision_bits=bits)
    if which in ("5.2", "5.3"):
        return delta_table_52_53(MU_VALUES, T_VALUES[which], which, terms=TERMS[which], precision_bits=bits)
    raise DomainError(f"unknown table: {which}; expected one of {', '.join(TABLES)}")


# ------------ Comparison with the published tables ------------


@dataclass(frozen=True)
class CellVerdict:
    mu: Fraction
    t: Fraction
    computed: float
    published: float
    ratio: float
    passed: bool


@dataclass(frozen=True)
class TableComparison:
    which: str
    factor: float
    cells: Tuple[CellVerdict, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells)

    @property
    def failures(self) -> List[CellVerdict]:
        return [c for c in self.cells if not c.passed]


def compare_published(grid: DeltaGrid, factor: float = 3.0) -> TableComparison:
    """Cells agree when computed/published lies within [1/factor, factor]."""
    if grid.which not in PUBLISHED:
        raise DomainError(f"no published values for table {grid.which}")
    if grid.mu_values != MU_VALUES or grid.t_values != T_VALUES[grid.which]:
        raise DomainError("comparison needs the published grid")
    out = []
    for i, row in enumerate(PUBLISHED[grid.which]):
        for j, ref in enumerate(row):
            got = float(grid.delta[i][j])
            ratio = got / ref
            out.append(
                CellVerdict(
                    mu=grid.mu_values[j],
                    t=grid.t_values[i],
                    computed=got,
                    published=ref,
                    ratio=ratio,
                    passed=1.0 / factor <= ratio <= factor,
                )
            )
    return TableComparison(grid.which, factor, tuple(out))


# ------------ Wronskian scan ------------


@dataclass(frozen=True)
class ScanCell:
    a: float
    z: float
    residual: Optional[float]
    region: Optional[str]
    error: Optional[str] = None
    failed: bool = False


@dataclass(frozen=True)
class ScanReport:
    cells: Tuple[ScanCell, ...] = ()
    max_residual: float = 0.0
    mean_residual: float = 0.0
    worst: Optional[Tuple[float, float]] = None
    unsupported: Tuple[Tuple[float, float], ...] = field(default=())
    failed: Tuple[Tuple[float, float], ...] = field(default=())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cells": len(self.cells),
            "maxResidual": self.max_residual,
            "meanResidual": self.mean_residual,
            "worst": list(self.worst) if self.worst else None,
            "unsupported": [list(c) for c in self.unsupported],
            "failed": [list(c) for c in self.failed],
        }


def default_grid() -> Tuple[List[float], List[float]]:
    """20 a-values by 20 z-values, symmetric and log-spaced."""
    a_pos = np.logspace(0.0, math.log10(5000.0), 10)
    z_pos = np.logspace(-1.0, math.log10(200.0), 10)
    a_vals = sorted(float(x) for x in np.concatenate([-a_pos, a_pos]))
    z_vals = sorted(float(x) for x in np.concatenate([-z_pos, z_pos]))
    return a_vals, z_vals


def _scan_cell(a: float, z: float, cfg: AppConfig) -> ScanCell:
    try:
        quad = evaluate(a, z, cfg)
        residual = quad.wronskian_residual()
    except PcfError as exc:
        return ScanCell(a, z, None, None, str(exc))
    except Exception as exc:  # noqa: BLE001
        log.exception("scan cell a=%s z=%s crashed", a, z)
        return ScanCell(a, z, None, None, f"{type(exc).__name__}: {exc}", failed=True)
    return ScanCell(a, z, residual, quad.region.value)


def wronskian_scan(
    a_values: Sequence[float],
    z_values: Sequence[float],
    cfg: Optional[AppConfig] = None,
    workers: int = 4,
) -> ScanReport:
    """Relative residual of U·V' - U'·V = √(2/π) at every grid point."""
    cfg = cfg or AppConfig()
    points = [(float(a), float(z)) for a in a_values for z in z_values]
    if not points:
        return ScanReport()
    with timed(log, f"wronskian scan over {len(points)} points"):
        if workers <= 1:
            cells = [_scan_cell(a, z, cfg) for a, z in points]
        else:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                cells = list(ex.map(lambda p: _scan_cell(p[0], p[1], cfg), points))

    ok = [c for c in cells if c.residual is not None]
    bad = tuple((c.a, c.z) for c in cells if c.residual is None and not c.failed)
    failed = tuple((c.a, c.z) for c in cells if c.failed)
    for c in cells:
        if c.residual is None and not c.failed:
            log.warning("unsupported cell a=%s z=%s: %s", c.a, c.z, c.error)
    if not ok:
        return ScanReport(tuple(cells), unsupported=bad, failed=failed)
    worst = max(ok, key=lambda c: c.residual or 0.0)
    residuals = [c.residual or 0.0 for c in ok]
    return ScanReport(
        cells=tuple(cells),
        max_residual=max(residuals),
        mean_residual=sum(residuals) / len(residuals),
        worst=(worst.a, worst.z),
        unsupported=bad,
        failed=failed,
    )


# ------------ Identity suite ------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def hermite_residual(n_max: int = 10, z_values: Sequence[float] = (0.5, 1.5, 3.0, 6.0)) -> float:
    """Worst relative gap between U(-n-½, z) and e^{-z²/4} He_n(z)."""
    worst = 0.0
    for n in range(n_max + 1):
        coeffs = np.zeros(n + 1)
        coeffs[n] = 1.0
        for z in z_values:
            want = ScaledValue.make(float(hermite_e.hermeval(z, coeffs)), -0.25 * z * z)
            got = evaluate(-n - 0.5, z).U
            # near a zero of He_n compare against the size of its terms
            size = float(npoly.polyval(abs(z), np.abs(hermite_e.herme2poly(coeffs))))
            scale = size * math.exp(-0.25 * z * z)
            worst = max(worst, abs((got - want).value) / scale)
    return worst


def positive_a_pair_residual(points: Sequence[Tuple[float, float]] = ((40.0, 5.0), (20.0, 15.0), (60.0, 0.5))) -> float:
    """U(a,z)U'(a,-z) + U'(a,z)U(a,-z) against -√(2π)/Γ(½+a)."""
    worst = 0.0
    for a, z in points:
        p, m = evaluate(a, z), evaluate(a, -z)
        lhs = p.U * m.dU + p.dU * m.U
        g = log_gamma_half(a)
        rhs = ScaledValue.from_log(-g.sign, 0.5 * math.log(2.0 * math.pi) - g.log_abs)
        worst = max(worst, lhs.rel_diff(rhs))
    return worst


def airy_wronskian_residual(xs: Sequence[float] = (-5.0, 0.0, 5.0)) -> float:
    return max(abs(math.pi * airy_eval(x).wronskian().value - 1.0) for x in xs)


def maclaurin_stability(
    mu_values: Sequence[float] = (2.0, 5.0, 10.0), zeta: float = 0.5, cfg: Optional[AiryConfig] = None
) -> float:
    """Relative change of F(ζ), G(ζ) when the truncation degree grows by 10."""
    cfg = cfg or AiryConfig()
    worst = 0.0
    for mu in mu_values:
        n = default_degree(mu, cfg)
        a = solve_maclaurin_FG(mu, n, cfg)
        b = solve_maclaurin_FG(mu, n + 10, cfg)
        fa, _, ga, _ = a.FG(zeta)
        fb, _, gb, _ = b.FG(zeta)
        worst = max(worst, abs(fa - fb) / abs(fb), abs(ga - gb) / max(abs(gb), 1e-300))
    return worst


def precision_agreement(which: str = "5.2") -> float:
    """Largest relative gap between the 256- and 320-bit Δ grids."""
    lo = delta_table(which, VerifyConfig(precision_bits=256))
    hi = delta_table(which, VerifyConfig(precision_bits=320))
    gaps = [abs(float(x - y) / float(y)) for (_, _, x), (_, _, y) in zip(lo.cells(), hi.cells()) if y != 0]
    return max(gaps, default=0.0)


def _check(name: str, fn: Callable[[], Tuple[bool, str]]) -> CheckResult:
    try:
        ok, detail = fn()
    except PcfError as exc:
        return CheckResult(name, False, f"{type(exc).__name__}: {exc}")
    except Exception as exc:  # noqa: BLE001
        log.exception("check %s crashed", name)
        return CheckResult(name, False, f"{type(exc).__name__}: {exc}")
    log.debug("check %s: %s (%s)", name, "ok" if ok else "FAILED", detail)
    return CheckResult(name, ok, detail)


def _bound(value: float, limit: float) -> Tuple[bool, str]:
    return value <= limit, f"{value:.2e} (limit {limit:.0e})"


def run_checks(cfg: Optional[AppConfig] = None, scan_workers: int = 4) -> List[CheckResult]:
    """Coefficient identities, function identities, table reproduction and the Wronskian scan."""
    cfg = cfg or AppConfig()
    results: List[CheckResult] = []

    def printed() -> Tuple[bool, str]:
        res = check_printed()
        bad = [k for k, v in res.items() if not v]
        return not bad, "all match" if not bad else "mismatch: " + ", ".join(bad)

    results.append(_check("printed-coefficients", printed))
    results.append(_check("coefficient-degrees", lambda: (check_degrees(), "u_s, phi_s degrees")))
    results.append(_check("u-phi-identity", lambda: _bound(check_u_vs_phi(), 1e-12)))
    results.append(_check("phi-tilde-pipeline", lambda: (check_phi_tilde(), "exact rationals")))
    results.append(_check("airy-wronskian", lambda: _bound(airy_wronskian_residual(), 1e-12)))
    results.append(_check("maclaurin-stability", lambda: _bound(maclaurin_stability(cfg=cfg.airy), 1e-13)))
    results.append(_check("hermite", lambda: _bound(hermite_residual(), 1e-11)))
    results.append(_check("positive-a-pair", lambda: _bound(positive_a_pair_residual(), 1e-10)))

    factor = cfg.verify.tolerance_factor
    for which in TABLES:

        def table(which: str = which) -> Tuple[bool, str]:
            cmp = compare_published(delta_table(which, cfg.verify), factor)
            return cmp.passed, f"{len(cmp.cells) - len(cmp.failures)}/{len(cmp.cells)} cells within x{factor:g}"

        results.append(_check(f"table-{which}", table))
    results.append(_check("precision-256-vs-320", lambda: _bound(precision_agreement(), 1e-10)))

    def scan() -> Tuple[bool, str]:
        rep = wronskian_scan(*default_grid(), cfg=cfg, workers=scan_workers)
        ok = rep.max_residual <= 1e-9 and not rep.unsupported and not rep.failed
        return ok, (
            f"max {rep.max_residual:.2e} at {rep.worst}, "
            f"{len(rep.unsupported)} unsupported, {len(rep.failed)} failed"
        )

    results.append(_check("wronskian-scan", scan))
    SOLUTIONS.clear()
    return results
