from __future__ import annotations

from fractions import Fraction
from typing import Tuple

import pytest

from config import AppConfig
from errors import DomainError
import verify
from verify import (
    MU_VALUES,
    TABLES,
    T_VALUES,
    airy_wronskian_residual,
    compare_published,
    default_grid,
    delta_table,
    delta_table_51,
    delta_table_52_53,
    hermite_residual,
    maclaurin_stability,
    positive_a_pair_residual,
    precision_agreement,
    run_checks,
    wronskian_scan,
)


@pytest.mark.parametrize("which", TABLES)
def test_tables_reproduce_published(which: str) -> None:
    cmp = compare_published(delta_table(which))
    assert cmp.passed, [(str(c.mu), str(c.t), c.computed, c.published) for c in cmp.failures]
    assert len(cmp.cells) == 50


@pytest.mark.parametrize(
    "which, mu, t, published",
    [
        ("5.1", 5, "0", 0.32e-09),
        ("5.1", 100, "0.5", 0.13e-22),
        ("5.2", 5, "1.5", 0.71e-08),
        ("5.2", 10, "25.0", 0.73e-29),
        ("5.3", 5, "1.0", 0.27e-11),
        ("5.3", 50, "0", 0.32e-21),
    ],
)
def test_table_anchors(which: str, mu: int, t: str, published: float) -> None:
    cells = {(c.mu, c.t): c for c in compare_published(delta_table(which)).cells}
    cell = cells[(Fraction(mu), Fraction(t))]
    assert cell.published == published
    assert published / 3.0 <= cell.computed <= published * 3.0


def test_oscillatory_delta_even_in_t() -> None:
    ts = (Fraction(-1, 2), Fraction(1, 2), Fraction(-3, 10), Fraction(3, 10))
    grid = delta_table_51((Fraction(10),), ts)
    assert grid.delta[0][0] == grid.delta[1][0]
    assert grid.delta[2][0] == grid.delta[3][0]


def test_modified_delta_decreases_with_mu() -> None:
    grid = delta_table("5.2")
    for row in grid.delta:
        assert all(x > y for x, y in zip(row, row[1:]))


def test_table_domains() -> None:
    with pytest.raises(DomainError):
        delta_table_51(MU_VALUES, (Fraction(1),))
    with pytest.raises(DomainError):
        delta_table_52_53(MU_VALUES, (Fraction(1),), "5.2")
    with pytest.raises(DomainError):
        delta_table_52_53(MU_VALUES, (Fraction(-1, 2),), "5.3")
    with pytest.raises(DomainError):
        delta_table_52_53(MU_VALUES, (Fraction(2),), "5.4")
    with pytest.raises(DomainError):
        delta_table("5.4")


def test_compare_needs_published_grid() -> None:
    grid = delta_table_51((Fraction(5),), (Fraction(0),))
    with pytest.raises(DomainError):
        compare_published(grid)


def test_precision_agreement() -> None:
    assert precision_agreement("5.2") <= 1e-10


def test_csv_and_dict_output() -> None:
    grid = delta_table("5.1")
    lines = grid.to_csv().splitlines()
    assert lines[0] == "mu,t,delta"
    assert len(lines) == 51
    assert lines[1].startswith("5,0,")
    d = grid.to_dict()
    assert d["table"] == "5.1"
    assert d["terms"] == 3
    assert d["mu"] == ["5", "10", "25", "50", "100"]
    assert len(d["delta"]) == len(T_VALUES["5.1"])


def test_small_scan() -> None:
    rep = wronskian_scan([-20.0, 1.0, 40.0], [-6.0, 0.5, 14.0], workers=2)
    assert len(rep.cells) == 9
    assert not rep.unsupported
    assert rep.max_residual <= 1e-9
    assert rep.worst is not None
    assert rep.to_dict()["cells"] == 9


def test_empty_scan() -> None:
    rep = wronskian_scan([], [1.0])
    assert rep.cells == ()
    assert rep.max_residual == 0.0
    assert rep.worst is None


def test_default_scan() -> None:
    a_values, z_values = default_grid()
    assert len(a_values) == len(z_values) == 20
    assert min(a_values) == pytest.approx(-5000.0)
    assert max(z_values) == pytest.approx(200.0)
    rep = wronskian_scan(a_values, z_values)
    assert not rep.unsupported, rep.unsupported
    assert rep.max_residual <= 1e-9


def test_function_identities() -> None:
    assert hermite_residual() <= 1e-11
    assert positive_a_pair_residual() <= 1e-10
    assert airy_wronskian_residual() <= 1e-12


def test_maclaurin_stability() -> None:
    assert maclaurin_stability() <= 1e-13


def test_run_checks_reports_every_check() -> None:
    results = run_checks(AppConfig(), scan_workers=4)
    names = [r.name for r in results]
    assert names[:2] == ["printed-coefficients", "coefficient-degrees"]
    assert {"table-5.1", "table-5.2", "table-5.3", "wronskian-scan"} <= set(names)
    assert all(r.passed for r in results), [(r.name, r.detail) for r in results if not r.passed]


def test_scan_positive_a_negative_z_cells() -> None:
    rep = wronskian_scan([17.1, 44.05, 4999.99], [-200.0, -85.95, -36.94], workers=2)
    assert not rep.failed, rep.failed
    assert not rep.unsupported, rep.unsupported
    assert rep.max_residual <= 1e-9


def test_scan_records_crashing_cells(monkeypatch: pytest.MonkeyPatch) -> None:
    def boom(a: float, z: float, cfg: AppConfig) -> object:
        if a > 0.0:
            raise OverflowError("math range error")
        return real(a, z, cfg)

    real = verify.evaluate
    monkeypatch.setattr(verify, "evaluate", boom)
    rep = wronskian_scan([-2.5, 3.5], [0.5, 1.5], workers=2)
    assert len(rep.cells) == 4
    assert sorted(rep.failed) == [(3.5, 0.5), (3.5, 1.5)]
    assert not rep.unsupported
    assert rep.worst is not None and rep.worst[0] == -2.5
    assert all("OverflowError" in c.error for c in rep.cells if c.failed)
    assert rep.to_dict()["failed"] == [[3.5, 0.5], [3.5, 1.5]]


def test_check_turns_crashes_into_failures() -> None:
    def crash() -> Tuple[bool, str]:
        raise ZeroDivisionError("float division by zero")

    res = verify._check("crashing", crash)
    assert not res.passed
    assert "ZeroDivisionError" in res.detail
