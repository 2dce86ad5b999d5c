"""Scenario runners that turn the models into CSV (and optional SVG) artifacts.

Every runner is deterministic: numbers are written with 17 significant
digits, metadata lines start with ``#`` and carry no timestamps.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import svg
from .competition import CompetitionSystem, VerificationReport, verify_prediction
from .errors import DomainError
from .inequality import AccountPopulation, gini_trajectory, evolve_population, lorenz_curve, read_balances
from .integrate import IntegratorConfig, max_rel_error_vs_closed_form
from .kinetics import (
    GrowthSpec,
    blowup_time,
    classify_regime,
    doubling_time,
    effective_principal,
    growth_factor,
    is_diverged,
    principal_at,
    required_rate,
)

TABLE1_PRINCIPALS = tuple(10.0 ** k for k in range(3, 13))
TABLE1_ORDERS = (1.1, 1.0, 0.9)
DEFAULT_PRINCIPALS = (1.0, 1e3, 1e6, 1e9)
DEFAULT_ORDERS = tuple(round(0.95 + 0.01 * k, 2) for k in range(11))
TRUNCATION_FRACTION = 0.99


def fmt(x: float) -> str:
    """Serialize a float so that parsing it back gives the same double."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{float(x):.17g}"


def display_2dp(x: float) -> str:
    """Two-decimal rendering of an amount, as shown in printed tables.

    The value is first cut to 15 significant digits (the precision a double
    guarantees), then rounded to cents.
    """
    return f"{float(f'{x:.15g}'):.2f}"


def principal_tag(c: float) -> str:
    return f"{c:g}".replace("+", "")


def order_tag(p: float) -> str:
    return f"p={p:g}"


@dataclass
class Artifact:
    paths: list[Path] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    report: Any = None

    def extend(self, other: "Artifact") -> None:
        self.paths.extend(other.paths)
        self.errors.extend(other.errors)


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]],
              metadata: dict[str, str] | None = None) -> Path:
    buf = io.StringIO()
    for key, value in (metadata or {}).items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


def read_csv(path: str | Path) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Parse a CSV written by :func:`write_csv` into (metadata, header, rows)."""
    metadata: dict[str, str] = {}
    lines = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            metadata[key] = value
        else:
            lines.append(line)
    reader = csv.reader(lines)
    header = next(reader)
    return metadata, header, [row for row in reader]


def parse_cell(cell: str) -> float:
    return math.nan if cell == "" else float(cell)


# -- effective principal table ---------------------------------------------

def table1_rows() -> list[list[float]]:
    return [[c] + [effective_principal(c, p) for p in TABLE1_ORDERS] for c in TABLE1_PRINCIPALS]


def run_table1(out_dir: Path, plots: bool = False) -> Artifact:
    out_dir = Path(out_dir)
    header = ["principal"] + [f"effective_{order_tag(p)}" for p in TABLE1_ORDERS]
    rows = table1_rows()
    art = Artifact()
    art.paths.append(write_csv(out_dir / "table1.csv", header, rows))
    display = [[display_2dp(v) for v in row] for row in rows]
    art.paths.append(write_csv(out_dir / "table1_display.csv", header, display))
    return art


# -- growth curves -----------------------------------------------------------

def growth_table(principal: float, orders: Sequence[float], rate: float, horizon: float,
                 samples: int, unit: str = "EUR") -> tuple[np.ndarray, dict[float, list[float]], dict[float, float]]:
    """Closed-form curves on a uniform grid; p > 1 curves stop at 0.99 t*.

    Returns the grid, the values per order (NaN past truncation) and the
    truncation time per truncated order.
    """
    times = np.linspace(0.0, horizon, samples)
    columns: dict[float, list[float]] = {}
    truncated: dict[float, float] = {}
    for p in orders:
        spec = GrowthSpec(principal, rate, p, unit)
        t_star = blowup_time(spec)
        cut = None if t_star is None else TRUNCATION_FRACTION * t_star
        if cut is not None and cut < horizon:
            truncated[p] = cut
        columns[p] = [
            math.nan if cut is not None and t > cut else principal_at(spec, float(t))
            for t in times
        ]
    return times, columns, truncated


def run_growth_curves(out_dir: Path, principals: Sequence[float] = DEFAULT_PRINCIPALS,
                      orders: Sequence[float] = DEFAULT_ORDERS, rate: float = 0.05,
                      horizon: float = 100.0, samples: int = 201, unit: str = "EUR",
                      plots: bool = True) -> Artifact:
    if not horizon > 0:
        raise DomainError(f"horizon must be > 0, got {horizon!r}")
    if samples < 2:
        raise DomainError(f"samples must be >= 2, got {samples!r}")
    out_dir = Path(out_dir)
    art = Artifact()
    for c0 in principals:
        times, columns, truncated = growth_table(c0, orders, rate, horizon, samples, unit)
        meta = {"kind": "growth", "principal": fmt(c0), "rate": fmt(rate), "unit": unit}
        for p, cut in truncated.items():
            meta[f"truncated {order_tag(p)}"] = f"t > {fmt(cut)} (0.99 of blow-up time)"
        header = ["t"] + [order_tag(p) for p in orders]
        rows = [[float(t)] + [columns[p][k] for p in orders] for k, t in enumerate(times)]
        tag = principal_tag(c0)
        art.paths.append(write_csv(out_dir / f"growth_{tag}.csv", header, rows, meta))
        if plots:
            series = [(order_tag(p), times.tolist(), columns[p]) for p in orders]
            path = out_dir / f"growth_{tag}.svg"
            svg.write_line_chart(path, series, f"Growth of {c0:g} {unit} at i = {rate:g}",
                                 "t [years]", f"principal [{unit}]", log_y=True)
            art.paths.append(path)
    return art


# -- doubling curves ---------------------------------------------------------

def default_rate_grid() -> list[float]:
    return [round(0.01 * k, 2) for k in range(1, 21)]


def run_doubling_curves(out_dir: Path, principals: Sequence[float] = DEFAULT_PRINCIPALS,
                        orders: Sequence[float] = DEFAULT_ORDERS,
                        rates: Sequence[float] | None = None, target_doubling: float = 10.0,
                        unit: str = "EUR", plots: bool = True) -> Artifact:
    rates = list(rates) if rates is not None else default_rate_grid()
    if any(not r > 0 for r in rates):
        raise DomainError("doubling curves need strictly positive rates")
    out_dir = Path(out_dir)
    art = Artifact()
    for c0 in principals:
        header = ["rate"] + [order_tag(p) for p in orders] + ["ln2_over_rate"]
        rows = []
        for i in rates:
            rows.append([i] + [doubling_time(GrowthSpec(c0, i, p, unit)) for p in orders]
                        + [math.log(2.0) / i])
        meta = {"kind": "doubling", "principal": fmt(c0), "unit": unit}
        tag = principal_tag(c0)
        art.paths.append(write_csv(out_dir / f"doubling_{tag}.csv", header, rows, meta))
        if plots:
            series = [(order_tag(p), rates, [r[1 + k] for r in rows]) for k, p in enumerate(orders)]
            path = out_dir / f"doubling_{tag}.svg"
            svg.write_line_chart(path, series, f"Doubling time of {c0:g} {unit}",
                                 "interest rate", "doubling time [years]")
            art.paths.append(path)
    rows = [[c0, p, required_rate(p, c0, target_doubling)] for c0, p in product(principals, orders)]
    art.paths.append(write_csv(out_dir / "required_rates.csv",
                               ["principal", "order", "rate"], rows,
                               {"kind": "required_rate", "target_doubling": fmt(target_doubling),
                                "unit": unit}))
    return art


# -- competition -------------------------------------------------------------

def run_competition(out_dir: Path, system: CompetitionSystem, t_end: float, tol: float = 0.01,
                    plots: bool = True) -> Artifact:
    out_dir = Path(out_dir)
    report: VerificationReport = verify_prediction(system, t_end, tol)
    run = report.run
    labels = system.labels
    rows = [[float(t)] + [float(v) for v in f] for t, f in zip(run.times, run.fractions)]
    meta = {"kind": "competition", "order": fmt(system.order), "t_end": fmt(t_end)}
    for r in system.replicators:
        meta[f"replicator {r.label}"] = f"efficiency={fmt(r.efficiency)} initial={fmt(r.initial)}"
    art = Artifact(report=report)
    art.paths.append(write_csv(out_dir / "competition.csv", ["t"] + labels, rows, meta))
    report_rows = [[a.label, a.predicted, a.simulated, "pass" if a.passed else "fail"]
                   for a in report.rows]
    art.paths.append(write_csv(
        out_dir / "competition_report.csv", ["label", "predicted", "simulated", "status"],
        report_rows,
        {"outcome": report.outcome.kind, "winners": " ".join(report.outcome.winners),
         "drift": fmt(report.drift), "converged": str(report.converged).lower()},
    ))
    if plots:
        series = [(lab, run.times.tolist(), run.fractions[:, k].tolist()) for k, lab in enumerate(labels)]
        path = out_dir / "competition.svg"
        svg.write_line_chart(path, series, f"Competition at p = {system.order:g}", "t", "fraction")
        art.paths.append(path)
    if not report.converged:
        art.errors.append(f"competition did not converge: final drift {report.drift:.3g} >= {tol / 10:.3g}")
    elif not report.passed:
        failed = ", ".join(a.label for a in report.rows if not a.passed)
        art.errors.append(f"simulation disagrees with prediction for: {failed}")
    return art


# -- inequality --------------------------------------------------------------

def run_inequality(out_dir: Path, balances_path: str | Path, rate: float, order: float,
                   times: Sequence[float], lorenz_times: Sequence[float] = (),
                   unit: str = "EUR", plots: bool = True) -> Artifact:
    out_dir = Path(out_dir)
    pop = AccountPopulation(read_balances(balances_path), rate, order, unit)
    traj = gini_trajectory(pop, times)
    meta = {"kind": "inequality", "rate": fmt(rate), "order": fmt(order), "unit": unit,
            "accounts": str(len(pop))}
    art = Artifact()
    art.paths.append(write_csv(out_dir / "gini.csv", ["t", "gini"], traj, meta))
    curves = []
    for t in lorenz_times:
        curve = lorenz_curve(evolve_population(pop, t))
        path = out_dir / f"lorenz_t{float(t):g}.csv"
        art.paths.append(write_csv(path, ["population_share", "wealth_share"], curve.points,
                                   dict(meta, t=fmt(float(t)))))
        curves.append((f"t = {float(t):g}", curve))
    if plots:
        path = out_dir / "gini.svg"
        svg.write_line_chart(path, [("gini", [t for t, _ in traj], [g for _, g in traj])],
                             f"Gini index at p = {order:g}", "t [years]", "Gini")
        art.paths.append(path)
        if curves:
            series = [("equality", [0.0, 1.0], [0.0, 1.0])]
            series += [(name, c.population_share.tolist(), c.wealth_share.tolist()) for name, c in curves]
            path = out_dir / "lorenz.svg"
            svg.write_line_chart(path, series, "Lorenz curves", "population share", "wealth share")
            art.paths.append(path)
    return art


# -- sweep -------------------------------------------------------------------

SWEEP_HEADER = ["principal", "rate", "order", "regime", "growth_factor", "doubling_time",
                "blowup_time", "integrator_max_rel_error"]


def sweep_point(principal: float, rate: float, order: float, horizon: float,
                check_integrator: bool) -> list[Any]:
    spec = GrowthSpec(principal, rate, order)
    t_star = blowup_time(spec)
    factor = growth_factor(spec, horizon)
    t2 = doubling_time(spec) if rate > 0 else math.inf
    err = math.nan
    if check_integrator and rate > 0:
        t_end = horizon if t_star is None else min(horizon, 0.9 * t_star)
        err = max_rel_error_vs_closed_form(spec, t_end, IntegratorConfig())
    return [principal, rate, order, classify_regime(order).value,
            math.inf if is_diverged(factor) else factor, t2,
            math.nan if t_star is None else t_star, err]


def _sweep_job(args: tuple) -> list[Any]:
    return sweep_point(*args)


def run_sweep(out_dir: Path, principals: Sequence[float], orders: Sequence[float],
              rates: Sequence[float], horizon: float = 100.0, check_integrator: bool = False,
              workers: int = 1) -> Artifact:
    """Evaluate every (principal, rate, order) grid point.

    Points run in parallel when ``workers > 1``; rows are always written in
    grid order.
    """
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers!r}")
    jobs = [(c, i, p, horizon, check_integrator) for c, i, p in product(principals, rates, orders)]
    if workers == 1:
        rows = [_sweep_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_job, jobs))
    art = Artifact()
    art.paths.append(write_csv(Path(out_dir) / "sweep.csv", SWEEP_HEADER, rows,
                               {"kind": "sweep", "horizon": fmt(horizon)}))
    return art
