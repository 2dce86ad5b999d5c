"""Lorenz curves and Gini indices of account populations under a shared growth law."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import BlowupError, DomainError, ParseError
from .kinetics import GrowthSpec, blowup_time, is_diverged, principal_at


@dataclass(frozen=True)
class AccountPopulation:
    balances: tuple[float, ...]
    rate: float
    order: float
    unit: str = "EUR"

    def __init__(self, balances: Iterable[float], rate: float, order: float, unit: str = "EUR"):
        balances = tuple(float(b) for b in balances)
        if not balances:
            raise DomainError("account population is empty")
        for k, b in enumerate(balances):
            if not (math.isfinite(b) and b > 0):
                raise DomainError(f"account {k}: balance must be finite and > 0, got {b!r}")
        if not (math.isfinite(rate) and rate >= 0):
            raise DomainError(f"rate must be >= 0, got {rate!r}")
        if not (math.isfinite(order) and order >= 0):
            raise DomainError(f"order must be >= 0, got {order!r}")
        object.__setattr__(self, "balances", balances)
        object.__setattr__(self, "rate", float(rate))
        object.__setattr__(self, "order", float(order))
        object.__setattr__(self, "unit", unit)

    def __len__(self) -> int:
        return len(self.balances)

    def as_array(self) -> np.ndarray:
        return np.array(self.balances)


@dataclass(frozen=True)
class LorenzCurve:
    population_share: np.ndarray
    wealth_share: np.ndarray

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.population_share.tolist(), self.wealth_share.tolist()))

    def area(self) -> float:
        """Trapezoidal area under the piecewise-linear curve."""
        x, y = self.population_share, self.wealth_share
        return float(np.sum(np.diff(x) * (y[1:] + y[:-1])) / 2)


def _balances(pop: AccountPopulation | Sequence[float]) -> np.ndarray:
    x = pop.as_array() if isinstance(pop, AccountPopulation) else np.asarray(pop, dtype=float)
    if x.size == 0:
        raise DomainError("account population is empty")
    return x


def lorenz_curve(pop: AccountPopulation | Sequence[float]) -> LorenzCurve:
    x = np.sort(_balances(pop))
    n = x.size
    cum = np.cumsum(x)
    wealth = np.concatenate(([0.0], cum / cum[-1]))
    wealth[-1] = 1.0
    share = np.arange(n + 1) / n
    return LorenzCurve(share, wealth)


def gini(pop: AccountPopulation | Sequence[float]) -> float:
    """Gini index without small-sample correction.

    Uses the rank form sum_k (2k - n - 1) x_(k) / (n**2 * mean), which is the
    mean absolute difference over all ordered pairs divided by twice the mean.
    """
    x = np.sort(_balances(pop))
    n = x.size
    ranks = np.arange(1, n + 1)
    return float(np.sum((2 * ranks - n - 1) * x) / (n * np.sum(x)))


def evolve_population(pop: AccountPopulation, t: float) -> AccountPopulation:
    """Grow every balance for ``t`` years under the population's shared law."""
    if not t >= 0:
        raise DomainError(f"time must be >= 0, got {t!r}")
    grown = []
    for k, b in enumerate(pop.balances):
        spec = GrowthSpec(b, pop.rate, pop.order, pop.unit)
        value = principal_at(spec, t)
        if is_diverged(value) or not math.isfinite(value):
            raise BlowupError(
                f"account {k} (balance {b!r}) diverges before t = {t!r}",
                label=str(k), blowup_time=blowup_time(spec),
            )
        grown.append(value)
    return AccountPopulation(grown, pop.rate, pop.order, pop.unit)


def gini_trajectory(pop: AccountPopulation, t_grid: Sequence[float]) -> list[tuple[float, float]]:
    t_grid = [float(t) for t in t_grid]
    if any(b < a for a, b in zip(t_grid, t_grid[1:])):
        raise DomainError("time grid must be non-decreasing")
    return [(t, gini(evolve_population(pop, t))) for t in t_grid]


def read_balances(path: str | Path) -> list[float]:
    """Read a single-column CSV with header ``balance``."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError("balances file is empty", path=str(path))
        if [h.strip() for h in header] != ["balance"]:
            raise ParseError(f"expected header 'balance', got {header!r}", line=1, path=str(path))
        balances = []
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 1:
                raise ParseError(f"expected one column, got {len(row)}", line=line, path=str(path))
            try:
                value = float(row[0])
            except ValueError:
                raise ParseError(f"not a number: {row[0]!r}", line=line, path=str(path)) from None
            if not (math.isfinite(value) and value > 0):
                raise ParseError(f"balance must be finite and > 0, got {row[0]!r}", line=line, path=str(path))
            balances.append(value)
    if not balances:
        raise ParseError("balances file has no rows", path=str(path))
    return balances
