"""Replicator competition in a flow reactor under constant organization.

Each replicator k grows as i_k * c_k**p and is diluted by a common outflow
that keeps the total concentration fixed:

    dc_k/dt = i_k * c_k**p - phi(t) * c_k,    phi = sum_j i_j c_j**p / sum_j c_j

The growth order decides the long-run outcome: p < 1 gives coexistence with
ratios (i_A / i_B) ** (1 / (1 - p)), p = 1 selects the most efficient
replicator, and p > 1 selects the one with the largest i_k * c0_k ** (p - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DomainError
from .integrate import IntegratorConfig, _dopri

EXTINCTION_THRESHOLD = 1e-9


@dataclass(frozen=True)
class Replicator:
    label: str
    efficiency: float
    initial: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.efficiency) and self.efficiency > 0):
            raise DomainError(f"{self.label}: efficiency must be > 0, got {self.efficiency!r}")
        if not (math.isfinite(self.initial) and self.initial > 0):
            raise DomainError(f"{self.label}: initial concentration must be > 0, got {self.initial!r}")


@dataclass(frozen=True)
class CompetitionSystem:
    replicators: tuple[Replicator, ...]
    order: float

    def __init__(self, replicators: Sequence[Replicator], order: float):
        replicators = tuple(replicators)
        if len(replicators) < 2:
            raise DomainError("a competition needs at least two replicators")
        labels = [r.label for r in replicators]
        if len(set(labels)) != len(labels):
            raise DomainError(f"replicator labels must be unique, got {labels}")
        if not (math.isfinite(order) and order >= 0):
            raise DomainError(f"order must be >= 0, got {order!r}")
        object.__setattr__(self, "replicators", replicators)
        object.__setattr__(self, "order", float(order))

    @property
    def labels(self) -> list[str]:
        return [r.label for r in self.replicators]

    @property
    def total(self) -> float:
        return math.fsum(r.initial for r in self.replicators)

    @property
    def efficiencies(self) -> np.ndarray:
        return np.array([r.efficiency for r in self.replicators])

    @property
    def initials(self) -> np.ndarray:
        return np.array([r.initial for r in self.replicators])


@dataclass(frozen=True)
class Outcome:
    """Predicted long-run result of a competition.

    ``kind`` is one of ``"coexistence"``, ``"sole_winner"``,
    ``"initial_condition_winner"`` or ``"tie"``. ``fractions`` holds the
    expected stationary share of every replicator.
    """

    kind: str
    winners: tuple[str, ...]
    fractions: dict[str, float] = field(default_factory=dict)

    @property
    def winner(self) -> str | None:
        return self.winners[0] if len(self.winners) == 1 else None


def stationary_ratio(order: float, eff_a: float, eff_b: float) -> float:
    """Stationary concentration ratio c_A / c_B for a coexisting pair (p < 1)."""
    if not 0 <= order < 1:
        raise DomainError(f"coexistence requires 0 <= order < 1, got {order!r}")
    if not (eff_a > 0 and eff_b > 0):
        raise DomainError("efficiencies must be > 0")
    return math.exp(math.log(eff_a / eff_b) / (1.0 - order))


def _argmax_with_ties(scores: np.ndarray) -> list[int]:
    best = scores.max()
    return [k for k, s in enumerate(scores) if s == best]


def predict_outcome(system: CompetitionSystem) -> Outcome:
    p = system.order
    labels = system.labels
    log_eff = np.log(system.efficiencies)
    if p < 1:
        # shares proportional to i_k ** (1 / (1 - p)), normalized in log space
        w = log_eff / (1.0 - p)
        w = np.exp(w - w.max())
        w /= w.sum()
        return Outcome("coexistence", tuple(labels), dict(zip(labels, w.tolist())))

    if p == 1:
        scores = system.efficiencies
        kind = "sole_winner"
    else:
        # decisive per-capita growth i * c0**(p-1), compared in log space
        scores = log_eff + (p - 1.0) * np.log(system.initials)
        kind = "initial_condition_winner"
    best = _argmax_with_ties(scores)
    winners = tuple(labels[k] for k in best)
    fractions = dict.fromkeys(labels, 0.0)
    if len(best) == 1:
        fractions[winners[0]] = 1.0
        return Outcome(kind, winners, fractions)
    # equally fit winners keep their mutual initial proportions
    init = system.initials[best]
    for k, share in zip(best, init / init.sum()):
        fractions[labels[k]] = float(share)
    return Outcome("tie", winners, fractions)


@dataclass
class CompetitionRun:
    system: CompetitionSystem
    times: np.ndarray
    concentrations: np.ndarray  # shape (len(times), n)

    @property
    def fractions(self) -> np.ndarray:
        return self.concentrations / self.concentrations.sum(axis=1, keepdims=True)

    @property
    def totals(self) -> np.ndarray:
        return self.concentrations.sum(axis=1)

    def terminal_fractions(self) -> dict[str, float]:
        return dict(zip(self.system.labels, self.fractions[-1].tolist()))


def _rhs(system: CompetitionSystem):
    eff = system.efficiencies
    excess = system.order - 1.0

    def rhs(_t: float, c: np.ndarray) -> np.ndarray:
        c = np.maximum(c, 0.0)
        with np.errstate(divide="ignore"):
            log_c = np.log(c)
        # per-capita growth i * c**(p-1) in log space; zero-concentration
        # members contribute no growth (p > 1) or a finite influx (p < 1)
        if excess == 0:
            growth = eff * c
        else:
            with np.errstate(over="ignore", invalid="ignore"):
                per_capita = eff * np.exp(excess * log_c)
                growth = np.where(c > 0, per_capita * c, eff if system.order == 0 else 0.0)
        phi = growth.sum() / c.sum()
        return growth - phi * c

    return rhs


def simulate_competition(system: CompetitionSystem, t_end: float,
                         config: IntegratorConfig | None = None) -> CompetitionRun:
    if not t_end > 0:
        raise DomainError(f"t_end must be > 0, got {t_end!r}")
    config = config or IntegratorConfig(rel_tol=1e-10, abs_tol=1e-14 * system.total)
    run = _dopri(_rhs(system), system.initials.astype(float), t_end, config)
    return CompetitionRun(system, np.array(run.times), np.array(run.states))


@dataclass
class Agreement:
    label: str
    predicted: float
    simulated: float
    passed: bool


@dataclass
class VerificationReport:
    outcome: Outcome
    rows: list[Agreement]
    drift: float
    converged: bool
    run: CompetitionRun = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.converged and all(r.passed for r in self.rows)

    def raise_for_convergence(self) -> None:
        if not self.converged:
            raise ConvergenceError(f"fractions still drifting by {self.drift:.3g}", self.drift)


def verify_prediction(system: CompetitionSystem, t_end: float, tol: float = 0.01,
                      config: IntegratorConfig | None = None) -> VerificationReport:
    """Simulate to ``t_end`` and compare terminal shares with the prediction.

    Coexisting shares must match within ``tol`` relative; replicators
    predicted to vanish must fall below the extinction threshold. The run
    counts as converged when no share moved by ``tol / 10`` or more over the
    final tenth of the horizon.
    """
    outcome = predict_outcome(system)
    run = simulate_competition(system, t_end, config)
    frac = run.fractions
    t_tail = 0.9 * t_end
    start = np.array([np.interp(t_tail, run.times, frac[:, k]) for k in range(frac.shape[1])])
    tail = np.vstack([start, frac[run.times >= t_tail]])
    drift = float(np.max(tail.max(axis=0) - tail.min(axis=0)))
    rows = []
    for k, label in enumerate(system.labels):
        expected = outcome.fractions[label]
        got = float(frac[-1, k])
        if expected == 0.0:
            ok = got < EXTINCTION_THRESHOLD
        else:
            ok = abs(got - expected) <= tol * expected
        rows.append(Agreement(label, expected, got, ok))
    return VerificationReport(outcome, rows, drift, drift < tol / 10, run)
