"""Generalized compounding dc/dt = i * c**p: closed forms, integration,
replicator competition and inequality metrics."""

from .competition import (
    CompetitionSystem,
    Outcome,
    Replicator,
    predict_outcome,
    simulate_competition,
    stationary_ratio,
    verify_prediction,
)
from .errors import (
    BlowupError,
    ConvergenceError,
    DomainError,
    GrowthOrderError,
    NoDoublingError,
    NumericalError,
    ParseError,
    StepBudgetError,
)
from .inequality import AccountPopulation, LorenzCurve, evolve_population, gini, gini_trajectory, lorenz_curve
from .integrate import GrowthCurve, IntegratorConfig, integrate_growth, max_rel_error_vs_closed_form
from .kinetics import (
    DIVERGED,
    GrowthSpec,
    Regime,
    blowup_time,
    classify_regime,
    doubling_time,
    effective_principal,
    growth_factor,
    is_diverged,
    principal_at,
    required_rate,
    time_to_reach,
)

__version__ = "0.1.0"
