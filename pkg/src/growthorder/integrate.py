"""Adaptive Dormand-Prince 5(4) integration of the growth law.

This is the numerical oracle for the closed forms in :mod:`growthorder.kinetics`
and the engine behind the competition simulations. It knows nothing about the
closed-form solution: blow-up is detected from the trajectory itself.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import DomainError, StepBudgetError
from .kinetics import GrowthSpec, principal_at

State = Union[float, np.ndarray]

# Dormand & Prince (1980) coefficients
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = _A[6] + (0.0,)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
# PI controller exponents for a 4th-order error estimate
_ALPHA = 0.7 / 5
_BETA = 0.4 / 5


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_steps: int = 200_000
    blowup_guard: float = 1e300

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("tolerances must be > 0")
        if self.max_steps <= 0:
            raise DomainError("max_steps must be > 0")
        if not self.blowup_guard > 0:
            raise DomainError("blowup_guard must be > 0")


class Method(enum.Enum):
    CLOSED_FORM = "closed_form"
    INTEGRATED = "integrated"


@dataclass
class GrowthCurve:
    """Sampled trajectory of one growth law.

    ``blowup_estimate`` is set only when integration stopped on a detected
    singularity; the curve then ends short of the requested time.
    """

    times: np.ndarray
    values: np.ndarray
    method: Method
    blowup_estimate: float | None = None
    spec: GrowthSpec | None = field(default=None, repr=False)

    @property
    def blowup_detected(self) -> bool:
        return self.blowup_estimate is not None

    @property
    def terminated(self) -> str:
        if self.blowup_estimate is None:
            return "completed"
        return f"blowup_detected(t_est={self.blowup_estimate!r})"

    def sample(self, t: float | np.ndarray) -> np.ndarray:
        """Linear interpolation between accepted steps."""
        t = np.asarray(t, dtype=float)
        if np.any(t < self.times[0]) or np.any(t > self.times[-1]):
            raise DomainError("sample time outside the integrated range")
        return np.interp(t, self.times, self.values)


@dataclass
class _Run:
    times: list[float]
    states: list[State]
    blowup: bool


def _norm(err: State, y_old: State, y_new: State, config: IntegratorConfig) -> float:
    if isinstance(err, np.ndarray):
        scale = config.abs_tol + config.rel_tol * np.maximum(np.abs(y_old), np.abs(y_new))
        return float(np.sqrt(np.mean((err / scale) ** 2)))
    scale = config.abs_tol + config.rel_tol * max(abs(y_old), abs(y_new))
    return abs(err) / scale


def _finite(y: State) -> bool:
    if isinstance(y, np.ndarray):
        return bool(np.all(np.isfinite(y)))
    return math.isfinite(y)


def _magnitude(y: State) -> float:
    if isinstance(y, np.ndarray):
        return float(np.max(np.abs(y)))
    return abs(y)


def _initial_step(rhs: Callable[[float, State], State], t0: float, y0: State, f0: State,
                  t_end: float, config: IntegratorConfig) -> float:
    # Hairer, Norsett & Wanner, starting step heuristic (II.4)
    scale = config.abs_tol + config.rel_tol * _magnitude(y0)
    d0 = _magnitude(y0) / scale
    d1 = _magnitude(f0) / scale
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, t_end - t0)
    y1 = y0 + h0 * f0
    f1 = rhs(t0 + h0, y1)
    if not _finite(f1):
        return h0 * 1e-3
    d2 = _magnitude(f1 - f0) / scale / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, t_end - t0)


def _dopri(rhs: Callable[[float, State], State], y0: State, t_end: float,
           config: IntegratorConfig, detect_blowup: bool = False) -> _Run:
    """Integrate from t = 0 to ``t_end``, keeping every accepted step."""
    t = 0.0
    y = y0
    f = rhs(t, y)
    times = [t]
    states: list[State] = [y]
    h = _initial_step(rhs, t, y, f, t_end, config)
    err_prev = 1.0
    steps = 0
    while t < t_end:
        if steps >= config.max_steps:
            raise StepBudgetError(t, config.max_steps)
        steps += 1
        last = t + h >= t_end
        if last:
            h = t_end - t
        if detect_blowup and t + h == t:
            return _Run(times, states, blowup=True)

        k = [f]
        for s in range(1, 7):
            ys = y
            for a, kj in zip(_A[s], k):
                if a:
                    ys = ys + (h * a) * kj
            k.append(rhs(t + _C[s] * h, ys))
        y_new = ys  # the 7th stage point is the 5th-order solution
        err_vec = 0.0 * y
        for e, kj in zip(_E, k):
            if e:
                err_vec = err_vec + (h * e) * kj

        if not (_finite(y_new) and _finite(k[6]) and _finite(err_vec)):
            h *= _MIN_FACTOR
            continue
        err = _norm(err_vec, y, y_new, config)
        if err <= 1.0:
            t = t_end if last else t + h
            y = y_new
            f = k[6]
            times.append(t)
            states.append(y)
            if detect_blowup and _magnitude(y) > config.blowup_guard:
                return _Run(times, states, blowup=True)
            err = max(err, 1e-10)
            factor = _SAFETY * err ** (-_ALPHA) * err_prev ** _BETA
            err_prev = err
            h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
        else:
            h *= max(_MIN_FACTOR, _SAFETY * err ** (-1 / 5))
    return _Run(times, states, blowup=False)


def _estimate_blowup(times: np.ndarray, values: np.ndarray, order: float, k: int = 5) -> float:
    # c**(1-p) is linear in t and vanishes at the singularity: fit a line
    # through the last k accepted points and return its root.
    k = max(3, min(k, len(times)))
    t = times[-k:]
    u = np.exp((1.0 - order) * np.log(values[-k:]))
    t_ref = t[-1]
    slope, intercept = np.polyfit(t - t_ref, u, 1)
    if slope >= 0:
        return float(t_ref)
    return float(t_ref - intercept / slope)


def integrate_growth(spec: GrowthSpec, t_end: float,
                     config: IntegratorConfig | None = None) -> GrowthCurve:
    """Integrate dc/dt = i * c**p from ``spec.principal`` up to ``t_end``.

    For p > 1 the run stops once the value passes ``config.blowup_guard`` or the
    step size collapses, and the singularity time is extrapolated from the
    final accepted steps.
    """
    config = config or IntegratorConfig()
    if not t_end > 0:
        raise DomainError(f"t_end must be > 0, got {t_end!r}")
    i, p = spec.rate, spec.order

    def rhs(_t: float, c: float) -> float:
        if c <= 0:
            return 0.0 if p > 0 else i
        try:
            return i * c ** p
        except OverflowError:
            return math.inf

    run = _dopri(rhs, float(spec.principal), t_end, config, detect_blowup=p > 1)
    times = np.array(run.times)
    values = np.array(run.states, dtype=float)
    estimate = None
    if run.blowup:
        estimate = _estimate_blowup(times, values, p)
    return GrowthCurve(times, values, Method.INTEGRATED, estimate, spec)


def closed_form_curve(spec: GrowthSpec, times: np.ndarray) -> GrowthCurve:
    values = np.array([principal_at(spec, float(t)) for t in times])
    return GrowthCurve(np.asarray(times, dtype=float), values, Method.CLOSED_FORM, spec=spec)


def max_rel_error_vs_closed_form(spec: GrowthSpec, t_end: float,
                                 config: IntegratorConfig | None = None) -> float:
    """Largest relative deviation of the integrated curve from the closed form.

    Compared only at accepted step times.
    """
    curve = integrate_growth(spec, t_end, config)
    if curve.blowup_detected:
        raise DomainError("t_end reaches the blow-up region; use a shorter horizon")
    exact = np.array([principal_at(spec, float(t)) for t in curve.times])
    return float(np.max(np.abs(curve.values - exact) / exact))
