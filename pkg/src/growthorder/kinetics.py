"""Closed-form evaluation of the generalized compounding law dc/dt = i * c**p.

For p != 1 the solution is

    c(t) = [c0**(1 - p) + (1 - p) * i * t] ** (1 / (1 - p))

and for p == 1 it reduces to continuous compounding, c0 * exp(i * t).

Everything is evaluated in the factored form

    c(t) = c0 * exp(log1p((1 - p) * i * t * c0**(p - 1)) / (1 - p))

which stays accurate as p approaches 1 and signals divergence (p > 1) when
the log1p argument reaches -1. A diverged value is reported as ``math.inf``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, NoDoublingError

DIVERGED = math.inf

_LN2 = math.log(2.0)


class Regime(enum.Enum):
    LINEAR = "linear"
    MONOMIAL = "monomial"
    EXPONENTIAL = "exponential"
    HYPERBOLIC = "hyperbolic"


def classify_regime(order: float) -> Regime:
    """Return the growth regime of a growth order.

    >>> classify_regime(0.5)
    <Regime.MONOMIAL: 'monomial'>
    """
    if not order >= 0:
        raise DomainError(f"growth order must be >= 0, got {order!r}")
    if order == 0:
        return Regime.LINEAR
    if order < 1:
        return Regime.MONOMIAL
    if order == 1:
        return Regime.EXPONENTIAL
    return Regime.HYPERBOLIC


@dataclass(frozen=True)
class GrowthSpec:
    """One instance of the growth law.

    ``principal`` is a number in ``unit``. For order != 1 results depend on
    that unit, so converting currencies means building a new spec.
    """

    principal: float
    rate: float
    order: float
    unit: str = "EUR"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.principal) and self.principal > 0):
            raise DomainError(f"principal must be finite and > 0, got {self.principal!r}")
        if not (math.isfinite(self.rate) and self.rate >= 0):
            raise DomainError(f"rate must be finite and >= 0, got {self.rate!r}")
        if not (math.isfinite(self.order) and self.order >= 0):
            raise DomainError(f"order must be finite and >= 0, got {self.order!r}")

    @property
    def regime(self) -> Regime:
        return classify_regime(self.order)


def is_diverged(value: float) -> bool:
    return value == DIVERGED


def _pow(base: float, exponent: float) -> float:
    try:
        return math.pow(base, exponent)
    except OverflowError:
        return math.inf


def principal_at(spec: GrowthSpec, t: float) -> float:
    """Principal after ``t`` years, or ``DIVERGED`` at/after the blow-up time."""
    if not t >= 0:
        raise DomainError(f"time must be >= 0, got {t!r}")
    c0, i, p = spec.principal, spec.rate, spec.order
    if t == 0 or i == 0:
        return c0
    if p == 1:
        return c0 * math.exp(i * t)
    q = 1.0 - p
    # q * i * t / c0**q, the relative change of c**q over [0, t]
    x = q * i * t * _pow(c0, -q)
    if x <= -1.0 or math.isnan(x):
        return DIVERGED
    return c0 * _exp(math.log1p(x) / q)


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def growth_factor(spec: GrowthSpec, t: float) -> float:
    """Ratio c(t) / c0; ``DIVERGED`` propagates."""
    value = principal_at(spec, t)
    if is_diverged(value):
        return DIVERGED
    return value / spec.principal


def effective_principal(c: float, order: float) -> float:
    """Interest-bearing magnitude c**p of a balance under growth order p."""
    if not c > 0:
        raise DomainError(f"principal must be > 0, got {c!r}")
    if order < 0:
        raise DomainError(f"order must be >= 0, got {order!r}")
    return _pow(c, order)


def _doubling_kernel(c0: float, order: float) -> float:
    # c0**(1-p) * (2**(1-p) - 1) / (1-p); tends to ln 2 as p -> 1
    q = 1.0 - order
    if q == 0:
        return _LN2
    return _pow(c0, q) * math.expm1(q * _LN2) / q


def doubling_time(spec: GrowthSpec) -> float:
    """Years until the principal has doubled."""
    if spec.rate == 0:
        raise NoDoublingError("a zero rate never doubles the principal")
    return _doubling_kernel(spec.principal, spec.order) / spec.rate


def required_rate(order: float, principal: float, target_doubling: float) -> float:
    """Continuous rate that doubles ``principal`` in ``target_doubling`` years."""
    if not target_doubling > 0:
        raise DomainError(f"target doubling time must be > 0, got {target_doubling!r}")
    if not principal > 0:
        raise DomainError(f"principal must be > 0, got {principal!r}")
    if order < 0:
        raise DomainError(f"order must be >= 0, got {order!r}")
    return _doubling_kernel(principal, order) / target_doubling


def blowup_time(spec: GrowthSpec) -> float | None:
    """Finite time at which a hyperbolic trajectory diverges; None otherwise."""
    if spec.order <= 1 or spec.rate == 0:
        return None
    excess = spec.order - 1.0
    return _pow(spec.principal, -excess) / (excess * spec.rate)


def time_to_reach(spec: GrowthSpec, target: float) -> float:
    """Years until the principal first reaches ``target``.

    Returns ``math.inf`` when the target is never reached (zero rate).
    """
    c0, i, p = spec.principal, spec.rate, spec.order
    if not target >= c0:
        raise DomainError(f"target {target!r} is below the principal {c0!r}")
    if target == c0:
        return 0.0
    if i == 0:
        return math.inf
    if p == 1:
        return math.log(target / c0) / i
    q = 1.0 - p
    # c**q grows linearly at rate q * i
    log_ratio = math.log(target / c0)
    return _pow(c0, q) * math.expm1(q * log_ratio) / (q * i)
