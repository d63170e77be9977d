"""Ergodic capacity E log det(I + rho J_t) from the moment series."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .moments import moment_expansion, stationary_moment
from .partitions import ModelParams

__all__ = ["CapacityResult", "capacity_series", "capacity_stationary", "truncation_bound"]


@dataclass(frozen=True)
class CapacityResult:
    """Truncated series value in nats with an absolute bound on the neglected tail.

    ``bound_convergent`` is False when rho == 1; the bound then comes from the
    alternating-series estimate m / (N + 1) and only decays harmonically.
    """

    value: float
    truncation_order: int
    truncation_bound: float
    params: ModelParams
    rho: float
    t: float
    bound_convergent: bool = True

    def to_json(self) -> dict:
        return {
            "rho": self.rho,
            "t": "inf" if math.isinf(self.t) else self.t,
            "N": self.truncation_order,
            "value": self.value,
            "bound": self.truncation_bound,
        }

    def csv_row(self) -> tuple:
        return (self.t, self.rho, self.value, self.truncation_bound)


def _check(rho: float, n_terms: int) -> None:
    if not 0 < rho <= 1:
        raise DomainError(f"series expansion needs 0 < rho <= 1, got {rho}")
    if n_terms < 1:
        raise DomainError(f"need at least one term, got {n_terms}")


def truncation_bound(m: int, rho: float, n_terms: int) -> float:
    # |M_n| <= m, so the tail is at most m * sum_{n>N} rho^n / n
    if rho == 1:
        return m / (n_terms + 1)
    return m * rho ** (n_terms + 1) / ((n_terms + 1) * (1 - rho))


def capacity_series(params: ModelParams, t: float, rho: float, n_terms: int) -> CapacityResult:
    """sum_{n=1}^{N} (-1)^{n+1} rho^n / n * M_n(t); ``t = inf`` gives the stationary channel."""
    _check(rho, n_terms)
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    terms = []
    for n in range(1, n_terms + 1):
        if math.isinf(t):
            mn = float(stationary_moment(n, params))
        else:
            mn = moment_expansion(n, params).evaluate(t)
        terms.append(-((-rho) ** n) / n * mn)
    return CapacityResult(
        value=math.fsum(terms),
        truncation_order=n_terms,
        truncation_bound=truncation_bound(params.m, rho, n_terms),
        params=params,
        rho=rho,
        t=t,
        bound_convergent=rho < 1,
    )


def capacity_stationary(params: ModelParams, rho: float, n_terms: int) -> CapacityResult:
    return capacity_series(params, math.inf, rho, n_terms)
