"""Moments with the hook sums reversed: fix tau, sum over alpha containing it.

When m >= n the alternating sum over alpha is a balanced terminating 4F3
at unit argument. Everything here is exact rational arithmetic.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .moments import MomentExpansion, stationary_moment
from .numerics import gamma_ratio
from .partitions import Hook, ModelParams, nu

__all__ = [
    "HypParams4F3",
    "f43_terminating",
    "f43_params",
    "inner_sum_direct",
    "inner_sum_hypergeometric",
    "outer_factor",
    "moment_via_4f3",
]


@dataclass(frozen=True)
class HypParams4F3:
    upper: tuple[int, int, int, int]
    lower: tuple[int, int, int]
    check_balanced: bool = True

    def __post_init__(self):
        if len(self.upper) != 4 or len(self.lower) != 3:
            raise DomainError("a 4F3 needs four upper and three lower parameters")
        a1 = self.upper[0]
        if a1 > 0:
            raise DomainError(f"first upper parameter must be a nonpositive integer, got {a1}")
        if self.check_balanced and not self.is_balanced:
            raise DomainError(f"series is not balanced: upper={self.upper}, lower={self.lower}")
        for b in self.lower:
            # (b)_k with k <= -a1 vanishes iff a1 < b <= 0
            if a1 < b <= 0:
                raise DomainError(f"lower parameter {b} hits a pole inside the terminating range")

    @property
    def is_balanced(self) -> bool:
        return 1 + sum(self.upper) == sum(self.lower)

    @property
    def terms(self) -> int:
        return -self.upper[0] + 1


def f43_terminating(params: HypParams4F3) -> Fraction:
    """sum_{k=0}^{-a1} prod (a_i)_k / (prod (b_i)_k k!)."""
    total = term = Fraction(1)
    for k in range(params.terms - 1):
        term *= Fraction(
            math.prod(a + k for a in params.upper),
            math.prod(b + k for b in params.lower) * (k + 1),
        )
        total += term
    return total


def _check_indices(n: int, h: int, j: int, params: ModelParams) -> None:
    if params.m < n:
        raise DomainError(f"reversed summation needs m >= n, got m={params.m}, n={n}")
    if not 1 <= h <= n or not 0 <= j <= h - 1:
        raise DomainError(f"need 1 <= h <= n and 0 <= j < h, got n={n}, h={h}, j={j}")


def f43_params(n: int, h: int, j: int, params: ModelParams) -> HypParams4F3:
    m, p, d = params.m, params.p, params.d
    return HypParams4F3(
        upper=(-(n - h), m + h - j, p + h - j, d - n + h - 2 * j - 1),
        lower=(m - n + h - j, p - n + h - j, d + 2 * h - 2 * j),
    )


def inner_sum_direct(n: int, h: int, j: int, params: ModelParams) -> Fraction:
    """Alternating sum over alpha = (n-k, 1^k), j <= k <= j+n-h, of the alpha-only factors."""
    _check_indices(n, h, j, params)
    m, p, d = params.m, params.p, params.d
    total = Fraction(0)
    for k in range(j, j + n - h + 1):
        term = gamma_ratio(
            [n - k + m, p + n - k, d - k - j - 1],
            [n - h + j - k + 1, k - j + 1, m - k, p - k, d + n - k + h - j],
        )
        total += -term if k % 2 else term
    return total


def inner_sum_hypergeometric(n: int, h: int, j: int, params: ModelParams) -> Fraction:
    """The same sum as a Gamma prefactor times a balanced 4F3 at 1."""
    _check_indices(n, h, j, params)
    m, p, d = params.m, params.p, params.d
    sign = -1 if (n - h + j) % 2 else 1
    pre = gamma_ratio(
        [h - j + m, p + h - j, d - n + h - 2 * j - 1],
        [n - h + 1, d + 2 * h - 2 * j, m + h - n - j, p + h - n - j],
    )
    return sign * pre * f43_terminating(f43_params(n, h, j, params))


def outer_factor(tau: Hook, params: ModelParams) -> Fraction:
    """Factors of the pair coefficient that depend on tau only.

    Dividing the pair coefficient for (alpha, tau) by this factor leaves
    exactly the k-th summand of :func:`inner_sum_direct` with alpha = (n-k, 1^k).
    """
    d, p, q = params.d, params.p, params.q
    t1, lt = tau.head, tau.length
    v_part = (d + 2 * t1 - 1) * gamma_ratio([d + t1, q + t1], [p + t1, t1])
    u_part = (d + 1 - 2 * lt) * gamma_ratio([p - lt + 1], [lt, q - lt + 1, d - lt + 1])
    den = (params.r + params.s + t1 + 2 * params.m - lt) * (t1 + lt - 1)
    return v_part * u_part / den


def moment_via_4f3(n: int, params: ModelParams) -> MomentExpansion:
    """Expansion of M_n(t) with tau = (h-j, 1^j) outside and the alpha-sum as a 4F3."""
    if n < 1:
        raise DomainError(f"moment order must be positive, got {n}")
    if params.m < n:
        raise DomainError(f"reversed summation needs m >= n, got m={params.m}, n={n}")
    rate_map: dict[int, Fraction] = defaultdict(Fraction)
    for h in range(1, n + 1):
        for j in range(h):
            tau = Hook(h - j, j)
            # (-1)^(n - alpha_1) = (-1)^k is carried inside the inner sum
            rate_map[nu(tau, params)] += outer_factor(tau, params) * inner_sum_hypergeometric(n, h, j, params)
    return MomentExpansion.from_rate_map(params, n, stationary_moment(n, params), rate_map)

