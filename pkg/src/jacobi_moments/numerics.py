"""Exact rational helpers and floating evaluation of exponential sums.

Rationals are plain :class:`fractions.Fraction` objects. They are immutable,
always canonical (positive denominator, reduced), and exact under the four
arithmetic operations.
"""
from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError

ExactRational = Fraction

__all__ = [
    "ExactRational",
    "gamma_ratio",
    "pochhammer",
    "eval_exp_sum",
    "format_rational",
    "parse_rational",
    "exact_det",
]


def _factorial_range(lo: int, hi: int) -> int:
    """Product lo * (lo+1) * ... * (hi-1); 1 when lo >= hi."""
    return math.prod(range(lo, hi)) if lo < hi else 1


def gamma_ratio(numerator_args: Iterable[int], denominator_args: Iterable[int]) -> Fraction:
    """Return prod Gamma(a) / prod Gamma(b) for positive integer arguments.

    Common arguments cancel first; the remaining arguments are paired largest
    with largest so that each pair contributes only the factorial range
    between them.
    """
    num = Counter()
    den = Counter()
    for a in numerator_args:
        _check_gamma_arg(a)
        num[int(a)] += 1
    for b in denominator_args:
        _check_gamma_arg(b)
        den[int(b)] += 1
    common = num & den
    num -= common
    den -= common

    top = sorted(num.elements(), reverse=True)
    bottom = sorted(den.elements(), reverse=True)
    p, q = 1, 1
    for k in range(max(len(top), len(bottom))):
        a = top[k] if k < len(top) else 1
        b = bottom[k] if k < len(bottom) else 1
        # Gamma(a)/Gamma(b) = (b)(b+1)...(a-1) when a > b
        if a >= b:
            p *= _factorial_range(b, a)
        else:
            q *= _factorial_range(a, b)
    return Fraction(p, q)


def _check_gamma_arg(a: int) -> None:
    if int(a) != a:
        raise DomainError(f"gamma argument must be an integer, got {a!r}")
    if a <= 0:
        raise DomainError(f"gamma argument must be positive, got {a}")


def pochhammer(x: int | Fraction, k: int) -> Fraction:
    """Rising factorial (x)_k = x (x+1) ... (x+k-1), with (x)_0 = 1."""
    if k < 0:
        raise DomainError(f"pochhammer length must be nonnegative, got {k}")
    out = Fraction(1)
    for i in range(k):
        out *= x + i
        if out == 0:
            break
    return out


def eval_exp_sum(terms: Sequence[tuple[int, Fraction]], t: float) -> float:
    """Evaluate sum of coeff * exp(-rate * t).

    At ``t == 0`` the exact rational sum is converted to float once. Otherwise
    each term is converted and the sum is accumulated with ``math.fsum``.
    """
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    if not terms:
        return 0.0
    if t == 0:
        return float(sum((Fraction(c) for _, c in terms), Fraction(0)))
    if math.isinf(t):
        return 0.0
    return math.fsum(float(c) * math.exp(-rate * t) for rate, c in terms)


def format_rational(q: Fraction | int) -> str:
    """Serialize as ``"numerator/denominator"``, also for integers."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str | int) -> Fraction:
    return Fraction(text)


def exact_det(rows: Sequence[Sequence[Fraction | int]]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination with row pivoting."""
    a = [[Fraction(v) for v in row] for row in rows]
    n = len(a)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    det = Fraction(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for i in range(col + 1, n):
            f = a[i][col]
            if f:
                f /= p
                ri, rc = a[i], a[col]
                for j in range(col + 1, n):
                    ri[j] -= f * rc[j]
    return det
