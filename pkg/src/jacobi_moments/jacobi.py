"""Jacobi polynomials on [0, 1], their symmetric determinantal versions, and Schur functions.

The one-variable family used throughout is the orthogonal (not orthonormal)
normalization

    Pt_k(u) = (r+1)_k / k! * 2F1(-k, k+r+s+1; r+1; u),

orthogonal for the weight u^r (1-u)^s on [0, 1]. Coefficients are kept as
exact rationals; floats only appear when a polynomial is evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.special import roots_jacobi

from .errors import DomainError, PrecisionError
from .numerics import gamma_ratio, pochhammer
from .partitions import Hook, hooks_of_weight

__all__ = [
    "JacobiParams",
    "PolyCoeffs",
    "jacobi_tilde",
    "jacobi_norm_sq",
    "monomial_expansion",
    "sym_jacobi_eval",
    "sym_jacobi_at_one",
    "schur_eval",
    "power_sum_hook_expansion",
    "gauss_jacobi_01",
    "CONFLUENCE_THRESHOLD",
]

# Coordinates closer than this are treated as coincident.
CONFLUENCE_THRESHOLD = 1e-6


@dataclass(frozen=True)
class JacobiParams:
    r: int
    s: int

    def __post_init__(self):
        if self.r < 0 or self.s < 0:
            raise DomainError(f"need r, s >= 0, got r={self.r}, s={self.s}")


@dataclass(frozen=True)
class PolyCoeffs:
    """Exact polynomial; ``coeffs[k]`` multiplies u**k."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = tuple(Fraction(v) for v in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c or (Fraction(0),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, u):
        """Horner evaluation in floating point (scalars or arrays)."""
        fc = [float(c) for c in self.coeffs]
        acc = fc[-1] * np.ones_like(u, dtype=float) if isinstance(u, np.ndarray) else fc[-1]
        for c in reversed(fc[:-1]):
            acc = acc * u + c
        return acc

    def exact(self, u) -> Fraction:
        u = Fraction(u)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc

    def __add__(self, other: "PolyCoeffs") -> "PolyCoeffs":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return PolyCoeffs(tuple(x + y for x, y in zip(a, b)))

    def scale(self, c) -> "PolyCoeffs":
        return PolyCoeffs(tuple(c * x for x in self.coeffs))

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.coeffs) + "]"


@lru_cache(maxsize=None)
def _jacobi_tilde_cached(k: int, r: int, s: int) -> PolyCoeffs:
    lead = pochhammer(r + 1, k) / math.factorial(k)
    coeffs = []
    for l in range(k + 1):
        c = pochhammer(-k, l) * pochhammer(k + r + s + 1, l)
        c /= pochhammer(r + 1, l) * math.factorial(l)
        coeffs.append(lead * c)
    return PolyCoeffs(tuple(coeffs))


def jacobi_tilde(k: int, params: JacobiParams) -> PolyCoeffs:
    if k < 0:
        raise DomainError(f"degree must be nonnegative, got {k}")
    return _jacobi_tilde_cached(k, params.r, params.s)


def jacobi_norm_sq(k: int, params: JacobiParams) -> Fraction:
    """Squared L2 norm of Pt_k against u^r (1-u)^s on [0, 1]."""
    r, s = params.r, params.s
    g = gamma_ratio([r + k + 1, s + k + 1], [k + r + s + 1, k + 1])
    return g / (2 * k + r + s + 1)


def monomial_expansion(j: int, params: JacobiParams) -> list[Fraction]:
    """Coefficients c_l with u**j = sum_l c_l Pt_l(u)."""
    r, s = params.r, params.s
    out = []
    for l in range(j + 1):
        c = pochhammer(-j, l) * (r + s + 2 * l + 1)
        c *= gamma_ratio([r + j + 1, r + s + l + 1], [r + l + 1, r + s + l + j + 2])
        out.append(c)
    return out


def _row_degrees(tau: Optional[Hook], m: int) -> list[int]:
    if tau is not None and tau.length > m:
        raise DomainError(f"partition {tau} is longer than m={m}")
    parts = [tau.part(i) if tau is not None else 0 for i in range(1, m + 1)]
    return [parts[i - 1] - i + m for i in range(1, m + 1)]


def _min_gap(x: Sequence[float]) -> float:
    xs = sorted(x)
    return min((b - a for a, b in zip(xs, xs[1:])), default=math.inf)


def _vandermonde(x: Sequence[float]) -> float:
    m = len(x)
    return math.prod(x[i] - x[j] for i in range(m) for j in range(i + 1, m))


def _complete_homogeneous(x: Sequence[float], kmax: int) -> np.ndarray:
    """h[p, k] = h_k(x_1..x_p) for p = 1..len(x) (row p-1), k = 0..kmax."""
    m = len(x)
    h = np.zeros((m, kmax + 1))
    prev = np.zeros(kmax + 1)
    prev[0] = 1.0
    for p in range(m):
        row = np.empty(kmax + 1)
        row[0] = 1.0
        for k in range(1, kmax + 1):
            row[k] = prev[k] + x[p] * row[k - 1]
        h[p] = row
        prev = row
    return h


def _confluent_ratio(polys: Sequence[PolyCoeffs], x: Sequence[float]) -> float:
    """det(f_i(x_j)) / V(x) through divided differences.

    The divided difference f[x_1..x_{k+1}] of u**n is h_{n-k}(x_1..x_{k+1}),
    which has no removable singularity at coincident nodes.
    """
    m = len(x)
    kmax = max(p.degree for p in polys)
    h = _complete_homogeneous(x, kmax)
    dd = np.zeros((m, m))
    for i, poly in enumerate(polys):
        c = np.array([float(v) for v in poly.coeffs])
        for k in range(m):
            if poly.degree >= k:
                dd[i, k] = float(np.dot(c[k:], h[k, : poly.degree - k + 1]))
    sign = -1.0 if (m * (m - 1) // 2) % 2 else 1.0
    return sign * float(np.linalg.det(dd))


def sym_jacobi_eval(tau: Optional[Hook], params: JacobiParams, m: int, x: Sequence[float]) -> float:
    """Evaluate det(Pt_{tau_i - i + m}(x_j)) / V(x), confluent-safe."""
    x = [float(v) for v in x]
    if len(x) != m:
        raise DomainError(f"expected {m} coordinates, got {len(x)}")
    polys = [jacobi_tilde(k, params) for k in _row_degrees(tau, m)]
    if _min_gap(x) < CONFLUENCE_THRESHOLD:
        return _confluent_ratio(polys, x)
    mat = np.array([[p(xj) for xj in x] for p in polys])
    return float(np.linalg.det(mat)) / _vandermonde(x)


def sym_jacobi_at_one(tau: Optional[Hook], params: JacobiParams, m: int) -> Fraction:
    """Exact value of the symmetric Jacobi polynomial at (1, ..., 1)."""
    if tau is not None and tau.length > m:
        raise DomainError(f"partition {tau} is longer than m={m}")
    r, s = params.r, params.s
    t = [tau.part(i) if tau is not None else 0 for i in range(1, m + 1)]
    size = sum(t)
    sign = -1 if (size + m * (m - 1) // 2) % 2 else 1
    val = Fraction(sign)
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            ti, tj = t[i - 1], t[j - 1]
            val *= (ti + tj + 2 * m - i - j + r + s + 1) * (ti - tj + j - i)
    num, den = [], []
    for j in range(1, m + 1):
        tj = t[j - 1]
        num.append(tj + m - j + s + 1)
        den += [tj + m - j + 1, m - j + s + 1, m - j + 1]
    return val * gamma_ratio(num, den)


def schur_eval(alpha: Hook, x: Sequence[float]) -> float:
    """Schur polynomial as a bialternant; refuses near-coincident coordinates."""
    x = [float(v) for v in x]
    m = len(x)
    degrees = _row_degrees(alpha, m)
    if m > 1 and _min_gap(x) < CONFLUENCE_THRESHOLD:
        raise PrecisionError(
            "coordinates closer than the confluence threshold; perturb them before evaluating"
        )
    mat = np.array([[xj ** k for xj in x] for k in degrees])
    return float(np.linalg.det(mat)) / _vandermonde(x)


def power_sum_hook_expansion(n: int, m: int) -> list[tuple[Hook, int]]:
    """Signed hooks with p_n = sum sign * s_hook in m variables."""
    return [(a, -1 if (n - a.head) % 2 else 1) for a in hooks_of_weight(n, m)]


def gauss_jacobi_01(npts: int, r: float, s: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule on [0, 1] for the weight u^r (1-u)^s."""
    x, w = roots_jacobi(npts, s, r)
    return (1.0 + x) / 2.0, w / 2.0 ** (r + s + 1)
