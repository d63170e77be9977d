"""Exact moments M_n(t) = E tr(J_t^n) of the Hermitian Jacobi process.

Two independent routes are provided:

* :func:`moment_expansion` sums the closed-form coefficients over pairs of
  hooks ``tau <= alpha``; the stationary part comes from the empty-partition
  branch of the triangularized determinant formula.
* :func:`moment_mf1_oracle` expands the power sum in Schur functions, changes
  basis to symmetric Jacobi polynomials with full ``m x m`` exact
  determinants, and pairs the result with the special values at ``1^m``.

Both return a :class:`MomentExpansion`, a stationary value plus a finite list
of ``(rate, coefficient)`` pairs with rational coefficients.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import DomainError
from .jacobi import JacobiParams, gauss_jacobi_01, monomial_expansion, sym_jacobi_at_one
from .numerics import eval_exp_sum, exact_det, format_rational, gamma_ratio, parse_rational, pochhammer
from .partitions import Hook, ModelParams, hooks_of_weight, nu, subhooks

__all__ = [
    "MomentExpansion",
    "AlmostTriangularMatrix",
    "vtilde",
    "vtilde_dpq",
    "ucoef",
    "ucoef_dpq",
    "pair_coefficient",
    "moment_expansion",
    "stationary_moment",
    "moment_mf1_oracle",
    "build_almost_triangular",
    "lemma_det_closed",
    "lemma_det_direct",
    "stationary_moment_quadrature",
]


@dataclass(frozen=True)
class MomentExpansion:
    """M_n(t) = stationary + sum(coeff * exp(-rate * t))."""

    params: ModelParams
    order: int
    stationary: Fraction
    terms: tuple[tuple[int, Fraction], ...]

    @classmethod
    def from_rate_map(cls, params, order, stationary, rate_map) -> "MomentExpansion":
        terms = tuple((int(k), Fraction(v)) for k, v in sorted(rate_map.items()) if v != 0)
        return cls(params, order, Fraction(stationary), terms)

    @property
    def rates(self) -> list[int]:
        return [r for r, _ in self.terms]

    def rate_map(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def at_zero(self) -> Fraction:
        return self.stationary + sum((c for _, c in self.terms), Fraction(0))

    def evaluate(self, t: float) -> float:
        if t == 0:
            return float(self.at_zero())
        return float(self.stationary) + eval_exp_sum(self.terms, t)

    def __call__(self, t: float) -> float:
        return self.evaluate(t)

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "n": self.order,
            "stationary": format_rational(self.stationary),
            "terms": [{"rate": r, "coeff": format_rational(c)} for r, c in self.terms],
        }

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)

    @classmethod
    def from_json(cls, obj: dict) -> "MomentExpansion":
        p = obj["params"]
        return cls(
            ModelParams(int(p["m"]), int(p["p"]), int(p["d"])),
            int(obj["n"]),
            parse_rational(obj["stationary"]),
            tuple((int(t["rate"]), parse_rational(t["coeff"])) for t in obj["terms"]),
        )


# --- closed-form coefficients -------------------------------------------------


def vtilde(alpha1: int, tau1: int, params: ModelParams) -> Fraction:
    """First-row factor of the pair coefficient, written in (r, s, m)."""
    _check_heads(alpha1, tau1)
    r, s, m = params.r, params.s, params.m
    return (r + s + 2 * tau1 + 2 * m - 1) * gamma_ratio(
        [tau1 + 2 * m + r + s, alpha1 + m, r + alpha1 + m, tau1 + m + s],
        [alpha1 - tau1 + 1, tau1, r + s + alpha1 + tau1 + 2 * m, r + tau1 + m],
    )


def vtilde_dpq(alpha1: int, tau1: int, params: ModelParams) -> Fraction:
    """Same quantity as :func:`vtilde`, written in (d, p, q)."""
    _check_heads(alpha1, tau1)
    d, p, q, m = params.d, params.p, params.q, params.m
    return (d + 2 * tau1 - 1) * gamma_ratio(
        [d + tau1, alpha1 + m, p + alpha1, q + tau1],
        [alpha1 - tau1 + 1, d + alpha1 + tau1, p + tau1, tau1],
    )


def _check_heads(alpha1: int, tau1: int) -> None:
    if not 1 <= tau1 <= alpha1:
        raise DomainError(f"need 1 <= tau1 <= alpha1, got tau1={tau1}, alpha1={alpha1}")


def _check_lengths(la: int, lt: int, m: int) -> None:
    if not 1 <= lt <= la <= m:
        raise DomainError(f"need 1 <= l(tau) <= l(alpha) <= m, got {lt}, {la}, m={m}")


def ucoef(la: int, lt: int, params: ModelParams) -> Fraction:
    """Length factor of the pair coefficient, written in (r, s, m)."""
    r, s, m = params.r, params.s, params.m
    _check_lengths(la, lt, m)
    return (2 * m + r + s + 1 - 2 * lt) * gamma_ratio(
        [r + m - lt + 1, r + s + 2 * m - la - lt + 1],
        [la - lt + 1, lt, m - la + 1, r + m - la + 1, m + s - lt + 1, 2 * m + r + s - lt + 1],
    )


def ucoef_dpq(la: int, lt: int, params: ModelParams) -> Fraction:
    d, p, q, m = params.d, params.p, params.q, params.m
    _check_lengths(la, lt, m)
    return (d + 1 - 2 * lt) * gamma_ratio(
        [d - la - lt + 1, p - lt + 1],
        [la - lt + 1, lt, m - la + 1, p - la + 1, q - lt + 1, d - lt + 1],
    )


def pair_coefficient(alpha: Hook, tau: Hook, params: ModelParams) -> Fraction:
    """Signed coefficient of exp(-nu_tau t) contributed by the pair (alpha, tau)."""
    r, s, m = params.r, params.s, params.m
    sign = -1 if (alpha.weight - alpha.head) % 2 else 1
    num = vtilde(alpha.head, tau.head, params) * ucoef(alpha.length, tau.length, params)
    den = (r + s + tau.head + 2 * m - tau.length) * (tau.head + tau.length - 1)
    return sign * num / den


@lru_cache(maxsize=None)
def moment_expansion(n: int, params: ModelParams) -> MomentExpansion:
    """Exact expansion of M_n(t), grouped by decay rate."""
    if n < 1:
        raise DomainError(f"moment order must be positive, got {n}")
    rate_map: dict[int, Fraction] = defaultdict(Fraction)
    for alpha in hooks_of_weight(n, params.m):
        for tau in subhooks(alpha):
            rate_map[nu(tau, params)] += pair_coefficient(alpha, tau, params)
    return MomentExpansion.from_rate_map(params, n, stationary_moment(n, params), rate_map)


# --- the determinant with its almost upper-triangular structure ---------------


def _shifted(part: Optional[Hook], m: int) -> list[int]:
    """[part_i - i + m for i = 1..m]."""
    return [(part.part(i) if part is not None else 0) - i + m for i in range(1, m + 1)]


@dataclass(frozen=True)
class AlmostTriangularMatrix:
    """b(i, j) = (-n_i)_{m_j} / Gamma(r + s + n_i + m_j + 2), 1-based in the docs."""

    alpha: Hook
    tau: Optional[Hook]
    params: ModelParams
    entries: tuple[tuple[Fraction, ...], ...]

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i - 1][j - 1]

    @property
    def size(self) -> int:
        return len(self.entries)

    def is_upper_triangular(self) -> bool:
        return all(self[i, j] == 0 for i in range(1, self.size + 1) for j in range(1, i))

    def det(self) -> Fraction:
        return exact_det(self.entries)


def build_almost_triangular(alpha: Hook, tau: Optional[Hook], params: ModelParams) -> AlmostTriangularMatrix:
    m, rs = params.m, params.r + params.s
    if alpha.length > m:
        raise DomainError(f"hook {alpha} is longer than m={m}")
    if tau is not None and not alpha.contains(tau):
        raise DomainError(f"{tau} is not contained in {alpha}")
    ns, ms = _shifted(alpha, m), _shifted(tau, m)
    rows = tuple(
        tuple(pochhammer(-ni, mj) / gamma_ratio([rs + ni + mj + 2], []) for mj in ms) for ni in ns
    )
    return AlmostTriangularMatrix(alpha, tau, params, rows)


def lemma_det_closed(la: int, lt: int, params: ModelParams) -> Fraction:
    """Product form of the (l(tau)+1 .. l(alpha)) sub-determinant."""
    if not 1 <= lt < la <= params.m:
        raise DomainError(f"need 1 <= l(tau) < l(alpha) <= m, got {lt}, {la}, m={params.m}")
    c = params.r + params.s + 2 * params.m - lt + 1
    out = Fraction(1, math.factorial(la - lt))
    for j in range(lt + 1, la + 1):
        out /= c - j
    return out


def lemma_det_direct(la: int, lt: int, params: ModelParams) -> Fraction:
    """The same sub-determinant by exact elimination of its entries."""
    if not 1 <= lt < la <= params.m:
        raise DomainError(f"need 1 <= l(tau) < l(alpha) <= m, got {lt}, {la}, m={params.m}")
    big_n = params.r + params.s + 2 * params.m + 2
    idx = range(lt + 1, la + 1)
    rows = [
        [
            gamma_ratio([big_n - 2 * j], [j - i + 2, big_n - i - j + 1]) if i <= j + 1 else Fraction(0)
            for j in idx
        ]
        for i in idx
    ]
    return exact_det(rows)


# --- stationary part ---------------------------------------------------------


@lru_cache(maxsize=None)
def stationary_moment(n: int, params: ModelParams) -> Fraction:
    """M_n(infinity) from the empty-partition branch of the triangularized formula.

    With tau empty the shifted column indices are m - j. Columns beyond
    l(alpha) are triangular, so the determinant factors into an
    l(alpha) x l(alpha) Hessenberg block times a diagonal product; the sign
    of the rising factorials cancels the sign of the special value.
    """
    if n < 1:
        raise DomainError(f"moment order must be positive, got {n}")
    r, s, m = params.r, params.s, params.m
    rs = r + s
    mj = [m - j for j in range(1, m + 1)]

    pair_prod = Fraction(1)
    for i in range(m):
        for j in range(i + 1, m):
            pair_prod *= (mj[i] + mj[j] + rs + 1) * (mj[i] - mj[j])

    total = Fraction(0)
    for alpha in hooks_of_weight(n, m):
        la = alpha.length
        nj = _shifted(alpha, m)
        block = [
            [
                gamma_ratio([nj[i] + 1], [nj[i] - mj[j] + 1, rs + nj[i] + mj[j] + 2])
                if nj[i] >= mj[j]
                else Fraction(0)
                for j in range(la)
            ]
            for i in range(la)
        ]
        term = pair_prod * exact_det(block)
        for j in range(la, m):
            term *= gamma_ratio([nj[j] + 1], [rs + 2 * mj[j] + 2])
        for j in range(m):
            term *= (rs + 2 * mj[j] + 1) * gamma_ratio(
                [r + nj[j] + 1, mj[j] + s + 1, rs + mj[j] + 1],
                [r + mj[j] + 1, mj[j] + 1, m - j + s, m - j],
            )
        sign = -1 if (n - alpha.head) % 2 else 1
        total += sign * term
    return total


def stationary_moment_quadrature(n: int, params: ModelParams, npts: Optional[int] = None) -> float:
    """Normalized Selberg-weight average of the power sum by tensor Gauss-Jacobi quadrature."""
    m = params.m
    if m > 3:
        raise DomainError("tensor quadrature is limited to m <= 3")
    npts = npts or n + 2 * m + 2
    x, w = gauss_jacobi_01(npts, params.r, params.s)
    grids = np.meshgrid(*([x] * m), indexing="ij")
    weights = np.ones_like(grids[0])
    for g in np.meshgrid(*([w] * m), indexing="ij"):
        weights = weights * g
    vdm2 = np.ones_like(grids[0])
    for i, j in itertools.combinations(range(m), 2):
        vdm2 = vdm2 * (grids[i] - grids[j]) ** 2
    power_sum = sum(g**n for g in grids)
    base = weights * vdm2
    return float(np.sum(base * power_sum) / np.sum(base))


# --- basis-change oracle -----------------------------------------------------


def moment_mf1_oracle(n: int, params: ModelParams) -> MomentExpansion:
    """Independent expansion through the Schur -> symmetric Jacobi change of basis.

    For each signed hook alpha in the power sum and each tau <= alpha
    (tau empty included), Cauchy-Binet gives the coordinate of s_alpha on
    Pt_tau as det(c[n_i][m_j]) where c[k] is the monomial expansion
    u**k = sum_l c[k][l] Pt_l. Integrating against the transition density
    started at 1^m, whose terms carry Pt_tau(1^m) divided by the squared norm
    of Pt_tau, leaves Pt_tau(1^m) * det(...) at rate nu_tau.
    """
    if n < 1:
        raise DomainError(f"moment order must be positive, got {n}")
    m = params.m
    jp = JacobiParams(params.r, params.s)
    expand = lru_cache(maxsize=None)(lambda k: monomial_expansion(k, jp))

    def coord(k: int, l: int) -> Fraction:
        return expand(k)[l] if 0 <= l <= k else Fraction(0)

    stationary = Fraction(0)
    rate_map: dict[int, Fraction] = defaultdict(Fraction)
    for alpha in hooks_of_weight(n, m):
        sign = -1 if (n - alpha.head) % 2 else 1
        ns = _shifted(alpha, m)
        for tau in [None, *subhooks(alpha)]:
            ms = _shifted(tau, m)
            det = exact_det([[coord(ni, mj) for mj in ms] for ni in ns])
            contrib = sign * sym_jacobi_at_one(tau, jp, m) * det
            if tau is None:
                stationary += contrib
            else:
                rate_map[nu(tau, params)] += contrib
    return MomentExpansion.from_rate_map(params, n, stationary, rate_map)
