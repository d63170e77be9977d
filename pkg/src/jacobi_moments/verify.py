"""Verification suites shared by the CLI ``verify`` command and the acceptance tests.

Each check returns a :class:`CheckResult`; nothing here raises on a failed
comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .capacity import capacity_series, capacity_stationary
from .errors import DomainError
from .hypergeometric import f43_params, moment_via_4f3
from .jacobi import JacobiParams, sym_jacobi_at_one, sym_jacobi_eval
from .moments import (
    lemma_det_closed,
    lemma_det_direct,
    moment_expansion,
    moment_mf1_oracle,
    stationary_moment,
    stationary_moment_quadrature,
)
from .montecarlo import SimConfig, calibrate_clock, simulate_eigenvalues
from .numerics import pochhammer
from .partitions import Hook, ModelParams, hooks_of_weight

__all__ = [
    "CheckResult",
    "SUITES",
    "run_suite",
    "param_grid",
    "richardson_limit",
    "McSettings",
    "mc_run",
    "check_t0_identity",
    "check_mf1_oracle",
    "check_determinant_lemma",
    "check_m1_closed_form",
    "check_4f3_route",
    "check_stationary_quadrature",
    "check_special_value",
    "check_monte_carlo",
    "check_capacity",
]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def param_grid(m_max: int, r_max: int, s_max: int, m_min: int = 1):
    for m in range(m_min, m_max + 1):
        for r in range(r_max + 1):
            for s in range(s_max + 1):
                yield ModelParams.from_rs(m, r, s)


def _describe(p: ModelParams) -> str:
    return f"m={p.m},r={p.r},s={p.s}"


def check_t0_identity() -> CheckResult:
    """Criterion 1: stationary + sum of coefficients = m, exactly."""
    failures, count = [], 0
    for params in param_grid(5, 2, 2):
        for n in range(1, 7):
            count += 1
            if moment_expansion(n, params).at_zero() != params.m:
                failures.append(f"n={n},{_describe(params)}")
    return CheckResult("C1 t=0 identity", not failures, f"{count} cases, failures: {failures[:5]}")


def check_mf1_oracle() -> CheckResult:
    """Criterion 2: closed form equals the basis-change determinant formula."""
    failures, count = [], 0
    for params in param_grid(4, 2, 2):
        for n in range(1, 6):
            count += 1
            if moment_expansion(n, params) != moment_mf1_oracle(n, params):
                failures.append(f"n={n},{_describe(params)}")
    return CheckResult("C2 determinantal oracle equivalence", not failures, f"{count} cases, failures: {failures[:5]}")


def check_determinant_lemma() -> CheckResult:
    """Criterion 3: product form equals elimination, plus the 1/24 value."""
    failures, count = [], 0
    for params in param_grid(8, 3, 3, m_min=2):
        for la in range(2, params.m + 1):
            for lt in range(1, la):
                count += 1
                if lemma_det_closed(la, lt, params) != lemma_det_direct(la, lt, params):
                    failures.append(f"la={la},lt={lt},{_describe(params)}")
    worked = ModelParams.from_rs(3, 0, 0)
    ok_value = lemma_det_closed(3, 1, worked) == Fraction(1, 24) == lemma_det_direct(3, 1, worked)
    return CheckResult(
        "C3 determinant lemma",
        not failures and ok_value,
        f"{count} cases, worked value 1/24 {'ok' if ok_value else 'WRONG'}, failures: {failures[:5]}",
    )


def check_m1_closed_form() -> CheckResult:
    """Criterion 4: M_1 for m = 1 is (r+1)/(r+s+2) + (s+1)/(r+s+2) exp(-(r+s+2) t)."""
    failures = []
    for params in param_grid(1, 5, 5):
        r, s = params.r, params.s
        exp = moment_expansion(1, params)
        want = (Fraction(r + 1, r + s + 2), ((r + s + 2, Fraction(s + 1, r + s + 2)),))
        if (exp.stationary, exp.terms) != want:
            failures.append(_describe(params))
    concrete = moment_expansion(1, ModelParams(1, 2, 5))
    ok = concrete.stationary == Fraction(2, 5) and concrete.terms == ((5, Fraction(3, 5)),)
    return CheckResult(
        "C4 m=1 closed form",
        not failures and ok,
        f"36 cases, (1,2,5) -> {concrete.stationary} + {concrete.terms[0][1]} e^(-{concrete.terms[0][0]}t)",
    )


def check_4f3_route() -> CheckResult:
    """Criterion 5: reversed summation through 4F3 equals the closed form; all series balanced."""
    failures, unbalanced, count = [], 0, 0
    for n in range(1, 5):
        for params in param_grid(6, 2, 2, m_min=n):
            count += 1
            for h in range(1, n + 1):
                for j in range(h):
                    hp = f43_params(n, h, j, params)
                    if 1 + sum(hp.upper) != sum(hp.lower):
                        unbalanced += 1
            if moment_via_4f3(n, params) != moment_expansion(n, params):
                failures.append(f"n={n},{_describe(params)}")
    return CheckResult(
        "C5 4F3 route",
        not failures and unbalanced == 0,
        f"{count} cases, unbalanced={unbalanced}, failures: {failures[:5]}",
    )


def check_stationary_quadrature() -> CheckResult:
    """Criterion 6: exact stationary moments vs tensor Gauss-Jacobi; Beta moments for m = 1."""
    worst, failures = 0.0, []
    for params in param_grid(3, 2, 2):
        for n in range(1, 5):
            exact = stationary_moment(n, params)
            quad = stationary_moment_quadrature(n, params)
            rel = abs(quad - float(exact)) / abs(float(exact))
            worst = max(worst, rel)
            if rel > 1e-8:
                failures.append(f"n={n},{_describe(params)} rel={rel:.2e}")
            if params.m == 1:
                beta = pochhammer(params.r + 1, n) / pochhammer(params.r + params.s + 2, n)
                if exact != beta:
                    failures.append(f"beta n={n},{_describe(params)}")
    return CheckResult("C6 stationary quadrature", not failures, f"worst rel err {worst:.2e}, failures: {failures[:5]}")


def richardson_limit(f: Callable[[float], float], h0: float, levels: int = 6) -> float:
    """Limit of f(h) as h -> 0 by polynomial extrapolation on h0, h0/2, ..."""
    hs = [h0 / 2**k for k in range(levels)]
    table = [f(h) for h in hs]
    for k in range(1, levels):
        table = [
            (hs[i] * table[i + 1] - hs[i + k] * table[i]) / (hs[i] - hs[i + k]) for i in range(len(table) - 1)
        ]
    return table[0]


def check_special_value() -> CheckResult:
    """Criterion 9: exact value at 1^m vs extrapolated determinantal evaluation."""
    worst, failures, count = 0.0, [], 0
    for m in range(1, 4):
        for r, s in [(0, 0), (1, 2), (2, 1), (3, 3)]:
            jp = JacobiParams(r, s)
            taus: list[Optional[Hook]] = [None]
            for w in range(1, 5):
                taus += hooks_of_weight(w, m)
            for tau in taus:
                count += 1
                exact = float(sym_jacobi_at_one(tau, jp, m))

                def near_one(eps, tau=tau, jp=jp, m=m):
                    return sym_jacobi_eval(tau, jp, m, [1 - (k + 1) * eps for k in range(m)])

                approx = richardson_limit(near_one, 0.02)
                rel = abs(approx - exact) / abs(exact)
                worst = max(worst, rel)
                if rel > 1e-6:
                    failures.append(f"tau={tau},m={m},r={r},s={s} rel={rel:.1e}")
    return CheckResult("C9 special value at 1^m", not failures, f"{count} cases, worst rel err {worst:.2e}, failures: {failures[:5]}")


@dataclass
class McSettings:
    params: ModelParams = ModelParams(2, 3, 6)
    paths: int = 20_000
    dt: float = 1e-3
    seed: int = 7
    calib_paths: int = 20_000
    calib_seed: int = 2024
    calib_grid: tuple = (0.05, 0.1, 0.15, 0.2)
    times: tuple = (0.25, 1.0)
    rho: float = 0.5
    n_terms: int = 40
    n_jobs: int = 1


_MC_CACHE: dict = {}


def mc_run(settings: McSettings) -> tuple[float, dict[float, np.ndarray]]:
    """Calibrated clock and eigenvalue samples at the requested times (memoized)."""
    key = repr(settings)
    if key not in _MC_CACHE:
        s = settings
        clock = calibrate_clock(s.params, list(s.calib_grid), s.calib_paths, s.dt, s.calib_seed, n_jobs=s.n_jobs)
        config = SimConfig(s.params, t=max(s.times), dt=s.dt, paths=s.paths, seed=s.seed, clock=clock)
        _MC_CACHE[key] = (clock, simulate_eigenvalues(config, s.times, n_jobs=s.n_jobs))
    return _MC_CACHE[key]


def check_monte_carlo(settings: Optional[McSettings] = None) -> CheckResult:
    """Criterion 7: |exact - MC| <= 3 stderr + 10 dt for n in {1, 2}, t in {0.25, 1}."""
    settings = settings or McSettings()
    clock, lam = mc_run(settings)
    rows, ok = [], True
    for t in settings.times:
        for n in (1, 2):
            samples = np.sum(lam[t] ** n, axis=1)
            mean = float(np.mean(samples))
            se = float(np.std(samples, ddof=1) / math.sqrt(len(samples)))
            exact = moment_expansion(n, settings.params).evaluate(t)
            tol = 3 * se + 10 * settings.dt
            ok &= abs(exact - mean) <= tol
            rows.append(f"n={n},t={t}: exact={exact:.5f} mc={mean:.5f} tol={tol:.4f}")
    return CheckResult("C7 Monte Carlo moments", ok, f"clock={clock:.4f}; " + "; ".join(rows))


def check_capacity(settings: Optional[McSettings] = None, with_mc: bool = True) -> CheckResult:
    """Criterion 8: series vs simulation at t = 1, t = 0 closed form, uniform stationary case."""
    settings = settings or McSettings()
    params, rho, nt = settings.params, settings.rho, settings.n_terms
    parts, ok = [], True

    at0 = capacity_series(params, 0.0, rho, nt)
    err0 = abs(at0.value - params.m * math.log1p(rho))
    ok &= err0 <= at0.truncation_bound
    parts.append(f"t=0 err={err0:.1e} bound={at0.truncation_bound:.1e}")

    unif = capacity_stationary(ModelParams(1, 1, 2), rho, nt)
    want = 3 * math.log(1.5) - 1
    errs = abs(unif.value - want)
    ok &= errs <= unif.truncation_bound
    parts.append(f"uniform stationary {unif.value:.6f} vs {want:.6f}")

    if with_mc:
        _, lam = mc_run(settings)
        t = 1.0
        samples = np.sum(np.log1p(rho * lam[t]), axis=1)
        mean = float(np.mean(samples))
        se = float(np.std(samples, ddof=1) / math.sqrt(len(samples)))
        series = capacity_series(params, t, rho, nt)
        tol = 3 * se + series.truncation_bound + 10 * settings.dt
        ok &= abs(series.value - mean) <= tol
        parts.append(f"t=1 series={series.value:.5f} mc={mean:.5f} tol={tol:.4f}")
    return CheckResult("C8 capacity", ok, "; ".join(parts))


SUITES: dict[str, list[Callable[[], CheckResult]]] = {
    "identity": [check_t0_identity, check_m1_closed_form],
    "oracle": [check_mf1_oracle],
    "determinant": [check_determinant_lemma],
    "hyp": [check_4f3_route],
    "quadrature": [check_stationary_quadrature, check_special_value],
}


def run_suite(name: str, mc_settings: Optional[McSettings] = None) -> list[CheckResult]:
    if name == "mc":
        return [check_monte_carlo(mc_settings), check_capacity(mc_settings)]
    if name == "all":
        out = []
        for key in SUITES:
            out += run_suite(key)
        return out + run_suite("mc", mc_settings)
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}")
    return [check() for check in SUITES[name]]
