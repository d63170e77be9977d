"""Monte Carlo simulation of the Hermitian Jacobi process.

Brownian motion on U(d) is approximated by a product of exact unitary steps

    Y_{k+1} = Y_k exp(i sqrt(clock * h) G_k),

with G_k independent GUE matrices normalized so that E|G_jk|^2 = 1. Only
the first m rows of Y are needed: J = X X^* where X is the m x p upper-left
corner, so each step updates an m x d block through the eigendecomposition
of G_k.

Paths are grouped into fixed-size blocks. Block b draws from a Philox
stream keyed by (seed, b), so results depend on the seed and the path count
only, never on how blocks are scheduled.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import CalibrationError, DomainError, SimulationFault
from .moments import moment_expansion
from .partitions import ModelParams

__all__ = [
    "SimConfig",
    "MCEstimate",
    "gue_batch",
    "unitary_step",
    "block_rng",
    "sample_unitary_bm",
    "simulate_eigenvalues",
    "simulate_moment",
    "simulate_capacity",
    "fit_decay_scale",
    "calibrate_clock",
    "BLOCK_SIZE",
    "EIG_TOL",
]

BLOCK_SIZE = 1000
EIG_TOL = 1e-10


@dataclass(frozen=True)
class SimConfig:
    params: ModelParams
    t: float
    dt: float
    paths: int
    seed: int = 0
    clock: float = 1.0

    def __post_init__(self):
        if not self.t > 0 or not self.dt > 0:
            raise DomainError("t and dt must be positive")
        if self.dt > self.t:
            raise DomainError(f"dt={self.dt} exceeds t={self.t}")
        if self.paths < 2:
            raise DomainError("need at least two paths for a standard error")
        if not self.clock > 0:
            raise DomainError("clock must be positive")


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    paths: int
    dt: float
    extra: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_samples(cls, samples: np.ndarray, dt: float, **extra) -> "MCEstimate":
        samples = np.asarray(samples, dtype=float)
        n = samples.shape[0]
        return cls(
            mean=float(np.mean(samples)),
            stderr=float(np.std(samples, ddof=1) / math.sqrt(n)),
            paths=n,
            dt=dt,
            extra=extra,
        )

    def to_json(self, **fields) -> dict:
        return {"estimate": self.mean, "stderr": self.stderr, "paths": self.paths, "dt": self.dt, **fields}


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Counter-based stream for one block of paths."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))


def gue_batch(rng: np.random.Generator, batch: int, d: int) -> np.ndarray:
    """Hermitian matrices with N(0,1) diagonal and E|G_jk|^2 = 1 off the diagonal."""
    a = rng.standard_normal((batch, d, d)) + 1j * rng.standard_normal((batch, d, d))
    return (a + np.conj(np.swapaxes(a, -1, -2))) / 2


def unitary_step(rows: np.ndarray, g: np.ndarray, scale: float) -> np.ndarray:
    """rows @ exp(i * scale * g) for a batch of Hermitian g, via eigendecomposition."""
    w, v = np.linalg.eigh(g)
    rv = rows @ v
    rv *= np.exp(1j * scale * w)[..., None, :]
    return rv @ np.conj(np.swapaxes(v, -1, -2))


def _n_steps(t: float, dt: float) -> int:
    return max(1, int(round(t / dt)))


def sample_unitary_bm(d: int, t: float, dt: float, clock: float, rng: np.random.Generator) -> np.ndarray:
    """One d x d sample of the discretized Brownian motion on U(d) at time t."""
    if d < 2:
        raise DomainError("need d >= 2")
    y = np.eye(d, dtype=complex)
    if t == 0:
        return y
    steps = _n_steps(t, dt)
    scale = math.sqrt(clock * t / steps)
    for _ in range(steps):
        y = unitary_step(y, gue_batch(rng, 1, d)[0], scale)
    return y


def _corner_eigenvalues(rows: np.ndarray, p: int) -> np.ndarray:
    x = rows[:, :, :p]
    j = x @ np.conj(np.swapaxes(x, -1, -2))
    lam = np.linalg.eigvalsh(j)
    if lam.min() < -EIG_TOL or lam.max() > 1 + EIG_TOL:
        raise SimulationFault(f"eigenvalue outside [0, 1]: range [{lam.min()}, {lam.max()}]")
    return np.clip(lam, 0.0, 1.0)


def _simulate_block(
    params: ModelParams,
    record_steps: Sequence[int],
    h: float,
    clock: float,
    rng: np.random.Generator,
    size: int,
) -> np.ndarray:
    m, p, d = params.m, params.p, params.d
    rows = np.zeros((size, m, d), dtype=complex)
    rows[:, np.arange(m), np.arange(m)] = 1.0
    scale = math.sqrt(clock * h)
    out = np.empty((len(record_steps), size, m))
    targets = {k: i for i, k in enumerate(record_steps)}
    for step in range(1, max(record_steps) + 1):
        rows = unitary_step(rows, gue_batch(rng, size, d), scale)
        if step in targets:
            out[targets[step]] = _corner_eigenvalues(rows, p)
    return out


def simulate_eigenvalues(
    config: SimConfig,
    times: Optional[Iterable[float]] = None,
    n_jobs: int = 1,
) -> dict[float, np.ndarray]:
    """Eigenvalues of J at each requested time, shape (paths, m) per time.

    All times are reached on one grid of step ``config.dt`` (each time rounded
    to the nearest grid point), so estimates at different times share paths.
    """
    times = sorted(set([config.t] if times is None else [float(t) for t in times]))
    if times[0] <= 0:
        raise DomainError("recording times must be positive")
    h = config.dt
    steps = [_n_steps(t, h) for t in times]
    if len(times) == 1:
        # hit t exactly when dt does not divide it
        h = times[0] / steps[0]
    blocks = [(b, min(BLOCK_SIZE, config.paths - b * BLOCK_SIZE)) for b in range(math.ceil(config.paths / BLOCK_SIZE))]

    def run(block):
        b, size = block
        return _simulate_block(config.params, steps, h, config.clock, block_rng(config.seed, b), size)

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(blk) for blk in blocks]
    lam = np.concatenate(parts, axis=1)
    return {t: lam[i] for i, t in enumerate(times)}


def simulate_moment(n: int, config: SimConfig, n_jobs: int = 1) -> MCEstimate:
    """Estimate E tr(J_t^n)."""
    if n < 1:
        raise DomainError(f"moment order must be positive, got {n}")
    lam = simulate_eigenvalues(config, n_jobs=n_jobs)[config.t]
    return MCEstimate.from_samples(np.sum(lam**n, axis=1), config.dt)


def simulate_capacity(config: SimConfig, rho: float, n_jobs: int = 1) -> MCEstimate:
    """Estimate E log det(I + rho J_t) in nats; any rho > 0."""
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    lam = simulate_eigenvalues(config, n_jobs=n_jobs)[config.t]
    return MCEstimate.from_samples(np.sum(np.log1p(rho * lam), axis=1), config.dt)


def fit_decay_scale(params: ModelParams, t_grid: Sequence[float], m1_values: Sequence[float]) -> float:
    """Least-squares time scale k in M_1(t) - M_1(inf) = c exp(-d k t).

    The first moment has a single decay rate d, and its amplitude
    c = m - M_1(inf) is known exactly, so the fit has one free parameter.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.size < 3:
        raise CalibrationError("need at least three time points")
    expansion = moment_expansion(1, params)
    amplitude = float(expansion.at_zero() - expansion.stationary)
    diff = np.asarray(m1_values, dtype=float) - float(expansion.stationary)
    if np.any(diff <= 0):
        raise CalibrationError("noise dominates the decay signal; increase the number of paths")
    y = np.log(diff / amplitude)
    return float(-np.dot(t, y) / (params.d * np.dot(t, t)))


def calibrate_clock(
    params: ModelParams,
    t_grid: Sequence[float],
    paths: int,
    dt: float,
    seed: int,
    n_jobs: int = 1,
) -> float:
    """Clock factor that makes the simulated first moment decay at rate d.

    The simulator is run at clock 1; if its first moment decays at d * k the
    returned clock is 1 / k.
    """
    if len(t_grid) < 3:
        raise CalibrationError("need at least three time points")
    config = SimConfig(params, t=max(t_grid), dt=dt, paths=paths, seed=seed, clock=1.0)
    lam = simulate_eigenvalues(config, t_grid, n_jobs=n_jobs)
    grid = sorted(lam)
    m1 = [float(np.mean(np.sum(lam[t], axis=1))) for t in grid]
    return 1.0 / fit_decay_scale(params, grid, m1)
