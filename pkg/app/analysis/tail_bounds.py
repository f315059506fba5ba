# app/analysis/tail_bounds.py

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from app.analysis.oracles import SIGMA_BAND, binomial_sigma

logger = logging.getLogger(__name__)

CALIBRATION_GRID = tuple(np.arange(1.0, 8.01, 0.5))


@dataclass
class TailBoundSample:
    """Empirical tail of Σ_{i≤T} Y_i, Y_i the max of Δ Geometric(q)."""

    length: int
    delta: int
    q: float
    samples: int
    t_grid: list[float]
    thresholds: list[float]
    exceedance: list[float]


@dataclass
class TailCheck:
    t: float
    threshold: float
    empirical: float
    bound: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.empirical <= self.bound + self.tolerance


@dataclass
class TailBoundResult:
    constant: float
    sample: TailBoundSample
    checks: list[TailCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failing_t(self) -> list[float]:
        return [c.t for c in self.checks if not c.passed]


def sample_sum_of_maxima(
    length: int, delta: int, q: float, samples: int, seed: int, chunk: int = 10_000
) -> np.ndarray:
    if not 0.0 < q <= 1.0:
        raise ValueError(f"q must lie in (0, 1], got {q}")
    rng = np.random.default_rng(seed)
    sums = np.empty(samples, dtype=np.int64)
    for start in range(0, samples, chunk):
        size = min(chunk, samples - start)
        draws = rng.geometric(q, size=(size, length, delta))
        sums[start:start + size] = draws.max(axis=2).sum(axis=1)
    return sums


def tail_threshold(constant: float, length: int, delta: int, t: float) -> float:
    """C·(T·ln Δ + t)."""
    return constant * (length * math.log(delta) + t)


def tail_bound_check(
    length: int,
    delta: int,
    q: float,
    samples: int,
    t_grid,
    constant: float,
    seed: int = 0,
    sums: np.ndarray | None = None,
) -> TailBoundResult:
    """P(Σ Y_i ≥ C(T ln Δ + t)) ≤ e^-t + 4σ for every t in the grid."""
    if sums is None:
        sums = sample_sum_of_maxima(length, delta, q, samples, seed)
    t_grid = sorted(float(t) for t in t_grid)
    thresholds = [tail_threshold(constant, length, delta, t) for t in t_grid]
    exceedance = [float((sums >= th).mean()) for th in thresholds]

    checks = []
    for t, th, emp in zip(t_grid, thresholds, exceedance):
        bound = math.exp(-t)
        checks.append(TailCheck(t, th, emp, bound, SIGMA_BAND * binomial_sigma(bound, len(sums))))

    result = TailBoundResult(
        constant=constant,
        sample=TailBoundSample(length, delta, q, len(sums), t_grid, thresholds, exceedance),
        checks=checks,
    )
    if not result.passed:
        logger.info("tail bound with C=%.1f fails at t=%s", constant, result.failing_t)
    return result


def calibrate_tail_constant(
    delta: int = 4,
    length: int = 4,
    q: float = 0.5,
    samples: int = 100_000,
    t_grid=(1, 2, 3, 4, 5),
    seed: int = 0,
    grid=CALIBRATION_GRID,
) -> float:
    """Smallest C of the grid for which the check passes at the calibration point."""
    sums = sample_sum_of_maxima(length, delta, q, samples, seed)
    for constant in grid:
        if tail_bound_check(length, delta, q, samples, t_grid, float(constant), sums=sums).passed:
            logger.info("calibrated tail constant C=%.1f", constant)
            return float(constant)
    raise ValueError(f"no constant in {grid[0]}..{grid[-1]} passes at Δ={delta}, T={length}")
