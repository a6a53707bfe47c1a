"""The hybrid counting scheme: enumerate exactly below the cutoff, Monte
Carlo sample above it.

The cutoff N = ceil(2^{fn}) with f = (1-beta)/(2-beta) balances the two
phases' exponents. A MoreThan verdict from the enumeration certifies
#F > N, which is exactly the density the sampling estimator needs:
T = ceil(8 * 2^n / (eps^2 N)) uniform samples keep the relative error within
e^eps with probability >= 3/4 (Chebyshev with the explicit constant 8).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .engine import (
    BETA_ANALYSIS,
    DEFAULT_CONFIG,
    SolverConfig,
    beta_for,
    split_seed,
)
from .enumeration import count_up_to
from .formula import CnfFormula, GuardError
from .upper import upper_bound

EXACT_MODE = "exact_enumeration"
SAMPLED_MODE = "monte_carlo_sampled"

_SAMPLE_CHUNK = 1 << 20


@dataclass(frozen=True)
class SchemeConfig:
    k: int = 3
    beta: float | None = None  # default: analysis constant for k
    enum_delta: float = 1.0 / 12.0
    mc_constant: float = 8.0
    sample_ceiling: int = 50_000_000
    solver: SolverConfig = field(default_factory=SolverConfig)

    def resolved_beta(self) -> float:
        beta = self.beta if self.beta is not None else beta_for(self.k, BETA_ANALYSIS)
        if not 0.0 < beta < 1.0:
            raise ValueError(f"beta must lie in (0,1), got {beta}")
        return beta


@dataclass(frozen=True)
class ApproxResult:
    estimate: float
    mode: str
    cutoff: int
    epsilon: float
    seed: int
    sample_count: int | None
    elapsed: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "estimate": self.estimate,
                "mode": self.mode,
                "cutoff": self.cutoff,
                "epsilon": self.epsilon,
                "seed": self.seed,
                "sample_count": self.sample_count,
                "elapsed": self.elapsed,
            }
        )


def crossover_fraction(beta: float) -> float:
    """f = (1-beta)/(2-beta): the unique f with beta + f(1-beta) = 1 - f."""
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0,1), got {beta}")
    return (1.0 - beta) / (2.0 - beta)


def cutoff(k: int, beta: float, n: int) -> int:
    """Enumeration/sampling threshold N = ceil(2^{fn}), saturating at 2^n."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    f = crossover_fraction(beta)
    exponent = f * n
    if exponent >= n:
        return 1 << n
    return min(math.ceil(2.0**exponent), 1 << n)


def sample_size(n: int, epsilon: float, n_floor: int, mc_constant: float = 8.0) -> int:
    return math.ceil(mc_constant * 2.0**n / (epsilon**2 * n_floor))


def sample_estimate(
    formula: CnfFormula,
    epsilon: float,
    n_floor: int,
    seed: int,
    mc_constant: float = 8.0,
    sample_ceiling: int = 50_000_000,
) -> float:
    """X * 2^n / T for X hits among T uniform assignments.

    The caller guarantees #F > n_floor; T is sized so the result is an
    e^epsilon-approximation with probability >= 3/4 under that guarantee.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if n_floor < 1:
        raise ValueError(f"n_floor must be >= 1, got {n_floor}")
    n = formula.n
    trials = sample_size(n, epsilon, n_floor, mc_constant)
    if trials > sample_ceiling:
        raise GuardError(f"would need {trials} samples (ceiling {sample_ceiling})")
    pos, neg = formula.mask_arrays()
    rng = np.random.default_rng(seed)
    hits = 0
    remaining = trials
    while remaining > 0:
        size = min(remaining, _SAMPLE_CHUNK)
        xs = rng.integers(0, 2**63, size=size, dtype=np.uint64) & np.uint64(
            (1 << n) - 1
        )
        sat = np.ones(size, dtype=bool)
        nxs = ~xs
        for p, nm in zip(pos, neg):
            sat &= ((xs & p) != 0) | ((nxs & nm) != 0)
        hits += int(sat.sum())
        remaining -= size
    return hits * 2.0**n / trials


def approximate_count(
    formula: CnfFormula,
    k: int,
    epsilon: float,
    seed: int,
    config: SchemeConfig | None = None,
) -> ApproxResult:
    """Randomized e^epsilon-approximation of #F (success >= 3/4 less the
    enumeration delta budget)."""
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    cfg = config or SchemeConfig(k=k)
    started = time.perf_counter()
    threshold = cutoff(k, cfg.resolved_beta(), formula.n)
    result, _stats = count_up_to(
        formula, k, threshold, cfg.enum_delta, split_seed(seed, 1), cfg.solver
    )
    if result.is_exact:
        return ApproxResult(
            estimate=float(result.count),
            mode=EXACT_MODE,
            cutoff=threshold,
            epsilon=epsilon,
            seed=seed,
            sample_count=None,
            elapsed=time.perf_counter() - started,
        )
    trials = sample_size(formula.n, epsilon, threshold, cfg.mc_constant)
    estimate = sample_estimate(
        formula,
        epsilon,
        threshold,
        split_seed(seed, 2),
        cfg.mc_constant,
        cfg.sample_ceiling,
    )
    return ApproxResult(
        estimate=estimate,
        mode=SAMPLED_MODE,
        cutoff=threshold,
        epsilon=epsilon,
        seed=seed,
        sample_count=trials,
        elapsed=time.perf_counter() - started,
    )


def sixteen_approx(
    formula: CnfFormula,
    k: int,
    mu: int,
    seed: int,
    config: SchemeConfig | None = None,
) -> float:
    """Factor-16 approximation: the linear-system upper bound when it landed
    strictly above mu, otherwise exact enumeration up to 2^{mu+3}."""
    cfg = config or SchemeConfig(k=k)
    ub = upper_bound(formula, mu, split_seed(seed, 1))
    if ub.u > mu:
        return 2.0**ub.u
    budget = 1 << (mu + 3)
    result, _stats = count_up_to(
        formula, k, budget, cfg.enum_delta, split_seed(seed, 2), cfg.solver
    )
    if result.is_exact:
        return float(result.count)
    return float(budget)
