"""Synthetic task sets: UUniFast-Discard utilizations, log-uniform periods."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResampleCapExceeded
from .model import DeadlineModel, Task, TaskSet, assign_priorities

RESAMPLE_CAP = 10_000
PERIOD_DECIMALS = 4
BLOCK = 256

DEADLINE_MODELS = {
    "implicit": (DeadlineModel.IMPLICIT, None),
    "constrained_0.8_1.0": (DeadlineModel.CONSTRAINED, (0.8, 1.0)),
    "arbitrary_1.0_2.0": (DeadlineModel.ARBITRARY, (1.0, 2.0)),
}


@dataclass(frozen=True)
class GenConfig:
    n: int
    target_util: float
    p: int = 1
    deadline_model: str = "implicit"
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 < self.target_util <= self.n:
            raise ValueError(f"target_util must be in (0, n], got {self.target_util}")
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if self.deadline_model not in DEADLINE_MODELS:
            raise ValueError(f"unknown deadline model {self.deadline_model!r}; "
                             f"choose from {sorted(DEADLINE_MODELS)}")


def multiprocessor_config(m: int, normalized_util: float, p: int = 1, seed: int = 0) -> GenConfig:
    """Implicit-deadline preset with 5 tasks per processor."""
    return GenConfig(5 * m, normalized_util * m, p, "implicit", seed)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def uunifast_discard(n: int, target_util: float, rng: np.random.Generator,
                     max_util: float = 1.0, cap: int = RESAMPLE_CAP) -> list[float]:
    """``n`` utilizations summing to ``target_util``, none above ``max_util``.

    The whole vector is redrawn whenever one value exceeds the limit, at most
    ``cap`` times.  Candidates are drawn in blocks and the first valid one wins.
    """
    if not 0 < target_util <= n * max_util:
        raise ValueError(f"target_util {target_util} infeasible for n={n}")
    if n == 1:
        return [float(target_util)]
    exponents = 1.0 / np.arange(n - 1, 0, -1)
    drawn = 0
    while drawn < cap:
        size = min(BLOCK, cap - drawn)
        drawn += size
        # remaining sums: S_i = S_{i-1} * r_i^(1/(n-i))
        sums = target_util * np.cumprod(rng.random((size, n - 1)) ** exponents, axis=1)
        sums = np.hstack([np.full((size, 1), target_util), sums])
        utils = np.hstack([sums[:, :-1] - sums[:, 1:], sums[:, -1:]])
        ok = np.flatnonzero((utils <= max_util).all(axis=1))
        if ok.size:
            return utils[ok[0]].tolist()
    raise ResampleCapExceeded(f"no valid vector for n={n}, U={target_util} after {cap} draws")


def sample_periods(n: int, p: int, rng: np.random.Generator) -> list[float]:
    """Periods 10^x ms with x uniform in [0, p], rounded to 4 decimals."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return [round(10.0 ** x, PERIOD_DECIMALS) for x in rng.uniform(0.0, p, size=n)]


def make_taskset(cfg: GenConfig) -> TaskSet:
    rng = make_rng(cfg.seed)
    utils = uunifast_discard(cfg.n, cfg.target_util, rng)
    periods = sample_periods(cfg.n, cfg.p, rng)
    model, window = DEADLINE_MODELS[cfg.deadline_model]
    tasks = []
    for i, (u, t) in enumerate(zip(utils, periods)):
        c = min(t * u, t)
        d = t if window is None else float(rng.uniform(window[0] * t, window[1] * t))
        tasks.append(Task(i, c, t, d))
    return assign_priorities(TaskSet.of(tasks, model), "DM")
