"""Acceptance-ratio experiments and the two-task comparison scan."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from . import multiproc, uniproc
from .errors import ModelMismatch, UnknownTest
from .k2q import K2QTerm, quadratic_rhs, uniform_quadratic_rhs
from .k2u import hyperbolic_rhs
from .model import TaskSet
from .verdict import Verdict
from .workload import GenConfig, make_taskset

TestFn = Callable[[TaskSet, int, int], Verdict]


def _uni(fn, **kw) -> TestFn:
    def run(ts, k, m):
        return fn(ts, k, **kw)
    return run


UNIPROCESSOR_TESTS: dict[str, TestFn] = {
    "TDA": _uni(uniproc.tda_exact),
    "RTA": _uni(uniproc.busy_window_exact_test),
    "BW": _uni(uniproc.busy_window_length_test),
    "Bini": _uni(uniproc.bini_test),
    "HP": _uni(uniproc.hp_test),
    "HP-Busy": _uni(uniproc.hp_test, mode="arbitrary"),
    "HP-EP": _uni(uniproc.hp_ep_test),
    "QB": _uni(uniproc.qb_test),
    "QB-Busy": _uni(uniproc.qb_test, mode="arbitrary"),
    "QB-Response": _uni(uniproc.qb_response_schedulability),
}

MULTIPROCESSOR_TESTS: dict[str, TestFn] = {
    "GC": multiproc.greedy_carryin_pseudo,
    "BC": multiproc.bounded_carryin_pseudo,
    "HP-GC": multiproc.hp_gc_test,
    "HP-BC": multiproc.hp_bc_test,
    "HP-BC2": multiproc.hp_bc2_test,
    "HP-BC-EP": multiproc.hp_bc_ep_test,
    "QB-BC": multiproc.qb_bc_test,
    "QB-FF": multiproc.qb_ff_test,
    "QB-FF2": multiproc.qb_ff2_test,
}

ALL_TESTS = {**UNIPROCESSOR_TESTS, **MULTIPROCESSOR_TESTS}


def resolve_tests(names: Iterable[str], m: int) -> dict[str, TestFn]:
    resolved = {}
    for name in names:
        if name not in ALL_TESTS:
            raise UnknownTest(f"unknown test {name!r}; choose from {', '.join(ALL_TESTS)}")
        if m > 1 and name in UNIPROCESSOR_TESTS:
            raise ModelMismatch(f"{name} is a uniprocessor test, got m={m}")
        resolved[name] = ALL_TESTS[name]
    return resolved


def run_test_suite(ts: TaskSet, tests: Sequence[str], m: int = 1) -> dict[str, bool]:
    """Set-level verdict per test: schedulable iff every task passes that test."""
    resolved = resolve_tests(tests, m)
    return {name: all(fn(ts, k, m).schedulable for k in range(len(ts)))
            for name, fn in resolved.items()}


# -- sweeps --------------------------------------------------------------------

@dataclass(frozen=True)
class SweepConfig:
    util_from: float
    util_to: float
    step: float
    sets_per_level: int
    gen: GenConfig
    tests: tuple[str, ...]
    processors: int = 1

    def __post_init__(self):
        object.__setattr__(self, "tests", tuple(self.tests))
        if self.util_from > self.util_to:
            raise ValueError("util_from must not exceed util_to")
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.sets_per_level < 1:
            raise ValueError("sets_per_level must be >= 1")
        if self.processors < 1:
            raise ValueError("processors must be >= 1")
        resolve_tests(self.tests, self.processors)

    def levels(self) -> list[float]:
        count = int(math.floor((self.util_to - self.util_from) / self.step + 1e-9)) + 1
        return [round(self.util_from + i * self.step, 6) for i in range(count)]


@dataclass(frozen=True)
class AcceptanceRow:
    util: float
    test: str
    accepted: int
    total: int

    @property
    def ratio(self) -> float:
        return self.accepted / self.total if self.total else 0.0


@dataclass(frozen=True)
class AcceptanceCurve:
    rows: tuple[AcceptanceRow, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(sorted(self.rows, key=lambda r: (r.util, r.test))))

    def series(self, test: str) -> list[AcceptanceRow]:
        return [r for r in self.rows if r.test == test]

    def ratios(self, test: str) -> dict[float, float]:
        return {r.util: r.ratio for r in self.series(test)}


def _evaluate_level(cfg: SweepConfig, level_index: int, util: float) -> list[AcceptanceRow]:
    counts = dict.fromkeys(cfg.tests, 0)
    for j in range(cfg.sets_per_level):
        seed = cfg.gen.seed ^ (level_index * cfg.sets_per_level + j)
        gen = replace(cfg.gen, target_util=util * cfg.processors, seed=seed)
        for name, ok in run_test_suite(make_taskset(gen), cfg.tests, cfg.processors).items():
            counts[name] += ok
    return [AcceptanceRow(util, name, n, cfg.sets_per_level) for name, n in counts.items()]


def run_sweep(cfg: SweepConfig, workers: int = 1) -> AcceptanceCurve:
    jobs = list(enumerate(cfg.levels()))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_evaluate_level, [cfg] * len(jobs),
                                  [i for i, _ in jobs], [u for _, u in jobs]))
    else:
        parts = [_evaluate_level(cfg, i, u) for i, u in jobs]
    return AcceptanceCurve(tuple(row for part in parts for row in part))


CSV_HEADER = "util,test,accepted,total,ratio"


def emit_csv(curve: AcceptanceCurve) -> str:
    lines = [CSV_HEADER]
    for r in curve.rows:
        lines.append(f"{r.util:.6f},{r.test},{r.accepted},{r.total},{r.ratio:.6f}")
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> AcceptanceCurve:
    reader = csv.DictReader(io.StringIO(text))
    return AcceptanceCurve(tuple(
        AcceptanceRow(float(row["util"]), row["test"], int(row["accepted"]), int(row["total"]))
        for row in reader))


# -- two-task comparison ---------------------------------------------------------

@dataclass(frozen=True)
class Fig1Row:
    """Largest admissible U_2 (T_2 = 1) for one period ratio T_1/T_2."""

    ratio: float
    t1: float
    beta1: float
    c1: float
    k2u_hyperbolic: float
    k2q_uniform: float
    k2q_general: float
    exact: float


FIG1_FIELDS = ("ratio", "t1", "beta1", "c1", "k2u_hyperbolic", "k2q_uniform", "k2q_general", "exact")


def default_ratio_grid(step: float = 0.01) -> list[float]:
    return [round(r, 6) for r in np.arange(step, 1.0 - 1e-9, step)]


def _exact_max_u2(u1: float, period1: float) -> float:
    c1 = u1 * period1
    points = [j * period1 for j in range(1, int(math.floor(1.0 / period1)) + 1)] + [1.0]
    return max(0.0, max(t - math.ceil(t / period1) * c1 for t in points))


def figure1_scan(u1: float, t_ratio_grid: Iterable[float]) -> list[Fig1Row]:
    """Two-task RM comparison, U_1 fixed, T_2 = D_2 = 1, T_1 = ratio."""
    if not 0 < u1 < 1:
        raise ValueError(f"u1 must be in (0, 1), got {u1}")
    rows = []
    for ratio in t_ratio_grid:
        if not 0 < ratio < 1:
            raise ValueError(f"period ratio must be in (0, 1), got {ratio}")
        n = math.ceil(1.0 / ratio - 1.0)
        t1 = n * ratio
        beta = 1.0 / n
        c1 = t1 * u1
        rows.append(Fig1Row(
            ratio=ratio,
            t1=t1,
            beta1=beta,
            c1=c1,
            k2u_hyperbolic=hyperbolic_rhs([u1], 1.0, beta),
            k2q_uniform=uniform_quadratic_rhs([u1], 1.0, beta),
            k2q_general=quadratic_rhs([K2QTerm(1.0, beta, u1, c1)], 1.0),
            exact=_exact_max_u2(u1, ratio),
        ))
    return rows


def figure1_csv(rows: Iterable[Fig1Row]) -> str:
    lines = [",".join(FIG1_FIELDS)]
    for r in rows:
        lines.append(",".join(f"{getattr(r, f):.6f}" for f in FIG1_FIELDS))
    return "\n".join(lines) + "\n"
