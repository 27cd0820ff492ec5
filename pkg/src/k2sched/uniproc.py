"""Uniprocessor fixed-priority analysis.

Exact oracles (time-demand analysis, busy-window response time) and the
polynomial-time tests obtained from the two frameworks by way of a virtual
task that absorbs the hp2 interference.

Every function takes the task set in priority order and a 0-based index
``k`` of the task under analysis.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .errors import IterationCapExceeded, NotConstrainedDeadline
from .k2q import UNBOUNDED, K2QInstance, K2QTerm, quadratic_rhs, quadratic_test, response_bound
from .k2u import (
    K2UInstance,
    K2UTerm,
    extreme_point_test,
    hyperbolic_test,
    uniform_utilization_bound,
)
from .model import DeadlineModel, Task, TaskSet, split_hp
from .verdict import Verdict

JOB_CAP = 10**6


class Mode(str, enum.Enum):
    CONSTRAINED = "constrained"
    ARBITRARY = "arbitrary"


def default_mode(ts: TaskSet) -> Mode:
    return Mode.ARBITRARY if ts.model is DeadlineModel.ARBITRARY else Mode.CONSTRAINED


@dataclass(frozen=True)
class RtaResult:
    wcrt: float
    iterations: int
    per_job: tuple[tuple[int, float], ...] = ()

    @property
    def divergent(self) -> bool:
        return math.isinf(self.wcrt)


@dataclass(frozen=True)
class VirtualTask:
    c_prime: float
    d: float
    hp1: tuple[Task, ...]


def least_fixed_point(demand: Callable[[float], float], start: float, limit: float = math.inf,
                      max_steps: int = 10**7) -> float:
    """Smallest t >= start with demand(t) <= t, or inf once t exceeds ``limit``.

    ``start`` must not exceed the answer; ``demand`` must be non-decreasing.
    """
    t = start
    for _ in range(max_steps):
        if t > limit:
            return math.inf
        nxt = demand(t)
        if nxt <= t:
            return t
        t = nxt
    raise IterationCapExceeded(f"fixed point not reached after {max_steps} steps")


def _interference(hp, t: float) -> float:
    return sum(math.ceil(t / h.period) * h.wcet for h in hp)


def _within(t: float, d: float) -> Verdict:
    # bound carries the computed time, not the deadline
    return Verdict.accept(t) if t <= d else Verdict.reject(t)


def tda_exact(ts: TaskSet, k: int) -> Verdict:
    """Exact time-demand analysis; ``bound`` is the response time (inf if > D_k)."""
    task = ts[k]
    if task.deadline > task.period:
        raise NotConstrainedDeadline(f"task {task.id}: D={task.deadline} > T={task.period}")
    if task.wcet == 0:
        return Verdict.accept(0.0)
    hp = ts.higher(k)
    r = least_fixed_point(lambda t: task.wcet + _interference(hp, t), task.wcet, task.deadline)
    return _within(r, task.deadline)


def busy_window_exact(ts: TaskSet, k: int, job_cap: int = JOB_CAP) -> RtaResult:
    """Worst-case response time over the jobs of the level-k busy window."""
    task = ts[k]
    hp = ts.higher(k)
    if sum(t.utilization for t in ts.tasks[:k + 1]) > 1:
        return RtaResult(math.inf, 0)
    if task.wcet == 0:
        return RtaResult(0.0, 1, ((1, 0.0),))
    per_job = []
    wcrt = 0.0
    finish = 0.0
    for h in range(1, job_cap + 1):
        work = h * task.wcet
        finish = least_fixed_point(lambda t: work + _interference(hp, t), finish + task.wcet)
        per_job.append((h, finish))
        wcrt = max(wcrt, finish - (h - 1) * task.period)
        if finish <= h * task.period:
            return RtaResult(wcrt, h, tuple(per_job))
    raise IterationCapExceeded(f"task {task.id}: busy window longer than {job_cap} jobs")


def busy_window_exact_test(ts: TaskSet, k: int) -> Verdict:
    try:
        res = busy_window_exact(ts, k)
    except IterationCapExceeded as exc:
        return Verdict.reject(reason=str(exc))
    return Verdict.check(res.wcrt, ts[k].deadline)


def busy_window_length_test(ts: TaskSet, k: int) -> Verdict:
    """Busy window of task k (own jobs included) closes within D_k; ``bound`` is its length."""
    task = ts[k]
    if task.wcet == 0:
        return Verdict.accept(0.0)
    hp = ts.higher(k)

    def demand(t):
        return math.ceil(t / task.period) * task.wcet + _interference(hp, t)

    return _within(least_fixed_point(demand, task.wcet, task.deadline), task.deadline)


def make_virtual(ts: TaskSet, k: int, mode: Mode | str | None = None) -> VirtualTask:
    mode = default_mode(ts) if mode is None else Mode(mode)
    task = ts[k]
    part = split_hp(ts, k)
    if mode is Mode.CONSTRAINED:
        if task.deadline > task.period:
            raise NotConstrainedDeadline(f"task {task.id}: D={task.deadline} > T={task.period}")
        own = task.wcet
    else:
        own = math.ceil(task.deadline / task.period) * task.wcet
    return VirtualTask(own + sum(t.wcet for t in part.hp2), task.deadline, part.hp1)


def _last_release_points(hp1, d: float) -> list[tuple[float, int, Task]]:
    """(t_i, n_i, task) with t_i = (ceil(d/T_i) - 1) T_i, sorted by (t_i, id)."""
    pts = []
    for t in hp1:
        n = math.ceil(d / t.period) - 1
        pts.append((n * t.period, n, t))
    pts.sort(key=lambda p: (p[0], p[2].id))
    return pts


def hp_test(ts: TaskSet, k: int, mode: Mode | str | None = None) -> Verdict:
    """Hyperbolic test on the virtual task (HP, or HP-Busy in arbitrary mode)."""
    v = make_virtual(ts, k, mode)
    if v.c_prime == 0:
        return Verdict.accept(reason="no demand")
    us = [t.utilization for t in v.hp1 if t.wcet > 0]
    inst = K2UInstance(tuple(K2UTerm(1.0, 1.0, u) for u in us), v.c_prime, v.d)
    verdict = hyperbolic_test(inst, 1.0, 1.0)
    if verdict.schedulable:
        return verdict
    ll = Verdict.check(inst.ck_over_tk + sum(us), uniform_utilization_bound(len(us) + 1, 1.0, 1.0))
    return ll if ll.schedulable else verdict


def hp_ep_test(ts: TaskSet, k: int, mode: Mode | str | None = None) -> Verdict:
    """Extreme-point test with per-task beta_i = 1/(ceil(D_k/T_i) - 1)."""
    v = make_virtual(ts, k, mode)
    c_prime = v.c_prime
    terms = []
    for t_i, n, task in _last_release_points(v.hp1, v.d):
        if task.wcet == 0:
            continue
        if n < 1:
            # no release before D_k: charge the job to the virtual task
            c_prime += task.wcet
            continue
        terms.append(K2UTerm(1.0, 1.0 / n, task.utilization))
    if c_prime == 0:
        return Verdict.accept(reason="no demand")
    return extreme_point_test(K2UInstance(tuple(terms), c_prime, v.d))


def qb_test(ts: TaskSet, k: int, mode: Mode | str | None = None) -> Verdict:
    """Quadratic test on the virtual task (QB, or QB-Busy in arbitrary mode)."""
    v = make_virtual(ts, k, mode)
    if v.c_prime == 0:
        return Verdict.accept(reason="no demand")
    terms = tuple(K2QTerm(1.0, 1.0, task.utilization, task.wcet)
                  for _, _, task in _last_release_points(v.hp1, v.d) if task.wcet > 0)
    return quadratic_test(K2QInstance(terms, v.c_prime, v.d))


def _by_period_desc(hp) -> list[Task]:
    return sorted((t for t in hp if t.wcet > 0), key=lambda t: (-t.period, t.id))


def qb_response_time(ts: TaskSet, k: int) -> float:
    """Quadratic response-time bound; ``UNBOUNDED`` when sum U_{<=k} > 1."""
    task = ts[k]
    if sum(t.utilization for t in ts.tasks[:k + 1]) > 1:
        return UNBOUNDED
    if task.wcet == 0:
        return 0.0
    terms = tuple(K2QTerm(1.0, 1.0, t.utilization, t.wcet) for t in _by_period_desc(ts.higher(k)))
    return response_bound(K2QInstance(terms, task.wcet))


def bini_response_bound(ts: TaskSet, k: int) -> float:
    task = ts[k]
    hp = ts.higher(k)
    sum_u = sum(t.utilization for t in hp)
    if sum_u >= 1:
        return UNBOUNDED
    return (task.wcet + sum(t.wcet * (1 - t.utilization) for t in hp)) / (1 - sum_u)


def bini_test(ts: TaskSet, k: int) -> Verdict:
    task = ts[k]
    if task.deadline > task.period and sum(t.utilization for t in ts.tasks[:k + 1]) > 1:
        return Verdict.inapplicable("sum U_{<=k} > 1")
    return Verdict.check(bini_response_bound(ts, k), task.deadline)


def qb_response_schedulability(ts: TaskSet, k: int) -> Verdict:
    task = ts[k]
    if sum(t.utilization for t in ts.tasks[:k + 1]) > 1:
        return Verdict.inapplicable("sum U_{<=k} > 1")
    terms = tuple(K2QTerm(1.0, 1.0, t.utilization, t.wcet) for t in _by_period_desc(ts.higher(k)))
    return Verdict.check(task.wcet / task.deadline, quadratic_rhs(terms, task.deadline))
