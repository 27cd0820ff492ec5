"""Global rate-monotonic tests on ``m`` identical processors.

Only implicit-deadline task sets in RM order are analysed.  Higher-priority
tasks with the same period as the task under analysis are treated as having
a marginally shorter one.  Two
pseudo-polynomial base tests (greedy carry-in and bounded carry-in) act as
the reference for the polynomial tests derived from them; the forced-forward
based tests (QB-FF, QB-FF2) have no runnable base test here.

Task indices are 0-based, so a task with index ``k < m`` has fewer than
``m`` higher-priority tasks and is schedulable iff ``U_k <= 1``.
"""

from __future__ import annotations

import math
from typing import Callable

from .errors import ModelMismatch
from .k2q import K2QInstance, K2QTerm, quadratic_rhs, quadratic_test, uniform_quadratic_rhs
from .k2u import (
    K2UInstance,
    K2UTerm,
    exclusive_utilization_bound,
    extreme_point_rhs,
    hyperbolic_test,
)
from .model import Task, TaskSet
from .uniproc import least_fixed_point
from .verdict import Verdict

CAPACITY_AUGMENTATION = (3 + math.sqrt(7)) / 2


def _check_global(ts: TaskSet, k: int, m: int) -> None:
    if m < 1:
        raise ValueError(f"processor count must be >= 1, got {m}")
    if any(t.deadline != t.period for t in ts):
        raise ModelMismatch("global RM tests need implicit deadlines")
    periods = [t.period for t in ts]
    if any(a > b for a, b in zip(periods, periods[1:])):
        raise ModelMismatch("global RM tests need the task set in RM priority order")


def _global(test: Callable[[TaskSet, int, int], Verdict]):
    """Wrap a test with the shared model checks and the k < m rule."""

    def wrapper(ts: TaskSet, k: int, m: int) -> Verdict:
        _check_global(ts, k, m)
        task = ts[k]
        if k < m:
            return Verdict.check(task.utilization, 1.0)
        if task.wcet == 0:
            return Verdict.accept(reason="no demand")
        return test(ts, k, m)

    wrapper.__name__ = test.__name__
    wrapper.__doc__ = test.__doc__
    wrapper.__wrapped__ = test
    return wrapper


def carry_in_set(hp, m: int) -> tuple[Task, ...]:
    """The m-1 higher-priority tasks with the largest WCETs (ties: lower id)."""
    return tuple(sorted(hp, key=lambda t: (-t.wcet, t.id))[:max(m - 1, 0)])


def _points(hp, t_k: float) -> list[tuple[float, float, Task]]:
    """(t_i, T_i/t_i, task) with t_i = (ceil(T_k/T_i) - 1) T_i, non-decreasing t_i.

    A tie T_i = T_k is read as T_i slightly below T_k, which only adds
    interference, so t_i = T_i there.
    """
    pts = []
    for t in hp:
        n = max(math.ceil(t_k / t.period) - 1, 1)
        pts.append((n * t.period, 1.0 / n, t))
    pts.sort(key=lambda p: (p[0], p[2].utilization, p[2].id))
    return pts


@_global
def greedy_carryin_pseudo(ts: TaskSet, k: int, m: int) -> Verdict:
    task = ts[k]
    hp = ts.higher(k)

    def demand(t):
        return task.wcet + sum((math.ceil(t / h.period) + 1) * h.wcet for h in hp) / m

    r = least_fixed_point(demand, task.wcet, task.period)
    return Verdict.check(r, task.period) if r < math.inf else Verdict.reject(math.inf)


@_global
def bounded_carryin_pseudo(ts: TaskSet, k: int, m: int) -> Verdict:
    task = ts[k]
    hp = ts.higher(k)
    carry = sum(t.wcet for t in carry_in_set(hp, m))

    def demand(t):
        return task.wcet + (carry + sum(math.ceil(t / h.period) * h.wcet for h in hp)) / m

    r = least_fixed_point(demand, task.wcet, task.period)
    return Verdict.check(r, task.period) if r < math.inf else Verdict.reject(math.inf)


def _hyperbolic_or_exclusive(terms, c_k, t_k, alpha, beta) -> Verdict:
    inst = K2UInstance(tuple(terms), c_k, t_k)
    verdict = hyperbolic_test(inst, alpha, beta)
    if verdict.schedulable or inst.ck_over_tk > 1:
        return verdict
    excl = Verdict.check(sum(h.u for h in inst.higher),
                         exclusive_utilization_bound(inst.ck_over_tk, alpha, beta))
    return excl if excl.schedulable else verdict


@_global
def hp_gc_test(ts: TaskSet, k: int, m: int) -> Verdict:
    """HP-GC: (U_k + 2) prod(U_i/M + 1) <= 3, or the matching sum bound."""
    task = ts[k]
    terms = [K2UTerm(2.0 / m, 1.0 / m, t.utilization) for t in ts.higher(k) if t.wcet > 0]
    return _hyperbolic_or_exclusive(terms, task.wcet, task.period, 2.0 / m, 1.0 / m)


@_global
def hp_bc_test(ts: TaskSet, k: int, m: int) -> Verdict:
    """HP-BC: carry-in of the m-1 largest WCETs folded into C_k'."""
    task = ts[k]
    hp = ts.higher(k)
    c_prime = task.wcet + sum(t.wcet for t in carry_in_set(hp, m)) / m
    terms = [K2UTerm(1.0 / m, 1.0 / m, t.utilization) for t in hp if t.wcet > 0]
    return _hyperbolic_or_exclusive(terms, c_prime, task.period, 1.0 / m, 1.0 / m)


def bc2_terms(utilizations, m: int) -> list[K2UTerm]:
    """Utilization-only carry-in terms: sorted by U, the last m-1 get alpha = 2/m."""
    us = sorted(utilizations)
    n_plain = max(len(us) - (m - 1), 0)
    return [K2UTerm((1.0 if i < n_plain else 2.0) / m, 1.0 / m, u) for i, u in enumerate(us)]


@_global
def hp_bc2_test(ts: TaskSet, k: int, m: int) -> Verdict:
    task = ts[k]
    terms = bc2_terms([t.utilization for t in ts.higher(k) if t.wcet > 0], m)
    rhs = extreme_point_rhs(terms)
    u_k = task.utilization
    return Verdict.accept(rhs) if 0 < u_k <= rhs else Verdict.reject(rhs)


@_global
def hp_bc_ep_test(ts: TaskSet, k: int, m: int) -> Verdict:
    """HP-BC-EP: extreme-point test with coefficients derived per task.

    With t_i = (ceil(T_k/T_i) - 1) T_i, every task gets beta_i = (T_i/t_i)/M;
    alpha_i is 1/M, raised to (1 + T_i/t_i)/M <= 2/M for the carry-in tasks.
    """
    task = ts[k]
    hp = [t for t in ts.higher(k) if t.wcet > 0]
    carry = {t.id for t in carry_in_set(ts.higher(k), m)}
    terms = []
    for _, ratio, t in _points(hp, task.period):
        alpha = (1.0 + ratio) / m if t.id in carry else 1.0 / m
        terms.append(K2UTerm(alpha, ratio / m, t.utilization))
    rhs = extreme_point_rhs(terms)
    u_k = task.utilization
    return Verdict.accept(rhs) if 0 < u_k <= rhs else Verdict.reject(rhs)


@_global
def qb_bc_test(ts: TaskSet, k: int, m: int) -> Verdict:
    task = ts[k]
    hp = ts.higher(k)
    c_prime = task.wcet + sum(t.wcet for t in carry_in_set(hp, m)) / m
    terms = tuple(K2QTerm(1.0 / m, 1.0 / m, t.utilization, t.wcet)
                  for _, _, t in _points([t for t in hp if t.wcet > 0], task.period))
    return quadratic_test(K2QInstance(terms, c_prime, task.period))


def _u_max(ts: TaskSet, k: int) -> float:
    return max(t.utilization for t in ts.tasks[:k + 1])


@_global
def qb_ff_test(ts: TaskSet, k: int, m: int) -> Verdict:
    task = ts[k]
    hp = sorted((t for t in ts.higher(k) if t.wcet > 0), key=lambda t: (-t.period, t.id))
    terms = [K2QTerm(1.0 / m, 1.0 / m, t.utilization, t.wcet) for t in hp]
    sum_u = sum(t.u for t in terms)
    if sum_u / m > 1 or sum(t.c for t in terms) / m > task.period:
        return Verdict.inapplicable("sum U_i/M > 1 or sum C_i/M > T_k")
    return Verdict.check(_u_max(ts, k), quadratic_rhs(terms, task.period))


@_global
def qb_ff2_test(ts: TaskSet, k: int, m: int) -> Verdict:
    us = [t.utilization for t in ts.higher(k)]
    u_max = _u_max(ts, k)
    sum_u = sum(us)
    if sum_u / m > 1:
        return Verdict.reject(reason="sum U_i/M > 1")
    quad = Verdict.check(u_max, uniform_quadratic_rhs(us, 1.0 / m, 1.0 / m))
    if quad.schedulable:
        return quad
    n = k + 1  # 1-based index of the task under analysis
    ratio = n / (n - 1)
    bound = (2.0 - math.sqrt(2.0 + 2.0 * u_max * ratio)) / ratio
    ubound = Verdict.check(sum_u / m, bound)
    return ubound if ubound.schedulable else quad


def capacity_augmentation_check(ts: TaskSet, m: int) -> Verdict:
    """Total and maximum utilization both within 1/b, b = (3 + sqrt 7)/2."""
    if any(t.deadline != t.period for t in ts):
        raise ModelMismatch("capacity augmentation check needs implicit deadlines")
    limit = 1.0 / CAPACITY_AUGMENTATION
    if not ts.tasks:
        return Verdict.accept(limit)
    if ts.utilization / m <= limit and max(t.utilization for t in ts) <= limit:
        return Verdict.accept(limit)
    return Verdict.reject(limit)
