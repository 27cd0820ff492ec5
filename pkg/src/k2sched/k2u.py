"""Utilization-based k-point framework (hyperbolic forms).

An instance describes a k-point effective test: every higher-priority
task contributes ``alpha_i * t_i * U_i`` at every test point and an extra
``beta_i * t_i * U_i`` at the points after its own.  The functions here only
consume the coefficients; deriving them is the job of the scheduler
specific modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .verdict import Verdict

LIMIT_K = 10**7


class K2UTerm(NamedTuple):
    alpha: float
    beta: float
    u: float


@dataclass(frozen=True)
class K2UInstance:
    """Higher-priority terms in non-decreasing test-point order, plus C_k and t_k."""

    higher: tuple[K2UTerm, ...]
    c_k: float
    t_k: float

    def __post_init__(self):
        object.__setattr__(self, "higher", tuple(K2UTerm(*h) for h in self.higher))
        for h in self.higher:
            if not (h.alpha > 0 and h.beta > 0 and 0 < h.u <= 1):
                raise ValueError(f"invalid term {h}")
        if not self.c_k > 0:
            raise ValueError(f"c_k must be positive, got {self.c_k}")
        if not 0 < self.t_k < math.inf:
            raise ValueError(f"t_k must be positive and finite, got {self.t_k}")

    @property
    def ck_over_tk(self) -> float:
        return self.c_k / self.t_k


def _check_caps(alpha: float, beta: float) -> None:
    if not (alpha > 0 and beta > 0):
        raise ValueError(f"alpha and beta must be positive, got {alpha}, {beta}")


def hyperbolic_rhs(utilizations: Iterable[float], alpha: float, beta: float) -> float:
    _check_caps(alpha, beta)
    prod = 1.0
    for u in utilizations:
        prod *= beta * u + 1.0
    ratio = alpha / beta
    return (ratio + 1.0) / prod - ratio


def hyperbolic_test(inst: K2UInstance, alpha: float, beta: float) -> Verdict:
    """Hyperbolic bound with uniform caps ``alpha``/``beta`` on the coefficients."""
    for i, h in enumerate(inst.higher):
        if h.alpha > alpha or h.beta > beta:
            return Verdict.inapplicable(
                f"term {i} ({h.alpha}, {h.beta}) exceeds caps ({alpha}, {beta})")
    rhs = hyperbolic_rhs((h.u for h in inst.higher), alpha, beta)
    return Verdict.check(inst.ck_over_tk, rhs)


def uniform_utilization_bound(k: int, alpha: float, beta: float) -> float:
    """Bound on ``C_k/t_k + sum(U_i)`` for k-1 higher-priority tasks.

    With alpha = beta = 1 this is k(2^(1/k) - 1).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _check_caps(alpha, beta)
    # (alpha+beta)^(1/k) - 1 via expm1 so large k keeps its precision
    root_m1 = math.expm1(math.log(alpha + beta) / k)
    return ((k - 1) * root_m1 + (root_m1 + 1.0 - alpha)) / beta


def exclusive_utilization_bound(ck_over_tk: float, alpha: float, beta: float) -> float:
    """Bound on ``sum(U_i)`` of the higher-priority tasks alone.

    Callers must reject ``ck_over_tk > 1`` themselves; the formula value is
    returned unchanged there.
    """
    if not ck_over_tk > 0:
        raise ValueError(f"ck_over_tk must be positive, got {ck_over_tk}")
    _check_caps(alpha, beta)
    ratio = alpha / beta
    return math.log((ratio + 1.0) / (ck_over_tk + ratio)) / beta


def extreme_point_rhs(higher: Iterable[K2UTerm]) -> float:
    higher = list(higher)
    total = 0.0
    suffix = 1.0
    # walk backwards so each product over j >= i is built incrementally
    for h in reversed(higher):
        suffix *= h.beta * h.u + 1.0
        total += h.u * (h.alpha + h.beta) / suffix
    return 1.0 - total


def extreme_point_test(inst: K2UInstance) -> Verdict:
    rhs = extreme_point_rhs(inst.higher)
    ratio = inst.ck_over_tk
    if 0 < ratio <= rhs:
        return Verdict.accept(rhs)
    return Verdict.reject(rhs)


def limit_bound(alpha: float, beta: float, ck_over_tk: float | None = None) -> float:
    """Large-k limit of :func:`uniform_utilization_bound`, evaluated at k = 10^7.

    If ``ck_over_tk`` is given, the share of the bound left for the
    higher-priority tasks is returned instead.
    """
    bound = uniform_utilization_bound(LIMIT_K, alpha, beta)
    if ck_over_tk is None:
        return bound
    return bound - ck_over_tk
