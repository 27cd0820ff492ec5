"""Last-release k-point framework (quadratic forms and response-time bound).

Terms are listed in last-release order, earliest first.  Each carries
``alpha_i``, ``beta_i``, ``U_i`` and ``C_i``; the cross term that makes the
forms quadratic is ``sum_i alpha_i U_i * sum_{l >= i} beta_l C_l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import InapplicableCoefficients, NegativeDiscriminant
from .verdict import Verdict

UNBOUNDED = math.inf


class K2QTerm(NamedTuple):
    alpha: float
    beta: float
    u: float
    c: float


@dataclass(frozen=True)
class K2QInstance:
    higher: tuple[K2QTerm, ...]
    c_k: float
    t_k: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "higher", tuple(K2QTerm(*h) for h in self.higher))
        for h in self.higher:
            if not (h.alpha > 0 and h.beta > 0 and 0 < h.u <= 1 and h.c >= 0):
                raise ValueError(f"invalid term {h}")
        if not self.c_k > 0:
            raise ValueError(f"c_k must be positive, got {self.c_k}")
        if self.t_k is not None and not self.t_k > 0:
            raise ValueError(f"t_k must be positive, got {self.t_k}")


def _cross_term(higher: Sequence[K2QTerm]) -> float:
    suffix = 0.0
    cross = 0.0
    for h in reversed(higher):
        suffix += h.beta * h.c
        cross += h.alpha * h.u * suffix
    return cross


def quadratic_rhs(higher: Sequence[K2QTerm], t_k: float) -> float:
    """Right-hand side bound on C_k/t_k, without checking preconditions."""
    sum_au = sum(h.alpha * h.u for h in higher)
    sum_bc = sum(h.beta * h.c for h in higher)
    return 1.0 - sum_au - (sum_bc - _cross_term(higher)) / t_k


def quadratic_test(inst: K2QInstance) -> Verdict:
    if inst.t_k is None:
        raise ValueError("quadratic_test needs t_k")
    sum_au = sum(h.alpha * h.u for h in inst.higher)
    if sum_au > 1:
        return Verdict.inapplicable(f"sum alpha_i U_i = {sum_au} > 1")
    sum_bc = sum(h.beta * h.c for h in inst.higher)
    if sum_bc > inst.t_k:
        return Verdict.inapplicable(f"sum beta_i C_i = {sum_bc} > t_k = {inst.t_k}")
    return Verdict.check(inst.c_k / inst.t_k, quadratic_rhs(inst.higher, inst.t_k))


def worst_case_ordering(higher: Sequence[K2QTerm]) -> list[int]:
    """Indices ordered by beta_i C_i / (alpha_i U_i), non-increasing.

    Ties keep ascending index order.  This ordering minimises the quadratic
    bound and maximises the response-time bound.
    """
    return sorted(range(len(higher)),
                  key=lambda i: (-(higher[i].beta * higher[i].c) / (higher[i].alpha * higher[i].u), i))


def uniform_quadratic_rhs(utilizations: Iterable[float], alpha: float, beta: float) -> float:
    us = list(utilizations)
    total = sum(us)
    return 1.0 - (alpha + beta) * total + 0.5 * alpha * beta * (total * total + sum(u * u for u in us))


def uniform_quadratic_rhs_nested(utilizations: Iterable[float], alpha: float, beta: float) -> float:
    """Same bound as :func:`uniform_quadratic_rhs`, written with the nested suffix sums."""
    us = list(utilizations)
    suffix = 0.0
    cross = 0.0
    for u in reversed(us):
        suffix += u
        cross += u * suffix
    return 1.0 - (alpha + beta) * sum(us) + alpha * beta * cross


def uniform_quadratic_test(inst: K2QInstance, alpha: float, beta: float) -> Verdict:
    if inst.t_k is None:
        raise ValueError("uniform_quadratic_test needs t_k")
    for i, h in enumerate(inst.higher):
        if h.alpha > alpha:
            return Verdict.inapplicable(f"term {i}: alpha_i {h.alpha} > {alpha}")
        if h.beta * h.c > beta * h.u * inst.t_k:
            return Verdict.inapplicable(f"term {i}: beta_i C_i exceeds beta U_i t_k")
    total = sum(h.u for h in inst.higher)
    if alpha * total > 1 or beta * total > 1:
        return Verdict.inapplicable(f"sum U_i = {total} too large for caps ({alpha}, {beta})")
    rhs = uniform_quadratic_rhs((h.u for h in inst.higher), alpha, beta)
    return Verdict.check(inst.c_k / inst.t_k, rhs)


def utilization_sum_bound(ck_over_tk: float, alpha: float, beta: float, k: int) -> float:
    """Largest ``sum(U_i)`` of the k-1 higher-priority tasks that keeps the test true."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    ratio = k / (k - 1)
    disc = (alpha + beta) ** 2 - 2 * alpha * beta * (1 - ck_over_tk) * ratio
    if disc < 0:
        raise NegativeDiscriminant(f"discriminant {disc} < 0 for k={k}, C_k/t_k={ck_over_tk}")
    return (alpha + beta - math.sqrt(disc)) / (alpha * beta) / ratio


def utilization_sum_bound_limit(ck_over_tk: float, alpha: float, beta: float) -> float:
    disc = alpha * alpha + beta * beta + 2 * alpha * beta * ck_over_tk
    if disc < 0:
        raise NegativeDiscriminant(f"discriminant {disc} < 0")
    return (alpha + beta - math.sqrt(disc)) / (alpha * beta)


def combined_utilization_bound(alpha: float, beta: float, k: int) -> float:
    """Bound on ``C_k/t_k + sum(U_i)``; requires alpha + beta >= 1."""
    if alpha + beta < 1:
        raise InapplicableCoefficients(f"alpha + beta = {alpha + beta} < 1")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    s = alpha + beta
    sq = alpha * alpha + beta * beta
    if sq > 1 and k > (s * s - 1) / (sq - 1):
        disc = s * s - 2 * alpha * beta * k / (k - 1)
        return (k - 1) / k * (s - math.sqrt(disc)) / (alpha * beta)
    return 1.0 + (k - 1) * ((s - 1) - 0.5 * s * s + 0.5) / (k * alpha * beta)


def combined_utilization_bound_limit(alpha: float, beta: float) -> float:
    if alpha + beta < 1:
        raise InapplicableCoefficients(f"alpha + beta = {alpha + beta} < 1")
    sq = alpha * alpha + beta * beta
    if sq > 1:
        return (alpha + beta - math.sqrt(sq)) / (alpha * beta)
    return 1.0 - (alpha + beta - 1) ** 2 / (2 * alpha * beta)


def response_bound(inst: K2QInstance) -> float:
    """Upper bound on the time to finish C_k, or ``UNBOUNDED``.

    ``inst.t_k`` is ignored.
    """
    sum_au = sum(h.alpha * h.u for h in inst.higher)
    if sum_au >= 1:
        return UNBOUNDED
    sum_bc = sum(h.beta * h.c for h in inst.higher)
    return (inst.c_k + sum_bc - _cross_term(inst.higher)) / (1.0 - sum_au)
