from __future__ import annotations

import enum
from dataclasses import dataclass


class Status(enum.Enum):
    SCHEDULABLE = "schedulable"
    NOT_PROVEN = "not-proven"
    INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a sufficient test.

    A sufficient test never proves a task unschedulable, so the negative
    outcome is ``NOT_PROVEN``.  ``INAPPLICABLE`` means a precondition of the
    test failed before the bound was evaluated.  ``bound`` carries the
    evaluated right-hand side (or response time, for response-time tests).
    """

    status: Status
    bound: float | None = None
    reason: str = ""

    @property
    def schedulable(self) -> bool:
        return self.status is Status.SCHEDULABLE

    @classmethod
    def check(cls, lhs: float, rhs: float) -> Verdict:
        # plain comparison: no tolerance may widen the acceptance region
        status = Status.SCHEDULABLE if lhs <= rhs else Status.NOT_PROVEN
        return cls(status, rhs)

    @classmethod
    def accept(cls, bound: float | None = None, reason: str = "") -> Verdict:
        return cls(Status.SCHEDULABLE, bound, reason)

    @classmethod
    def reject(cls, bound: float | None = None, reason: str = "") -> Verdict:
        return cls(Status.NOT_PROVEN, bound, reason)

    @classmethod
    def inapplicable(cls, reason: str) -> Verdict:
        return cls(Status.INAPPLICABLE, None, reason)
