"""Sporadic task model, priority assignment and the hp1/hp2 split."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Sequence

from .errors import (
    ModelMismatch,
    NegativeWcet,
    NonPositiveDeadline,
    NonPositivePeriod,
    UtilizationExceedsOne,
)


@dataclass(frozen=True)
class Task:
    id: int
    wcet: float
    period: float
    deadline: float

    @property
    def utilization(self) -> float:
        return self.wcet / self.period

    @property
    def density(self) -> float:
        return self.wcet / self.deadline


def validate(task: Task) -> None:
    """Raise a :class:`~k2sched.errors.TaskError` subclass if ``task`` is not admissible."""
    if task.period <= 0:
        raise NonPositivePeriod(f"task {task.id}: period {task.period} <= 0")
    if task.deadline <= 0:
        raise NonPositiveDeadline(f"task {task.id}: deadline {task.deadline} <= 0")
    if task.wcet < 0:
        raise NegativeWcet(f"task {task.id}: wcet {task.wcet} < 0")
    if task.utilization > 1:
        raise UtilizationExceedsOne(
            f"task {task.id}: utilization {task.utilization} > 1")


class DeadlineModel(str, enum.Enum):
    IMPLICIT = "implicit"
    CONSTRAINED = "constrained"
    ARBITRARY = "arbitrary"


def classify(tasks: Iterable[Task]) -> DeadlineModel:
    tasks = list(tasks)
    if all(t.deadline == t.period for t in tasks):
        return DeadlineModel.IMPLICIT
    if all(t.deadline <= t.period for t in tasks):
        return DeadlineModel.CONSTRAINED
    return DeadlineModel.ARBITRARY


@dataclass(frozen=True)
class TaskSet:
    """Tasks in priority order (index 0 is the highest priority)."""

    tasks: tuple[Task, ...]
    model: DeadlineModel

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        object.__setattr__(self, "model", DeadlineModel(self.model))
        ids = [t.id for t in self.tasks]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate task ids in {ids}")
        for t in self.tasks:
            validate(t)
        actual = classify(self.tasks)
        allowed = {
            DeadlineModel.IMPLICIT: {DeadlineModel.IMPLICIT},
            DeadlineModel.CONSTRAINED: {DeadlineModel.IMPLICIT, DeadlineModel.CONSTRAINED},
            DeadlineModel.ARBITRARY: set(DeadlineModel),
        }[self.model]
        if actual not in allowed:
            raise ModelMismatch(f"task set is {actual.value}, labelled {self.model.value}")

    @classmethod
    def of(cls, tasks: Iterable[Task], model: DeadlineModel | str | None = None) -> TaskSet:
        tasks = tuple(tasks)
        return cls(tasks, classify(tasks) if model is None else DeadlineModel(model))

    @classmethod
    def from_tuples(cls, rows: Iterable[Sequence[float]], model=None) -> TaskSet:
        """Build from ``(C, T)`` or ``(C, T, D)`` rows; ids follow row order."""
        tasks = []
        for i, row in enumerate(rows):
            c, t, *rest = row
            tasks.append(Task(i, float(c), float(t), float(rest[0]) if rest else float(t)))
        return cls.of(tasks, model)

    def __len__(self) -> int:
        return len(self.tasks)

    def __iter__(self) -> Iterator[Task]:
        return iter(self.tasks)

    def __getitem__(self, k: int) -> Task:
        return self.tasks[k]

    def higher(self, k: int) -> tuple[Task, ...]:
        return self.tasks[:k]

    @property
    def utilization(self) -> float:
        return sum(t.utilization for t in self.tasks)


@dataclass(frozen=True)
class HpPartition:
    hp1: tuple[Task, ...] = field(default_factory=tuple)
    hp2: tuple[Task, ...] = field(default_factory=tuple)


class Policy(str, enum.Enum):
    RM = "RM"
    DM = "DM"


def assign_priorities(ts: TaskSet, policy: Policy | str) -> TaskSet:
    policy = Policy(policy)
    if policy is Policy.RM:
        key = lambda t: (t.period, t.id)
    else:
        key = lambda t: (t.deadline, t.id)
    return TaskSet(tuple(sorted(ts.tasks, key=key)), ts.model)


def split_hp(ts: TaskSet, k: int) -> HpPartition:
    """Split the tasks above priority ``k`` by whether T_i < D_k."""
    if not 0 <= k < len(ts):
        raise IndexError(f"priority index {k} out of range for {len(ts)} tasks")
    d_k = ts[k].deadline
    hp = ts.higher(k)
    return HpPartition(tuple(t for t in hp if t.period < d_k),
                       tuple(t for t in hp if t.period >= d_k))


# -- line-oriented JSON format -------------------------------------------------

def dumps(ts: TaskSet) -> str:
    tasks = [{"id": t.id, "c": t.wcet, "t": t.period, "d": t.deadline} for t in ts]
    return json.dumps({"model": ts.model.value, "tasks": tasks}, separators=(",", ":"))


def loads(line: str) -> TaskSet:
    obj = json.loads(line)
    tasks = [Task(int(row.get("id", i)), float(row["c"]), float(row["t"]), float(row["d"]))
             for i, row in enumerate(obj["tasks"])]
    return TaskSet(tuple(tasks), obj.get("model") or classify(tasks))


def write_tasksets(tasksets: Iterable[TaskSet], fp: IO[str]) -> None:
    for ts in tasksets:
        fp.write(dumps(ts) + "\n")


def read_tasksets(fp: IO[str]) -> Iterator[TaskSet]:
    for line in fp:
        if line.strip():
            yield loads(line)
