"""Polynomial-time schedulability tests from the k2U and k2Q frameworks."""

from .errors import (
    IterationCapExceeded,
    ModelMismatch,
    NegativeDiscriminant,
    NotConstrainedDeadline,
    ResampleCapExceeded,
    TaskError,
    UnknownTest,
)
from .experiment import run_sweep, run_test_suite
from .model import DeadlineModel, Task, TaskSet, assign_priorities, split_hp
from .verdict import Status, Verdict
from .workload import GenConfig, make_taskset

__all__ = [
    "DeadlineModel", "GenConfig", "IterationCapExceeded", "ModelMismatch",
    "NegativeDiscriminant", "NotConstrainedDeadline", "ResampleCapExceeded", "Status",
    "Task", "TaskError", "TaskSet", "UnknownTest", "Verdict", "assign_priorities",
    "make_taskset", "run_sweep", "run_test_suite", "split_hp",
]
