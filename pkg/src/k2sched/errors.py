"""Exception hierarchy shared by every analysis module."""


class TaskError(ValueError):
    """A task violates the sporadic task invariants."""


class NonPositivePeriod(TaskError):
    pass


class NonPositiveDeadline(TaskError):
    pass


class NegativeWcet(TaskError):
    pass


class UtilizationExceedsOne(TaskError):
    pass


class ModelMismatch(ValueError):
    """A test was asked to analyse a task set outside its deadline model."""


class NotConstrainedDeadline(ModelMismatch):
    pass


class UnknownTest(ValueError):
    pass


class InapplicableCoefficients(ValueError):
    pass


class NegativeDiscriminant(ValueError):
    pass


class IterationCapExceeded(RuntimeError):
    pass


class ResampleCapExceeded(RuntimeError):
    pass
