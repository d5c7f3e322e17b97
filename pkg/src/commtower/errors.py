"""Exception hierarchy shared by all modules."""


class CommTowerError(Exception):
    """Base class for library errors."""


class InvalidInput(CommTowerError, ValueError):
    """An argument violates a documented precondition."""


class ResourceExhausted(CommTowerError):
    """A configured resource cap was hit.

    ``partial`` carries whatever best-so-far result the failing routine
    could certify before giving up (may be ``None``).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class IntervalBudgetExceeded(ResourceExhausted):
    def __init__(self, requested, cap, partial=None):
        super().__init__(f"interval budget exceeded: {requested} > {cap}", partial)
        self.requested = requested
        self.cap = cap


class DepthCapExceeded(ResourceExhausted):
    pass


class TimeBudgetExceeded(ResourceExhausted):
    pass
