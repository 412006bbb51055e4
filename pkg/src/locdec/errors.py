"""Exception hierarchy shared by every module of the package."""


class LocdecError(Exception):
    """Base class; the CLI maps every subclass to exit code 2."""


class GraphError(LocdecError, ValueError):
    """A labelled graph or view violates its structural invariants."""


class LabelDecodeError(LocdecError, ValueError):
    pass


class ConfigurationError(LocdecError):
    """Missing identifiers or oracle labels that an algorithm requires."""


class CapabilityError(LocdecError):
    """An oracle lacks a capability (e.g. inversion on a small oracle)."""


class InfeasibleStrategyError(LocdecError):
    pass


class BudgetExceeded(LocdecError):
    """A Turing machine did not halt within the configured step budget."""

    def __init__(self, message: str, budget: int):
        super().__init__(message)
        self.budget = budget


class CapExceeded(LocdecError):
    """An enumeration hit its cap; ``count`` is how far it got (or would go)."""

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count


class ImpurityError(LocdecError):
    """A decider returned different outputs on the same view."""
