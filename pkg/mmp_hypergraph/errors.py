class MMPError(Exception):
    """Base class for every error raised by mmp_hypergraph."""


class MMPParseError(MMPError):
    def __init__(self, position: int, reason: str):
        self.position = position
        self.reason = reason
        super().__init__(f"position {position}: {reason}")


class ComponentParseError(MMPError):
    pass


class HypergraphError(MMPError):
    pass


class CoordinatizationError(MMPError):
    pass


class InfeasibleLPError(MMPError):
    pass


class BudgetExceededError(MMPError):
    """A bounded search ran out of nodes; the answer is indeterminate."""

    def __init__(self, operation: str, budget: int):
        self.operation = operation
        self.budget = budget
        super().__init__(f"{operation}: search budget of {budget} nodes exceeded")
