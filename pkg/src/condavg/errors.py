"""Exception types shared across the package.

Callers that drive long searches should catch :class:`ResourceLimitError`
(or the more specific :class:`BudgetExceededError`, which carries the best
bound found so far) and decide whether a truncated answer is acceptable.
All other errors indicate a violated precondition or malformed input.
"""


class CondavgError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(CondavgError):
    """Malformed configuration or input file (CLI exit code 2)."""


class GraphFormatError(ConfigError):
    """Invalid graph JSON; the message is anchored to an input line."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ResourceLimitError(CondavgError):
    """A search or enumeration exceeded its configured limit (CLI exit code 3)."""


class BudgetExceededError(ResourceLimitError):
    """Branch-and-bound ran out of node budget.

    Attributes
    ----------
    best_size : int
        Size of the best feasible solution found before the budget ran out
        (a valid lower bound on the true optimum).
    witness : frozenset
        A feasible solution achieving ``best_size``.
    """

    def __init__(self, message: str, best_size: int, witness: frozenset):
        super().__init__(message)
        self.best_size = best_size
        self.witness = witness


class EnumerationGuardError(ResourceLimitError):
    """A concept-class or pattern enumeration would exceed the hard guard."""


class RealizabilityError(CondavgError):
    """No concept in the class is consistent with the given labels."""


class UndefinedConditionalError(CondavgError):
    """Conditional average requested on a zero-mass neighborhood."""
