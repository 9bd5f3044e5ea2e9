"""Exception hierarchy shared by all solvers.

The CLI maps these onto exit codes (DomainError -> 3, NumericalError -> 4),
so library code should raise them rather than bare ValueError/RuntimeError
for anything a user can trigger.
"""


class DomainError(ValueError):
    """Inputs violate a physical or geometric precondition."""


class NumericalError(ArithmeticError):
    """A solver failed: singular system, lost bracket, invalid decomposition."""


class StateError(RuntimeError):
    """An object was used before a required solve step populated it."""
