"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class PetriDetectError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(PetriDetectError, ValueError):
    """A net is malformed or an id does not belong to it."""


class FiringError(PetriDetectError):
    """A transition was fired at a marking where it is not enabled.

    ``index`` is the position of the offending step when firing a sequence.
    """

    def __init__(self, message: str, transition: str, index: int | None = None):
        super().__init__(message)
        self.transition = transition
        self.index = index


class DomainError(PetriDetectError, ValueError):
    """An argument lies outside the domain of an operation."""


class UnsupportedStructureError(PetriDetectError):
    """The net violates a structural precondition (cyclic unobservable subnet)."""


class BudgetExceededError(PetriDetectError):
    """An exhaustive construction went over its budget.

    For reachability this is the boundedness guard: the net is possibly
    unbounded, or simply larger than the caller allowed.
    """

    def __init__(self, what: str, budget: int):
        super().__init__(f"{what} exceeded budget of {budget} (possibly unbounded / over budget)")
        self.what = what
        self.budget = budget


class InconclusiveError(PetriDetectError):
    """A check was asked of a truncated construction."""


class InapplicableAssumptionsError(PetriDetectError):
    """The net violates the standing assumptions the verdicts rely on."""

    def __init__(self, violations: list[str]):
        super().__init__("inapplicable assumptions: " + "; ".join(violations))
        self.violations = list(violations)


class ParseError(PetriDetectError, ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
