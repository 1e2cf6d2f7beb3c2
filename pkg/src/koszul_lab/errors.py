"""Exception taxonomy shared by all modules.

Every hard limit (enumeration budgets, truncation degrees, graph caps)
raises instead of silently truncating, so a verdict is never quietly
weaker than reported.
"""

from __future__ import annotations


class KoszulLabError(Exception):
    """Base class for all errors raised by this package."""


class BudgetExceededError(KoszulLabError):
    """An enumeration or working dimension exceeded the configured cap."""

    def __init__(self, what: str, needed: int, cap: int):
        self.what = what
        self.needed = needed
        self.cap = cap
        super().__init__(f"budget exceeded: {what} needs {needed}, cap is {cap}")


class DegreeOverflowError(KoszulLabError):
    """A computation asked for data beyond the truncation degree."""

    def __init__(self, degree: int, truncation: int):
        self.degree = degree
        self.truncation = truncation
        super().__init__(f"degree {degree} beyond truncation N={truncation}")


class InvalidTwistError(KoszulLabError):
    """The twisting element t of a twisted extension violates t + t = 0."""


class InvalidParamsError(KoszulLabError):
    """Bad parameters for a preset or constructor."""


class MismatchedAlgebraError(KoszulLabError):
    """Two objects from different algebras (or sides) were combined."""


class HeartPropertyError(KoszulLabError):
    """The input filtration is not closed under J -> J + At.

    Carries the offending ideal's degree-1 subspace so reports can name it.
    """

    def __init__(self, subspace_rows):
        self.subspace_rows = subspace_rows
        super().__init__(
            "filtration violates closure under adding the twisting element "
            f"(offending ideal with degree-1 basis rows {subspace_rows})"
        )


class ScriptError(KoszulLabError):
    """Positioned script error with a machine-readable code.

    ``kind`` is "syntax" or "semantic"; ``code`` is a stable identifier such
    as "unexpected_token", "unknown_name", "wrong_arity",
    "non_quadratic_relator".
    """

    def __init__(self, kind: str, code: str, message: str, line: int, col: int):
        self.kind = kind
        self.code = code
        self.line = line
        self.col = col
        super().__init__(f"{kind} error [{code}] at {line}:{col}: {message}")
