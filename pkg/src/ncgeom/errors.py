"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
2 parse, 3 precondition, 4 cap exceeded, 5 internal invariant breach.
"""

from __future__ import annotations


class NCGeomError(Exception):
    exit_code = 1


class ParseError(NCGeomError):
    exit_code = 2

    def __init__(self, message: str, *, path: str | None = None, position: str | None = None):
        where = ""
        if path:
            where = f"{path}: "
        if position:
            where += f"at {position}: "
        super().__init__(where + message)
        self.path = path
        self.position = position


class PreconditionError(NCGeomError):
    exit_code = 3


class AssociativityViolation(PreconditionError):
    def __init__(self, i: int, j: int, k: int, left, right):
        super().__init__(f"(e{i} e{j}) e{k} = {left} but e{i} (e{j} e{k}) = {right}")
        self.triple = (i, j, k)
        self.left = left
        self.right = right


class UnitViolation(PreconditionError):
    pass


class UnitInIdeal(PreconditionError):
    pass


class NotSubBimodule(PreconditionError):
    pass


class ConstraintViolation(PreconditionError):
    pass


class PredicateNotVerified(PreconditionError):
    pass


class NotMaximal(PreconditionError):
    pass


class NotLieClosed(PreconditionError):
    pass


class InvalidSplitting(PreconditionError):
    pass


class NotEquivariant(PreconditionError):
    pass


class CurvatureObstruction(PreconditionError):
    pass


class ConfluenceNotEstablished(PreconditionError):
    pass


class QuotientNotFinite(PreconditionError):
    pass


class DuplicateLeadingWord(PreconditionError):
    pass


class CapExceeded(NCGeomError):
    exit_code = 4


class StepCapExceeded(CapExceeded):
    pass


class InvariantBreach(NCGeomError):
    """An identity that must hold by theory failed; always a bug."""

    exit_code = 5


def ensure(condition: bool, message: str) -> None:
    if not condition:
        raise InvariantBreach(message)
