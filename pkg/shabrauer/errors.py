# shabrauer/errors.py

"""Exception hierarchy shared by the library and the command line.

Every error carries the process exit code the CLI reports for it.
"""

from typing import Any, Tuple


class ShaBrauerError(Exception):
    """Base class for all errors raised by shabrauer."""

    exit_code = 1

    def __init__(self, message: str, *, witness: Tuple[Any, ...] = ()):
        super().__init__(message)
        self.message = message
        self.witness = tuple(witness)


# Schema errors (exit code 2)

class SchemaError(ShaBrauerError):
    """Malformed input document, unknown names or badly shaped matrices."""

    exit_code = 2

    def __init__(self, message: str, *, location: str = "", witness: Tuple[Any, ...] = ()):
        if location:
            message = f"{location}: {message}"
        super().__init__(message, witness=witness)
        self.location = location


class UnknownGenerator(SchemaError):
    """A relator word uses a symbol that is not a declared generator."""


# Mathematical precondition failures (exit code 3)

class PreconditionError(ShaBrauerError):
    exit_code = 3


class GroupAxiomError(PreconditionError):
    """A multiplication table violates a group axiom."""

    axiom = "group axiom"


class NotClosed(GroupAxiomError):
    axiom = "closure"


class NotAssociative(GroupAxiomError):
    axiom = "associativity"


class NoIdentity(GroupAxiomError):
    axiom = "identity"


class NoInverse(GroupAxiomError):
    axiom = "inverses"


class NotNormal(PreconditionError):
    pass


class NotAHomomorphism(PreconditionError):
    pass


class NotFinite(PreconditionError):
    pass


class NotALattice(PreconditionError):
    pass


class DegreeUnsupported(PreconditionError):
    pass


class DimensionMismatch(PreconditionError, ValueError):
    pass


class ModuleValidationError(PreconditionError):
    """A module or complex fails validation; the message names the generator."""


class InconsistentHypotheses(PreconditionError):
    pass


# Budget errors (exit code 4)

class BudgetExceeded(ShaBrauerError):
    exit_code = 4


class OrderBoundExceeded(BudgetExceeded):
    pass


# Internal consistency (exit code 1)

class MembershipFailure(ShaBrauerError):
    """A membership oracle rejected a class it must accept. Indicates a bug."""


class ComplexConsistencyError(ShaBrauerError):
    """A constructed differential does not square to zero. Indicates a bug or an invalid module."""
