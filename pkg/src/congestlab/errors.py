"""Exception hierarchy.

Two families matter to callers: ``InputError`` for malformed values (bad
files, out-of-range parameters) and ``PreconditionError`` for well-formed
inputs that an operation does not accept. The CLI maps them to exit codes
2 and 3 respectively.
"""

from __future__ import annotations


class CongestionError(Exception):
    """Base class for every error raised by this package."""


class InputError(CongestionError, ValueError):
    """A value is malformed or outside its documented range."""


class PreconditionError(CongestionError):
    """A well-formed input violates an operation's precondition."""


class InvalidGame(InputError):
    pass


class InvalidState(InputError):
    pass


class EpsilonOutOfRange(InputError):
    pass


class AlphaOutOfRange(InputError):
    pass


class MixedSignTable(PreconditionError):
    """A delay table takes both negative and non-negative values."""


class NotPositiveGame(PreconditionError):
    pass


class NotNegativeGame(PreconditionError):
    pass


class NotSymmetric(PreconditionError):
    pass


class NotAlphaBounded(PreconditionError):
    pass


class AmbiguousAssignment(PreconditionError):
    """A tag edge is carried by zero or several players."""


class BackMapMismatch(PreconditionError):
    pass


class StateSpaceTooLarge(PreconditionError):
    pass


class InfeasibleSpec(PreconditionError):
    pass
