"""Exception hierarchy.

Every error raised by the library derives from :class:`SpforgeError`.  The
CLI maps :class:`InputError` to exit code 2, :class:`InternalError` to 3 and
every other :class:`SpforgeError` to 1.
"""

from __future__ import annotations


class SpforgeError(Exception):
    """Base class for all library errors."""


class MathError(SpforgeError):
    """A well-formed request that has no mathematical answer."""


class InputError(SpforgeError):
    """Malformed or inconsistent user input."""


class InternalError(SpforgeError):
    """A construction that is proven to succeed failed; indicates a bug."""


# fields
class NotPrime(InputError):
    pass


class RootOfUnityMissing(MathError):
    pass


class Reducible(MathError):
    pass


class DivisionByZero(MathError):
    pass


class NotDivisor(MathError):
    pass


class NotCoprime(MathError):
    pass


# quivers
class NotSkewSymmetrizable(MathError):
    pass


class Has2Cycle(MathError):
    pass


# path algebra
class TowerMismatch(MathError):
    pass


class TruncMismatch(MathError):
    pass


class ArrowUnmapped(MathError):
    pass


class NotInvertible(MathError):
    pass


class InvalidPath(InputError):
    pass


# potentials
class NotCyclic(MathError):
    pass


class UnknownArrow(InputError):
    pass


class NotThroughK(MathError):
    pass


# spmut
class BadPairing(MathError):
    pass


class NoValidPairing(MathError):
    pass


class TwoCycleAtK(MathError):
    pass


class WitnessFailed(InternalError):
    pass


class EmptySubset(InputError):
    pass


# dreps
class NotSinkOrSource(MathError):
    pass


# unfold
class NotDivisible(MathError):
    pass


class DiagonalBlockNonzero(MathError):
    pass


class BadParams(InputError):
    pass


class NotAnUnfolding(MathError):
    pass


class UnexpectedlyClean(InternalError):
    pass


# nondeg
class Exhausted(MathError):
    pass


# cli
class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ValidationError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
