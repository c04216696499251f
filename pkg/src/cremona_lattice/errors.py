"""Exception hierarchy shared by every module."""

from __future__ import annotations


class LatticeError(ValueError):
    """Base class for all errors raised by this package."""

    code = "lattice-error"


class BasisMismatch(LatticeError):
    code = "basis-mismatch"


class UnsupportedBasis(LatticeError):
    code = "unsupported-basis"


class IndexOutOfRange(LatticeError):
    code = "index-out-of-range"


class NonTerminating(LatticeError):
    code = "non-terminating"


class UnsupportedRank(LatticeError):
    code = "unsupported-rank"


class InvalidSystem(LatticeError):
    code = "invalid-system"


class NotNormalizable(LatticeError):
    code = "not-normalizable"


class ParityViolation(LatticeError):
    code = "parity-violation"


class NotInImage(LatticeError):
    code = "not-in-image"


class NotMinus4Sphere(LatticeError):
    code = "not-minus4-sphere"


class ParseError(LatticeError):
    code = "parse-error"
