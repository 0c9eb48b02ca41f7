"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class FBLError(Exception):
    """Base class for all package errors."""


class LatticeError(FBLError, ValueError):
    pass


class CyclicOrder(LatticeError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"order relation has a cycle through {pair[0]!r} and {pair[1]!r}")


class NotALattice(LatticeError):
    def __init__(self, pair, operation):
        self.pair = pair
        self.operation = operation
        super().__init__(f"elements {pair[0]!r}, {pair[1]!r} have no {operation}")


class NotDistributive(LatticeError):
    def __init__(self, witness):
        self.witness = witness
        x, y, z = witness
        super().__init__(f"distributivity fails at x={x!r}, y={y!r}, z={z!r}")


class NotIrreducible(LatticeError):
    pass


class NotAHomomorphism(LatticeError):
    pass


class OrderViolation(LatticeError):
    pass


class TrivialLattice(LatticeError):
    pass


class LatticeMismatch(FBLError, ValueError):
    pass


class NotADualPoint(FBLError, ValueError):
    pass


class CoordinateOrderViolation(NotADualPoint):
    pass


class RangeViolation(NotADualPoint):
    pass


class EmptySeparatingSet(FBLError, ValueError):
    pass


class UnknownName(FBLError, KeyError):
    pass


class MissingParam(FBLError, ValueError):
    pass


class ParamError(FBLError, ValueError):
    pass


class UnknownScenario(FBLError, KeyError):
    pass


class DominationFailed(FBLError):
    """Raised when a candidate domination certificate cannot be established.

    ``point`` is a dual point where the domination is violated, or ``None``
    when the search budget ran out before a decision was reached.
    """

    def __init__(self, message, point=None, excess=None):
        self.point = point
        self.excess = excess
        super().__init__(message)
