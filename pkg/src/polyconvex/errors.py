"""Exception types raised by the library, collected in one place."""

from .polyhedra import EmptySetError
from .rational_lp import DimensionError, InfinityArithmeticError, InternalError, ParseError


class NotInSet(ValueError):
    """A base point does not belong to the set it was supposed to lie in."""


class NotInDomain(ValueError):
    pass


class NotExtremal(ValueError):
    """The origin is interior to the difference of the two sets."""


class NotSolid(ValueError):
    """The difference of the two sets has empty interior."""


class EmptyIntersection(ValueError):
    pass


class EmptyCommonDomain(ValueError):
    pass


class InfeasibleComposition(ValueError):
    pass


class ImproperResult(ValueError):
    """A construction produced a function taking the value minus infinity."""


class ImproperFunction(ValueError):
    pass


class NotInGraph(ValueError):
    pass


class NotADecomposition(ValueError):
    pass


class BadIntermediatePoint(ValueError):
    pass


class NotInBothGraphs(ValueError):
    pass


class MinusInfinityDetected(ValueError):
    pass


class NotASolution(ValueError):
    pass


class MonotonicityViolation(ValueError):
    pass


class NotASubgradient(ValueError):
    pass


class SchemaError(ValueError):
    """An instance file parsed but does not match the schema of its kind."""


class EmptyDomainIntersection(ValueError):
    """Two functions have disjoint domains, so their sum is identically +inf."""


__all__ = [
    "BadIntermediatePoint",
    "DimensionError",
    "EmptyCommonDomain",
    "EmptyDomainIntersection",
    "EmptyIntersection",
    "EmptySetError",
    "ImproperFunction",
    "ImproperResult",
    "InfeasibleComposition",
    "InfinityArithmeticError",
    "InternalError",
    "MinusInfinityDetected",
    "MonotonicityViolation",
    "NotADecomposition",
    "NotASolution",
    "NotASubgradient",
    "NotExtremal",
    "NotInBothGraphs",
    "NotInDomain",
    "NotInGraph",
    "NotInSet",
    "NotSolid",
    "ParseError",
    "SchemaError",
]
