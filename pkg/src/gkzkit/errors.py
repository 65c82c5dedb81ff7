"""Exception hierarchy.

Every mathematical precondition failure derives from :class:`PreconditionError`
so the command-line front end can map it to a single exit code while still
printing the specific class name.
"""


class GKZError(Exception):
    """Base class for all errors raised by the package."""


class SchemaError(GKZError):
    """Input document does not match the expected structure."""


class PreconditionError(GKZError):
    """A mathematical precondition of an operation is violated."""


class RankDeficient(PreconditionError):
    pass


class NoHomogeneity(PreconditionError):
    pass


class DuplicatePoints(PreconditionError):
    pass


class BadIndexSet(PreconditionError):
    pass


class SingularComplement(PreconditionError):
    pass


class NotATriangulation(PreconditionError):
    pass


class Unsolvable(PreconditionError):
    pass


class NonGenericWeight(PreconditionError):
    pass


class OnWall(PreconditionError):
    pass


class ZeroElement(PreconditionError):
    pass


class TopRankNotOne(PreconditionError):
    pass


class NotNilpotent(PreconditionError):
    pass


class NonNormalizable(PreconditionError):
    pass


class NotUnimodular(PreconditionError):
    pass


class LatticeViolation(PreconditionError):
    pass


class InsufficientOrder(PreconditionError):
    pass


class BadLinearPart(PreconditionError):
    pass


class ConsistencyError(PreconditionError):
    """Relation basis rows are not relations among the given points."""


class TorsionError(PreconditionError):
    """A graded piece that should be a free module has torsion."""
