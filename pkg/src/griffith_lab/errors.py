"""Exception hierarchy shared by all griffith_lab modules."""


class GriffithLabError(Exception):
    """Base class for all library errors."""


class OutOfDomain(GriffithLabError):
    pass


class AmbiguousPoint(GriffithLabError):
    """Raised when a point evaluation lands on a breakpoint or jump chord."""


class DomainMismatch(GriffithLabError):
    pass


class DimensionMismatch(GriffithLabError):
    pass


class NonFiniteIntegrand(GriffithLabError):
    pass


class NonFiniteEnergy(GriffithLabError):
    pass


class InvalidParams(GriffithLabError):
    pass


class InvalidKappa(GriffithLabError):
    pass


class MissingEvaluator(GriffithLabError):
    pass


class MissingPotential(GriffithLabError):
    pass


class DegenerateSample(GriffithLabError):
    pass


class EmptySelection(GriffithLabError):
    pass


class NotLowerValue(GriffithLabError):
    pass


class NotCertifiable(GriffithLabError):
    """Certification failed; carries the failing clause and a partial report."""

    def __init__(self, clause, report=None):
        super().__init__(clause)
        self.clause = clause
        self.report = report


class ConditionViolation(GriffithLabError):
    def __init__(self, failed, report=None):
        super().__init__(f"conditions failed: {', '.join(sorted(failed))}")
        self.failed = tuple(sorted(failed))
        self.report = report


class BoundarySupport(GriffithLabError):
    pass


class ExceptionalCollision(GriffithLabError):
    pass


class RecipeOutOfDomain(GriffithLabError):
    pass


class NotConvergent(GriffithLabError):
    pass


class InfeasibleGrid(GriffithLabError):
    pass


class SearchSpaceTooLarge(GriffithLabError):
    pass


class ConfigError(GriffithLabError):
    """Raised on malformed run configurations; message names the offending key."""
