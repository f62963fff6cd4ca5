"""Exception hierarchy for tropglue.

Every error raised by the library derives from TropglueError and carries a
stable machine-readable ``category`` used by the CLI for exit reporting.
"""

from __future__ import annotations


class TropglueError(Exception):
    category = "error"


class DimensionMismatchError(TropglueError):
    category = "dimension-mismatch"


class EmptyPolytopeError(TropglueError):
    category = "empty-polytope"


class EmptyStratumError(TropglueError):
    category = "empty-stratum"


class PointNotInPolytopeError(TropglueError):
    category = "point-outside-polytope"


class InvalidQuotientError(TropglueError):
    category = "invalid-quotient"


class NoRayError(TropglueError):
    category = "no-infinite-ray"


class ComplexValidationError(TropglueError):
    category = "complex-validation"


class OutsideComplexError(TropglueError):
    category = "outside-complex"


class CurveStructureError(TropglueError):
    category = "curve-structure"


class CutError(TropglueError):
    category = "cut-error"


class StarInconsistencyError(TropglueError):
    category = "star-inconsistency"


class GluingError(TropglueError):
    category = "gluing-error"


class NoComponentError(TropglueError):
    category = "no-component"


class DiagramError(TropglueError):
    category = "diagram-error"


class UnsupportedRegimeError(TropglueError):
    category = "unsupported-regime"


class DegreeMismatchError(TropglueError):
    category = "degree-mismatch"


class BookkeepingError(TropglueError):
    category = "bookkeeping-error"


class BudgetError(TropglueError):
    category = "budget-error"


class ScenarioError(TropglueError):
    category = "scenario-error"
