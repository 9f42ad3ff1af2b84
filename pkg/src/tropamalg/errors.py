"""Domain errors.

Every error carries a machine-readable ``kind`` (the class name) and a
``witness`` that the CLI serialises verbatim.
"""

from __future__ import annotations

from typing import Any


class TropError(Exception):
    """Base class for all domain errors raised by this package."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness

    @property
    def kind(self) -> str:
        return type(self).__name__

    def to_json(self) -> dict:
        return {"error": {"kind": self.kind, "message": str(self), "witness": self.witness}}


class MalformedInput(TropError):
    """A file parsed as JSON but does not have the expected shape."""


class OracleDisagreement(TropError):
    pass


# matroid axioms and lattice queries
class MissingTop(TropError):
    pass


class NotLoopless(TropError):
    pass


class NotIntersectionClosed(TropError):
    pass


class CoveringAxiomViolated(TropError):
    pass


class NotAFlat(TropError):
    pass


class LabelClash(TropError):
    pass


class RankZero(TropError):
    pass


class NotParallel(TropError):
    pass


class UnknownLabel(TropError):
    pass


# posets
class NotComparable(TropError):
    pass


class NotGraded(TropError):
    pass


class NotAPoset(TropError):
    pass


# fans
class MalformedFan(TropError):
    pass


class LocallyUnbalanced(TropError):
    pass


class NotACut(TropError):
    pass


class UnexpectedIndex(TropError):
    pass


class NotAFlag(TropError):
    pass


class NegativeWeight(TropError):
    pass


class NotDegreeOne(TropError):
    pass


class AxiomsFailDespitePositivity(TropError):
    pass


class GroundsetMismatch(TropError):
    pass


# amalgams
class RestrictionMismatch(TropError):
    pass


class GroundsetTooLarge(TropError):
    pass


# lattice maps and correspondences
class MalformedLatticeMap(TropError):
    pass


class NotWeak(TropError):
    pass


class NotCovering(TropError):
    pass


class NotSimple(TropError):
    pass


class MiddleMismatch(TropError):
    pass
