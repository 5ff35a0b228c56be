"""Exception hierarchy shared by every module.

Each class carries a ``kind`` string used by the command line to build its
machine-readable error payload.
"""


class BMCError(Exception):
    kind = "error"


class RingMismatch(BMCError):
    kind = "RingMismatch"


class FieldMismatch(BMCError):
    kind = "FieldMismatch"


class SingularMatrix(BMCError):
    kind = "SingularMatrix"


class ResourceLimit(BMCError):
    kind = "ResourceLimit"


class ParseError(BMCError):
    kind = "ParseError"


class NotMonomial(BMCError):
    kind = "NotMonomial"


class NotHomogeneous(BMCError):
    kind = "NotHomogeneous"


class ContainmentViolated(BMCError):
    kind = "ContainmentViolated"


class DimensionExceeded(BMCError):
    kind = "DimensionExceeded"


class Unsplittable(BMCError):
    kind = "Unsplittable"


class NonIntegralRank(BMCError):
    kind = "NonIntegralRank"


class NotRegular(BMCError):
    kind = "NotRegular"


class NotTorsionFree(BMCError):
    kind = "NotTorsionFree"


class NotCyclic(BMCError):
    kind = "NotCyclic"


class EqualCharacters(BMCError):
    kind = "EqualCharacters"


class NotARepresentation(BMCError):
    kind = "NotARepresentation"


class SizeLimit(BMCError):
    kind = "SizeLimit"


class OutOfRange(BMCError):
    kind = "OutOfRange"


class RankMismatch(BMCError):
    kind = "RankMismatch"


class NotUnitriangular(BMCError):
    kind = "NotUnitriangular"


class NonIntegerSolution(BMCError):
    kind = "NonIntegerSolution"


class AlphabetMismatch(BMCError):
    kind = "AlphabetMismatch"
