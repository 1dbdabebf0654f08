"""Exception hierarchy.

Every domain error derives from :class:`EquiflowError` so the CLI can map
any of them to exit code 2.
"""


class EquiflowError(Exception):
    """Base class for all errors raised by equiflow."""


# group_core
class MalformedTable(EquiflowError):
    pass


class NoIdentity(EquiflowError):
    pass


class NoInverse(EquiflowError):
    pass


class NotAssociative(EquiflowError):
    pass


class GroupTooLarge(EquiflowError):
    pass


class NotASubgroup(EquiflowError):
    pass


# gcomplex
class EmptyComplex(EquiflowError):
    pass


class DuplicateVertexInSimplex(EquiflowError):
    pass


class InvalidVertex(EquiflowError):
    pass


class MalformedAction(EquiflowError):
    pass


class NotSimplicial(EquiflowError):
    pass


class NotHomomorphism(EquiflowError):
    pass


class RegularizationFailed(EquiflowError):
    pass


class SimplexNotInComplex(EquiflowError):
    pass


class UnknownCatalogName(EquiflowError):
    pass


class NotFaceClosed(EquiflowError):
    pass


# stratify / pathfield
class IrregularAction(EquiflowError):
    pass


class UnknownIsotropy(EquiflowError):
    pass


class NotInvariant(EquiflowError):
    pass


class EmptyFixedSet(EquiflowError):
    pass


# cli
class ParseError(EquiflowError):
    pass


class SchemaError(EquiflowError):
    pass
