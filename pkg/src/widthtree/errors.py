"""Exception hierarchy.

Every domain error derives from :class:`WidthTreeError`; the class name is
what the command line reports, so names are part of the public surface.
"""


class WidthTreeError(Exception):
    """Base class for all domain errors raised by this package."""

    @property
    def name(self) -> str:
        return type(self).__name__


# -- core ------------------------------------------------------------------

class NotATree(WidthTreeError):
    pass


class LabelMismatch(WidthTreeError):
    """Labels do not cover exactly the vertices and edges of the tree."""


class LabelBelowMinusOne(WidthTreeError):
    pass


class BoundaryMismatch(WidthTreeError):
    def __init__(self, vertex, vertex_label, edge_label):
        self.vertex = vertex
        super().__init__(
            f"boundary vertex {vertex!r} has label {vertex_label} "
            f"but its edge has label {edge_label}")


class CutViolation(WidthTreeError):
    def __init__(self, vertex, side, label, required):
        self.vertex = vertex
        self.side = side
        super().__init__(
            f"vertex {vertex!r} has label {label} < {required}, the sum of "
            f"nonnegative {side} edge labels")


class UnknownEdge(WidthTreeError):
    pass


# -- invariants --------------------------------------------------------------

class NotALeaf(WidthTreeError):
    pass


class BoundaryLeaf(WidthTreeError):
    pass


class HasBoundary(WidthTreeError):
    pass


class NotCoherentPath(WidthTreeError):
    pass


class LabelTooSmall(WidthTreeError):
    pass


class NotSlim(WidthTreeError):
    pass


# -- flows -------------------------------------------------------------------

class NotPositive(WidthTreeError):
    pass


class NotProductless(WidthTreeError):
    pass


class NotConservative(WidthTreeError):
    pass


class InvalidCut(WidthTreeError):
    pass


class TooLarge(WidthTreeError):
    pass


class NoValidCut(WidthTreeError):
    pass


class InternalError(WidthTreeError):
    """A step that cannot fail on valid input failed anyway."""


# -- tangle ------------------------------------------------------------------

class OddPositivePunctures(WidthTreeError):
    pass


class InfeasiblePod(WidthTreeError):
    pass


class InvalidTangle(WidthTreeError):
    pass


class InvalidBlueprint(WidthTreeError):
    pass


class OpenBoundary(WidthTreeError):
    pass


class Stuck(WidthTreeError):
    pass


# -- harness -----------------------------------------------------------------

class GuardExceeded(WidthTreeError):
    pass


class BadParams(WidthTreeError):
    pass


# -- documents ---------------------------------------------------------------

class DocumentSyntaxError(WidthTreeError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class SemanticError(WidthTreeError):
    """A well-formed document describes an invalid object."""

    def __init__(self, cause: WidthTreeError):
        self.cause = cause
        super().__init__(f"{cause.name}: {cause}")
