"""Exception hierarchy shared by every kpa module."""

from __future__ import annotations


class KPAError(Exception):
    """Base class for all library errors."""


class InvalidRingSpec(KPAError):
    pass


class SquareNotBijective(KPAError):
    def __init__(self, witness, reason: str = ""):
        self.witness = witness
        super().__init__(f"square set not bijective at 2-path {witness!r}" + (f": {reason}" if reason else ""))


class AssociativityFailure(KPAError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"associativity (hexagon) condition fails for edge triple {witness!r}")


class DanglingEdge(KPAError):
    def __init__(self, edge_id: str, reason: str = "endpoint or color invalid"):
        self.edge_id = edge_id
        super().__init__(f"edge {edge_id!r}: {reason}")


class NotComposable(KPAError):
    pass


class BadRange(KPAError):
    pass


class TooLarge(KPAError):
    pass


class FMapUndefined(KPAError):
    def __init__(self, edge_id: str):
        self.edge_id = edge_id
        super().__init__(f"no unique color-2 edge f with s(f) = r({edge_id})")


class GraphMismatch(KPAError):
    pass


class RingMismatch(KPAError):
    pass


class SourcesPresent(KPAError):
    def __init__(self, vertex: str | None = None, color: int | None = None):
        self.vertex = vertex
        self.color = color
        msg = "graph has sources"
        if vertex is not None:
            msg += f": vertex {vertex!r} receives no edge of color {color}"
        super().__init__(msg)


class LevelTooLow(KPAError):
    pass


class LevelExplosion(KPAError):
    pass


class ZeroElement(KPAError):
    pass


class NotUniformLevel(KPAError):
    pass


class BoundExceeded(KPAError):
    def __init__(self, bound):
        self.bound = bound
        super().__init__(f"no separating path found with degree <= {bound}")


class EqualDegrees(KPAError):
    pass


class NotSatHer(KPAError):
    pass


class NonPrincipalUnsupported(KPAError):
    pass


class NotVerifiedWitness(KPAError):
    pass


class ParseError(KPAError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" (line {line}, col {col})" if col is not None else f" (line {line})"
        super().__init__(message + where)


class UnknownEdge(KPAError):
    pass


class InternalConsistencyError(KPAError):
    pass
