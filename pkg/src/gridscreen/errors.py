"""Exception types raised across the screening engine."""

from __future__ import annotations


class GridScreenError(Exception):
    """Base class for all errors raised by this package."""


# --- ingestion ---------------------------------------------------------------


class CdfError(GridScreenError):
    """Malformed IEEE common-data-format input."""


class MissingSectionTerminator(CdfError):
    def __init__(self, section: str):
        self.section = section
        super().__init__(f"{section} section not terminated before end of file")


class MalformedCard(CdfError):
    def __init__(self, line_no: int, reason: str = ""):
        self.line_no = line_no
        msg = f"malformed card at line {line_no}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class DuplicateBus(GridScreenError):
    def __init__(self, bus_id: int):
        self.bus_id = bus_id
        super().__init__(f"duplicate bus id {bus_id}")


class DanglingBranch(GridScreenError):
    def __init__(self, bus_id: int):
        self.bus_id = bus_id
        super().__init__(f"branch references unknown bus {bus_id}")


class SchemaViolation(GridScreenError):
    def __init__(self, path: str, reason: str = ""):
        self.path = path
        msg = f"schema violation at {path!r}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


# --- validation --------------------------------------------------------------


class InvalidNetwork(GridScreenError):
    """A record-level invariant does not hold."""


class ZeroReactance(InvalidNetwork):
    def __init__(self, branch_key: tuple[int, int, int]):
        self.branch_key = branch_key
        f, t, c = branch_key
        super().__init__(f"branch {f}-{t} ckt {c} has zero reactance")


class NoSlackBus(InvalidNetwork):
    def __init__(self) -> None:
        super().__init__("network has no slack bus")


class DuplicateBranchKey(InvalidNetwork):
    def __init__(self, branch_key: tuple[int, int, int]):
        self.branch_key = branch_key
        f, t, c = branch_key
        super().__init__(f"duplicate branch {f}-{t} ckt {c}")


# --- graph -------------------------------------------------------------------


class UnknownEdge(GridScreenError):
    def __init__(self, edge_id: int):
        self.edge_id = edge_id
        super().__init__(f"unknown edge id {edge_id}")


class VertexOutOfRange(GridScreenError):
    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} out of range")


# --- topology ----------------------------------------------------------------


class EndpointNotInGraph(GridScreenError):
    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(f"endpoint {vertex} not in graph")


class EmptyIsland(GridScreenError):
    def __init__(self) -> None:
        super().__init__("cannot classify an empty island")


# --- power flow --------------------------------------------------------------


class BridgeOutage(GridScreenError):
    """Outage distribution factors are undefined for a bridge; re-solve per island instead."""

    def __init__(self, edge_id: int):
        self.edge_id = edge_id
        super().__init__(f"edge {edge_id} is a bridge; distribution factors undefined")


class BaseCaseDiverged(GridScreenError):
    def __init__(self, reason: str = ""):
        msg = "base-case power flow is singular; nothing to screen"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


# --- reporting ---------------------------------------------------------------


class IoFailure(GridScreenError):
    def __init__(self, destination: str, cause: Exception):
        self.destination = destination
        super().__init__(f"cannot write {destination}: {cause}")
