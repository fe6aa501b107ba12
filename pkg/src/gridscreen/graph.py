"""Immutable base multigraph plus zero-copy per-outage overlay views.

A screening sweep derives one :class:`ContingencyView` per outage from a
shared :class:`BaseGraph`. The view stores only the removed edge ids, so
deriving it costs O(|outage|) regardless of system size, and the base is
never touched.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .errors import UnknownEdge, VertexOutOfRange
from .network import BranchStatus, BusType, ValidatedNetwork


class Edge(NamedTuple):
    u: int  # internal from-vertex (flow sign reference)
    v: int  # internal to-vertex
    edge_id: int
    reactance: float
    rating: float  # MVA, 0 = unlimited


class VertexAttrs(NamedTuple):
    gen_mw: float
    load_mw: float
    bus_type: BusType
    voltage_mag: float


@dataclass(frozen=True)
class BaseGraph:
    vertex_count: int
    adjacency: tuple  # per vertex: tuple of (neighbor, edge_id), ascending edge id
    edges: tuple  # tuple[Edge]
    vertex_attrs: tuple  # tuple[VertexAttrs]
    slack_vertex: int
    base_mva: float
    edge_branch_index: tuple = field(default=())  # edge id -> index into network.branches

    def neighbors(self, vertex: int) -> tuple:
        if not 0 <= vertex < self.vertex_count:
            raise VertexOutOfRange(vertex)
        return self.adjacency[vertex]

    def canonical_bytes(self) -> bytes:
        """Stable serialized form, used to prove the base is never mutated."""
        doc = {
            "vertex_count": self.vertex_count,
            "adjacency": [list(map(list, adj)) for adj in self.adjacency],
            "edges": [list(e) for e in self.edges],
            "vertex_attrs": [[a.gen_mw, a.load_mw, a.bus_type.value, a.voltage_mag] for a in self.vertex_attrs],
            "slack_vertex": self.slack_vertex,
            "base_mva": self.base_mva,
        }
        return json.dumps(doc, sort_keys=True).encode()


@dataclass(frozen=True)
class ContingencyView:
    """A read-only overlay of a :class:`BaseGraph` with some edges outaged."""

    base: BaseGraph
    removed_edges: frozenset

    def neighbors(self, vertex: int) -> list:
        return view_neighbors(self, vertex)


def build_base_graph(validated: ValidatedNetwork) -> BaseGraph:
    """One vertex per bus, one undirected edge per in-service branch.

    Edge ids are contiguous, assigned in branch-list order over in-service
    branches; out-of-service branches never materialize.
    """
    net = validated.network
    n = validated.n_buses
    adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    edges: list[Edge] = []
    branch_index: list[int] = []

    for bi, br in enumerate(net.branches):
        if br.status is not BranchStatus.IN_SERVICE:
            continue
        eid = len(edges)
        u = validated.index_of[br.from_bus]
        v = validated.index_of[br.to_bus]
        edges.append(Edge(u=u, v=v, edge_id=eid, reactance=br.reactance_x, rating=br.rating_mva))
        branch_index.append(bi)
        adjacency[u].append((v, eid))
        adjacency[v].append((u, eid))

    attrs = tuple(
        VertexAttrs(gen_mw=b.gen_mw, load_mw=b.load_mw, bus_type=b.bus_type, voltage_mag=b.voltage_mag)
        for b in net.buses
    )
    # deterministic neighbor order: ascending edge id
    adj = tuple(tuple(sorted(lst, key=lambda t: t[1])) for lst in adjacency)
    return BaseGraph(
        vertex_count=n,
        adjacency=adj,
        edges=tuple(edges),
        vertex_attrs=attrs,
        slack_vertex=validated.slack_index,
        base_mva=net.base_mva,
        edge_branch_index=tuple(branch_index),
    )


def derive_view(base: BaseGraph, outage: Iterable[int]) -> ContingencyView:
    """Overlay view excluding the given edge ids; the base is never mutated."""
    removed = frozenset(outage)
    for eid in removed:
        if not 0 <= eid < len(base.edges):
            raise UnknownEdge(eid)
    return ContingencyView(base=base, removed_edges=removed)


def view_neighbors(view: ContingencyView, vertex: int) -> list:
    """Base adjacency of ``vertex`` minus removed edges, ascending edge id."""
    if not 0 <= vertex < view.base.vertex_count:
        raise VertexOutOfRange(vertex)
    removed = view.removed_edges
    if not removed:
        return list(view.base.adjacency[vertex])
    return [(w, eid) for (w, eid) in view.base.adjacency[vertex] if eid not in removed]
