"""Connectivity screening: bi-directional BFS split detection, island
classification, and an independent lowlink bridge oracle.

The screening path answers one question per outage: after removing branch
(i, j), does a second path between i and j survive? Two level-synchronous
BFS frontiers expand alternately from i and from j; the moment one frontier
touches a vertex the other search has already visited, a second path exists
and the search stops. If either side runs out of frontier first, its
component is fully explored and disjoint from the other side, so the grid
has split. The smaller side typically exhausts after a handful of levels,
which is what makes per-outage screening cheap.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

from .errors import EmptyIsland, EndpointNotInGraph, VertexOutOfRange
from .graph import BaseGraph, ContingencyView
from .network import BusType


class ConnStatus(str, enum.Enum):
    CONNECTED = "Connected"
    SPLIT = "Split"


class IslandClass(str, enum.Enum):
    GENERATOR = "Generator"
    LOAD = "Load"
    ACTIVE = "ActiveIsland"
    DEAD = "Dead"


@dataclass(frozen=True)
class ConnectivityResult:
    status: ConnStatus
    island_vertices: frozenset  # nonempty iff Split; the side away from the slack
    visited_count: int
    frontier_levels: int


@dataclass(frozen=True)
class IslandReport:
    vertices: frozenset
    gen_count: int  # member buses of generator type (PV/Slack)
    load_count: int  # member buses of load type (PQ)
    gen_mw: float
    load_mw: float
    island_class: IslandClass


def bi_bfs_check(view: ContingencyView, endpoints: tuple) -> ConnectivityResult:
    """Search for a second path between the endpoints of an outaged branch.

    Expands one BFS level from each endpoint in strict alternation. Returns
    Connected as soon as an expansion reaches a vertex already visited by the
    opposite search; returns Split when one side exhausts its component
    first. The reported island is always the side that does not contain the
    slack vertex, so if the exhausted side holds the slack the other side is
    traversed to completion and reported instead.
    """
    i, j = endpoints
    base = view.base
    for v in (i, j):
        if not 0 <= v < base.vertex_count:
            raise EndpointNotInGraph(v)

    visited = ({i}, {j})
    frontiers = ([i], [j])
    levels = 0

    while True:
        for side in (0, 1):
            mine, theirs = visited[side], visited[1 - side]
            frontier = frontiers[side]
            nxt: list[int] = []
            for u in frontier:
                for w, _eid in view.neighbors(u):
                    if w in theirs:
                        return ConnectivityResult(
                            status=ConnStatus.CONNECTED,
                            island_vertices=frozenset(),
                            visited_count=len(mine) + len(theirs),
                            frontier_levels=levels + 1,
                        )
                    if w not in mine:
                        mine.add(w)
                        nxt.append(w)
            frontiers = (nxt, frontiers[1]) if side == 0 else (frontiers[0], nxt)
            levels += 1
            if not nxt:
                # This side's component is fully explored with no second path.
                island = visited[side]
                if base.slack_vertex in island:
                    island = _complete(view, visited[1 - side], frontiers[1 - side])
                return ConnectivityResult(
                    status=ConnStatus.SPLIT,
                    island_vertices=frozenset(island),
                    visited_count=len(visited[0]) + len(visited[1]),
                    frontier_levels=levels,
                )


def _complete(view: ContingencyView, visited: set, frontier: list) -> set:
    """Finish a partially-expanded BFS side and return its full component."""
    queue = deque(frontier)
    while queue:
        u = queue.popleft()
        for w, _eid in view.neighbors(u):
            if w not in visited:
                visited.add(w)
                queue.append(w)
    return visited


def enumerate_component(view: ContingencyView, seed: int) -> set:
    """Plain BFS closure of ``seed`` within the view."""
    if not 0 <= seed < view.base.vertex_count:
        raise VertexOutOfRange(seed)
    return _complete(view, {seed}, [seed])


def classify_island(vertices, graph: BaseGraph) -> IslandReport:
    """Sum generation and load MW over the member buses and classify.

    Classification is by real power, not bus count: positive generation with
    no load is a Generator island, the converse is a Load island, both
    positive is an active island, and neither is Dead. Negative generation
    (a net-absorbing unit) does not count as generation.
    """
    members = frozenset(vertices)
    if not members:
        raise EmptyIsland()
    gen_mw = 0.0
    load_mw = 0.0
    gen_count = 0
    load_count = 0
    for v in sorted(members):
        attrs = graph.vertex_attrs[v]
        gen_mw += attrs.gen_mw
        load_mw += attrs.load_mw
        if attrs.bus_type is BusType.PQ:
            load_count += 1
        else:
            gen_count += 1
    has_gen = gen_mw > 0
    has_load = load_mw > 0
    if has_gen and has_load:
        cls = IslandClass.ACTIVE
    elif has_gen:
        cls = IslandClass.GENERATOR
    elif has_load:
        cls = IslandClass.LOAD
    else:
        cls = IslandClass.DEAD
    return IslandReport(
        vertices=members,
        gen_count=gen_count,
        load_count=load_count,
        gen_mw=gen_mw,
        load_mw=load_mw,
        island_class=cls,
    )


def tarjan_bridges(graph: BaseGraph) -> frozenset:
    """Independent oracle: all bridge edge ids via one lowlink DFS pass.

    An edge is a bridge iff removing it disconnects its endpoints. The DFS
    skips only the specific edge it entered a vertex through (by edge id), so
    a parallel circuit acts as a back edge and correctly disqualifies its
    twin from being a bridge. Iterative, to stay safe on long path graphs.
    """
    n = graph.vertex_count
    disc = [-1] * n
    low = [0] * n
    bridges: set[int] = set()
    counter = 0

    for root in range(n):
        if disc[root] != -1:
            continue
        # stack entries: (vertex, entry edge id, adjacency iterator)
        disc[root] = low[root] = counter
        counter += 1
        stack = [(root, -1, iter(graph.adjacency[root]))]
        while stack:
            v, entry_eid, it = stack[-1]
            advanced = False
            for w, eid in it:
                if eid == entry_eid:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = counter
                    counter += 1
                    stack.append((w, eid, iter(graph.adjacency[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[v])
                    if low[v] > disc[parent]:
                        bridges.add(entry_eid)
    return frozenset(bridges)
