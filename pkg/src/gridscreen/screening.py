"""N-1 screening orchestration: derive a view per outage, check connectivity,
solve flows, score, and rank.

Scenario evaluation is an embarrassingly parallel batch over shared
read-only state (the base graph plus the factorized base-case solve); the
sweep result is independent of the parallelism degree because every scenario
is a pure function of that shared state and the aggregation is a sort.

The sweep is split into two phases so callers can re-score cheaply: phase
one evaluates topology and flows per scenario (weight-independent), phase
two applies the severity weights and ranks. The what-if service relies on
this to recompute rankings after a weight change without re-running
topology or flow work.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .dcflow import (
    EMPTY_SHED,
    DcSolution,
    ShedAccounting,
    compute_lodf,
    island_resolve,
    solve_base,
    superpose,
)
from .errors import BaseCaseDiverged, UnknownEdge
from .graph import BaseGraph, ContingencyView, build_base_graph, derive_view
from .network import ValidatedNetwork
from .severity import SeverityRecord, SeverityWeights, rank, severity_index
from .topology import ConnStatus, ConnectivityResult, IslandClass, bi_bfs_check, classify_island


@dataclass
class ScreeningConfig:
    contingencies: tuple | None = None  # edge ids; None = every in-service branch
    weights: SeverityWeights = field(default_factory=SeverityWeights)
    parallelism: int = 1
    top_n: int | None = None  # report truncation, applied at emission

    def __post_init__(self):
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        if self.top_n is not None and self.top_n < 1:
            raise ValueError("top_n must be >= 1 or unset")


@dataclass(frozen=True)
class ScenarioOutcome:
    """Weight-independent result of one contingency scenario."""

    edge_id: int
    connectivity: ConnectivityResult
    islands: tuple  # tuple[IslandReport]; empty when no split
    solution: DcSolution
    shed: ShedAccounting


@dataclass
class ScreeningTimings:
    graph_init_ms: float = 0.0
    solve_ms_total: float = 0.0
    per_scenario_avg_ms: float = 0.0
    wall_ms: float = 0.0

    def to_dict(self) -> dict:
        return {
            "graph_init": round(self.graph_init_ms, 2),
            "solve_total": round(self.solve_ms_total, 2),
            "per_scenario_avg": round(self.per_scenario_avg_ms, 4),
            "wall": round(self.wall_ms, 2),
        }


COUNT_KEYS = (
    "generator_islands",
    "load_islands",
    "active_islands",
    "dead_islands",
    "no_island",
    "diverged",
    "total",
)

_CLASS_BUCKET = {
    IslandClass.GENERATOR: "generator_islands",
    IslandClass.LOAD: "load_islands",
    IslandClass.ACTIVE: "active_islands",
    IslandClass.DEAD: "dead_islands",
}


@dataclass
class ScreeningReport:
    records: list  # ranked SeverityRecord list
    scenario_counts: dict
    timings: ScreeningTimings
    # label tables so the report is self-contained for emission
    branch_of_edge: dict  # edge id -> (from bus, to bus, ckt)
    bus_id_of_vertex: tuple  # internal vertex -> external bus id


@dataclass
class EngineContext:
    """Shared read-only inputs for a sweep: graph plus factorized base case."""

    validated: ValidatedNetwork
    graph: BaseGraph
    base_solution: DcSolution


def prepare(validated: ValidatedNetwork) -> EngineContext:
    graph = build_base_graph(validated)
    base = solve_base(graph)
    if not base.converged:
        raise BaseCaseDiverged(base.divergence_reason or "")
    return EngineContext(validated=validated, graph=graph, base_solution=base)


def evaluate_scenario(ctx: EngineContext, edge_id: int) -> ScenarioOutcome:
    """Single-outage pipeline: view, bi-directional BFS, then either
    distribution-factor superposition or per-island re-solve."""
    graph = ctx.graph
    view = derive_view(graph, {edge_id})
    edge = graph.edges[edge_id]
    conn = bi_bfs_check(view, (edge.u, edge.v))

    if conn.status is ConnStatus.CONNECTED:
        factors = compute_lodf(ctx.base_solution, graph, edge_id)
        solution = superpose(ctx.base_solution, factors, edge_id)
        return ScenarioOutcome(
            edge_id=edge_id, connectivity=conn, islands=(), solution=solution, shed=EMPTY_SHED
        )

    island = conn.island_vertices
    mainland = frozenset(range(graph.vertex_count)) - island
    report = classify_island(island, graph)
    solution, shed = island_resolve(view, [mainland, island], graph)
    return ScenarioOutcome(
        edge_id=edge_id, connectivity=conn, islands=(report,), solution=solution, shed=shed
    )


def evaluate_all(ctx: EngineContext, config: ScreeningConfig) -> list:
    """Evaluate all configured contingencies; output order is ascending edge
    id regardless of the parallelism degree."""
    edge_ids = _contingency_list(ctx.graph, config)
    if config.parallelism == 1:
        return [evaluate_scenario(ctx, e) for e in edge_ids]
    with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
        return list(pool.map(lambda e: evaluate_scenario(ctx, e), edge_ids))


def _contingency_list(graph: BaseGraph, config: ScreeningConfig) -> list:
    if config.contingencies is None:
        return [e.edge_id for e in graph.edges]
    edge_ids = sorted(set(config.contingencies))
    for e in edge_ids:
        if not 0 <= e < len(graph.edges):
            raise UnknownEdge(e)
    return edge_ids


def score_outcomes(outcomes, ctx: EngineContext, weights: SeverityWeights) -> list:
    records = [
        severity_index(
            o.solution,
            o.shed,
            ctx.validated,
            weights,
            graph=ctx.graph,
            contingency=o.edge_id,
            islands=o.islands,
        )
        for o in outcomes
    ]
    return rank(records)


def count_scenarios(records) -> dict:
    """Bucket each record by its island outcome; a diverged scenario counts
    only in the diverged bucket so the buckets sum to the total."""
    counts = {k: 0 for k in COUNT_KEYS}
    for r in records:
        if r.diverged:
            counts["diverged"] += 1
        elif r.islands:
            counts[_CLASS_BUCKET[r.islands[0].island_class]] += 1
        else:
            counts["no_island"] += 1
    counts["total"] = len(records)
    return counts


def run_screening(validated: ValidatedNetwork, config: ScreeningConfig | None = None) -> ScreeningReport:
    """Full sweep: prepare shared state once, evaluate every contingency,
    score, rank, count, and time."""
    config = config or ScreeningConfig()
    t_start = time.perf_counter()
    ctx = prepare(validated)
    t_init = time.perf_counter()

    outcomes = evaluate_all(ctx, config)
    t_solved = time.perf_counter()
    records = score_outcomes(outcomes, ctx, config.weights)
    counts = count_scenarios(records)
    t_end = time.perf_counter()

    n = max(1, len(outcomes))
    timings = ScreeningTimings(
        graph_init_ms=(t_init - t_start) * 1e3,
        solve_ms_total=(t_solved - t_init) * 1e3,
        per_scenario_avg_ms=(t_solved - t_init) * 1e3 / n,
        wall_ms=(t_end - t_start) * 1e3,
    )
    return ScreeningReport(
        records=records,
        scenario_counts=counts,
        timings=timings,
        branch_of_edge=branch_labels(ctx),
        bus_id_of_vertex=validated.id_of,
    )


def branch_labels(ctx: EngineContext) -> dict:
    labels = {}
    for e in ctx.graph.edges:
        br = ctx.validated.network.branches[ctx.graph.edge_branch_index[e.edge_id]]
        labels[e.edge_id] = (br.from_bus, br.to_bus, br.circuit_id)
    return labels
