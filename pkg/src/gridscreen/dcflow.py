"""Linearized (DC) power flow: base-case solve, outage distribution factors,
and per-island re-solve when an outage splits the grid.

Model: flat 1.0 pu voltages, lossless branches, small angles. The nodal
susceptance matrix with the slack row/column removed is factorized once per
base case (sparse LU) and reused for every outage: each non-splitting outage
costs one triangular solve to get the distribution-factor column, and the
post-outage flows follow by superposition. Splitting outages re-solve the
slack-containing component and book the detached islands as shed power.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import BridgeOutage, UnknownEdge
from .graph import BaseGraph, ContingencyView

SINGULAR_PIVOT = 1e-10
BRIDGE_FACTOR_TOL = 1e-9


@dataclass
class DcFactorization:
    """Reduced susceptance factorization for one (sub)network."""

    slack: int
    reduced_of: np.ndarray  # vertex -> row in reduced system, -1 if absent
    lu: object | None
    singular: bool
    reason: str | None = None

    def solve(self, rhs_reduced: np.ndarray) -> np.ndarray:
        assert self.lu is not None
        return self.lu.solve(rhs_reduced)


@dataclass
class DcSolution:
    angles: np.ndarray  # radians per vertex, slack = 0, NaN where unsolved
    flows: np.ndarray  # MW per edge id (from->to positive); empty if not converged
    slack_injection_mw: float
    converged: bool
    island_id: np.ndarray  # per vertex: 0 = slack-containing component
    divergence_reason: str | None = None
    fallback_slack: int | None = None  # set when the original slack was unavailable
    factorization: DcFactorization | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class ShedAccounting:
    """Per detached island: generation and load MW dropped from the mainland."""

    gen_mw: tuple
    load_mw: tuple

    @property
    def total_gen_mw(self) -> float:
        return sum(self.gen_mw)

    @property
    def total_load_mw(self) -> float:
        return sum(self.load_mw)


EMPTY_SHED = ShedAccounting(gen_mw=(), load_mw=())


def _injections_pu(graph: BaseGraph) -> np.ndarray:
    attrs = graph.vertex_attrs
    return np.array([(a.gen_mw - a.load_mw) / graph.base_mva for a in attrs])


def _factorize(
    graph: BaseGraph,
    slack: int,
    vertices: Iterable[int] | None = None,
    removed: frozenset = frozenset(),
) -> DcFactorization:
    """LU-factorize the reduced susceptance matrix over a vertex subset."""
    n = graph.vertex_count
    if vertices is None:
        member = np.ones(n, dtype=bool)
    else:
        member = np.zeros(n, dtype=bool)
        member[list(vertices)] = True

    reduced_of = np.full(n, -1, dtype=np.int64)
    pos = 0
    for v in range(n):
        if member[v] and v != slack:
            reduced_of[v] = pos
            pos += 1
    m = pos
    if m == 0:
        # single-bus component: nothing to solve, trivially consistent
        return DcFactorization(slack=slack, reduced_of=reduced_of, lu=None, singular=False)

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for e in graph.edges:
        if e.edge_id in removed or not (member[e.u] and member[e.v]):
            continue
        b = 1.0 / e.reactance
        iu, iv = reduced_of[e.u], reduced_of[e.v]
        if iu >= 0:
            rows.append(iu)
            cols.append(iu)
            vals.append(b)
        if iv >= 0:
            rows.append(iv)
            cols.append(iv)
            vals.append(b)
        if iu >= 0 and iv >= 0:
            rows.extend((iu, iv))
            cols.extend((iv, iu))
            vals.extend((-b, -b))

    bmat = sp.coo_matrix((vals, (rows, cols)), shape=(m, m)).tocsc()
    try:
        lu = spla.splu(bmat)
    except RuntimeError as exc:  # exactly singular factor
        return DcFactorization(slack=slack, reduced_of=reduced_of, lu=None, singular=True, reason=str(exc))
    min_pivot = float(np.min(np.abs(lu.U.diagonal()))) if m else np.inf
    if min_pivot < SINGULAR_PIVOT:
        return DcFactorization(
            slack=slack,
            reduced_of=reduced_of,
            lu=None,
            singular=True,
            reason=f"pivot {min_pivot:.3e} below {SINGULAR_PIVOT:.0e}",
        )
    return DcFactorization(slack=slack, reduced_of=reduced_of, lu=lu, singular=False)


def _diverged(graph: BaseGraph, reason: str, island_id: np.ndarray | None = None) -> DcSolution:
    n = graph.vertex_count
    return DcSolution(
        angles=np.full(n, np.nan),
        flows=np.zeros(0),
        slack_injection_mw=0.0,
        converged=False,
        island_id=island_id if island_id is not None else np.zeros(n, dtype=np.int64),
        divergence_reason=reason,
    )


def _edge_flows_mw(graph: BaseGraph, angles: np.ndarray, live: np.ndarray) -> np.ndarray:
    """Signed flow per edge id: (theta_u - theta_v) / x * base; 0 where dead."""
    flows = np.zeros(len(graph.edges))
    for e in graph.edges:
        if live[e.edge_id]:
            flows[e.edge_id] = (angles[e.u] - angles[e.v]) / e.reactance * graph.base_mva
    return flows


def _balance_at(graph: BaseGraph, flows: np.ndarray, vertex: int) -> float:
    out = 0.0
    for w, eid in graph.adjacency[vertex]:
        e = graph.edges[eid]
        out += flows[eid] if e.u == vertex else -flows[eid]
    return out


def solve_base(graph: BaseGraph, slack: int | None = None) -> DcSolution:
    """Solve the base case. A disconnected or numerically singular system
    yields an unconverged solution carrying a divergence marker."""
    slack = graph.slack_vertex if slack is None else slack
    fact = _factorize(graph, slack)
    if fact.singular:
        return _diverged(graph, fact.reason or "singular")

    p = _injections_pu(graph)
    m = int(np.max(fact.reduced_of)) + 1
    rhs = np.zeros(m)
    for v in range(graph.vertex_count):
        if fact.reduced_of[v] >= 0:
            rhs[fact.reduced_of[v]] = p[v]

    angles = np.zeros(graph.vertex_count)
    if m:
        theta = fact.solve(rhs)
        for v in range(graph.vertex_count):
            if fact.reduced_of[v] >= 0:
                angles[v] = theta[fact.reduced_of[v]]

    live = np.ones(len(graph.edges), dtype=bool)
    flows = _edge_flows_mw(graph, angles, live)
    return DcSolution(
        angles=angles,
        flows=flows,
        slack_injection_mw=_balance_at(graph, flows, slack),
        converged=True,
        island_id=np.zeros(graph.vertex_count, dtype=np.int64),
        factorization=fact,
    )


def _ptdf_column(graph: BaseGraph, fact: DcFactorization, k: int) -> np.ndarray:
    """Flow response of every edge to a unit injection pair across edge k."""
    ek = graph.edges[k]
    m = int(np.max(fact.reduced_of)) + 1 if np.any(fact.reduced_of >= 0) else 0
    rhs = np.zeros(m)
    if fact.reduced_of[ek.u] >= 0:
        rhs[fact.reduced_of[ek.u]] += 1.0
    if fact.reduced_of[ek.v] >= 0:
        rhs[fact.reduced_of[ek.v]] -= 1.0
    theta = fact.solve(rhs) if m else np.zeros(0)

    def angle(v: int) -> float:
        r = fact.reduced_of[v]
        return theta[r] if r >= 0 else 0.0

    ptdf = np.zeros(len(graph.edges))
    for e in graph.edges:
        ptdf[e.edge_id] = (angle(e.u) - angle(e.v)) / e.reactance
    return ptdf


def compute_lodf(base: DcSolution, graph: BaseGraph, k: int) -> np.ndarray:
    """Distribution factors L(l, k): post-outage flow on l is
    f_l + L(l, k) * f_k. Undefined for bridges (raises BridgeOutage)."""
    if not 0 <= k < len(graph.edges):
        raise UnknownEdge(k)
    if not base.converged:
        raise ValueError("base solution did not converge; no factors to compute")
    fact = base.factorization
    if fact is None:
        fact = _factorize(graph, graph.slack_vertex)
        if fact.singular:
            raise ValueError("base factorization is singular")

    ptdf = _ptdf_column(graph, fact, k)
    denom = 1.0 - ptdf[k]
    if abs(denom) < BRIDGE_FACTOR_TOL:
        raise BridgeOutage(k)
    factors = ptdf / denom
    factors[k] = -1.0
    return factors


@dataclass(frozen=True)
class LodfTable:
    """Distribution-factor columns keyed by outaged edge id."""

    columns: dict

    def factor(self, monitored: int, outaged: int) -> float:
        return float(self.columns[outaged][monitored])

    @classmethod
    def for_outages(cls, base: DcSolution, graph: BaseGraph, outages: Iterable[int]) -> "LodfTable":
        return cls(columns={k: compute_lodf(base, graph, k) for k in outages})


def superpose(base: DcSolution, factors: np.ndarray, k: int) -> DcSolution:
    """Post-outage flows by superposition; angles are not recomputed (flows
    are the screening quantity), so the returned angles are the base ones."""
    flows = base.flows + factors * base.flows[k]
    flows[k] = 0.0
    return DcSolution(
        angles=base.angles.copy(),
        flows=flows,
        # injections are fixed and the network stays lossless, so the slack
        # absorbs the same imbalance as in the base case
        slack_injection_mw=base.slack_injection_mw,
        converged=True,
        island_id=base.island_id.copy(),
        factorization=base.factorization,
    )


def island_resolve(
    view: ContingencyView, islands: list, graph: BaseGraph
) -> tuple[DcSolution, ShedAccounting]:
    """Re-solve the slack-containing component of a split grid; detached
    islands are not solved, their generation and load are booked as shed.

    If no provided component contains the slack vertex (pathological direct
    calls), the component with the most generation becomes the mainland and
    its highest-generation bus serves as a temporary slack; the solution is
    flagged via ``fallback_slack``.
    """
    sets = [frozenset(s) for s in islands]
    slack = graph.slack_vertex
    mainland_idx = next((i for i, s in enumerate(sets) if slack in s), None)
    fallback = None
    if mainland_idx is None:
        gen_of = lambda s: sum(graph.vertex_attrs[v].gen_mw for v in s)
        mainland_idx = max(range(len(sets)), key=lambda i: (gen_of(sets[i]), len(sets[i])))
        mainland = sets[mainland_idx]
        fallback = max(mainland, key=lambda v: (graph.vertex_attrs[v].gen_mw, -v))
        slack = fallback
    mainland = sets[mainland_idx]
    detached = [s for i, s in enumerate(sets) if i != mainland_idx]

    island_id = np.zeros(graph.vertex_count, dtype=np.int64)
    for i, s in enumerate(detached):
        for v in s:
            island_id[v] = i + 1

    shed = ShedAccounting(
        gen_mw=tuple(sum(graph.vertex_attrs[v].gen_mw for v in sorted(s)) for s in detached),
        load_mw=tuple(sum(graph.vertex_attrs[v].load_mw for v in sorted(s)) for s in detached),
    )

    fact = _factorize(graph, slack, vertices=mainland, removed=view.removed_edges)
    if fact.singular:
        sol = _diverged(graph, fact.reason or "singular mainland", island_id=island_id)
        sol.fallback_slack = fallback
        return sol, shed

    p = _injections_pu(graph)
    m = int(np.max(fact.reduced_of)) + 1 if np.any(fact.reduced_of >= 0) else 0
    rhs = np.zeros(m)
    for v in mainland:
        if fact.reduced_of[v] >= 0:
            rhs[fact.reduced_of[v]] = p[v]

    angles = np.full(graph.vertex_count, np.nan)
    angles[list(mainland)] = 0.0
    if m:
        theta = fact.solve(rhs)
        for v in mainland:
            if fact.reduced_of[v] >= 0:
                angles[v] = theta[fact.reduced_of[v]]

    live = np.zeros(len(graph.edges), dtype=bool)
    for e in graph.edges:
        live[e.edge_id] = (
            e.edge_id not in view.removed_edges and e.u in mainland and e.v in mainland
        )
    flows = _edge_flows_mw(graph, angles, live)
    sol = DcSolution(
        angles=angles,
        flows=flows,
        slack_injection_mw=_balance_at(graph, flows, slack),
        converged=True,
        island_id=island_id,
        fallback_slack=fallback,
        factorization=fact,
    )
    return sol, shed


def kcl_residuals_pu(
    solution: DcSolution, graph: BaseGraph, removed: frozenset = frozenset()
) -> np.ndarray:
    """Per-vertex |injection - net outflow| in pu over the solved component.

    The slack vertex (or fallback slack) and unsolved vertices report 0; the
    slack absorbs the imbalance by construction and is checked separately via
    the lossless-balance property.
    """
    n = graph.vertex_count
    res = np.zeros(n)
    if not solution.converged:
        return res
    p = _injections_pu(graph)
    slack = graph.slack_vertex if solution.fallback_slack is None else solution.fallback_slack
    for v in range(n):
        if v == slack or solution.island_id[v] != 0 or np.isnan(solution.angles[v]):
            continue
        out = 0.0
        for w, eid in graph.adjacency[v]:
            if eid in removed:
                continue
            e = graph.edges[eid]
            out += solution.flows[eid] if e.u == v else -solution.flows[eid]
        res[v] = abs(p[v] - out / graph.base_mva)
    return res
