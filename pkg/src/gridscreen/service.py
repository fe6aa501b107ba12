"""What-if HTTP API for the browser explorer.

One network is loaded per process at startup. The base graph, base-case
factorization, and per-scenario topology/flow outcomes are read-only once
computed; changing the severity weights only invalidates the scored report,
never the cached topology or flow work, so re-ranking after a weight edit is
cheap. Weight swaps are atomic with respect to readers.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from . import report as report_mod
from .graph import BaseGraph
from .network import BranchStatus, ValidatedNetwork
from .screening import (
    EngineContext,
    ScreeningConfig,
    ScreeningReport,
    ScreeningTimings,
    branch_labels,
    count_scenarios,
    evaluate_all,
    evaluate_scenario,
    prepare,
    score_outcomes,
)
from .severity import SeverityWeights
from .topology import ConnStatus


@dataclass
class SessionState:
    ctx: EngineContext
    weights: SeverityWeights
    _lock: threading.Lock = field(default_factory=threading.Lock)
    _outcomes: list | None = None  # weight-independent scenario evaluations
    _report: ScreeningReport | None = None  # scored + ranked, tied to weights

    @property
    def validated(self) -> ValidatedNetwork:
        return self.ctx.validated

    @property
    def graph(self) -> BaseGraph:
        return self.ctx.graph

    def outcomes(self) -> list:
        with self._lock:
            if self._outcomes is None:
                self._outcomes = evaluate_all(self.ctx, ScreeningConfig())
            return self._outcomes

    def report(self) -> ScreeningReport:
        outcomes = self.outcomes()
        with self._lock:
            if self._report is None:
                records = score_outcomes(outcomes, self.ctx, self.weights)
                self._report = ScreeningReport(
                    records=records,
                    scenario_counts=count_scenarios(records),
                    timings=ScreeningTimings(),
                    branch_of_edge=branch_labels(self.ctx),
                    bus_id_of_vertex=self.validated.id_of,
                )
            return self._report

    def set_weights(self, weights: SeverityWeights) -> None:
        with self._lock:
            self.weights = weights
            self._report = None  # topology/flow outcomes survive


def build_session(validated: ValidatedNetwork, weights: SeverityWeights | None = None) -> SessionState:
    return SessionState(ctx=prepare(validated), weights=weights or SeverityWeights())


def _find_edge(session: SessionState, f: int, t: int, ckt) -> int | None:
    for eid, bi in enumerate(session.graph.edge_branch_index):
        br = session.validated.network.branches[bi]
        if {br.from_bus, br.to_bus} == {f, t} and br.status is BranchStatus.IN_SERVICE:
            if ckt is None or br.circuit_id == ckt:
                return eid
    return None


def create_app(session: SessionState | None, static_dir=None) -> FastAPI:
    app = FastAPI(title="gridscreen explorer")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def require_session() -> SessionState:
        if session is None:
            raise HTTPException(status_code=409, detail={"error": "no_network"})
        return session

    @app.get("/api/network")
    def get_network():
        s = require_session()
        net = s.validated.network
        return {
            "base_mva": net.base_mva,
            "buses": [
                {
                    "id": b.id,
                    "name": b.name,
                    "type": b.bus_type.value,
                    "gen_mw": b.gen_mw,
                    "load_mw": b.load_mw,
                }
                for b in net.buses
            ],
            "branches": [
                {
                    "from": br.from_bus,
                    "to": br.to_bus,
                    "ckt": br.circuit_id,
                    "x": br.reactance_x,
                    "rating": br.rating_mva,
                    "status": br.status.value,
                }
                for br in net.branches
            ],
        }

    @app.post("/api/whatif")
    def whatif(body: dict):
        s = require_session()
        edges = body.get("edges")
        if not isinstance(edges, list) or len(edges) != 1:
            raise HTTPException(status_code=400, detail="exactly one outage edge is required")
        spec = edges[0]
        if not isinstance(spec, dict) or "from" not in spec or "to" not in spec:
            raise HTTPException(status_code=400, detail="edge needs 'from' and 'to'")
        eid = _find_edge(s, spec["from"], spec["to"], spec.get("ckt"))
        if eid is None:
            raise HTTPException(
                status_code=400,
                detail=f"no in-service branch {spec['from']}-{spec['to']}",
            )

        with s._lock:
            weights = s.weights
        outcome = evaluate_scenario(s.ctx, eid)
        record = score_outcomes([outcome], s.ctx, weights)[0]

        graph = s.graph
        ids = s.validated.id_of
        flows = []
        if outcome.solution.converged:
            for e in graph.edges:
                if e.edge_id == eid:
                    continue
                mw = float(outcome.solution.flows[e.edge_id])
                flows.append(
                    {
                        "edge": _edge_label(s, e.edge_id),
                        "mw": mw,
                        "limit": e.rating if e.rating > 0 else None,
                        "violated": bool(e.rating > 0 and abs(mw) > e.rating),
                    }
                )
        doc = {
            "connectivity": "split" if outcome.connectivity.status is ConnStatus.SPLIT else "connected",
            "si": record.si,
            "breakdown": dict(record.term_breakdown),
            "flows": flows,
        }
        if outcome.islands:
            isl = outcome.islands[0]
            doc["island"] = {
                "buses": sorted(ids[v] for v in isl.vertices),
                "class": isl.island_class.value,
                "gen_mw": isl.gen_mw,
                "load_mw": isl.load_mw,
            }
        return doc

    @app.get("/api/screening")
    def screening(top: int | None = None):
        s = require_session()
        report = s.report()
        return report_mod.to_json_dict(report, top)

    @app.put("/api/weights")
    def put_weights(body: dict):
        s = require_session()
        try:
            merged = {**s.weights.to_dict(), **body}
            weights = SeverityWeights.from_dict(merged)
        except (ValueError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        s.set_weights(weights)
        return weights.to_dict()

    def _edge_label(s: SessionState, eid: int) -> dict:
        bi = s.graph.edge_branch_index[eid]
        br = s.validated.network.branches[bi]
        return {"from": br.from_bus, "to": br.to_bus, "ckt": br.circuit_id}

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
