"""Severity index per contingency and deterministic ranking.

The score is a weighted sum of six addends: squared bus-voltage violations,
squared line-flow violations on surviving branches, squared shed generation
and shed load MW per detached island, a flat divergence penalty, and a flat
grid-splitting penalty. Default weights make splitting and divergence
dominate continuous violations so the ranking surfaces them first.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

from .dcflow import DcSolution, ShedAccounting
from .graph import BaseGraph
from .network import ValidatedNetwork


@dataclass(frozen=True)
class SeverityWeights:
    k_bus: float = 1.0
    k_line: float = 1.0
    k_gen_shed: float = 10.0
    k_load_shed: float = 10.0
    k_div: float = 1.0e4
    k_island: float = 1.0e3

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ValueError(f"{f.name} must be >= 0")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, doc: dict) -> "SeverityWeights":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown weight keys: {sorted(unknown)}")
        return cls(**doc)

    @classmethod
    def from_json_file(cls, path: str | Path) -> "SeverityWeights":
        return cls.from_dict(json.loads(Path(path).read_text()))


class ViolationKind(str, enum.Enum):
    BUS_VOLTAGE = "BusVoltage"
    LINE_FLOW = "LineFlow"


@dataclass(frozen=True)
class ViolationRecord:
    element: int  # bus id or edge id
    value: float  # |v| in pu or |P| in MW
    limit: float  # the violated limit
    kind: ViolationKind


TERM_NAMES = ("bus_violation", "line_violation", "gen_shed", "load_shed", "divergence", "islanding")


@dataclass(frozen=True)
class SeverityRecord:
    contingency: int  # edge id
    si: float
    term_breakdown: dict
    islands: tuple  # tuple[IslandReport]
    diverged: bool
    violations: tuple = field(default=())

    def __post_init__(self):
        assert abs(self.si - sum(self.term_breakdown.values())) <= 1e-12 * max(1.0, abs(self.si))


def _bus_violations(network: ValidatedNetwork) -> list:
    out = []
    for bus in network.network.buses:
        v = bus.voltage_mag
        if bus.v_min is not None and v < bus.v_min:
            out.append(ViolationRecord(bus.id, v, bus.v_min, ViolationKind.BUS_VOLTAGE))
        elif bus.v_max is not None and v > bus.v_max:
            out.append(ViolationRecord(bus.id, v, bus.v_max, ViolationKind.BUS_VOLTAGE))
    return out


def _line_violations(solution: DcSolution, graph: BaseGraph, outaged: int | None) -> list:
    out = []
    if not solution.converged or len(solution.flows) == 0:
        return out
    for e in graph.edges:
        if e.edge_id == outaged or e.rating <= 0:
            continue
        mag = abs(float(solution.flows[e.edge_id]))
        if mag > e.rating:
            out.append(ViolationRecord(e.edge_id, mag, e.rating, ViolationKind.LINE_FLOW))
    return out


def severity_index(
    solution: DcSolution,
    shed: ShedAccounting,
    network: ValidatedNetwork,
    weights: SeverityWeights,
    *,
    graph: BaseGraph,
    contingency: int,
    islands: tuple = (),
) -> SeverityRecord:
    """Evaluate the six-addend severity score for one scenario.

    Bus-voltage terms use the input (base-case) voltage magnitudes, which the
    DC model does not update; with flat-start data the addend is zero. Line
    terms compare |flow| against the rating of every surviving rated branch.
    Degenerate inputs simply produce zero addends.
    """
    bus_vio = _bus_violations(network)
    line_vio = _line_violations(solution, graph, contingency)
    split = len(islands) > 0
    diverged = not solution.converged

    terms = {
        "bus_violation": weights.k_bus * sum((v.value - v.limit) ** 2 for v in bus_vio),
        "line_violation": weights.k_line * sum((v.value - v.limit) ** 2 for v in line_vio),
        "gen_shed": weights.k_gen_shed * sum(p * p for p in shed.gen_mw),
        "load_shed": weights.k_load_shed * sum(p * p for p in shed.load_mw),
        "divergence": weights.k_div if diverged else 0.0,
        "islanding": weights.k_island if split else 0.0,
    }
    return SeverityRecord(
        contingency=contingency,
        si=sum(terms.values()),
        term_breakdown=terms,
        islands=tuple(islands),
        diverged=diverged,
        violations=tuple(bus_vio + line_vio),
    )


def rank(records) -> list:
    """Descending severity; ties broken by ascending contingency edge id."""
    return sorted(records, key=lambda r: (-r.si, r.contingency))
