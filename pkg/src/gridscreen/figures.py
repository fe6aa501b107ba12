"""Matplotlib figure rendering for screening reports.

Two figures accompany a report: the system graph with splitting branches
tinted, and a bar chart of the top-ranked severity scores. Layout is
force-directed with a seed derived from the network content, so the same
case always renders the same picture.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx

from .graph import BaseGraph
from .network import BusType, ValidatedNetwork, emit_native_json
from .screening import ScreeningReport

BUS_COLOR = "#3b6fb5"
GEN_COLOR = "#2e8b57"
LINE_COLOR = "#b0b6bc"
BRIDGE_COLOR = "#e07a1f"


def layout_seed(validated: ValidatedNetwork) -> int:
    digest = hashlib.sha256(emit_native_json(validated.network).encode()).digest()
    return int.from_bytes(digest[:4], "big")


def network_figure(
    validated: ValidatedNetwork,
    graph: BaseGraph,
    split_edges,
    path: str | Path,
) -> Path:
    """Draw buses and branches; branches whose outage splits the grid are
    tinted. Generator buses (PV/slack) are drawn distinct from load buses."""
    g = nx.Graph()
    g.add_nodes_from(range(graph.vertex_count))
    for e in graph.edges:
        g.add_edge(e.u, e.v)
    pos = nx.spring_layout(g, seed=layout_seed(validated))

    fig, ax = plt.subplots(figsize=(9, 7))
    split = set(split_edges)
    for e in graph.edges:
        x = (pos[e.u][0], pos[e.v][0])
        y = (pos[e.u][1], pos[e.v][1])
        if e.edge_id in split:
            ax.plot(x, y, color=BRIDGE_COLOR, linewidth=2.2, zorder=2)
        else:
            ax.plot(x, y, color=LINE_COLOR, linewidth=0.9, zorder=1)

    gen_nodes = [
        v for v in range(graph.vertex_count) if graph.vertex_attrs[v].bus_type is not BusType.PQ
    ]
    load_nodes = [v for v in range(graph.vertex_count) if v not in set(gen_nodes)]
    small = graph.vertex_count <= 40
    ax.scatter(
        [pos[v][0] for v in load_nodes],
        [pos[v][1] for v in load_nodes],
        s=60 if small else 18,
        c=BUS_COLOR,
        zorder=3,
        label="load bus",
    )
    ax.scatter(
        [pos[v][0] for v in gen_nodes],
        [pos[v][1] for v in gen_nodes],
        s=80 if small else 26,
        c=GEN_COLOR,
        marker="s",
        zorder=3,
        label="generator bus",
    )
    if small:
        for v in range(graph.vertex_count):
            ax.annotate(
                str(validated.id_of[v]),
                pos[v],
                textcoords="offset points",
                xytext=(4, 4),
                fontsize=8,
            )
    ax.plot([], [], color=BRIDGE_COLOR, linewidth=2.2, label="splitting branch")
    ax.legend(loc="upper right", fontsize=8)
    ax.set_axis_off()
    ax.set_title(f"{graph.vertex_count}-bus system, {len(graph.edges)} branches")
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=140)
    plt.close(fig)
    return out


def ranking_figure(report: ScreeningReport, path: str | Path, top: int = 20) -> Path:
    """Horizontal bars for the top-ranked contingencies by severity."""
    records = [r for r in report.records[:top]]
    labels = []
    for r in records:
        f, t, ckt = report.branch_of_edge[r.contingency]
        labels.append(f"{f}-{t}" + (f"-{ckt}" if ckt != 1 else ""))
    scores = [r.si for r in records]

    fig, ax = plt.subplots(figsize=(8, max(3, 0.35 * len(records) + 1.5)))
    ypos = range(len(records) - 1, -1, -1)
    colors = [BRIDGE_COLOR if r.islands else BUS_COLOR for r in records]
    ax.barh(list(ypos), scores, color=colors)
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(labels, fontsize=8)
    ax.set_xlabel("severity index")
    ax.set_title(f"Top {len(records)} contingencies by severity")
    if scores and min(scores) > 0 and max(scores) / min(scores) > 1e3:
        ax.set_xscale("log")
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=140)
    plt.close(fig)
    return out


def save_report_figures(
    report: ScreeningReport,
    validated: ValidatedNetwork,
    graph: BaseGraph,
    out_dir: str | Path,
    top: int = 20,
) -> list:
    """Render both figures into ``out_dir`` and return their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    split_edges = [r.contingency for r in report.records if r.islands]
    return [
        network_figure(validated, graph, split_edges, out / "network.png"),
        ranking_figure(report, out / "ranking.png", top=top),
    ]
