"""Fast N-1 transmission contingency screening.

Pipeline: parse a case (IEEE CDF or native JSON), validate it, build the
immutable base multigraph, then per outage derive a zero-copy overlay view,
detect grid splits with a bi-directional BFS, compute post-outage DC flows
(distribution-factor superposition, or a per-island re-solve on splits), and
rank scenarios by a weighted severity index.
"""

from .errors import GridScreenError
from .graph import BaseGraph, ContingencyView, build_base_graph, derive_view, view_neighbors
from .network import (
    BranchRecord,
    BranchStatus,
    BusRecord,
    BusType,
    PowerNetwork,
    ValidatedNetwork,
    emit_native_json,
    load_network,
    parse_cdf,
    parse_native_json,
    validate,
)
from .screening import ScreeningConfig, ScreeningReport, run_screening
from .severity import SeverityWeights
from .topology import bi_bfs_check, classify_island, enumerate_component, tarjan_bridges

__version__ = "0.1.0"

__all__ = [
    "BaseGraph",
    "BranchRecord",
    "BranchStatus",
    "BusRecord",
    "BusType",
    "ContingencyView",
    "GridScreenError",
    "PowerNetwork",
    "ScreeningConfig",
    "ScreeningReport",
    "SeverityWeights",
    "ValidatedNetwork",
    "bi_bfs_check",
    "build_base_graph",
    "classify_island",
    "derive_view",
    "emit_native_json",
    "enumerate_component",
    "load_network",
    "parse_cdf",
    "parse_native_json",
    "run_screening",
    "tarjan_bridges",
    "validate",
    "view_neighbors",
    "__version__",
]
