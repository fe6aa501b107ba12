"""Regenerate the case fixtures under data/.

The two CDF cases are modeled on the public IEEE 118-bus and 30-bus test
systems: bus counts and branch topology follow the standard cases, loads and
generation are representative, and reactances are either the well-known
values (30-bus) or deterministic values in a realistic range (118-bus). The
118-bus variant re-homes bus 63 behind a radial 42-63 tie carrying its load,
so a single fixture exercises all three radial-island flavours: a
generator-only island behind 8-9, a load-only island behind 42-63, and a
mixed island behind 85-86.

Line ratings are derived from the base-case DC solve (no base-case
violations; some outages overload), except lightly loaded lines which stay
unlimited (rating 0).

Run from the repository root:  python3 tools/build_cases.py
"""

from __future__ import annotations

import json
import math
import random
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from gridscreen.dcflow import solve_base
from gridscreen.graph import build_base_graph
from gridscreen.network import parse_cdf, validate
from gridscreen.topology import IslandClass, classify_island, enumerate_component, tarjan_bridges
from gridscreen.graph import derive_view

DATA = REPO / "data"


# --- 118-bus system -----------------------------------------------------------

BRANCHES_118 = [
    (1, 2), (1, 3), (4, 5), (3, 5), (5, 6), (6, 7), (8, 9), (8, 5), (9, 10),
    (4, 11), (5, 11), (11, 12), (2, 12), (3, 12), (7, 12), (11, 13), (12, 14),
    (13, 15), (14, 15), (12, 16), (15, 17), (16, 17), (17, 18), (18, 19),
    (19, 20), (15, 19), (20, 21), (21, 22), (22, 23), (23, 24), (23, 25),
    (26, 25), (25, 27), (27, 28), (28, 29), (30, 17), (8, 30), (26, 30),
    (17, 31), (29, 31), (23, 32), (31, 32), (27, 32), (15, 33), (19, 34),
    (35, 36), (35, 37), (33, 37), (34, 36), (34, 37), (38, 37), (37, 39),
    (37, 40), (30, 38), (39, 40), (40, 41), (40, 42), (41, 42), (43, 44),
    (34, 43), (44, 45), (45, 46), (46, 47), (46, 48), (47, 49), (42, 49),
    (42, 49), (45, 49), (48, 49), (49, 50), (49, 51), (51, 52), (52, 53),
    (53, 54), (49, 54), (49, 54), (54, 55), (54, 56), (55, 56), (56, 57),
    (50, 57), (56, 58), (51, 58), (54, 59), (56, 59), (56, 59), (55, 59),
    (59, 60), (59, 61), (60, 61), (60, 62), (61, 62), (42, 63), (59, 64),
    (64, 61), (38, 65), (64, 65), (49, 66), (49, 66), (62, 66), (62, 67),
    (65, 66), (66, 67), (65, 68), (47, 69), (49, 69), (68, 69), (69, 70),
    (24, 70), (70, 71), (24, 72), (71, 72), (71, 73), (70, 74), (70, 75),
    (69, 75), (74, 75), (76, 77), (69, 77), (75, 77), (77, 78), (78, 79),
    (77, 80), (77, 80), (79, 80), (68, 81), (81, 80), (77, 82), (82, 83),
    (83, 84), (83, 85), (84, 85), (85, 86), (86, 87), (85, 88), (85, 89),
    (88, 89), (89, 90), (89, 90), (90, 91), (89, 92), (89, 92), (91, 92),
    (92, 93), (92, 94), (93, 94), (94, 95), (80, 96), (82, 96), (94, 96),
    (80, 97), (80, 98), (80, 99), (92, 100), (94, 100), (95, 96), (96, 97),
    (98, 100), (99, 100), (100, 101), (92, 102), (101, 102), (100, 103),
    (100, 104), (103, 104), (103, 105), (100, 106), (104, 105), (105, 106),
    (105, 107), (105, 108), (106, 107), (108, 109), (103, 110), (109, 110),
    (110, 111), (110, 112), (17, 113), (32, 113), (32, 114), (27, 115),
    (114, 115), (68, 116), (12, 117), (75, 118), (76, 118),
]

# generation in MW; every listed bus is PV (69 is the slack)
GEN_118 = {
    10: 450.0, 12: 85.0, 25: 220.0, 26: 314.0, 31: 7.0, 46: 19.0, 49: 204.0,
    54: 48.0, 59: 155.0, 61: 160.0, 65: 391.0, 66: 392.0, 69: 516.4,
    80: 477.0, 87: 4.0, 89: 607.0, 100: 252.0, 103: 40.0, 111: 36.0,
}

# synchronous-condenser style PV buses with no real-power output
PV_ZERO_118 = [
    1, 4, 6, 8, 15, 18, 19, 24, 27, 32, 34, 36, 40, 42, 55, 56, 62, 70, 72,
    73, 74, 76, 77, 85, 90, 91, 92, 99, 104, 105, 107, 110, 112, 113, 116,
]

LOAD_118 = {
    1: 51, 2: 20, 3: 39, 4: 39, 6: 52, 7: 19, 8: 28, 11: 70, 12: 47, 13: 34,
    14: 14, 15: 90, 16: 25, 17: 11, 18: 60, 19: 45, 20: 18, 21: 14, 22: 10,
    23: 7, 24: 13, 27: 71, 28: 17, 29: 24, 31: 43, 32: 59, 33: 23, 34: 59,
    35: 33, 36: 31, 39: 27, 40: 66, 41: 37, 42: 96, 43: 18, 44: 16, 45: 53,
    46: 28, 47: 34, 48: 20, 49: 87, 50: 17, 51: 17, 52: 18, 53: 23, 54: 113,
    55: 63, 56: 84, 57: 12, 58: 12, 59: 277, 60: 78, 62: 77, 63: 67, 66: 39,
    67: 28, 70: 66, 72: 12, 73: 6, 74: 68, 75: 47, 76: 68, 77: 61, 78: 71,
    79: 39, 80: 130, 82: 54, 83: 20, 84: 11, 85: 24, 86: 21, 88: 48, 90: 163,
    91: 10, 92: 65, 93: 12, 94: 30, 95: 42, 96: 38, 97: 15, 98: 34, 99: 42,
    100: 37, 101: 22, 102: 5, 103: 23, 104: 38, 105: 31, 106: 43, 107: 50,
    108: 2, 109: 8, 110: 39, 112: 68, 113: 6, 114: 8, 115: 22, 116: 184,
    117: 20, 118: 33,
}

TRANSFORMERS_118 = {
    (8, 5): 0.985, (26, 25): 0.960, (30, 17): 0.960, (38, 37): 0.935,
    (64, 61): 0.985, (65, 66): 0.935, (68, 69): 0.935, (81, 80): 0.935,
}

SLACK_118 = 69


# --- 30-bus system --------------------------------------------------------------

BRANCHES_30 = [
    (1, 2, 0.0575), (1, 3, 0.1652), (2, 4, 0.1737), (3, 4, 0.0379),
    (2, 5, 0.1983), (2, 6, 0.1763), (4, 6, 0.0414), (5, 7, 0.1160),
    (6, 7, 0.0820), (6, 8, 0.0420), (6, 9, 0.2080), (6, 10, 0.5560),
    (9, 11, 0.2080), (9, 10, 0.1100), (4, 12, 0.2560), (12, 13, 0.1400),
    (12, 14, 0.2559), (12, 15, 0.1304), (12, 16, 0.1987), (14, 15, 0.1997),
    (16, 17, 0.1923), (15, 18, 0.2185), (18, 19, 0.1292), (19, 20, 0.0680),
    (10, 20, 0.2090), (10, 17, 0.0845), (10, 21, 0.0749), (10, 22, 0.1499),
    (21, 22, 0.0236), (15, 23, 0.2020), (22, 24, 0.1790), (23, 24, 0.2700),
    (24, 25, 0.3292), (25, 26, 0.3800), (25, 27, 0.2087), (28, 27, 0.3960),
    (27, 29, 0.4153), (27, 30, 0.6027), (29, 30, 0.4533), (8, 28, 0.2000),
    (6, 28, 0.0599),
]

LOAD_30 = {
    2: 21.7, 3: 2.4, 4: 7.6, 5: 94.2, 7: 22.8, 8: 30.0, 10: 5.8, 12: 11.2,
    14: 6.2, 15: 8.2, 16: 3.5, 17: 9.0, 18: 3.2, 19: 9.5, 20: 2.2, 21: 17.5,
    23: 3.2, 24: 8.7, 26: 3.5, 29: 2.4, 30: 10.6,
}

GEN_30 = {1: 260.2, 2: 40.0}
PV_ZERO_30 = [5, 8, 11, 13]
SLACK_30 = 1


def _bus_card(bid, name, btype, v, pd, pg, kv=138.0) -> str:
    return (
        f"{bid:4d} {name:<12} {1:2d}{1:3d} {btype:2d} "
        f"{v:6.4f}{0.0:7.2f}{pd:9.2f}{0.0:10.2f}{pg:8.2f}{0.0:8.2f} "
        f"{kv:7.2f} {0.0:6.4f}{0.0:8.4f}{0.0:8.4f}{0.0:8.2f}{0.0:8.2f} {0:4d}"
    )


def _branch_card(f, t, ckt, x, rating, tap) -> str:
    btype = 1 if tap else 0
    return (
        f"{f:4d} {t:4d} {1:2d}{1:3d} {ckt:1d} {btype:1d}"
        f"{x * 0.12:10.5f}{x:11.5f}{0.0:10.5f}{int(rating):5d} {int(rating):5d} {int(rating):5d}"
        f"{0:4d} {0:1d}  {tap or 0.0:6.4f} {0.0:7.2f}"
    )


def _make_cdf(title, buses, branches) -> str:
    """buses: list of (id, name, type_code, v, pd, pg);
    branches: list of (f, t, ckt, x, rating, tap)."""
    lines = [
        f" 08/09/26 {'GRIDSCREEN FIXTURE':<20} {100.0:6.1f} {2026:4d} S {title:<28}".rstrip(),
        f"BUS DATA FOLLOWS {len(buses):>30} ITEMS",
    ]
    lines += [_bus_card(*b) for b in buses]
    lines.append("-999")
    lines.append(f"BRANCH DATA FOLLOWS {len(branches):>27} ITEMS")
    lines += [_branch_card(*br) for br in branches]
    lines.append("-999")
    lines.append("END OF DATA")
    return "\n".join(lines) + "\n"


def _with_circuits(pairs) -> list:
    seen: dict = {}
    out = []
    for item in pairs:
        f, t = item[0], item[1]
        key = (min(f, t), max(f, t))
        seen[key] = seen.get(key, 0) + 1
        out.append((f, t, seen[key]) + tuple(item[2:]))
    return out


def _ratings_from_base(cdf_text: str) -> list:
    """Solve the unlimited case and derive per-branch ratings: 30% headroom
    over the base flow plus margin; lightly loaded lines stay unlimited."""
    validated = validate(parse_cdf(cdf_text))
    graph = build_base_graph(validated)
    sol = solve_base(graph)
    assert sol.converged, "fixture base case must solve"
    ratings = []
    for e in graph.edges:
        f = abs(float(sol.flows[e.edge_id]))
        ratings.append(0 if f < 2.0 else int(math.ceil(1.3 * f + 30.0)))
    return ratings


def build_118() -> str:
    rng = random.Random(118)
    buses = []
    for bid in range(1, 119):
        if bid == SLACK_118:
            code, pg = 3, GEN_118.get(bid, 0.0)
        elif bid in GEN_118 or bid in PV_ZERO_118:
            code, pg = 2, GEN_118.get(bid, 0.0)
        else:
            code, pg = 0, 0.0
        v = round(1.0 + (rng.random() * 0.05 if code else rng.random() * 0.02 - 0.01), 4)
        buses.append((bid, f"BUS {bid}", code, v, float(LOAD_118.get(bid, 0.0)), pg))

    branches = []
    for f, t, ckt in _with_circuits(BRANCHES_118):
        x = round(0.03 + rng.random() * 0.15, 5)
        tap = TRANSFORMERS_118.get((f, t)) or TRANSFORMERS_118.get((t, f))
        branches.append((f, t, ckt, x, 0, tap))

    draft = _make_cdf("118 BUS SCREENING CASE", buses, branches)
    ratings = _ratings_from_base(draft)
    branches = [
        (f, t, ckt, x, ratings[i], tap) for i, (f, t, ckt, x, _, tap) in enumerate(branches)
    ]
    return _make_cdf("118 BUS SCREENING CASE", buses, branches)


def build_30() -> str:
    buses = []
    for bid in range(1, 31):
        if bid == SLACK_30:
            code, pg = 3, GEN_30.get(bid, 0.0)
        elif bid in GEN_30 or bid in PV_ZERO_30:
            code, pg = 2, GEN_30.get(bid, 0.0)
        else:
            code, pg = 0, 0.0
        buses.append((bid, f"BUS {bid}", code, 1.0, LOAD_30.get(bid, 0.0), pg))

    branches = [(f, t, ckt, x, 0, None) for f, t, ckt, x in _with_circuits(BRANCHES_30)]
    draft = _make_cdf("30 BUS SCREENING CASE", buses, branches)
    ratings = _ratings_from_base(draft)
    branches = [(f, t, ckt, x, ratings[i], None) for i, (f, t, ckt, x, _, _) in enumerate(branches)]
    return _make_cdf("30 BUS SCREENING CASE", buses, branches)


def build_demo8() -> str:
    doc = {
        "base_mva": 100.0,
        "buses": [
            {"id": 1, "name": "ALPHA", "type": "Slack", "v": 1.0, "angle": 0.0,
             "load_mw": 0.0, "gen_mw": 60.0, "v_min": 0.95, "v_max": 1.05},
            {"id": 2, "name": "HUB", "type": "PQ", "v": 1.0, "angle": 0.0,
             "load_mw": 25.0, "gen_mw": 0.0, "v_min": 0.95, "v_max": 1.05},
            {"id": 3, "name": "EAST", "type": "PQ", "v": 1.0, "angle": 0.0,
             "load_mw": 10.0, "gen_mw": 0.0, "v_min": 0.95, "v_max": 1.05},
            {"id": 4, "name": "PLANT", "type": "PV", "v": 1.0, "angle": 0.0,
             "load_mw": 0.0, "gen_mw": 40.0, "v_min": 0.95, "v_max": 1.05},
            {"id": 5, "name": "SOUTH", "type": "PQ", "v": 1.0, "angle": 0.0,
             "load_mw": 20.0, "gen_mw": 0.0, "v_min": 0.95, "v_max": 1.05},
            {"id": 6, "name": "SPUR", "type": "PQ", "v": 1.0, "angle": 0.0,
             "load_mw": 30.0, "gen_mw": 0.0, "v_min": 0.95, "v_max": 1.05},
            {"id": 7, "name": "TAIL", "type": "PV", "v": 1.0, "angle": 0.0,
             "load_mw": 0.0, "gen_mw": 10.0, "v_min": 0.95, "v_max": 1.05},
            {"id": 8, "name": "WEST", "type": "PQ", "v": 1.0, "angle": 0.0,
             "load_mw": 15.0, "gen_mw": 0.0, "v_min": 0.95, "v_max": 1.05},
        ],
        "branches": [
            {"from": 1, "to": 2, "ckt": 1, "x": 0.06, "rating_mva": 0.0, "status": "InService", "tap": 1.0},
            {"from": 1, "to": 3, "ckt": 1, "x": 0.10, "rating_mva": 0.0, "status": "InService", "tap": 1.0},
            {"from": 2, "to": 3, "ckt": 1, "x": 0.08, "rating_mva": 0.0, "status": "InService", "tap": 1.0},
            {"from": 2, "to": 4, "ckt": 1, "x": 0.05, "rating_mva": 0.0, "status": "InService", "tap": 1.0},
            {"from": 2, "to": 6, "ckt": 1, "x": 0.12, "rating_mva": 0.0, "status": "InService", "tap": 1.0},
            {"from": 6, "to": 7, "ckt": 1, "x": 0.09, "rating_mva": 0.0, "status": "InService", "tap": 1.0},
            {"from": 4, "to": 5, "ckt": 1, "x": 0.07, "rating_mva": 0.0, "status": "InService", "tap": 1.0},
            {"from": 5, "to": 8, "ckt": 1, "x": 0.11, "rating_mva": 0.0, "status": "InService", "tap": 1.0},
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def _check_118(text: str) -> None:
    validated = validate(parse_cdf(text))
    net = validated.network
    assert len(net.buses) == 118, len(net.buses)
    assert len(net.branches) == 186, len(net.branches)
    graph = build_base_graph(validated)
    assert solve_base(graph).converged

    bridges = tarjan_bridges(graph)
    expected_class = {
        (8, 9): IslandClass.GENERATOR,
        (42, 63): IslandClass.LOAD,
        (85, 86): IslandClass.ACTIVE,
    }
    by_pair = {}
    for e in graph.edges:
        pair = tuple(sorted((validated.id_of[e.u], validated.id_of[e.v])))
        by_pair.setdefault(pair, e.edge_id)
    for pair, cls in expected_class.items():
        eid = by_pair[pair]
        assert eid in bridges, f"{pair} must be a bridge"
        e = graph.edges[eid]
        view = derive_view(graph, {eid})
        side_u = enumerate_component(view, e.u)
        island = side_u if graph.slack_vertex not in side_u else enumerate_component(view, e.v)
        got = classify_island(island, graph).island_class
        assert got is cls, f"{pair}: expected {cls}, got {got}"


def main() -> None:
    DATA.mkdir(exist_ok=True)
    case118 = build_118()
    _check_118(case118)
    (DATA / "ieee118.cdf").write_text(case118)
    (DATA / "ieee30.cdf").write_text(build_30())
    (DATA / "demo8.json").write_text(build_demo8())
    (DATA / "weights_default.json").write_text(
        json.dumps(
            {"k_bus": 1.0, "k_line": 1.0, "k_gen_shed": 10.0, "k_load_shed": 10.0,
             "k_div": 10000.0, "k_island": 1000.0},
            indent=2,
        )
        + "\n"
    )
    print("wrote", ", ".join(p.name for p in sorted(DATA.iterdir())))


if __name__ == "__main__":
    main()
