"""Report emission: JSON, CSV, and an aligned text table.

The JSON document is the interchange schema shared by the CLI and the HTTP
service: {"counts": {...}, "timings_ms": {...}, "records": [...]} with one
record per configured contingency. CSV carries the same record set
flattened; the text table adds the scenario-count and timing blocks laid
out for terminal reading.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

from .errors import IoFailure
from .screening import ScreeningReport


def record_to_dict(record, branch_of_edge: dict, bus_id_of_vertex) -> dict:
    f, t, ckt = branch_of_edge[record.contingency]
    return {
        "edge": {"from": f, "to": t, "ckt": ckt},
        "si": record.si,
        "breakdown": dict(record.term_breakdown),
        "islands": [
            {
                "buses": sorted(bus_id_of_vertex[v] for v in isl.vertices),
                "class": isl.island_class.value,
                "gen_mw": isl.gen_mw,
                "load_mw": isl.load_mw,
            }
            for isl in record.islands
        ],
        "diverged": record.diverged,
    }


def to_json_dict(report: ScreeningReport, top: int | None = None) -> dict:
    records = report.records if top is None else report.records[:top]
    return {
        "counts": dict(report.scenario_counts),
        "timings_ms": report.timings.to_dict(),
        "records": [
            record_to_dict(r, report.branch_of_edge, report.bus_id_of_vertex) for r in records
        ],
    }


def render_json(report: ScreeningReport, top: int | None = None) -> str:
    return json.dumps(to_json_dict(report, top), indent=2) + "\n"


CSV_COLUMNS = (
    "edge_id",
    "from",
    "to",
    "ckt",
    "si",
    "class",
    "shed_gen_mw",
    "shed_load_mw",
    "diverged",
)


def render_csv(report: ScreeningReport, top: int | None = None) -> str:
    records = report.records if top is None else report.records[:top]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        f, t, ckt = report.branch_of_edge[r.contingency]
        cls = r.islands[0].island_class.value if r.islands else ""
        writer.writerow(
            [
                r.contingency,
                f,
                t,
                ckt,
                repr(r.si),
                cls,
                repr(sum(i.gen_mw for i in r.islands)),
                repr(sum(i.load_mw for i in r.islands)),
                str(r.diverged).lower(),
            ]
        )
    return buf.getvalue()


def render_table(report: ScreeningReport, top: int | None = None, case_name: str = "") -> str:
    counts = report.scenario_counts
    lines = []
    lines.append(f"{'Test case':<28}{case_name or '-'}")
    lines.append(f"{'Total branches':<28}{counts['total']}")
    lines.append("Test scenarios")
    for label, key in (
        ("Generators", "generator_islands"),
        ("Loads", "load_islands"),
        ("Islands", "active_islands"),
        ("Dead islands", "dead_islands"),
        ("Diverged", "diverged"),
        ("No island scenarios", "no_island"),
        ("Total", "total"),
    ):
        lines.append(f"  {label:<26}{counts[key]}")
    t = report.timings
    lines.append(f"{'Performance (ms)':<28}{t.wall_ms:.2f}")
    lines.append(f"  {'graph init':<26}{t.graph_init_ms:.2f}")
    lines.append(f"  {'solve total':<26}{t.solve_ms_total:.2f}")
    lines.append(f"  {'per-scenario avg':<26}{t.per_scenario_avg_ms:.4f}")
    lines.append("")

    records = report.records if top is None else report.records[:top]
    header = f"{'rank':>4}  {'branch':<12}{'si':>14}  {'class':<13}{'shed gen MW':>12}{'shed load MW':>13}  div"
    lines.append(header)
    lines.append("-" * len(header))
    for i, r in enumerate(records, start=1):
        f, tb, ckt = report.branch_of_edge[r.contingency]
        branch = f"{f}-{tb}" + (f"-{ckt}" if ckt != 1 else "")
        cls = r.islands[0].island_class.value if r.islands else "-"
        lines.append(
            f"{i:>4}  {branch:<12}{r.si:>14.4f}  {cls:<13}"
            f"{sum(x.gen_mw for x in r.islands):>12.2f}{sum(x.load_mw for x in r.islands):>13.2f}"
            f"  {'*' if r.diverged else ''}"
        )
    return "\n".join(lines) + "\n"


def emit_report(
    report: ScreeningReport,
    output_format: str,
    destination: str | Path | None,
    top: int | None = None,
    case_name: str = "",
) -> int:
    """Render and write a report; returns bytes written. ``None`` destination
    writes to stdout."""
    if output_format == "json":
        text = render_json(report, top)
    elif output_format == "csv":
        text = render_csv(report, top)
    elif output_format == "table":
        text = render_table(report, top, case_name)
    else:
        raise ValueError(f"unknown report format {output_format!r}")

    data = text.encode()
    if destination is None:
        sys.stdout.write(text)
        return len(data)
    try:
        path = Path(destination)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    except OSError as exc:
        raise IoFailure(str(destination), exc) from exc
    return len(data)
