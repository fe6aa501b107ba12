"""Command-line front end.

    gridscreen screen --input CASE [--format table|json|csv] [--top N]
                      [--output PATH] [--figures DIR] [--whatif F-T[-CKT]] ...
    gridscreen serve  --input CASE [--port 8080] ...

Exit codes: 0 success, 1 usage error, 2 parse/validation failure,
3 base-case divergence.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import BaseCaseDiverged, GridScreenError
from .network import BranchStatus, load_network, validate
from .screening import ScreeningConfig, run_screening
from .severity import SeverityWeights

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_DIVERGED = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 1
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="gridscreen", description="N-1 contingency screening")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_case_args(p):
        p.add_argument("--input", required=True, help="case file (CDF or native JSON)")
        p.add_argument(
            "--input-format", choices=["cdf", "json", "auto"], default="auto", dest="input_format"
        )
        p.add_argument("--weights", help="severity weights JSON file")

    screen = sub.add_parser("screen", help="run the N-1 sweep and emit a report")
    add_case_args(screen)
    screen.add_argument("--output", help="report destination (default: stdout)")
    screen.add_argument("--format", choices=["json", "csv", "table"], default="table")
    screen.add_argument("--top", type=int, help="truncate the ranked list to N records")
    screen.add_argument("--parallelism", type=int, default=1)
    screen.add_argument(
        "--whatif",
        action="append",
        metavar="FROM-TO[-CKT]",
        help="screen only the named branch(es) instead of the full sweep; repeatable",
    )
    screen.add_argument("--figures", metavar="DIR", help="also render report figures into DIR")

    serve = sub.add_parser("serve", help="start the what-if HTTP service")
    add_case_args(serve)
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--host", default="127.0.0.1")
    return parser


def _parse_whatif_spec(spec: str):
    parts = spec.split("-")
    if len(parts) not in (2, 3):
        raise _UsageError(f"--whatif expects FROM-TO or FROM-TO-CKT, got {spec!r}")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise _UsageError(f"--whatif expects integers, got {spec!r}") from None
    return (nums[0], nums[1], nums[2] if len(nums) == 3 else None)


def resolve_whatif_edges(specs, validated, graph):
    """Map FROM-TO[-CKT] specs to edge ids. Multiple parallel circuits with
    no circuit number is an error, never a guess."""
    edge_ids = []
    for spec in specs:
        f, t, ckt = _parse_whatif_spec(spec)
        matches = []
        for eid, bi in enumerate(graph.edge_branch_index):
            br = validated.network.branches[bi]
            if {br.from_bus, br.to_bus} == {f, t} and br.status is BranchStatus.IN_SERVICE:
                if ckt is None or br.circuit_id == ckt:
                    matches.append(eid)
        if not matches:
            raise _UsageError(f"--whatif {spec}: no in-service branch {f}-{t}")
        if len(matches) > 1:
            raise _UsageError(
                f"--whatif {spec}: {len(matches)} parallel circuits; add the circuit id"
            )
        edge_ids.append(matches[0])
    return edge_ids


def _load_weights(path: str | None) -> SeverityWeights:
    if path is None:
        return SeverityWeights()
    return SeverityWeights.from_json_file(path)


def _cmd_screen(args) -> int:
    from . import report as report_mod
    from .graph import build_base_graph

    network = load_network(args.input, args.input_format)
    validated = validate(network)
    weights = _load_weights(args.weights)
    graph = build_base_graph(validated)

    contingencies = None
    if args.whatif:
        contingencies = tuple(resolve_whatif_edges(args.whatif, validated, graph))
    if args.top is not None and args.top < 1:
        raise _UsageError("--top must be >= 1")
    if args.parallelism < 1:
        raise _UsageError("--parallelism must be >= 1")

    config = ScreeningConfig(
        contingencies=contingencies,
        weights=weights,
        parallelism=args.parallelism,
        top_n=args.top,
    )
    report = run_screening(validated, config)
    report_mod.emit_report(
        report,
        args.format,
        args.output,
        top=args.top,
        case_name=network.name or Path(args.input).name,
    )
    if args.figures:
        from .figures import save_report_figures

        save_report_figures(report, validated, graph, args.figures, top=args.top or 20)
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import build_session, create_app

    network = load_network(args.input, args.input_format)
    validated = validate(network)
    session = build_session(validated, _load_weights(args.weights))
    app = create_app(session)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    try:
        if args.command == "screen":
            return _cmd_screen(args)
        return _cmd_serve(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BaseCaseDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except FileNotFoundError as exc:
        print(f"error: cannot read {exc.filename}", file=sys.stderr)
        return EXIT_INPUT
    except (GridScreenError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entrypoint() -> None:
    sys.exit(main())
