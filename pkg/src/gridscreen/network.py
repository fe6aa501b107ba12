"""Network ingestion: IEEE common data format and native JSON, plus validation.

Both parsers produce the same :class:`PowerNetwork` shape. The CDF reader
follows the published fixed-column card layout (title card, then BUS DATA /
BRANCH DATA sections, each closed by a ``-999``-style terminator). Fields the
DC screening pipeline does not use (resistance, charging, shunts, MVAR data)
are kept in each record's ``extras`` dict so nothing is lost on ingestion,
but they never participate in equality.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .errors import (
    DanglingBranch,
    DuplicateBranchKey,
    DuplicateBus,
    InvalidNetwork,
    MalformedCard,
    MissingSectionTerminator,
    NoSlackBus,
    SchemaViolation,
    ZeroReactance,
)


class BusType(str, enum.Enum):
    PQ = "PQ"
    PV = "PV"
    SLACK = "Slack"


class BranchStatus(str, enum.Enum):
    IN_SERVICE = "InService"
    OUT_OF_SERVICE = "OutOfService"


@dataclass
class BusRecord:
    id: int
    name: str
    bus_type: BusType
    voltage_mag: float = 1.0
    voltage_ang: float = 0.0
    load_mw: float = 0.0
    gen_mw: float = 0.0
    v_min: float | None = None
    v_max: float | None = None
    extras: dict = field(default_factory=dict, compare=False, repr=False)


@dataclass
class BranchRecord:
    from_bus: int
    to_bus: int
    reactance_x: float
    circuit_id: int = 1
    rating_mva: float = 0.0  # 0 = unlimited
    status: BranchStatus = BranchStatus.IN_SERVICE
    tap_ratio: float = 1.0
    extras: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def key(self) -> tuple[int, int, int]:
        """Unordered endpoint pair plus circuit, for uniqueness checks."""
        a, b = sorted((self.from_bus, self.to_bus))
        return (a, b, self.circuit_id)


@dataclass
class PowerNetwork:
    base_mva: float
    buses: list[BusRecord]
    branches: list[BranchRecord]
    name: str = field(default="", compare=False)

    def bus_ids(self) -> set[int]:
        return {b.id for b in self.buses}


@dataclass(frozen=True)
class ValidatedNetwork:
    """A :class:`PowerNetwork` whose invariants have been checked, annotated
    with a contiguous internal index per bus (0..n-1, in bus-list order)."""

    network: PowerNetwork
    index_of: dict
    id_of: tuple
    slack_index: int

    @property
    def n_buses(self) -> int:
        return len(self.id_of)

    def bus(self, index: int) -> BusRecord:
        return self.network.buses[index]


# --- IEEE common data format --------------------------------------------------

# 0-indexed column slices per the published card layout.
_BUS_COLS = {
    "id": (0, 4),
    "name": (5, 17),
    "area": (18, 20),
    "zone": (20, 23),
    "type": (24, 26),
    "voltage": (27, 33),
    "angle": (33, 40),
    "load_mw": (40, 49),
    "load_mvar": (49, 59),
    "gen_mw": (59, 67),
    "gen_mvar": (67, 75),
    "base_kv": (76, 83),
    "desired_v": (84, 90),
    "max_limit": (90, 98),
    "min_limit": (98, 106),
    "shunt_g": (106, 114),
    "shunt_b": (114, 122),
    "remote_bus": (123, 127),
}

_BRANCH_COLS = {
    "from": (0, 4),
    "to": (5, 9),
    "area": (10, 12),
    "zone": (12, 15),
    "circuit": (16, 17),
    "type": (18, 19),
    "r": (19, 29),
    "x": (29, 40),
    "b": (40, 50),
    "rating1": (50, 55),
    "rating2": (56, 61),
    "rating3": (62, 67),
    "control_bus": (68, 72),
    "side": (73, 74),
    "tap": (76, 82),
    "phase": (83, 90),
    "min_tap": (90, 97),
    "max_tap": (97, 104),
    "step": (105, 111),
    "min_limit": (112, 119),
    "max_limit": (119, 126),
}

_BUS_TYPE_CODES = {0: BusType.PQ, 1: BusType.PQ, 2: BusType.PV, 3: BusType.SLACK}


def _slice(line: str, span: tuple[int, int]) -> str:
    return line[span[0] : span[1]].strip()


def _ffloat(text: str, default: float = 0.0) -> float:
    return float(text) if text else default


def _fint(text: str, default: int = 0) -> int:
    return int(float(text)) if text else default


def _parse_bus_card(line: str, line_no: int) -> BusRecord:
    get = lambda name: _slice(line, _BUS_COLS[name])
    try:
        bus_id = _fint(get("id"), default=-1)
        if bus_id < 0:
            raise ValueError("missing bus number")
        code = _fint(get("type"), default=0)
        if code not in _BUS_TYPE_CODES:
            raise ValueError(f"unknown bus type code {code}")
        return BusRecord(
            id=bus_id,
            name=get("name"),
            bus_type=_BUS_TYPE_CODES[code],
            voltage_mag=_ffloat(get("voltage"), default=1.0),
            voltage_ang=_ffloat(get("angle")),
            load_mw=_ffloat(get("load_mw")),
            gen_mw=_ffloat(get("gen_mw")),
            v_min=None,
            v_max=None,
            extras={
                "area": _fint(get("area")),
                "zone": _fint(get("zone")),
                "load_mvar": _ffloat(get("load_mvar")),
                "gen_mvar": _ffloat(get("gen_mvar")),
                "base_kv": _ffloat(get("base_kv")),
                "desired_v": _ffloat(get("desired_v")),
                "max_limit": _ffloat(get("max_limit")),
                "min_limit": _ffloat(get("min_limit")),
                "shunt_g": _ffloat(get("shunt_g")),
                "shunt_b": _ffloat(get("shunt_b")),
            },
        )
    except ValueError as exc:
        raise MalformedCard(line_no, str(exc)) from exc


def _parse_branch_card(line: str, line_no: int) -> BranchRecord:
    get = lambda name: _slice(line, _BRANCH_COLS[name])
    try:
        from_bus = _fint(get("from"), default=-1)
        to_bus = _fint(get("to"), default=-1)
        if from_bus < 0 or to_bus < 0:
            raise ValueError("missing branch endpoint")
        circuit = _fint(get("circuit"), default=1) or 1
        tap = _ffloat(get("tap"))
        return BranchRecord(
            from_bus=from_bus,
            to_bus=to_bus,
            reactance_x=_ffloat(get("x")),
            circuit_id=circuit,
            rating_mva=_ffloat(get("rating1")),
            status=BranchStatus.IN_SERVICE,  # CDF carries no status field
            tap_ratio=tap if tap > 0 else 1.0,
            extras={
                "r": _ffloat(get("r")),
                "b": _ffloat(get("b")),
                "type": _fint(get("type")),
                "rating2": _ffloat(get("rating2")),
                "rating3": _ffloat(get("rating3")),
                "phase": _ffloat(get("phase")),
                "raw_tap": tap,
            },
        )
    except ValueError as exc:
        raise MalformedCard(line_no, str(exc)) from exc


def _is_terminator(stripped: str) -> bool:
    return stripped.startswith("-9")


def parse_cdf(text: str) -> PowerNetwork:
    """Parse an IEEE common-data-format case into a :class:`PowerNetwork`.

    Bus type code 3 maps to Slack, 2 to PV, 0/1 to PQ. Referential integrity
    (unique bus ids, branch endpoints exist) is enforced here; the rest of the
    invariants are checked by :func:`validate`.
    """
    lines = text.splitlines()
    base_mva = None
    case_name = ""
    buses: list[BusRecord] = []
    branches: list[BranchRecord] = []
    seen_ids: set[int] = set()

    section = None  # None | "bus" | "branch" | "done"
    for idx, raw in enumerate(lines):
        line_no = idx + 1
        stripped = raw.strip()
        if base_mva is None:
            if not stripped:
                continue
            try:
                base_mva = _ffloat(_slice(raw, (31, 37)), default=-1.0)
            except ValueError as exc:
                raise MalformedCard(line_no, "unreadable MVA base") from exc
            if base_mva <= 0:
                raise MalformedCard(line_no, "title card lacks a positive MVA base")
            case_name = raw[45:73].strip()
            continue
        if not stripped:
            continue
        upper = stripped.upper()
        if upper.startswith("END OF DATA"):
            break
        if section is None:
            if upper.startswith("BUS DATA"):
                section = "bus"
            elif upper.startswith("BRANCH DATA"):
                section = "branch"
            continue
        if _is_terminator(stripped):
            section = None
            continue
        if section == "bus":
            bus = _parse_bus_card(raw, line_no)
            if bus.id in seen_ids:
                raise DuplicateBus(bus.id)
            seen_ids.add(bus.id)
            buses.append(bus)
        elif section == "branch":
            branches.append(_parse_branch_card(raw, line_no))

    if base_mva is None:
        raise MalformedCard(1, "empty input")
    if section == "bus":
        raise MissingSectionTerminator("BUS DATA")
    if section == "branch":
        raise MissingSectionTerminator("BRANCH DATA")

    for br in branches:
        for end in (br.from_bus, br.to_bus):
            if end not in seen_ids:
                raise DanglingBranch(end)

    return PowerNetwork(base_mva=base_mva, buses=buses, branches=branches, name=case_name)


# --- native JSON ---------------------------------------------------------------

_NATIVE_SCHEMA = {
    "type": "object",
    "required": ["base_mva", "buses", "branches"],
    "properties": {
        "base_mva": {"type": "number", "exclusiveMinimum": 0},
        "buses": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "type"],
                "properties": {
                    "id": {"type": "integer"},
                    "name": {"type": "string"},
                    "type": {"enum": ["PQ", "PV", "Slack"]},
                    "v": {"type": "number"},
                    "angle": {"type": "number"},
                    "load_mw": {"type": "number"},
                    "gen_mw": {"type": "number"},
                    "v_min": {"type": ["number", "null"]},
                    "v_max": {"type": ["number", "null"]},
                },
            },
        },
        "branches": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "to", "x"],
                "properties": {
                    "from": {"type": "integer"},
                    "to": {"type": "integer"},
                    "ckt": {"type": "integer", "minimum": 1},
                    "x": {"type": "number"},
                    "rating_mva": {"type": "number", "minimum": 0},
                    "status": {"enum": ["InService", "OutOfService"]},
                    "tap": {"type": "number"},
                },
            },
        },
    },
}


def _json_path(error: jsonschema.ValidationError) -> str:
    parts: list[str] = []
    for p in error.absolute_path:
        if isinstance(p, int):
            parts.append(f"[{p}]")
        else:
            parts.append(("." if parts else "") + str(p))
    return "".join(parts) or "$"


def parse_native_json(text: str) -> PowerNetwork:
    """Parse the native JSON case schema; semantically equivalent to CDF output."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("$", f"not valid JSON: {exc}") from exc
    validator = jsonschema.Draft202012Validator(_NATIVE_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise SchemaViolation(_json_path(err), err.message)

    buses = []
    seen: set[int] = set()
    for b in doc["buses"]:
        if b["id"] in seen:
            raise DuplicateBus(b["id"])
        seen.add(b["id"])
        buses.append(
            BusRecord(
                id=b["id"],
                name=b.get("name", ""),
                bus_type=BusType(b["type"]),
                voltage_mag=b.get("v", 1.0),
                voltage_ang=b.get("angle", 0.0),
                load_mw=b.get("load_mw", 0.0),
                gen_mw=b.get("gen_mw", 0.0),
                v_min=b.get("v_min"),
                v_max=b.get("v_max"),
            )
        )
    branches = []
    for br in doc["branches"]:
        for end in (br["from"], br["to"]):
            if end not in seen:
                raise DanglingBranch(end)
        branches.append(
            BranchRecord(
                from_bus=br["from"],
                to_bus=br["to"],
                reactance_x=br["x"],
                circuit_id=br.get("ckt", 1),
                rating_mva=br.get("rating_mva", 0.0),
                status=BranchStatus(br.get("status", "InService")),
                tap_ratio=br.get("tap", 1.0),
            )
        )
    return PowerNetwork(base_mva=doc["base_mva"], buses=buses, branches=branches)


def emit_native_json(network: PowerNetwork, indent: int = 2) -> str:
    """Serialize a network to the native JSON schema (round-trips losslessly
    over the fields the schema carries)."""
    doc = {
        "base_mva": network.base_mva,
        "buses": [
            {
                "id": b.id,
                "name": b.name,
                "type": b.bus_type.value,
                "v": b.voltage_mag,
                "angle": b.voltage_ang,
                "load_mw": b.load_mw,
                "gen_mw": b.gen_mw,
                "v_min": b.v_min,
                "v_max": b.v_max,
            }
            for b in network.buses
        ],
        "branches": [
            {
                "from": br.from_bus,
                "to": br.to_bus,
                "ckt": br.circuit_id,
                "x": br.reactance_x,
                "rating_mva": br.rating_mva,
                "status": br.status.value,
                "tap": br.tap_ratio,
            }
            for br in network.branches
        ],
    }
    return json.dumps(doc, indent=indent)


# --- validation -----------------------------------------------------------------


def validate(network: PowerNetwork) -> ValidatedNetwork:
    """Check all record invariants and assign contiguous internal bus indices.

    Raises :class:`ZeroReactance`, :class:`NoSlackBus`,
    :class:`DuplicateBranchKey`, or :class:`InvalidNetwork` on violation.
    """
    if network.base_mva <= 0:
        raise InvalidNetwork(f"base_mva must be positive, got {network.base_mva}")

    index_of: dict[int, int] = {}
    for bus in network.buses:
        if bus.id in index_of:
            raise DuplicateBus(bus.id)
        if bus.load_mw < 0:
            raise InvalidNetwork(f"bus {bus.id} has negative load")
        if bus.v_min is not None and bus.v_max is not None and bus.v_min > bus.v_max:
            raise InvalidNetwork(f"bus {bus.id} has v_min > v_max")
        index_of[bus.id] = len(index_of)

    seen_keys: set[tuple[int, int, int]] = set()
    for br in network.branches:
        if br.from_bus == br.to_bus:
            raise InvalidNetwork(f"branch {br.from_bus}-{br.to_bus} is a self-loop")
        for end in (br.from_bus, br.to_bus):
            if end not in index_of:
                raise DanglingBranch(end)
        if br.reactance_x == 0:
            raise ZeroReactance(br.key)
        if br.key in seen_keys:
            raise DuplicateBranchKey(br.key)
        seen_keys.add(br.key)

    slack_index = next(
        (i for i, b in enumerate(network.buses) if b.bus_type is BusType.SLACK), None
    )
    if slack_index is None:
        raise NoSlackBus()

    return ValidatedNetwork(
        network=network,
        index_of=index_of,
        id_of=tuple(b.id for b in network.buses),
        slack_index=slack_index,
    )


# --- loading helpers -------------------------------------------------------------


def sniff_format(text: str) -> str:
    """Distinguish CDF from native JSON: JSON starts with '{'."""
    return "json" if text.lstrip().startswith("{") else "cdf"


def load_network(path: str | Path, input_format: str = "auto") -> PowerNetwork:
    """Read a case file in either supported format ('cdf', 'json', or 'auto')."""
    text = Path(path).read_text()
    fmt = sniff_format(text) if input_format == "auto" else input_format
    if fmt == "cdf":
        return parse_cdf(text)
    if fmt == "json":
        return parse_native_json(text)
    raise ValueError(f"unknown input format {input_format!r}")
