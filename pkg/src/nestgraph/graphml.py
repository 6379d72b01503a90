"""GraphML reading and writing, including nested graphs for compounds.

The writer emits a canonical document: fixed key declarations first, then
the nesting tree with nodes ordered by id, then every edge under the root
graph, also ordered by id.  Identical models produce identical bytes.

The key vocabulary is documented in docs/format.md.  Data keys outside the
vocabulary survive a round trip in per-object attribute bags; compound
geometry in a file is advisory only and is recomputed from the children
after parsing.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from xml.sax.saxutils import escape

from .geometry import Rect
from .model import (
    ArrowStyle,
    Edge,
    Graph,
    GraphModel,
    LineStyle,
    Node,
    NodeShape,
    RenderStyle,
)

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

NODE_KEYS = [
    ("x", "double"),
    ("y", "double"),
    ("width", "double"),
    ("height", "double"),
    ("shape", "string"),
    ("text", "string"),
    ("color", "string"),
    ("borderColor", "string"),
    ("clusterID", "string"),
]
EDGE_KEYS = [
    ("text", "string"),
    ("color", "string"),
    ("style", "string"),
    ("arrow", "string"),
    ("width", "double"),
]
GRAPH_KEYS = [("margin", "double")]

_CANONICAL_NODE = re.compile(r"^n(\d+)$")
_CANONICAL_EDGE = re.compile(r"^e(\d+)$")
_CANONICAL_GRAPH = re.compile(r"^g(\d+)$")

_COLOR = re.compile(r"^#[0-9a-fA-F]{6}$")


class GraphMLError(Exception):
    """The document is not a usable GraphML graph; the message says why."""


# ----------------------------------------------------------------------
# writing


def write_graphml(model: GraphModel) -> str:
    """Serialize a model to canonical GraphML text."""
    violations = model.validate()
    if violations:
        raise GraphMLError(f"refusing to write an invalid model: {violations[0].message}")
    keys = _key_table(model)
    key_id = {spec: f"d{i}" for i, spec in enumerate(keys)}
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<graphml xmlns="{GRAPHML_NS}">',
    ]
    for (domain, name, attr_type) in keys:
        lines.append(
            f'  <key id="{key_id[(domain, name, attr_type)]}" for="{domain}"'
            f' attr.name="{name}" attr.type="{attr_type}"/>'
        )
    _write_graph(model, model.root, lines, key_id, indent=1, with_edges=True)
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


def _key_table(model: GraphModel) -> list[tuple[str, str, str]]:
    keys = [("node", name, t) for name, t in NODE_KEYS]
    keys += [("edge", name, t) for name, t in EDGE_KEYS]
    keys += [("graph", name, t) for name, t in GRAPH_KEYS]
    known = {("node", name) for name, _ in NODE_KEYS}
    known |= {("edge", name) for name, _ in EDGE_KEYS}
    known |= {("graph", name) for name, _ in GRAPH_KEYS}
    extras: set[tuple[str, str]] = set()
    for node in model.nodes.values():
        extras |= {("node", name) for name in node.attrs if ("node", name) not in known}
    for edge in model.edges.values():
        extras |= {("edge", name) for name in edge.attrs if ("edge", name) not in known}
    for graph in model.graphs.values():
        extras |= {("graph", name) for name in graph.attrs if ("graph", name) not in known}
    order = {"node": 0, "edge": 1, "graph": 2}
    for domain, name in sorted(extras, key=lambda e: (order[e[0]], e[1])):
        keys.append((domain, name, "string"))
    return keys


def _data_line(lines: list[str], indent: int, key: str, value: str) -> None:
    lines.append(f'{"  " * indent}<data key="{key}">{escape(value)}</data>')


def _num(value: float) -> str:
    """Canonical text for a number; callers may have stored Python ints."""
    return repr(float(value))


def _write_graph(
    model: GraphModel,
    graph_id: int,
    lines: list[str],
    key_id: dict[tuple[str, str, str], str],
    indent: int,
    with_edges: bool,
) -> None:
    graph = model.graphs[graph_id]
    pad = "  " * indent
    lines.append(f'{pad}<graph id="g{graph.id}" edgedefault="directed">')
    _data_line(lines, indent + 1, key_id[("graph", "margin", "double")], _num(graph.margins))
    for name in sorted(graph.attrs):
        if ("graph", name, "string") in key_id:
            _data_line(lines, indent + 1, key_id[("graph", name, "string")], graph.attrs[name])
    for node_id in sorted(graph.nodes):
        node = model.nodes[node_id]
        lines.append(f'{pad}  <node id="n{node.id}">')
        b = node.bounds
        for name, value in (
            ("x", _num(b.x)),
            ("y", _num(b.y)),
            ("width", _num(b.w)),
            ("height", _num(b.h)),
        ):
            _data_line(lines, indent + 2, key_id[("node", name, "double")], value)
        _data_line(lines, indent + 2, key_id[("node", "shape", "string")], node.shape.value)
        _data_line(lines, indent + 2, key_id[("node", "text", "string")], node.label)
        _data_line(lines, indent + 2, key_id[("node", "color", "string")], node.style.fill_color)
        _data_line(lines, indent + 2, key_id[("node", "borderColor", "string")], node.style.border_color)
        for name in sorted(node.attrs):
            if ("node", name, "string") in key_id:
                _data_line(lines, indent + 2, key_id[("node", name, "string")], node.attrs[name])
        if node.child_graph is not None:
            _write_graph(model, node.child_graph, lines, key_id, indent + 2, with_edges=False)
        lines.append(f"{pad}  </node>")
    if with_edges:
        for edge_id in sorted(model.edges):
            edge = model.edges[edge_id]
            lines.append(
                f'{pad}  <edge id="e{edge.id}" source="n{edge.source}" target="n{edge.target}">'
            )
            _data_line(lines, indent + 2, key_id[("edge", "text", "string")], edge.label)
            _data_line(lines, indent + 2, key_id[("edge", "color", "string")], edge.style.border_color)
            _data_line(lines, indent + 2, key_id[("edge", "style", "string")], edge.style.line_style.value)
            _data_line(lines, indent + 2, key_id[("edge", "arrow", "string")], edge.style.arrow.value)
            _data_line(lines, indent + 2, key_id[("edge", "width", "double")], _num(edge.style.width))
            for name in sorted(edge.attrs):
                if ("edge", name, "string") in key_id:
                    _data_line(lines, indent + 2, key_id[("edge", name, "string")], edge.attrs[name])
            lines.append(f"{pad}  </edge>")
    lines.append(f"{pad}</graph>")


# ----------------------------------------------------------------------
# parsing


def parse_graphml(text: str) -> GraphModel:
    """Build a model from GraphML text; raises GraphMLError on bad input."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, column = exc.position
        raise GraphMLError(f"malformed XML at line {line}, column {column}: {exc.msg}") from None
    if _local(root.tag) != "graphml":
        raise GraphMLError(f"root element is <{_local(root.tag)}>, expected <graphml>")

    keys: dict[str, tuple[str, str, str]] = {}
    for elem in root:
        if _local(elem.tag) != "key":
            continue
        key_id = elem.get("id")
        if key_id is None:
            raise GraphMLError("key element without an id")
        keys[key_id] = (
            elem.get("for", "all"),
            elem.get("attr.name", key_id),
            elem.get("attr.type", "string"),
        )

    top = [elem for elem in root if _local(elem.tag) == "graph"]
    if len(top) != 1:
        raise GraphMLError(f"expected exactly one top-level graph, found {len(top)}")

    doc = _DocWalk(keys)
    doc.walk_graph(top[0], parent_sid=None)
    return _build_model(doc)


def _local(tag: str) -> str:
    return tag.rpartition("}")[2]


class _DocWalk:
    """First pass over the document: collect objects with their string ids."""

    def __init__(self, keys: dict[str, tuple[str, str, str]]):
        self.keys = keys
        self.graphs: list[dict] = []
        self.nodes: list[dict] = []
        self.edges: list[dict] = []
        self.seen_nodes: set[str] = set()
        self.seen_edges: set[str] = set()
        self.seen_graphs: set[str] = set()
        self._anon = 0

    def _data_of(self, elem: ET.Element, domain: str) -> dict[str, str]:
        data: dict[str, str] = {}
        for child in elem:
            if _local(child.tag) != "data":
                continue
            ref = child.get("key", "")
            spec = self.keys.get(ref)
            if spec is None:
                raise GraphMLError(f"data references undeclared key {ref!r}")
            key_domain, name, _ = spec
            if key_domain not in (domain, "all"):
                raise GraphMLError(f"key {name!r} is declared for {key_domain}, used on a {domain}")
            data[name] = child.text or ""
        return data

    def walk_graph(self, elem: ET.Element, parent_sid: str | None) -> str:
        sid = elem.get("id")
        if sid is None:
            self._anon += 1
            sid = f"__anon_graph_{self._anon}"
        if sid in self.seen_graphs:
            raise GraphMLError(f"duplicate graph id {sid!r}")
        self.seen_graphs.add(sid)
        record = {
            "sid": sid,
            "parent": parent_sid,
            "data": self._data_of(elem, "graph"),
            "directed": elem.get("edgedefault", "directed") == "directed",
            "nodes": [],
        }
        self.graphs.append(record)
        for child in elem:
            tag = _local(child.tag)
            if tag == "node":
                record["nodes"].append(self.walk_node(child, sid, record["directed"]))
            elif tag == "edge":
                self.walk_edge(child, record["directed"])
            elif tag in ("data", "key"):
                continue
        return sid

    def walk_node(self, elem: ET.Element, graph_sid: str, directed: bool) -> str:
        sid = elem.get("id")
        if sid is None:
            raise GraphMLError("node element without an id")
        if sid in self.seen_nodes:
            raise GraphMLError(f"duplicate node id {sid!r}")
        self.seen_nodes.add(sid)
        record = {
            "sid": sid,
            "graph": graph_sid,
            "data": self._data_of(elem, "node"),
            "child": None,
        }
        self.nodes.append(record)
        nested = [child for child in elem if _local(child.tag) == "graph"]
        if len(nested) > 1:
            raise GraphMLError(f"node {sid!r} holds more than one nested graph")
        if nested:
            record["child"] = self.walk_graph(nested[0], parent_sid=sid)
        return sid

    def walk_edge(self, elem: ET.Element, graph_directed: bool) -> None:
        sid = elem.get("id")
        if sid is None:
            self._anon += 1
            sid = f"__anon_edge_{self._anon}"
        if sid in self.seen_edges:
            raise GraphMLError(f"duplicate edge id {sid!r}")
        self.seen_edges.add(sid)
        source = elem.get("source")
        target = elem.get("target")
        if source is None or target is None:
            raise GraphMLError(f"edge {sid!r} lacks a source or target")
        directed_attr = elem.get("directed")
        directed = graph_directed if directed_attr is None else directed_attr == "true"
        self.edges.append(
            {
                "sid": sid,
                "source": source,
                "target": target,
                "data": self._data_of(elem, "edge"),
                "directed": directed,
            }
        )


def _assign_ids(doc: _DocWalk) -> dict[str, int]:
    """Map document string ids to model integers, reusing canonical ones."""
    mapping: dict[str, int] = {}
    canonical = True
    used: set[int] = set()
    for records, pattern in (
        (doc.nodes, _CANONICAL_NODE),
        (doc.edges, _CANONICAL_EDGE),
        (doc.graphs, _CANONICAL_GRAPH),
    ):
        for record in records:
            match = pattern.match(record["sid"])
            if match is None:
                canonical = False
                break
            value = int(match.group(1))
            if value in used:
                canonical = False
                break
            used.add(value)
        if not canonical:
            break
    if canonical:
        for record in doc.graphs + doc.nodes + doc.edges:
            mapping[record["sid"]] = int(record["sid"][1:])
        return mapping
    counter = 0
    for record in doc.graphs:
        mapping[record["sid"]] = counter
        counter += 1
    for record in doc.nodes:
        mapping[record["sid"]] = counter
        counter += 1
    for record in doc.edges:
        mapping[record["sid"]] = counter
        counter += 1
    return mapping


def _parse_double(raw: str | None, fallback: float, context: str) -> float:
    if raw is None or raw == "":
        return fallback
    try:
        return float(raw)
    except ValueError:
        raise GraphMLError(f"{context}: {raw!r} is not a number") from None


def _parse_enum(raw: str | None, enum_type, fallback, context: str):
    if raw is None or raw == "":
        return fallback
    try:
        return enum_type(raw)
    except ValueError:
        allowed = ", ".join(e.value for e in enum_type)
        raise GraphMLError(f"{context}: {raw!r} not one of {allowed}") from None


def _parse_color(raw: str | None, fallback: str, context: str) -> str:
    if raw is None or raw == "":
        return fallback
    if not _COLOR.match(raw):
        raise GraphMLError(f"{context}: {raw!r} is not a #rrggbb color")
    return raw.lower()


def _build_model(doc: _DocWalk) -> GraphModel:
    known_node = {name for name, _ in NODE_KEYS if name != "clusterID"}
    known_edge = {name for name, _ in EDGE_KEYS}
    ids = _assign_ids(doc)
    model = GraphModel.__new__(GraphModel)
    model.graphs = {}
    model.nodes = {}
    model.edges = {}
    model.highlight = set()
    model.root = ids[doc.graphs[0]["sid"]]
    model._next_id = max(ids.values(), default=-1) + 1

    for record in doc.graphs:
        gid = ids[record["sid"]]
        data = record["data"]
        graph = Graph(
            id=gid,
            parent_node=None if record["parent"] is None else ids[record["parent"]],
            margins=_parse_double(data.get("margin"), 10.0, f"graph {record['sid']} margin"),
        )
        graph.nodes = [ids[sid] for sid in record["nodes"]]
        graph.attrs = {k: v for k, v in data.items() if k != "margin"}
        model.graphs[gid] = graph

    for record in doc.nodes:
        nid = ids[record["sid"]]
        data = record["data"]
        context = f"node {record['sid']}"
        bounds = Rect(
            _parse_double(data.get("x"), 0.0, f"{context} x"),
            _parse_double(data.get("y"), 0.0, f"{context} y"),
            _parse_double(data.get("width"), 40.0, f"{context} width"),
            _parse_double(data.get("height"), 40.0, f"{context} height"),
        )
        if bounds.w < 0 or bounds.h < 0:
            raise GraphMLError(f"{context}: negative size")
        style = RenderStyle(
            fill_color=_parse_color(data.get("color"), "#ffffff", f"{context} color"),
            border_color=_parse_color(data.get("borderColor"), "#000000", f"{context} borderColor"),
        )
        model.nodes[nid] = Node(
            id=nid,
            label=data.get("text", ""),
            bounds=bounds,
            shape=_parse_enum(data.get("shape"), NodeShape, NodeShape.RECTANGLE, f"{context} shape"),
            style=style,
            owner_graph=ids[record["graph"]],
            child_graph=None if record["child"] is None else ids[record["child"]],
            attrs={k: v for k, v in data.items() if k not in known_node},
        )

    for record in doc.edges:
        eid = ids[record["sid"]]
        data = record["data"]
        context = f"edge {record['sid']}"
        for endpoint in (record["source"], record["target"]):
            if endpoint not in doc.seen_nodes:
                raise GraphMLError(f"{context} references undeclared node {endpoint!r}")
        default_arrow = ArrowStyle.TARGET if record["directed"] else ArrowStyle.NONE
        style = RenderStyle(
            border_color=_parse_color(data.get("color"), "#000000", f"{context} color"),
            line_style=_parse_enum(data.get("style"), LineStyle, LineStyle.SOLID, f"{context} style"),
            arrow=_parse_enum(data.get("arrow"), ArrowStyle, default_arrow, f"{context} arrow"),
            width=_parse_double(data.get("width"), 1.0, f"{context} width"),
        )
        if style.width <= 0:
            raise GraphMLError(f"{context}: width must be positive")
        model.edges[eid] = Edge(
            id=eid,
            source=ids[record["source"]],
            target=ids[record["target"]],
            label=data.get("text", ""),
            style=style,
            attrs={k: v for k, v in data.items() if k not in known_edge},
        )

    model.retighten_all()
    violations = model.validate()
    if violations:
        first = violations[0]
        raise GraphMLError(f"document is not a valid model: {first.message} (object {first.object_id})")
    return model
