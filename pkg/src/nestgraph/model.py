"""Compound graph model: graphs nested inside nodes, to arbitrary depth.

A model owns one root graph.  Any node may hold a child graph, which makes
it a compound; compound geometry is always derived, never set directly:
the bounds tightly wrap the children plus the owning graph's margins, with
a horizontal label strip appended at the bottom edge.  Every mutating
operation re-establishes that invariant for all affected ancestors, so a
model is valid after each call, not only at commit points.

Object ids are monotonically increasing integers unique across nodes,
edges, and graphs of one model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .geometry import Rect, rect_union

DEFAULT_MARGIN = 10.0
DEFAULT_LABEL_STRIP = 12.0
DEFAULT_NODE_W = 40.0
DEFAULT_NODE_H = 40.0
EMPTY_COMPOUND_SIDE = 40.0


class ModelError(Exception):
    """An editing operation violated one of its preconditions."""


class NodeShape(Enum):
    RECTANGLE = "rectangle"
    ELLIPSE = "ellipse"
    TRIANGLE = "triangle"


class LineStyle(Enum):
    SOLID = "solid"
    DASHED = "dashed"


class ArrowStyle(Enum):
    NONE = "none"
    SOURCE = "source"
    TARGET = "target"
    BOTH = "both"


@dataclass
class RenderStyle:
    """Visual attributes shared by nodes and edges.

    Nodes use fill_color for the interior and border_color for the outline;
    edges use border_color as the line color and ignore fill_color.
    """

    fill_color: str = "#ffffff"
    border_color: str = "#000000"
    line_style: LineStyle = LineStyle.SOLID
    arrow: ArrowStyle = ArrowStyle.NONE
    width: float = 1.0

    def copy(self) -> RenderStyle:
        return RenderStyle(
            self.fill_color, self.border_color, self.line_style, self.arrow, self.width
        )


def default_node_style() -> RenderStyle:
    return RenderStyle()


def default_edge_style() -> RenderStyle:
    return RenderStyle(arrow=ArrowStyle.TARGET)


@dataclass
class Node:
    id: int
    label: str = ""
    bounds: Rect = field(default_factory=Rect)
    shape: NodeShape = NodeShape.RECTANGLE
    style: RenderStyle = field(default_factory=default_node_style)
    owner_graph: int = 0
    child_graph: int | None = None
    attrs: dict[str, str] = field(default_factory=dict)

    @property
    def is_compound(self) -> bool:
        return self.child_graph is not None


@dataclass
class Edge:
    id: int
    source: int
    target: int
    label: str = ""
    style: RenderStyle = field(default_factory=default_edge_style)
    attrs: dict[str, str] = field(default_factory=dict)


@dataclass
class Graph:
    id: int
    nodes: list[int] = field(default_factory=list)
    parent_node: int | None = None
    margins: float = DEFAULT_MARGIN
    label_strip: float = DEFAULT_LABEL_STRIP
    attrs: dict[str, str] = field(default_factory=dict)


@dataclass
class Violation:
    """One broken model rule, naming the offending object."""

    object_id: int
    rule: str
    message: str

    def as_dict(self) -> dict[str, object]:
        return {"object": self.object_id, "rule": self.rule, "message": self.message}


class GraphModel:
    """A compound graph document plus its editing operations."""

    def __init__(self) -> None:
        self.graphs: dict[int, Graph] = {}
        self.nodes: dict[int, Node] = {}
        self.edges: dict[int, Edge] = {}
        self.highlight: set[int] = set()
        self._next_id = 0
        self.root = self._alloc()
        self.graphs[self.root] = Graph(id=self.root)

    # ------------------------------------------------------------------
    # id allocation and lookups

    def _alloc(self) -> int:
        value = self._next_id
        self._next_id += 1
        return value

    def _node(self, node_id: int) -> Node:
        node = self.nodes.get(node_id)
        if node is None:
            raise ModelError(f"unknown node id {node_id}")
        return node

    def _graph(self, graph_id: int) -> Graph:
        graph = self.graphs.get(graph_id)
        if graph is None:
            raise ModelError(f"unknown graph id {graph_id}")
        return graph

    def root_graph(self) -> Graph:
        return self.graphs[self.root]

    def descendant_nodes(self, node_id: int) -> list[int]:
        """Ids of every node nested anywhere below a compound, excluding itself."""
        out: list[int] = []
        node = self._node(node_id)
        if node.child_graph is None:
            return out
        stack = [node.child_graph]
        while stack:
            graph = self.graphs[stack.pop()]
            for child_id in graph.nodes:
                out.append(child_id)
                child = self.nodes[child_id]
                if child.child_graph is not None:
                    stack.append(child.child_graph)
        return out

    def graph_depth(self, graph_id: int) -> int:
        """Nesting depth of a graph; the root graph has depth 0."""
        depth = 0
        graph = self._graph(graph_id)
        while graph.parent_node is not None:
            graph = self.graphs[self.nodes[graph.parent_node].owner_graph]
            depth += 1
        return depth

    # ------------------------------------------------------------------
    # editing operations

    def add_node(
        self,
        graph_id: int | None = None,
        *,
        label: str = "",
        bounds: Rect | None = None,
        shape: NodeShape = NodeShape.RECTANGLE,
        style: RenderStyle | None = None,
    ) -> int:
        """Add a leaf node to a graph and return its id.

        Compound ancestors of the target graph are re-tightened so their
        derived bounds keep wrapping the new content.
        """
        graph = self._graph(self.root if graph_id is None else graph_id)
        if bounds is None:
            bounds = Rect(0.0, 0.0, DEFAULT_NODE_W, DEFAULT_NODE_H)
        _check_rect(bounds)
        node = Node(
            id=self._alloc(),
            label=label,
            bounds=bounds.copy(),
            shape=shape,
            style=style.copy() if style else default_node_style(),
            owner_graph=graph.id,
        )
        self.nodes[node.id] = node
        graph.nodes.append(node.id)
        self._retighten_from(graph.id)
        return node.id

    def add_edge(
        self,
        source: int,
        target: int,
        *,
        label: str = "",
        style: RenderStyle | None = None,
    ) -> int:
        """Connect two existing nodes; self-loops and parallel edges are legal."""
        self._node(source)
        self._node(target)
        edge = Edge(
            id=self._alloc(),
            source=source,
            target=target,
            label=label,
            style=style.copy() if style else default_edge_style(),
        )
        self.edges[edge.id] = edge
        return edge.id

    def make_compound(self, graph_id: int, members: list[int], *, label: str = "") -> int:
        """Group nodes of one graph under a new compound node; returns its id.

        The members move into a fresh child graph, preserving their relative
        order and their absolute geometry.  The compound's bounds are derived
        from the members immediately.
        """
        graph = self._graph(graph_id)
        if not members:
            raise ModelError("make_compound needs at least one member")
        member_set = set(members)
        if len(member_set) != len(members):
            raise ModelError("duplicate members in make_compound")
        for node_id in members:
            node = self._node(node_id)
            if node.owner_graph != graph.id:
                raise ModelError(
                    f"node {node_id} belongs to graph {node.owner_graph}, not {graph.id}"
                )
        compound_id = self._alloc()
        child_id = self._alloc()
        child = Graph(id=child_id, parent_node=compound_id)
        compound = Node(
            id=compound_id,
            label=label,
            owner_graph=graph.id,
            child_graph=child_id,
        )
        self.graphs[child_id] = child
        self.nodes[compound_id] = compound
        # Keep the members' relative order when moving them down a level.
        child.nodes = [n for n in graph.nodes if n in member_set]
        graph.nodes = [n for n in graph.nodes if n not in member_set]
        graph.nodes.append(compound_id)
        for node_id in child.nodes:
            self.nodes[node_id].owner_graph = child_id
        compound.bounds = self.compound_bounds(compound_id)
        self._retighten_from(graph.id)
        return compound_id

    def compound_bounds(self, node_id: int) -> Rect:
        """Derived bounds of a compound: child union, margins, label strip.

        An empty compound keeps a fixed minimum box anchored at its current
        position, with the label strip still appended.
        """
        node = self._node(node_id)
        if node.child_graph is None:
            raise ModelError(f"node {node_id} is not a compound")
        graph = self.graphs[node.child_graph]
        if not graph.nodes:
            return Rect(
                node.bounds.x,
                node.bounds.y,
                EMPTY_COMPOUND_SIDE,
                EMPTY_COMPOUND_SIDE + graph.label_strip,
            )
        union = rect_union([self.nodes[n].bounds for n in graph.nodes])
        m = graph.margins
        return Rect(
            union.x - m,
            union.y - m,
            union.w + 2.0 * m,
            union.h + 2.0 * m + graph.label_strip,
        )

    def translate(self, node_id: int, dx: float, dy: float) -> None:
        """Shift a node, and with a compound its whole subtree, rigidly."""
        if not (math.isfinite(dx) and math.isfinite(dy)):
            raise ModelError("translate delta must be finite")
        node = self._node(node_id)
        node.bounds.move(dx, dy)
        moved = self.descendant_nodes(node_id)
        for child_id in moved:
            self.nodes[child_id].bounds.move(dx, dy)
        # Re-derive compound bounds inside the moved subtree: shifting a
        # stored rect can drift from the child-derived one in the last ulp.
        compounds = [n for n in (node_id, *moved) if self.nodes[n].child_graph is not None]
        compounds.sort(key=lambda n: self.graph_depth(self.nodes[n].child_graph), reverse=True)
        for comp_id in compounds:
            self.nodes[comp_id].bounds = self.compound_bounds(comp_id)
        self._retighten_from(node.owner_graph)

    def resize(self, node_id: int, w: float, h: float) -> None:
        """Set a leaf node's size; compound sizes are derived and refuse this."""
        node = self._node(node_id)
        if node.is_compound:
            raise ModelError(f"compound {node_id} bounds are derived from children")
        if not (math.isfinite(w) and math.isfinite(h)) or w < 0 or h < 0:
            raise ModelError("size must be finite and non-negative")
        node.bounds.w = w
        node.bounds.h = h
        self._retighten_from(node.owner_graph)

    def set_margins(
        self,
        graph_id: int,
        *,
        margins: float | None = None,
        label_strip: float | None = None,
    ) -> None:
        """Change a graph's frame reserve; enclosing compounds re-tighten."""
        graph = self._graph(graph_id)
        for value in (margins, label_strip):
            if value is not None and (not math.isfinite(value) or value < 0):
                raise ModelError("margins and label_strip must be finite and non-negative")
        if margins is not None:
            graph.margins = margins
        if label_strip is not None:
            graph.label_strip = label_strip
        if graph.parent_node is not None:
            self.nodes[graph.parent_node].bounds = self.compound_bounds(graph.parent_node)
            self._retighten_from(self.nodes[graph.parent_node].owner_graph)

    def remove(self, object_id: int) -> None:
        """Delete a node (with its subtree and incident edges) or an edge."""
        if object_id in self.edges:
            del self.edges[object_id]
            self.highlight.discard(object_id)
            return
        node = self.nodes.get(object_id)
        if node is None:
            if object_id in self.graphs:
                raise ModelError(f"graph {object_id} is removed with its compound node")
            raise ModelError(f"unknown object id {object_id}")
        doomed = {object_id, *self.descendant_nodes(object_id)}
        for edge_id in [e.id for e in self.edges.values() if e.source in doomed or e.target in doomed]:
            del self.edges[edge_id]
        owner = node.owner_graph
        for node_id in doomed:
            gone = self.nodes.pop(node_id)
            if gone.child_graph is not None:
                del self.graphs[gone.child_graph]
            self.highlight.discard(node_id)
        for graph in self.graphs.values():
            graph.nodes = [n for n in graph.nodes if n not in doomed]
        self._retighten_from(owner)

    # ------------------------------------------------------------------
    # derived-geometry maintenance

    def _retighten_from(self, graph_id: int) -> None:
        graph = self.graphs.get(graph_id)
        while graph is not None and graph.parent_node is not None:
            parent = self.nodes[graph.parent_node]
            parent.bounds = self.compound_bounds(parent.id)
            graph = self.graphs[parent.owner_graph]

    def retighten_all(self) -> None:
        """Recompute every compound's bounds bottom-up."""
        by_depth = sorted(self.graphs, key=self.graph_depth, reverse=True)
        for graph_id in by_depth:
            parent = self.graphs[graph_id].parent_node
            if parent is not None:
                self.nodes[parent].bounds = self.compound_bounds(parent)

    # ------------------------------------------------------------------
    # validation

    def validate(self) -> list[Violation]:
        """Check every structural and geometric invariant; empty list means valid."""
        out: list[Violation] = []
        seen_in: dict[int, list[int]] = {}
        if self.root not in self.graphs:
            out.append(Violation(self.root, "root", "root graph id is not a graph"))
            return out
        if self.graphs[self.root].parent_node is not None:
            out.append(Violation(self.root, "root", "root graph must not have a parent"))

        for graph in self.graphs.values():
            for node_id in graph.nodes:
                if node_id not in self.nodes:
                    out.append(
                        Violation(graph.id, "membership", f"graph lists unknown node {node_id}")
                    )
                    continue
                seen_in.setdefault(node_id, []).append(graph.id)
            if graph.parent_node is not None:
                parent = self.nodes.get(graph.parent_node)
                if parent is None:
                    out.append(
                        Violation(graph.id, "nesting", f"parent node {graph.parent_node} missing")
                    )
                elif parent.child_graph != graph.id:
                    out.append(
                        Violation(graph.id, "nesting", f"parent node {graph.parent_node} does not point back")
                    )

        for node in self.nodes.values():
            owners = seen_in.get(node.id, [])
            if len(owners) == 0:
                out.append(Violation(node.id, "membership", "node listed in no graph"))
            elif len(owners) > 1:
                out.append(
                    Violation(node.id, "membership", f"node listed in graphs {sorted(owners)}")
                )
            elif node.owner_graph != owners[0]:
                out.append(
                    Violation(node.id, "membership", f"owner_graph {node.owner_graph} != listing graph {owners[0]}")
                )
            if node.owner_graph not in self.graphs:
                out.append(Violation(node.id, "membership", f"owner graph {node.owner_graph} missing"))
            if node.child_graph is not None:
                child = self.graphs.get(node.child_graph)
                if child is None:
                    out.append(Violation(node.id, "nesting", f"child graph {node.child_graph} missing"))
                elif child.parent_node != node.id:
                    out.append(Violation(node.id, "nesting", "child graph does not point back"))
            b = node.bounds
            if not all(math.isfinite(v) for v in (b.x, b.y, b.w, b.h)):
                out.append(Violation(node.id, "geometry", "bounds must be finite"))
            elif b.w < 0 or b.h < 0:
                out.append(Violation(node.id, "geometry", "bounds size must be non-negative"))
            if node.style.width <= 0:
                out.append(Violation(node.id, "style", "stroke width must be positive"))

        # The nesting relation must be a tree rooted at the root graph.
        reachable: set[int] = set()
        stack = [self.root]
        while stack:
            graph_id = stack.pop()
            if graph_id in reachable or graph_id not in self.graphs:
                continue
            reachable.add(graph_id)
            for node_id in self.graphs[graph_id].nodes:
                node = self.nodes.get(node_id)
                if node is not None and node.child_graph is not None:
                    stack.append(node.child_graph)
        for graph_id in self.graphs:
            if graph_id not in reachable:
                out.append(
                    Violation(graph_id, "nesting", "graph not reachable from the root (orphan or cycle)")
                )

        for edge in self.edges.values():
            for endpoint in (edge.source, edge.target):
                if endpoint not in self.nodes:
                    out.append(Violation(edge.id, "edge", f"endpoint {endpoint} missing"))
            if edge.style.width <= 0:
                out.append(Violation(edge.id, "style", "stroke width must be positive"))

        for node in self.nodes.values():
            if node.child_graph is not None and node.child_graph in self.graphs:
                expected = self.compound_bounds(node.id)
                b = node.bounds
                if (b.x, b.y, b.w, b.h) != (expected.x, expected.y, expected.w, expected.h):
                    out.append(
                        Violation(node.id, "tight-bound", "compound bounds do not wrap children + margins + strip")
                    )

        for object_id in self.highlight:
            if object_id not in self.nodes and object_id not in self.edges:
                out.append(Violation(object_id, "highlight", "highlight references unknown object"))
        return out


def _check_rect(rect: Rect) -> None:
    if not all(math.isfinite(v) for v in (rect.x, rect.y, rect.w, rect.h)):
        raise ModelError("bounds must be finite")
    if rect.w < 0 or rect.h < 0:
        raise ModelError("bounds size must be non-negative")


def models_equal(a: GraphModel, b: GraphModel, tol: float = 1e-9) -> bool:
    """Structural equality: same ids, nesting, order, styles, geometry within tol."""
    if a.root != b.root:
        return False
    if set(a.graphs) != set(b.graphs) or set(a.nodes) != set(b.nodes) or set(a.edges) != set(b.edges):
        return False
    for gid, ga in a.graphs.items():
        gb = b.graphs[gid]
        if ga.nodes != gb.nodes or ga.parent_node != gb.parent_node:
            return False
        if abs(ga.margins - gb.margins) > tol or abs(ga.label_strip - gb.label_strip) > tol:
            return False
        if ga.attrs != gb.attrs:
            return False
    for nid, na in a.nodes.items():
        nb = b.nodes[nid]
        if (na.label, na.shape, na.owner_graph, na.child_graph, na.attrs) != (
            nb.label, nb.shape, nb.owner_graph, nb.child_graph, nb.attrs,
        ):
            return False
        if not _rects_close(na.bounds, nb.bounds, tol) or not _styles_equal(na.style, nb.style, tol):
            return False
    for eid, ea in a.edges.items():
        eb = b.edges[eid]
        if (ea.source, ea.target, ea.label, ea.attrs) != (eb.source, eb.target, eb.label, eb.attrs):
            return False
        if not _styles_equal(ea.style, eb.style, tol):
            return False
    return True


def _rects_close(a: Rect, b: Rect, tol: float) -> bool:
    return (
        abs(a.x - b.x) <= tol
        and abs(a.y - b.y) <= tol
        and abs(a.w - b.w) <= tol
        and abs(a.h - b.h) <= tol
    )


def _styles_equal(a: RenderStyle, b: RenderStyle, tol: float) -> bool:
    return (
        a.fill_color == b.fill_color
        and a.border_color == b.border_color
        and a.line_style == b.line_style
        and a.arrow == b.arrow
        and abs(a.width - b.width) <= tol
    )
