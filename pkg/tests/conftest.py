"""Shared builders for randomized models and layout fixtures."""

from __future__ import annotations

import random

import pytest

from nestgraph import GraphModel, Rect
from nestgraph.model import ArrowStyle, LineStyle, NodeShape, RenderStyle

SHAPES = list(NodeShape)
LINES = list(LineStyle)
ARROWS = list(ArrowStyle)


def random_style(rng: random.Random, for_edge: bool = False, portable: bool = False) -> RenderStyle:
    """A random style; `portable` restricts it to what GraphML carries.

    The interchange vocabulary stores colors and shape for nodes and
    color/line/arrow/width for edges, so a portable node style keeps the
    default line and width, and a portable edge style keeps the default
    (unused) fill.
    """
    color = f"#{rng.randrange(1 << 24):06x}"
    border = f"#{rng.randrange(1 << 24):06x}"
    return RenderStyle(
        fill_color="#ffffff" if (portable and for_edge) else color,
        border_color=border,
        line_style=LineStyle.SOLID if (portable and not for_edge) else rng.choice(LINES),
        arrow=rng.choice(ARROWS) if for_edge else ArrowStyle.NONE,
        width=1.0 if (portable and not for_edge) else round(0.5 + 3 * rng.random(), 3),
    )


def random_rect(rng: random.Random) -> Rect:
    return Rect(
        round(rng.uniform(-300, 300), 3),
        round(rng.uniform(-300, 300), 3),
        round(rng.uniform(5, 80), 3),
        round(rng.uniform(5, 80), 3),
    )


def random_flat_model(
    rng: random.Random, nodes: int, edges: int, portable: bool = False
) -> GraphModel:
    model = GraphModel()
    ids = [
        model.add_node(
            label=f"v{i}",
            bounds=random_rect(rng),
            shape=rng.choice(SHAPES),
            style=random_style(rng, portable=portable),
        )
        for i in range(nodes)
    ]
    for _ in range(edges if ids else 0):
        model.add_edge(
            rng.choice(ids),
            rng.choice(ids),
            style=random_style(rng, for_edge=True, portable=portable),
        )
    return model


def random_compound_model(
    rng: random.Random, nodes: int, edges: int, groups: int, max_depth: int = 4
) -> GraphModel:
    """A model with some nodes grouped into nested compounds."""
    model = GraphModel()
    for i in range(nodes):
        model.add_node(label=f"v{i}", bounds=random_rect(rng))
    for _ in range(groups):
        graphs = [
            gid
            for gid, graph in model.graphs.items()
            if len(graph.nodes) >= 2 and model.graph_depth(gid) < max_depth
        ]
        if not graphs:
            break
        gid = rng.choice(sorted(graphs))
        members = sorted(model.graphs[gid].nodes)
        count = rng.randint(1, min(4, len(members) - 1))
        model.make_compound(gid, rng.sample(members, count))
    ids = sorted(model.nodes)
    for _ in range(edges):
        model.add_edge(rng.choice(ids), rng.choice(ids))
    return model


def leaf_ids(model: GraphModel) -> list[int]:
    return sorted(n.id for n in model.nodes.values() if n.child_graph is None)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260816)


# ----------------------------------------------------------------------
# independent oracles shared across suites

Point = tuple[float, float]
Segment = tuple[Point, Point]


def orient(a: Point, b: Point, c: Point) -> float:
    """Twice the signed area of the triangle a-b-c."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def oracle_cross(s1: Segment, s2: Segment) -> bool:
    """Proper crossing: the segments intersect at exactly one interior point.

    Decided by orientation tests (signed areas), deliberately a different
    formulation than the package's parametric intersection.
    """
    p, q = s1
    r, s = s2
    d1 = orient(p, q, r)
    d2 = orient(p, q, s)
    d3 = orient(r, s, p)
    d4 = orient(r, s, q)
    return d1 * d2 < 0 and d3 * d4 < 0


def oracle_count(segments: list[Segment]) -> int:
    total = 0
    for i in range(len(segments)):
        for j in range(i + 1, len(segments)):
            a, b = segments[i], segments[j]
            if {a[0], a[1]} & {b[0], b[1]}:
                continue
            if oracle_cross(a, b):
                total += 1
    return total


def is_acyclic(node_ids: list[int], edges: list[tuple[int, int, int]]) -> bool:
    """Topological-sort oracle: True when every node can be scheduled."""
    incoming = {n: 0 for n in node_ids}
    adjacency: dict[int, list[int]] = {n: [] for n in node_ids}
    for _, source, target in edges:
        if source == target:
            continue
        adjacency[source].append(target)
        incoming[target] += 1
    ready = [n for n in node_ids if incoming[n] == 0]
    scheduled = 0
    while ready:
        node = ready.pop()
        scheduled += 1
        for target in adjacency[node]:
            incoming[target] -= 1
            if incoming[target] == 0:
                ready.append(target)
    return scheduled == len(node_ids)


class RigidityTrace:
    """Asserts each leaf moved by its own force plus its ancestors' shifts."""

    def __init__(self):
        self.prev: dict[int, tuple[float, float]] | None = None
        self.checked = 0

    def __call__(self, iteration, l, own, cart):
        current = {n.node_id: (n.rect.x, n.rect.y) for n in l.leaves()}
        if iteration >= 0 and self.prev is not None:
            for node in l.leaves():
                dx = current[node.node_id][0] - self.prev[node.node_id][0]
                dy = current[node.node_id][1] - self.prev[node.node_id][1]
                want_dx = own[node.node_id][0] + sum(
                    cart[a.node_id][0] for a in node.ancestors()
                )
                want_dy = own[node.node_id][1] + sum(
                    cart[a.node_id][1] for a in node.ancestors()
                )
                assert abs(dx - want_dx) < 1e-9
                assert abs(dy - want_dy) < 1e-9
                self.checked += 1
        self.prev = current


def two_cluster_model(per_side: int = 4, bridges: int = 1):
    """Two chain clusters of equal size joined by random bridge edges."""
    rng = random.Random(7)
    model = GraphModel()
    groups: dict[str, list[int]] = {"left": [], "right": []}
    for cid in ("left", "right"):
        for _ in range(per_side):
            nid = model.add_node(bounds=Rect(0, 0, 30, 30))
            model.nodes[nid].attrs["clusterID"] = cid
            groups[cid].append(nid)
        for k in range(per_side - 1):
            model.add_edge(groups[cid][k], groups[cid][k + 1])
    for _ in range(bridges):
        model.add_edge(rng.choice(groups["left"]), rng.choice(groups["right"]))
    return model, groups


def corner_points(model: GraphModel, ids: list[int]) -> list[Point]:
    points = []
    for nid in ids:
        b = model.nodes[nid].bounds
        points += [(b.x, b.y), (b.right, b.y), (b.x, b.bottom), (b.right, b.bottom)]
    return points
