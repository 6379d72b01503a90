"""Layout infrastructure: the mirror structure algorithms run on.

Layouts never touch the editing model directly.  For each run we build a
light mirror (LStructure) of graphs, nodes, and edges, hand it to the
algorithm, copy the resulting geometry back, and throw the mirror away.
Mirror coordinates are absolute; compound mirror rects are re-tightened
after every iteration by the algorithms that move things.

Extension contract: subclass LayoutAlgorithm, implement run(), register the
factory in nestgraph.registry.  All randomness must come from the provided
generator, which is the only seed-dependent state of a run.
"""

from __future__ import annotations

import math
import random
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

from ..geometry import Rect, rect_union
from ..model import GraphModel

# Clusters travel on the mirror nodes; this attribute bag key names them.
CLUSTER_KEY = "clusterID"


class LayoutError(Exception):
    """The input model cannot be handled by the requested algorithm."""


@dataclass
class LayoutOptions:
    ideal_edge_length: float = 50.0
    iterations: int = 1000
    seed: int = 1
    gravity_strength: float = 0.4
    cooling_initial: float = 1.0
    convergence_eps: float = 0.5
    compound_margin: float = 10.0
    extra: dict[str, float] = field(default_factory=dict)

    def get(self, name: str, fallback: float) -> float:
        return self.extra.get(name, fallback)


@dataclass
class LayoutReport:
    iterations_used: int
    final_total_displacement: float
    wall_time: float


@dataclass
class RunStats:
    iterations_used: int = 0
    final_total_displacement: float = 0.0


class LGraph:
    def __init__(self, graph_id: int, margins: float, label_strip: float):
        self.graph_id = graph_id
        self.margins = margins
        self.label_strip = label_strip
        self.nodes: list[LNode] = []
        self.parent: LNode | None = None

    @property
    def depth(self) -> int:
        depth = 0
        graph = self
        while graph.parent is not None:
            graph = graph.parent.owner
            depth += 1
        return depth


class LNode:
    def __init__(self, node_id: int, rect: Rect, owner: LGraph):
        self.node_id = node_id
        self.rect = rect
        self.owner = owner
        self.child: LGraph | None = None
        self.pinned = False
        self.cluster: str | None = None

    @property
    def is_compound(self) -> bool:
        return self.child is not None

    def ancestors(self) -> list[LNode]:
        """Compound nodes above this one, innermost first."""
        out = []
        node = self.owner.parent
        while node is not None:
            out.append(node)
            node = node.owner.parent
        return out


class LEdge:
    def __init__(self, edge_id: int, source: LNode, target: LNode):
        self.edge_id = edge_id
        self.source = source
        self.target = target
        self.inter_graph = source.owner is not target.owner


class LStructure:
    """Per-run mirror of a model: one root graph, flat node/edge lists."""

    def __init__(self) -> None:
        self.root: LGraph | None = None
        self.graphs: list[LGraph] = []
        self.nodes: list[LNode] = []
        self.edges: list[LEdge] = []
        self.by_id: dict[int, LNode] = {}

    def leaves(self) -> list[LNode]:
        return [n for n in self.nodes if n.child is None]

    def retighten(self) -> None:
        """Recompute compound rects bottom-up so they wrap their children."""
        for graph in sorted(self.graphs, key=lambda g: g.depth, reverse=True):
            parent = graph.parent
            if parent is None:
                continue
            if not graph.nodes:
                parent.rect = Rect(parent.rect.x, parent.rect.y, 40.0, 40.0 + graph.label_strip)
                continue
            union = rect_union([n.rect for n in graph.nodes])
            m = graph.margins
            parent.rect = Rect(
                union.x - m,
                union.y - m,
                union.w + 2.0 * m,
                union.h + 2.0 * m + graph.label_strip,
            )


def build_l_structure(model: GraphModel) -> LStructure:
    """Mirror a valid model; raises LayoutError when validation fails."""
    violations = model.validate()
    if violations:
        raise LayoutError(f"model invalid before layout: {violations[0].message}")
    l = LStructure()
    lgraphs: dict[int, LGraph] = {}
    for graph_id in sorted(model.graphs):
        graph = model.graphs[graph_id]
        lgraph = LGraph(graph_id, graph.margins, graph.label_strip)
        lgraphs[graph_id] = lgraph
        l.graphs.append(lgraph)
    l.root = lgraphs[model.root]
    for node_id in sorted(model.nodes):
        node = model.nodes[node_id]
        lnode = LNode(node_id, node.bounds.copy(), lgraphs[node.owner_graph])
        lnode.cluster = node.attrs.get(CLUSTER_KEY)
        l.nodes.append(lnode)
        l.by_id[node_id] = lnode
    for graph_id, lgraph in lgraphs.items():
        for node_id in model.graphs[graph_id].nodes:
            lgraph.nodes.append(l.by_id[node_id])
    for node_id, lnode in l.by_id.items():
        child = model.nodes[node_id].child_graph
        if child is not None:
            lnode.child = lgraphs[child]
            lgraphs[child].parent = lnode
    for edge_id in sorted(model.edges):
        edge = model.edges[edge_id]
        l.edges.append(LEdge(edge_id, l.by_id[edge.source], l.by_id[edge.target]))
    return l


def transfer_geometry(l: LStructure, model: GraphModel) -> None:
    """Copy mirror geometry back onto the model, re-deriving compound bounds."""
    model_leaves = {nid for nid, n in model.nodes.items() if n.child_graph is None}
    mirror_leaves = {n.node_id for n in l.nodes if n.child is None}
    if model_leaves != mirror_leaves:
        raise LayoutError("mirror topology no longer matches the model")
    for node_id in mirror_leaves:
        model.nodes[node_id].bounds = l.by_id[node_id].rect.copy()
    model.retighten_all()


class LayoutAlgorithm(ABC):
    """One layout pass over a mirror structure.

    Implementations draw randomness only from the generator they are given
    and report how much work they did; run_layout owns the lifecycle.
    """

    name = "abstract"

    @abstractmethod
    def run(self, l: LStructure, opts: LayoutOptions, rng: random.Random) -> RunStats:
        raise NotImplementedError


def run_layout(model: GraphModel, algorithm: LayoutAlgorithm, opts: LayoutOptions) -> LayoutReport:
    """Build the mirror, run one algorithm, transfer geometry, report."""
    start = time.perf_counter()
    if not model.nodes:
        return LayoutReport(0, 0.0, time.perf_counter() - start)
    l = build_l_structure(model)
    rng = random.Random(opts.seed)
    stats = algorithm.run(l, opts, rng)
    transfer_geometry(l, model)
    return LayoutReport(
        stats.iterations_used,
        stats.final_total_displacement,
        time.perf_counter() - start,
    )


def scatter_unplaced(l: LStructure, opts: LayoutOptions, rng: random.Random) -> None:
    """Give stacked nodes distinct random starting points.

    A leaf whose top-left corner exactly repeats an earlier leaf's position
    has no meaningful position of its own (freshly created or freshly parsed
    content), so it is re-drawn uniformly from a square whose side grows
    with the node count.  Deliberately placed nodes never move here.
    """
    leaves = [n for n in l.nodes if n.child is None]
    if not leaves:
        return
    side = math.sqrt(len(leaves)) * opts.ideal_edge_length
    seen: set[tuple[float, float]] = set()
    for node in leaves:
        position = (node.rect.x, node.rect.y)
        if position in seen:
            node.rect.x = (rng.random() - 0.5) * side
            node.rect.y = (rng.random() - 0.5) * side
            seen.add((node.rect.x, node.rect.y))
        else:
            seen.add(position)
    l.retighten()
