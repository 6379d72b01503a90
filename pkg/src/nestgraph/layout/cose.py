"""Force-directed layout for compound graphs.

Springs act along edges between rectangle boundaries, repulsion acts
between nodes sharing a graph, and a constant-magnitude gravity pulls each
node toward its graph's barycenter.  A compound node sums its own forces
with everything its nested graph feels and moves as one rigid unit; its
children additionally move within it under their own forces.  The `spring`
variant runs the same simulation on a flattened mirror with the compound
machinery inert.
"""

from __future__ import annotations

import math
import random
from typing import Callable

from ..geometry import COINCIDENT_EPS, Rect, boundary_gap
from .base import (
    LayoutAlgorithm,
    LayoutOptions,
    LEdge,
    LGraph,
    LNode,
    LStructure,
    RunStats,
    scatter_unplaced,
)

SPRING_CONSTANT = 0.45
REPULSION_CONSTANT = 4500.0
MAX_NODE_DISPLACEMENT = 100.0

Vec = tuple[float, float]
TraceHook = Callable[[int, LStructure, dict[int, Vec], dict[int, Vec]], None]


class ForceContext:
    """Pairwise force rules with their constants and the run's generator."""

    def __init__(self, opts: LayoutOptions, rng: random.Random):
        self.spring_constant = opts.get("springConstant", SPRING_CONSTANT)
        self.repulsion_constant = opts.get("repulsionConstant", REPULSION_CONSTANT)
        self.gravity_strength = opts.gravity_strength
        self.ideal = opts.ideal_edge_length
        self.rng = rng

    def _jitter(self) -> Vec:
        angle = 2.0 * math.pi * self.rng.random()
        return math.cos(angle), math.sin(angle)

    def edge_ideal_length(self, edge: LEdge) -> float:
        """Rest length, stretched for edges that cross nesting levels."""
        if not edge.inter_graph:
            return self.ideal
        source, target = edge.source.owner, edge.target.owner
        ds, dt = source.depth, target.depth
        sg, tg = source, target
        while sg.depth > tg.depth:
            sg = sg.parent.owner
        while tg.depth > sg.depth:
            tg = tg.parent.owner
        while sg is not tg:
            sg = sg.parent.owner
            tg = tg.parent.owner
        lca_depth = sg.depth
        hops = (ds - lca_depth) + (dt - lca_depth)
        return self.ideal * (1.0 + 0.3 * abs(ds - dt) + 0.3 * hops)

    def spring_force(self, edge: LEdge) -> tuple[Vec, Vec]:
        """Boundary-to-boundary spring; returns forces on source and target."""
        try:
            gap, ux, uy, _ = boundary_gap(edge.source.rect, edge.target.rect)
        except ValueError:
            ux, uy = self._jitter()
            gap = 0.0
        magnitude = self.spring_constant * (gap - self.edge_ideal_length(edge))
        return (magnitude * ux, magnitude * uy), (-magnitude * ux, -magnitude * uy)

    def repulsion_force(self, a: LNode, b: LNode) -> tuple[Vec, Vec]:
        """Inverse-square repulsion; overlapping rects get a fixed push apart."""
        ax, ay = a.rect.center()
        bx, by = b.rect.center()
        if math.hypot(bx - ax, by - ay) < COINCIDENT_EPS:
            ux, uy = self._jitter()
            magnitude = self._overlap_magnitude(a.rect, b.rect)
        elif a.rect.intersects(b.rect):
            gap, ux, uy, _ = boundary_gap(a.rect, b.rect)
            magnitude = self._overlap_magnitude(a.rect, b.rect)
        else:
            gap, ux, uy, _ = boundary_gap(a.rect, b.rect)
            if gap < COINCIDENT_EPS:
                magnitude = self._overlap_magnitude(a.rect, b.rect)
            else:
                magnitude = self.repulsion_constant / (gap * gap)
        return (-magnitude * ux, -magnitude * uy), (magnitude * ux, magnitude * uy)

    def _overlap_magnitude(self, a: Rect, b: Rect) -> float:
        side = max(min(a.w, a.h, b.w, b.h), 1.0)
        return self.repulsion_constant / (side * side)

    def gravity_force(self, node: LNode, center: Vec) -> Vec:
        """Constant pull toward the owner graph's barycenter."""
        cx, cy = node.rect.center()
        dx, dy = center[0] - cx, center[1] - cy
        dist = math.hypot(dx, dy)
        if dist < COINCIDENT_EPS:
            return 0.0, 0.0
        return self.gravity_strength * dx / dist, self.gravity_strength * dy / dist


def _barycenter(graph: LGraph) -> Vec:
    xs = ys = 0.0
    for node in graph.nodes:
        cx, cy = node.rect.center()
        xs += cx
        ys += cy
    count = len(graph.nodes)
    return xs / count, ys / count


def _clamp(dx: float, dy: float, cap: float) -> Vec:
    norm = math.hypot(dx, dy)
    if norm <= cap or norm == 0.0:
        return dx, dy
    scale = cap / norm
    return dx * scale, dy * scale


def run_force_loop(
    l: LStructure,
    opts: LayoutOptions,
    rng: random.Random,
    trace: TraceHook | None = None,
) -> RunStats:
    """The shared iteration loop; compounds move rigidly, leaves locally."""
    if not l.nodes:
        return RunStats()
    ctx = ForceContext(opts, rng)
    scatter_unplaced(l, opts, rng)
    if trace:
        trace(-1, l, {}, {})
    node_count = len(l.nodes)
    max_iter = max(opts.iterations, 1)
    total = 0.0
    iterations = 0
    for iteration in range(max_iter):
        cooling = opts.cooling_initial * (1.0 - iteration / max_iter)
        cap = MAX_NODE_DISPLACEMENT * cooling
        forces: dict[int, list[float]] = {n.node_id: [0.0, 0.0] for n in l.nodes}

        for edge in l.edges:
            if edge.source is edge.target:
                continue
            (fx1, fy1), (fx2, fy2) = ctx.spring_force(edge)
            fs = forces[edge.source.node_id]
            ft = forces[edge.target.node_id]
            fs[0] += fx1
            fs[1] += fy1
            ft[0] += fx2
            ft[1] += fy2

        for graph in l.graphs:
            members = graph.nodes
            for i in range(len(members)):
                a = members[i]
                fa = forces[a.node_id]
                for j in range(i + 1, len(members)):
                    b = members[j]
                    (fx1, fy1), (fx2, fy2) = ctx.repulsion_force(a, b)
                    fb = forces[b.node_id]
                    fa[0] += fx1
                    fa[1] += fy1
                    fb[0] += fx2
                    fb[1] += fy2

        for graph in l.graphs:
            if not graph.nodes:
                continue
            center = _barycenter(graph)
            for node in graph.nodes:
                gx, gy = ctx.gravity_force(node, center)
                f = forces[node.node_id]
                f[0] += gx
                f[1] += gy

        # Net force of a compound = its own + everything inside it.
        net: dict[int, tuple[float, float]] = {}

        def accumulate(node: LNode) -> tuple[float, float]:
            fx, fy = forces[node.node_id]
            if node.child is not None:
                for inner in node.child.nodes:
                    ix, iy = accumulate(inner)
                    fx += ix
                    fy += iy
            net[node.node_id] = (fx, fy)
            return fx, fy

        for top in l.root.nodes:
            accumulate(top)

        own_moves: dict[int, Vec] = {}
        cart_moves: dict[int, Vec] = {}
        total = 0.0

        def apply_moves(graph: LGraph, shift_x: float, shift_y: float) -> None:
            nonlocal total
            for node in graph.nodes:
                if node.pinned:
                    own_moves[node.node_id] = (0.0, 0.0)
                    if node.child is not None:
                        cart_moves[node.node_id] = (0.0, 0.0)
                        apply_moves(node.child, shift_x, shift_y)
                    node.rect.move(shift_x, shift_y)
                    continue
                fx, fy = net[node.node_id]
                dx, dy = _clamp(fx * cooling, fy * cooling, cap)
                node.rect.move(dx + shift_x, dy + shift_y)
                own_moves[node.node_id] = (dx, dy)
                total += math.hypot(dx, dy)
                if node.child is not None:
                    cart_moves[node.node_id] = (dx, dy)
                    apply_moves(node.child, shift_x + dx, shift_y + dy)

        apply_moves(l.root, 0.0, 0.0)
        l.retighten()
        iterations = iteration + 1
        if trace:
            trace(iteration, l, own_moves, cart_moves)
        if total / node_count < opts.convergence_eps:
            break
    return RunStats(iterations, total)


class CoseLayout(LayoutAlgorithm):
    """Compound-aware force layout."""

    name = "cose"

    def __init__(self, trace: TraceHook | None = None):
        self.trace = trace

    def run(self, l: LStructure, opts: LayoutOptions, rng: random.Random) -> RunStats:
        return run_force_loop(l, opts, rng, self.trace)


def flatten(l: LStructure) -> LStructure:
    """A flat view of the mirror: every leaf in one root graph.

    Compound nodes and edges touching them are left out of the simulation;
    the shared leaf rects mean positions flow back to the original mirror.
    """
    flat = LStructure()
    root = LGraph(-1, 0.0, 0.0)
    flat.root = root
    flat.graphs = [root]
    for node in l.nodes:
        if node.child is not None:
            continue
        mirror = LNode(node.node_id, node.rect, root)
        mirror.pinned = node.pinned
        mirror.cluster = node.cluster
        flat.nodes.append(mirror)
        flat.by_id[node.node_id] = mirror
        root.nodes.append(mirror)
    for edge in l.edges:
        if edge.source.child is not None or edge.target.child is not None:
            continue
        flat.edges.append(
            LEdge(edge.edge_id, flat.by_id[edge.source.node_id], flat.by_id[edge.target.node_id])
        )
    return flat


class SpringLayout(LayoutAlgorithm):
    """Plain spring embedder; nesting is ignored during the simulation."""

    name = "spring"

    def run(self, l: LStructure, opts: LayoutOptions, rng: random.Random) -> RunStats:
        stats = run_force_loop(flatten(l), opts, rng)
        l.retighten()
        return stats
