"""Layered layout for directed flat graphs.

Classic pipeline: break cycles by reversing depth-first back edges, assign
layers by longest path, split long edges with dummy nodes, reduce crossings
with barycenter sweeps that are only accepted when they do not make things
worse, then assign coordinates with fixed separations and one barycenter
alignment pass.  Compound graphs are rejected; self-loops are skipped by
the pipeline and simply drawn where their node ends up.
"""

from __future__ import annotations

import random

from .base import LayoutAlgorithm, LayoutError, LayoutOptions, LStructure, RunStats

NODE_SEPARATION = 20.0
RANK_SEPARATION = 50.0
BARYCENTER_SWEEPS = 4

EdgeTuple = tuple[int, int, int]  # edge id, source, target


def remove_cycles(node_ids: list[int], edges: list[EdgeTuple]) -> set[int]:
    """Ids of edges to reverse so the graph becomes acyclic.

    Depth-first traversal in ascending node-id order; every back edge found
    (target still on the active stack) gets reversed.  Self-loops are left
    alone; layering ignores them.
    """
    outgoing: dict[int, list[EdgeTuple]] = {n: [] for n in node_ids}
    for edge in sorted(edges):
        if edge[1] != edge[2]:
            outgoing[edge[1]].append(edge)
    reversed_ids: set[int] = set()
    state: dict[int, int] = {}  # missing = unvisited, 1 = on stack, 2 = done
    for start in sorted(node_ids):
        if start in state:
            continue
        stack: list[tuple[int, int]] = [(start, 0)]
        state[start] = 1
        while stack:
            node, cursor = stack[-1]
            if cursor >= len(outgoing[node]):
                state[node] = 2
                stack.pop()
                continue
            stack[-1] = (node, cursor + 1)
            edge_id, _, target = outgoing[node][cursor]
            mark = state.get(target)
            if mark == 1:
                reversed_ids.add(edge_id)
            elif mark is None:
                state[target] = 1
                stack.append((target, 0))
    return reversed_ids


def assign_layers(node_ids: list[int], edges: list[EdgeTuple]) -> dict[int, int]:
    """Longest-path layering of an acyclic graph; sources sit at layer 0."""
    incoming: dict[int, list[int]] = {n: [] for n in node_ids}
    outgoing: dict[int, list[int]] = {n: [] for n in node_ids}
    for _, source, target in edges:
        if source == target:
            continue
        outgoing[source].append(target)
        incoming[target].append(source)
    layer: dict[int, int] = {}
    degree = {n: len(incoming[n]) for n in node_ids}
    ready = sorted(n for n in node_ids if degree[n] == 0)
    queue = list(ready)
    for n in queue:
        layer[n] = 0
    head = 0
    while head < len(queue):
        node = queue[head]
        head += 1
        for target in outgoing[node]:
            candidate = layer[node] + 1
            if candidate > layer.get(target, -1):
                layer[target] = candidate
            degree[target] -= 1
            if degree[target] == 0:
                queue.append(target)
    if len(layer) != len(node_ids):
        raise LayoutError("layer assignment ran on a cyclic graph")
    return layer


def _count_crossings_between(
    upper: list[int], lower: list[int], edges: list[tuple[int, int]]
) -> int:
    position = {n: i for i, n in enumerate(lower)}
    upper_pos = {n: i for i, n in enumerate(upper)}
    indexed = sorted((upper_pos[s], position[t]) for s, t in edges)
    count = 0
    for i in range(len(indexed)):
        for j in range(i + 1, len(indexed)):
            if indexed[i][0] < indexed[j][0] and indexed[i][1] > indexed[j][1]:
                count += 1
    return count


def count_layer_crossings(orders: list[list[int]], segments: list[tuple[int, int]], layer: dict[int, int]) -> int:
    total = 0
    by_span: dict[int, list[tuple[int, int]]] = {}
    for s, t in segments:
        by_span.setdefault(layer[s], []).append((s, t))
    for k in range(len(orders) - 1):
        total += _count_crossings_between(orders[k], orders[k + 1], by_span.get(k, []))
    return total


def barycenter(neighbor_positions: list[int]) -> float:
    """Average of fixed neighbor positions; the ordering key for sweeps."""
    if not neighbor_positions:
        return -1.0
    return sum(neighbor_positions) / len(neighbor_positions)


def order_layers(
    node_ids: list[int],
    edges: list[EdgeTuple],
    layer: dict[int, int],
    sweeps: int = BARYCENTER_SWEEPS,
) -> tuple[list[list[int]], dict[int, int], list[tuple[int, int]]]:
    """Crossing reduction with dummy-split edges and barycenter sweeps.

    Returns per-layer orders, layers grown with dummy nodes, and the split
    segment list.  A sweep's result is kept only when it does not increase
    the crossing count.
    """
    layer = dict(layer)
    segments: list[tuple[int, int]] = []
    next_dummy = -1
    for _, source, target in sorted(edges):
        if source == target:
            continue
        span = layer[target] - layer[source]
        previous = source
        for step in range(1, span):
            layer[next_dummy] = layer[source] + step
            segments.append((previous, next_dummy))
            previous = next_dummy
            next_dummy -= 1
        segments.append((previous, target))

    depth = max(layer.values(), default=0) + 1
    orders: list[list[int]] = [[] for _ in range(depth)]
    for node in sorted(layer, key=lambda n: (layer[n], n)):
        orders[layer[node]].append(node)

    down: dict[int, list[int]] = {n: [] for n in layer}
    up: dict[int, list[int]] = {n: [] for n in layer}
    for s, t in segments:
        down[s].append(t)
        up[t].append(s)

    best = count_layer_crossings(orders, segments, layer)
    for _ in range(max(sweeps, 0)):
        candidate = [list(tier) for tier in orders]
        for k in range(1, depth):  # downward pass: order by upper neighbors
            position = {n: i for i, n in enumerate(candidate[k - 1])}
            keys = {
                n: barycenter(sorted(position[p] for p in up[n] if p in position))
                for n in candidate[k]
            }
            candidate[k].sort(key=lambda n: (keys[n], n))
        for k in range(depth - 2, -1, -1):  # upward pass: order by lower neighbors
            position = {n: i for i, n in enumerate(candidate[k + 1])}
            keys = {
                n: barycenter(sorted(position[c] for c in down[n] if c in position))
                for n in candidate[k]
            }
            candidate[k].sort(key=lambda n: (keys[n], n))
        crossings = count_layer_crossings(candidate, segments, layer)
        if crossings <= best:
            orders = candidate
            best = crossings
        if best == 0:
            break
    return orders, layer, segments


def assign_coordinates(
    orders: list[list[int]],
    sizes: dict[int, tuple[float, float]],
    node_sep: float = NODE_SEPARATION,
    rank_sep: float = RANK_SEPARATION,
    neighbors: dict[int, list[int]] | None = None,
) -> dict[int, tuple[float, float]]:
    """Center coordinates per real or dummy node.

    Nodes stack left to right with node_sep gaps; one barycenter pass pulls
    each node toward the mean of its neighbors, re-separating afterwards.
    The y of a layer is its index times (tallest node + rank_sep).
    """
    width = lambda n: sizes.get(n, (0.0, 0.0))[0]
    tallest = max((h for _, h in sizes.values()), default=0.0)
    centers: dict[int, tuple[float, float]] = {}
    for k, tier in enumerate(orders):
        x = 0.0
        y = k * (tallest + rank_sep)
        for node in tier:
            centers[node] = (x + width(node) / 2.0, y)
            x += width(node) + node_sep
    if neighbors:
        for tier in orders:
            desired = []
            for node in tier:
                linked = [centers[m][0] for m in neighbors.get(node, []) if m in centers]
                desired.append(sum(linked) / len(linked) if linked else centers[node][0])
            # Re-impose minimum separation left to right.
            x_cursor = -float("inf")
            for node, want in zip(tier, desired):
                half = width(node) / 2.0
                x = max(want, x_cursor + half)
                centers[node] = (x, centers[node][1])
                x_cursor = x + half + node_sep
    return centers


class SugiyamaLayout(LayoutAlgorithm):
    """Layered drawing of directed graphs."""

    name = "sugiyama"

    def run(self, l: LStructure, opts: LayoutOptions, rng: random.Random) -> RunStats:
        if any(n.child is not None for n in l.nodes):
            raise LayoutError("hierarchical layout supports flat graphs only")
        if not l.nodes:
            return RunStats()
        node_ids = [n.node_id for n in l.nodes]
        edges = [(e.edge_id, e.source.node_id, e.target.node_id) for e in l.edges]
        flipped = remove_cycles(node_ids, edges)
        acyclic = [
            (eid, t, s) if eid in flipped else (eid, s, t) for eid, s, t in edges
        ]
        layer = assign_layers(node_ids, acyclic)
        sweeps = int(opts.get("sweeps", BARYCENTER_SWEEPS))
        orders, layer, segments = order_layers(node_ids, acyclic, layer, sweeps)
        neighbors: dict[int, list[int]] = {}
        for s, t in segments:
            neighbors.setdefault(s, []).append(t)
            neighbors.setdefault(t, []).append(s)
        sizes = {n.node_id: (n.rect.w, n.rect.h) for n in l.nodes}
        for tier in orders:
            for node in tier:
                sizes.setdefault(node, (0.0, 0.0))
        centers = assign_coordinates(
            orders,
            sizes,
            opts.get("nodeSeparation", NODE_SEPARATION),
            opts.get("rankSeparation", RANK_SEPARATION),
            neighbors,
        )
        for node in l.nodes:
            node.rect.set_center(*centers[node.node_id])
        return RunStats(0, 0.0)
