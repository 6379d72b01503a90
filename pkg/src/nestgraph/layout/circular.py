"""Circular layouts: single-circle placement and the clustered pipeline.

The clustered pipeline runs in four steps: lay every cluster out on its own
circle, position the circles (plus unclustered nodes) with a spring
embedder over a quotient graph of disks, then move whole circles rigidly
(translation plus torque-driven rotation), and finally let nodes slide
along their circles and swap with neighbors when that strictly reduces the
crossing count.  Members never leave their circles: positions are always
derived from (center, radius, angle).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from ..geometry import COINCIDENT_EPS, Rect, crossing_count
from .base import LayoutAlgorithm, LayoutError, LayoutOptions, LNode, LStructure, RunStats
from .cose import REPULSION_CONSTANT, SPRING_CONSTANT, flatten, run_force_loop

MIN_RADIUS = 15.0
DEFAULT_NODE_SEPARATION = 10.0
ROTATION_DAMPING = 0.9
MAX_ROTATION_STEP = 0.2
SLIDE_CAP_FRACTION = 0.25
SEPARATION_CLEARANCE = 1e-6

Vec = tuple[float, float]


@dataclass
class OnCircleNode:
    """Bookkeeping for one node pinned to a circle track."""

    node_id: int
    angle: float
    mobility: str = "fixed"  # or "flexible"


@dataclass
class CircleMeta:
    cluster_id: str
    center: list[float]
    radius: float
    members: list[int]
    rotation: float = 0.0
    angles: dict[int, float] = field(default_factory=dict)
    intra_crossings: int = 0

    def position(self, node_id: int) -> Vec:
        angle = self.angles[node_id] + self.rotation
        return (
            self.center[0] + self.radius * math.cos(angle),
            self.center[1] + self.radius * math.sin(angle),
        )

    def member_states(self, mobility: str = "fixed") -> list[OnCircleNode]:
        return [OnCircleNode(m, self.angles[m] + self.rotation, mobility) for m in self.members]


# ----------------------------------------------------------------------
# ordering and single-circle placement


def circular_order(node_ids: list[int], edges: list[tuple[int, int]]) -> list[int]:
    """Arrange nodes around a circle, keeping neighbors adjacent when possible.

    Greedy construction: start from the highest-degree node, then repeatedly
    append the unplaced node with the most already-placed neighbors, breaking
    ties toward nodes adjacent to the current tail, then by shared-neighbor
    count with the tail, then by id.  Cycles come out in cycle order, which
    is chord-free.
    """
    adjacency: dict[int, set[int]] = {n: set() for n in node_ids}
    for s, t in edges:
        if s == t or s not in adjacency or t not in adjacency:
            continue
        adjacency[s].add(t)
        adjacency[t].add(s)
    remaining = set(node_ids)
    order: list[int] = []
    while remaining:
        start = max(remaining, key=lambda n: (len(adjacency[n]), -n))
        order.append(start)
        remaining.discard(start)
        while True:
            candidates = [n for n in remaining if adjacency[n] & set(order)]
            if not candidates:
                break
            tail = order[-1]
            placed = set(order)

            def rank(n: int) -> tuple[int, int, int, int]:
                return (
                    len(adjacency[n] & placed),
                    1 if n in adjacency[tail] else 0,
                    len(adjacency[n] & adjacency[tail]),
                    -n,
                )

            best = max(candidates, key=rank)
            order.append(best)
            remaining.discard(best)
    return order


def radius_for(rects: list[Rect], spacing: float) -> float:
    """Radius of the track that fits every node diagonal plus spacing."""
    perimeter = sum(r.diagonal() + spacing for r in rects)
    return max(MIN_RADIUS, perimeter / (2.0 * math.pi))


def place_on_circle(
    order: list[int], center: Vec, radius: float, rotation: float = 0.0
) -> dict[int, Vec]:
    """Evenly spaced points on the circle, one per node, in the given order."""
    count = len(order)
    out: dict[int, Vec] = {}
    for k, node_id in enumerate(order):
        angle = rotation + 2.0 * math.pi * k / count
        out[node_id] = (
            center[0] + radius * math.cos(angle),
            center[1] + radius * math.sin(angle),
        )
    return out


# ----------------------------------------------------------------------
# step 1: independent cluster circles


def cise_step1(
    l: LStructure, clusters: dict[int, str], opts: LayoutOptions
) -> list[CircleMeta]:
    """Lay each cluster out on its own circle around a provisional center."""
    for node_id in clusters:
        if node_id not in l.by_id:
            raise LayoutError(f"cluster assignment names unknown node {node_id}")
    members_by_cluster: dict[str, list[int]] = {}
    for node in l.nodes:
        cid = clusters.get(node.node_id)
        if cid is not None:
            members_by_cluster.setdefault(cid, []).append(node.node_id)
    spacing = opts.get("nodeSeparation", DEFAULT_NODE_SEPARATION)
    circles: list[CircleMeta] = []
    for cid in sorted(members_by_cluster):
        member_ids = members_by_cluster[cid]
        member_set = set(member_ids)
        intra = [
            (e.source.node_id, e.target.node_id)
            for e in l.edges
            if e.source.node_id in member_set and e.target.node_id in member_set
        ]
        order = circular_order(member_ids, intra)
        radius = radius_for([l.by_id[m].rect for m in member_ids], spacing)
        circle = CircleMeta(
            cluster_id=cid,
            center=[0.0, 0.0],
            radius=radius,
            members=order,
            angles={m: 2.0 * math.pi * k / len(order) for k, m in enumerate(order)},
        )
        points = place_on_circle(order, (0.0, 0.0), radius)
        for m, point in points.items():
            l.by_id[m].rect.set_center(*point)
        segments = [(points[s], points[t]) for s, t in intra if s != t]
        circle.intra_crossings = crossing_count(segments)
        circles.append(circle)
    return circles


# ----------------------------------------------------------------------
# step 2: quotient spring embedder over disks


class _QuotientEntry:
    def __init__(self, radius: float, x: float, y: float, circle: CircleMeta | None, lnode: LNode | None):
        self.radius = radius
        self.x = x
        self.y = y
        self.circle = circle
        self.lnode = lnode
        self.pinned = lnode.pinned if lnode is not None else False


def _entry_index(circles, unclustered, clusters_of):
    index: dict[int, int] = {}
    for i, circle in enumerate(circles):
        for m in circle.members:
            index[m] = i
    offset = len(circles)
    for j, node in enumerate(unclustered):
        index[node.node_id] = offset + j
    return index


def _separate_disks(entries: list[_QuotientEntry], rng: random.Random) -> None:
    """Push overlapping disks apart until every pair has clearance."""
    for _ in range(400):
        moved = False
        for i in range(len(entries)):
            for j in range(i + 1, len(entries)):
                a, b = entries[i], entries[j]
                dx, dy = b.x - a.x, b.y - a.y
                dist = math.hypot(dx, dy)
                needed = a.radius + b.radius + SEPARATION_CLEARANCE
                if dist >= needed:
                    continue
                if dist < COINCIDENT_EPS:
                    angle = 2.0 * math.pi * rng.random()
                    ux, uy = math.cos(angle), math.sin(angle)
                else:
                    ux, uy = dx / dist, dy / dist
                push = (needed - dist) / 2.0 + SEPARATION_CLEARANCE
                if a.pinned and b.pinned:
                    continue
                if a.pinned:
                    b.x += ux * 2.0 * push
                    b.y += uy * 2.0 * push
                elif b.pinned:
                    a.x -= ux * 2.0 * push
                    a.y -= uy * 2.0 * push
                else:
                    a.x -= ux * push
                    a.y -= uy * push
                    b.x += ux * push
                    b.y += uy * push
                moved = True
        if not moved:
            return


def cise_step2(
    circles: list[CircleMeta],
    unclustered: list[LNode],
    l: LStructure,
    clusters: dict[int, str],
    opts: LayoutOptions,
    rng: random.Random,
) -> RunStats:
    """Position whole circles and unclustered nodes via a quotient embedder."""
    entries = [
        _QuotientEntry(c.radius, c.center[0], c.center[1], c, None) for c in circles
    ]
    entries += [
        _QuotientEntry(n.rect.diagonal() / 2.0, *n.rect.center(), None, n)
        for n in unclustered
    ]
    if not entries:
        return RunStats()
    index = _entry_index(circles, unclustered, clusters)
    factor = opts.get("interClusterEdgeLengthFactor", 1.0)
    spring_k = opts.get("springConstant", SPRING_CONSTANT)
    repulsion_c = opts.get("repulsionConstant", REPULSION_CONSTANT)

    collapsed: dict[tuple[int, int], int] = {}
    for edge in l.edges:
        a = index[edge.source.node_id]
        b = index[edge.target.node_id]
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        collapsed[key] = collapsed.get(key, 0) + 1
    qedges = []
    for (a, b), multiplicity in sorted(collapsed.items()):
        crosses_cluster = entries[a].circle is not None or entries[b].circle is not None
        rest = entries[a].radius + entries[b].radius + opts.ideal_edge_length * (
            factor if crosses_cluster else 1.0
        )
        qedges.append((a, b, multiplicity, rest))

    # Entries sharing a starting point get scattered, mirroring the leaf rule.
    side = math.sqrt(len(entries)) * opts.ideal_edge_length
    seen: set[Vec] = set()
    for entry in entries:
        if (entry.x, entry.y) in seen and not entry.pinned:
            entry.x = (rng.random() - 0.5) * side
            entry.y = (rng.random() - 0.5) * side
        seen.add((entry.x, entry.y))

    max_iter = max(opts.iterations, 1)
    total = 0.0
    iterations = 0
    for iteration in range(max_iter):
        cooling = opts.cooling_initial * (1.0 - iteration / max_iter)
        cap = 100.0 * cooling
        forces = [[0.0, 0.0] for _ in entries]
        for a, b, multiplicity, rest in qedges:
            ea, eb = entries[a], entries[b]
            dx, dy = eb.x - ea.x, eb.y - ea.y
            dist = math.hypot(dx, dy)
            if dist < COINCIDENT_EPS:
                angle = 2.0 * math.pi * rng.random()
                ux, uy = math.cos(angle), math.sin(angle)
                dist = 0.0
            else:
                ux, uy = dx / dist, dy / dist
            magnitude = spring_k * multiplicity * (dist - rest)
            forces[a][0] += magnitude * ux
            forces[a][1] += magnitude * uy
            forces[b][0] -= magnitude * ux
            forces[b][1] -= magnitude * uy
        for i in range(len(entries)):
            for j in range(i + 1, len(entries)):
                ea, eb = entries[i], entries[j]
                dx, dy = eb.x - ea.x, eb.y - ea.y
                dist = math.hypot(dx, dy)
                if dist < COINCIDENT_EPS:
                    angle = 2.0 * math.pi * rng.random()
                    ux, uy = math.cos(angle), math.sin(angle)
                    gap = 0.0
                else:
                    ux, uy = dx / dist, dy / dist
                    gap = dist - ea.radius - eb.radius
                if gap < COINCIDENT_EPS:
                    side_len = max(min(2.0 * ea.radius, 2.0 * eb.radius), 1.0)
                    magnitude = repulsion_c / (side_len * side_len)
                else:
                    magnitude = repulsion_c / (gap * gap)
                forces[i][0] -= magnitude * ux
                forces[i][1] -= magnitude * uy
                forces[j][0] += magnitude * ux
                forces[j][1] += magnitude * uy
        bx = sum(e.x for e in entries) / len(entries)
        by = sum(e.y for e in entries) / len(entries)
        for i, entry in enumerate(entries):
            dx, dy = bx - entry.x, by - entry.y
            dist = math.hypot(dx, dy)
            if dist >= COINCIDENT_EPS:
                forces[i][0] += opts.gravity_strength * dx / dist
                forces[i][1] += opts.gravity_strength * dy / dist
        total = 0.0
        for i, entry in enumerate(entries):
            if entry.pinned:
                continue
            dx, dy = forces[i][0] * cooling, forces[i][1] * cooling
            norm = math.hypot(dx, dy)
            if norm > cap and norm > 0.0:
                dx, dy = dx * cap / norm, dy * cap / norm
            entry.x += dx
            entry.y += dy
            total += math.hypot(dx, dy)
        iterations = iteration + 1
        if total / len(entries) < opts.convergence_eps:
            break

    _separate_disks(entries, rng)
    for entry in entries:
        if entry.circle is not None:
            entry.circle.center[0] = entry.x
            entry.circle.center[1] = entry.y
            for m in entry.circle.members:
                l.by_id[m].rect.set_center(*entry.circle.position(m))
        else:
            entry.lnode.rect.set_center(entry.x, entry.y)
    return RunStats(iterations, total)


# ----------------------------------------------------------------------
# steps 3 and 4: rigid circle motion, then on-track refinement


class _CiseState:
    def __init__(
        self,
        circles: list[CircleMeta],
        unclustered: list[LNode],
        l: LStructure,
        clusters: dict[int, str],
        opts: LayoutOptions,
        rng: random.Random,
    ):
        self.circles = circles
        self.unclustered = unclustered
        self.l = l
        self.opts = opts
        self.rng = rng
        self.spring_k = opts.get("springConstant", SPRING_CONSTANT)
        self.repulsion_c = opts.get("repulsionConstant", REPULSION_CONSTANT)
        self.factor = opts.get("interClusterEdgeLengthFactor", 1.0)
        self.circle_of: dict[int, int] = {}
        for i, circle in enumerate(circles):
            for m in circle.members:
                self.circle_of[m] = i
        self.omega = [0.0] * len(circles)
        self.edges = [
            (e.source.node_id, e.target.node_id)
            for e in l.edges
            if e.source.node_id != e.target.node_id
        ]

    def position(self, node_id: int) -> Vec:
        i = self.circle_of.get(node_id)
        if i is not None:
            return self.circles[i].position(node_id)
        return self.l.by_id[node_id].rect.center()

    def rest_length(self, a: int, b: int) -> float:
        crosses = a in self.circle_of or b in self.circle_of
        return self.opts.ideal_edge_length * (self.factor if crosses else 1.0)

    def all_segments(self) -> list[tuple[Vec, Vec]]:
        return [(self.position(s), self.position(t)) for s, t in self.edges]

    def total_crossings(self) -> int:
        return crossing_count(self.all_segments())

    def snapshot(self):
        return (
            [(c.center[0], c.center[1], c.rotation, list(c.members), dict(c.angles)) for c in self.circles],
            [(n.node_id, n.rect.x, n.rect.y) for n in self.unclustered],
        )

    def restore(self, snap) -> None:
        for circle, (cx, cy, rot, members, angles) in zip(self.circles, snap[0]):
            circle.center[0] = cx
            circle.center[1] = cy
            circle.rotation = rot
            circle.members = list(members)
            circle.angles = dict(angles)
        for node_id, x, y in snap[1]:
            node = self.l.by_id[node_id]
            node.rect.x = x
            node.rect.y = y

    # -- one rigid iteration shared by steps 3 and 4 -------------------

    def rigid_iteration(self, cooling: float) -> float:
        circles = self.circles
        cap = 100.0 * cooling
        forces_c = [[0.0, 0.0] for _ in circles]
        torques = [0.0] * len(circles)
        forces_u = {n.node_id: [0.0, 0.0] for n in self.unclustered}

        for s, t in self.edges:
            ci, cj = self.circle_of.get(s), self.circle_of.get(t)
            if ci is not None and ci == cj:
                continue  # same rigid body; no net force, no net torque
            ps, pt = self.position(s), self.position(t)
            dx, dy = pt[0] - ps[0], pt[1] - ps[1]
            dist = math.hypot(dx, dy)
            if dist < COINCIDENT_EPS:
                angle = 2.0 * math.pi * self.rng.random()
                ux, uy = math.cos(angle), math.sin(angle)
                dist = 0.0
            else:
                ux, uy = dx / dist, dy / dist
            magnitude = self.spring_k * (dist - self.rest_length(s, t))
            for node_id, point, sign in ((s, ps, 1.0), (t, pt, -1.0)):
                fx, fy = sign * magnitude * ux, sign * magnitude * uy
                k = self.circle_of.get(node_id)
                if k is not None:
                    forces_c[k][0] += fx
                    forces_c[k][1] += fy
                    rx = point[0] - circles[k].center[0]
                    ry = point[1] - circles[k].center[1]
                    torques[k] += rx * fy - ry * fx
                else:
                    forces_u[node_id][0] += fx
                    forces_u[node_id][1] += fy

        # Disk repulsion between every pair of rigid/free entities.
        entities: list[tuple[float, float, float, int | LNode]] = []
        for i, circle in enumerate(circles):
            entities.append((circle.center[0], circle.center[1], circle.radius, i))
        for node in self.unclustered:
            cx, cy = node.rect.center()
            entities.append((cx, cy, node.rect.diagonal() / 2.0, node))
        for i in range(len(entities)):
            xi, yi, ri, who_i = entities[i]
            for j in range(i + 1, len(entities)):
                xj, yj, rj, who_j = entities[j]
                dx, dy = xj - xi, yj - yi
                dist = math.hypot(dx, dy)
                if dist < COINCIDENT_EPS:
                    angle = 2.0 * math.pi * self.rng.random()
                    ux, uy = math.cos(angle), math.sin(angle)
                    gap = 0.0
                else:
                    ux, uy = dx / dist, dy / dist
                    gap = dist - ri - rj
                if gap < COINCIDENT_EPS:
                    side_len = max(min(2.0 * ri, 2.0 * rj), 1.0)
                    magnitude = self.repulsion_c / (side_len * side_len)
                else:
                    magnitude = self.repulsion_c / (gap * gap)
                for who, sign in ((who_i, -1.0), (who_j, 1.0)):
                    fx, fy = sign * magnitude * ux, sign * magnitude * uy
                    if isinstance(who, int):
                        forces_c[who][0] += fx
                        forces_c[who][1] += fy
                    else:
                        forces_u[who.node_id][0] += fx
                        forces_u[who.node_id][1] += fy

        # Gravity toward the middle of the drawing's bounding box, felt by
        # circles and unclustered nodes (members ride their circles).
        xs: list[float] = []
        ys: list[float] = []
        for circle in circles:
            xs += [circle.center[0] - circle.radius, circle.center[0] + circle.radius]
            ys += [circle.center[1] - circle.radius, circle.center[1] + circle.radius]
        for node in self.unclustered:
            xs += [node.rect.x, node.rect.right]
            ys += [node.rect.y, node.rect.bottom]
        if xs:
            gx, gy = (min(xs) + max(xs)) / 2.0, (min(ys) + max(ys)) / 2.0
            for i, circle in enumerate(circles):
                dx, dy = gx - circle.center[0], gy - circle.center[1]
                dist = math.hypot(dx, dy)
                if dist >= COINCIDENT_EPS:
                    forces_c[i][0] += self.opts.gravity_strength * dx / dist
                    forces_c[i][1] += self.opts.gravity_strength * dy / dist
            for node in self.unclustered:
                cx, cy = node.rect.center()
                dx, dy = gx - cx, gy - cy
                dist = math.hypot(dx, dy)
                if dist >= COINCIDENT_EPS:
                    forces_u[node.node_id][0] += self.opts.gravity_strength * dx / dist
                    forces_u[node.node_id][1] += self.opts.gravity_strength * dy / dist

        total = 0.0
        for i, circle in enumerate(circles):
            dx, dy = forces_c[i][0] * cooling, forces_c[i][1] * cooling
            norm = math.hypot(dx, dy)
            if norm > cap and norm > 0.0:
                dx, dy = dx * cap / norm, dy * cap / norm
            circle.center[0] += dx
            circle.center[1] += dy
            members = max(len(circle.members), 1)
            inertia = circle.radius * circle.radius * members
            self.omega[i] = ROTATION_DAMPING * self.omega[i] + torques[i] / inertia
            dtheta = self.omega[i] * cooling
            dtheta = max(-MAX_ROTATION_STEP, min(MAX_ROTATION_STEP, dtheta))
            circle.rotation += dtheta
            total += math.hypot(dx, dy) + abs(dtheta) * circle.radius
        for node in self.unclustered:
            if node.pinned:
                continue
            fx, fy = forces_u[node.node_id]
            dx, dy = fx * cooling, fy * cooling
            norm = math.hypot(dx, dy)
            if norm > cap and norm > 0.0:
                dx, dy = dx * cap / norm, dy * cap / norm
            node.rect.move(dx, dy)
            total += math.hypot(dx, dy)

        self._separate_rigid()
        for circle in circles:
            for m in circle.members:
                self.l.by_id[m].rect.set_center(*circle.position(m))
        return total

    def _separate_rigid(self) -> None:
        entries = [
            _QuotientEntry(c.radius, c.center[0], c.center[1], c, None) for c in self.circles
        ] + [
            _QuotientEntry(n.rect.diagonal() / 2.0, *n.rect.center(), None, n)
            for n in self.unclustered
        ]
        _separate_disks(entries, self.rng)
        for entry in entries:
            if entry.circle is not None:
                entry.circle.center[0] = entry.x
                entry.circle.center[1] = entry.y
            else:
                entry.lnode.rect.set_center(entry.x, entry.y)

    def entity_count(self) -> int:
        return len(self.circles) + len(self.unclustered) or 1


def cise_step3(state: _CiseState) -> RunStats:
    """Circles translate and rotate rigidly; member order cannot change."""
    opts = state.opts
    max_iter = max(opts.iterations, 1)
    total = 0.0
    iterations = 0
    for iteration in range(max_iter):
        cooling = opts.cooling_initial * (1.0 - iteration / max_iter)
        total = state.rigid_iteration(cooling)
        iterations = iteration + 1
        if total / state.entity_count() < opts.convergence_eps:
            break
    return RunStats(iterations, total)


def cise_step4(state: _CiseState) -> RunStats:
    """On-track refinement: capped slides plus adjacent swaps.

    Keeps the best geometry seen (fewest crossings) and restores it at the
    end, so the final drawing never has more crossings than step 3 left.
    """
    opts = state.opts
    max_iter = max(opts.iterations, 1)
    best = (state.total_crossings(), state.snapshot())
    total = 0.0
    iterations = 0
    for iteration in range(max_iter):
        cooling = opts.cooling_initial * (1.0 - iteration / max_iter)
        total = state.rigid_iteration(cooling)
        total += _slide_members(state, cooling)
        _try_swaps(state)
        crossings = state.total_crossings()
        if crossings < best[0]:
            best = (crossings, state.snapshot())
        iterations = iteration + 1
        if total / state.entity_count() < opts.convergence_eps:
            break
    if state.total_crossings() > best[0]:
        state.restore(best[1])
        for circle in state.circles:
            for m in circle.members:
                state.l.by_id[m].rect.set_center(*circle.position(m))
    return RunStats(iterations, total)


def _slide_members(state: _CiseState, cooling: float) -> float:
    """Move members along their tracks under tangential spring pull.

    Steps are capped per iteration and clamped so a slide alone can never
    change the circular order; order changes go through swaps only.
    """
    incident: dict[int, list[tuple[int, int]]] = {}
    for s, t in state.edges:
        incident.setdefault(s, []).append((s, t))
        incident.setdefault(t, []).append((s, t))
    moved = 0.0
    for k, circle in enumerate(state.circles):
        count = len(circle.members)
        if count < 2:
            continue
        cap = (2.0 * math.pi / count) * SLIDE_CAP_FRACTION
        gap = 0.01 * (2.0 * math.pi / count)
        new_angles = dict(circle.angles)
        for idx, m in enumerate(circle.members):
            fx = fy = 0.0
            for s, t in incident.get(m, ()):
                other = t if s == m else s
                pm = circle.position(m)
                po = state.position(other)
                dx, dy = po[0] - pm[0], po[1] - pm[1]
                dist = math.hypot(dx, dy)
                if dist < COINCIDENT_EPS:
                    continue
                magnitude = state.spring_k * (dist - state.rest_length(s, t))
                fx += magnitude * dx / dist
                fy += magnitude * dy / dist
            angle = circle.angles[m] + circle.rotation
            tangent_x, tangent_y = -math.sin(angle), math.cos(angle)
            tangential = fx * tangent_x + fy * tangent_y
            dtheta = (tangential / circle.radius) * cooling
            dtheta = max(-cap, min(cap, dtheta))
            lo = circle.angles[circle.members[idx - 1]] + gap
            hi = circle.angles[circle.members[(idx + 1) % count]] - gap
            if idx == 0:
                lo -= 2.0 * math.pi
            if idx == count - 1:
                hi += 2.0 * math.pi
            new_angle = max(lo, min(hi, circle.angles[m] + dtheta))
            moved += abs(new_angle - circle.angles[m]) * circle.radius
            new_angles[m] = new_angle
        circle.angles = new_angles
        for m in circle.members:
            state.l.by_id[m].rect.set_center(*circle.position(m))
    return moved


def _local_crossings(state: _CiseState, u: int, v: int) -> int:
    """Crossings among pairs where at least one edge touches u or v."""
    touched = []
    rest = []
    for s, t in state.edges:
        if s in (u, v) or t in (u, v):
            touched.append((s, t))
        else:
            rest.append((s, t))
    count = 0
    segments = {e: (state.position(e[0]), state.position(e[1])) for e in state.edges}
    for i, e in enumerate(touched):
        for f in touched[i + 1 :]:
            count += _proper(segments[e], segments[f], e, f)
        for f in rest:
            count += _proper(segments[e], segments[f], e, f)
    return count


def _proper(sa, sb, ea, eb) -> int:
    if ea[0] in eb or ea[1] in eb:
        return 0
    return 1 if crossing_count([sa, sb]) else 0


def _try_swaps(state: _CiseState) -> None:
    """Swap adjacent members when that strictly lowers the crossing count."""
    for circle in state.circles:
        count = len(circle.members)
        if count < 2:
            continue
        for idx in range(count):
            jdx = (idx + 1) % count
            u, v = circle.members[idx], circle.members[jdx]
            before = _local_crossings(state, u, v)
            circle.angles[u], circle.angles[v] = circle.angles[v], circle.angles[u]
            circle.members[idx], circle.members[jdx] = v, u
            after = _local_crossings(state, u, v)
            if after >= before:
                circle.members[idx], circle.members[jdx] = u, v
                circle.angles[u], circle.angles[v] = circle.angles[v], circle.angles[u]
            else:
                for m in (u, v):
                    state.l.by_id[m].rect.set_center(*circle.position(m))


# ----------------------------------------------------------------------
# entry points


def _require_flat(l: LStructure, name: str) -> None:
    if any(n.child is not None for n in l.nodes):
        raise LayoutError(f"{name} layout supports flat graphs only")


def cise_run(
    l: LStructure,
    clusters: dict[int, str],
    opts: LayoutOptions,
    rng: random.Random,
) -> RunStats:
    """The four-step clustered pipeline; no clusters means plain springs."""
    _require_flat(l, "cise")
    if not clusters:
        return run_force_loop(flatten(l), opts, rng)
    circles = cise_step1(l, clusters, opts)
    unclustered = [n for n in l.nodes if n.node_id not in clusters]
    stats2 = cise_step2(circles, unclustered, l, clusters, opts, rng)
    state = _CiseState(circles, unclustered, l, clusters, opts, rng)
    stats3 = cise_step3(state)
    stats4 = cise_step4(state)
    return RunStats(
        stats2.iterations_used + stats3.iterations_used + stats4.iterations_used,
        stats4.final_total_displacement,
    )


class CircularLayout(LayoutAlgorithm):
    """Everything on one circle, ordered to keep neighbors adjacent."""

    name = "circular"

    def run(self, l: LStructure, opts: LayoutOptions, rng: random.Random) -> RunStats:
        _require_flat(l, "circular")
        if not l.nodes:
            return RunStats()
        ids = [n.node_id for n in l.nodes]
        edges = [(e.source.node_id, e.target.node_id) for e in l.edges]
        order = circular_order(ids, edges)
        radius = radius_for(
            [n.rect for n in l.nodes], opts.get("nodeSeparation", DEFAULT_NODE_SEPARATION)
        )
        for node_id, point in place_on_circle(order, (0.0, 0.0), radius).items():
            l.by_id[node_id].rect.set_center(*point)
        return RunStats(0, 0.0)


class CiseLayout(LayoutAlgorithm):
    """Clustered circular layout driven by the nodes' cluster markers."""

    name = "cise"

    def run(self, l: LStructure, opts: LayoutOptions, rng: random.Random) -> RunStats:
        clusters = {n.node_id: n.cluster for n in l.nodes if n.cluster}
        return cise_run(l, clusters, opts, rng)
