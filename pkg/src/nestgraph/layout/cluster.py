"""Cluster layout: force layout with clusters kept spatially together.

Clusters are not part of the document; each one is wrapped in a temporary
compound inside the mirror, the compound-aware force loop runs, and the
wrappers are dissolved again before geometry leaves the mirror.  Members
keep the absolute coordinates the wrapped run gave them.
"""

from __future__ import annotations

import random

from ..geometry import Rect
from .base import (
    LayoutAlgorithm,
    LayoutError,
    LayoutOptions,
    LGraph,
    LNode,
    LStructure,
    RunStats,
)
from .cose import run_force_loop


def cluster_run(
    l: LStructure,
    clusters: dict[int, str],
    opts: LayoutOptions,
    rng: random.Random,
) -> RunStats:
    """Wrap clusters, run the compound force loop, dissolve the wrappers."""
    if any(n.child is not None for n in l.nodes):
        raise LayoutError("cluster layout supports flat graphs only")
    for node_id in clusters:
        if node_id not in l.by_id:
            raise LayoutError(f"cluster assignment names unknown node {node_id}")
    if not clusters:
        return run_force_loop(l, opts, rng)

    root = l.root
    members_by_cluster: dict[str, list[LNode]] = {}
    for node in root.nodes:
        cid = clusters.get(node.node_id)
        if cid is not None:
            members_by_cluster.setdefault(cid, []).append(node)

    wrappers: list[LNode] = []
    temp_id = -1
    for cid in sorted(members_by_cluster):
        members = members_by_cluster[cid]
        graph = LGraph(temp_id - 1, opts.compound_margin, 0.0)
        wrapper = LNode(temp_id, Rect(), root)
        wrapper.child = graph
        graph.parent = wrapper
        temp_id -= 2
        graph.nodes = members
        root.nodes = [n for n in root.nodes if n not in members]
        root.nodes.append(wrapper)
        for member in members:
            member.owner = graph
        l.graphs.append(graph)
        l.nodes.append(wrapper)
        wrappers.append(wrapper)
    for edge in l.edges:
        edge.inter_graph = edge.source.owner is not edge.target.owner
    l.retighten()

    stats = run_force_loop(l, opts, rng)

    for wrapper in wrappers:
        graph = wrapper.child
        root.nodes.remove(wrapper)
        for member in graph.nodes:
            member.owner = root
            root.nodes.append(member)
        l.graphs.remove(graph)
        l.nodes.remove(wrapper)
    for edge in l.edges:
        edge.inter_graph = edge.source.owner is not edge.target.owner
    return stats


class ClusterLayout(LayoutAlgorithm):
    """Force layout where marked clusters stay together."""

    name = "cluster"

    def run(self, l: LStructure, opts: LayoutOptions, rng: random.Random) -> RunStats:
        clusters = {n.node_id: n.cluster for n in l.nodes if n.cluster}
        return cluster_run(l, clusters, opts, rng)
