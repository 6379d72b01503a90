"""Cluster-together force layout built on temporary compound wrappers."""

from __future__ import annotations

import math
import random

import pytest
from shapely.geometry import MultiPoint

from conftest import corner_points, two_cluster_model
from nestgraph import GraphModel, Rect
from nestgraph.layout.base import LayoutError, LayoutOptions, build_l_structure, run_layout
from nestgraph.layout.cluster import ClusterLayout, cluster_run
from nestgraph.layout.cose import CoseLayout


def test_cluster_hulls_stay_disjoint():
    model, groups = two_cluster_model()
    run_layout(model, ClusterLayout(), LayoutOptions(seed=1))
    assert model.validate() == []
    left = MultiPoint(corner_points(model, groups["left"])).convex_hull
    right = MultiPoint(corner_points(model, groups["right"])).convex_hull
    assert not left.intersects(right)


def test_cluster_members_sit_nearest_their_own_barycenter():
    model, groups = two_cluster_model()
    run_layout(model, ClusterLayout(), LayoutOptions())
    bary = {}
    for cid, ids in groups.items():
        centers = [model.nodes[n].bounds.center() for n in ids]
        bary[cid] = (
            sum(c[0] for c in centers) / len(centers),
            sum(c[1] for c in centers) / len(centers),
        )
    for cid, ids in groups.items():
        for nid in ids:
            cx, cy = model.nodes[nid].bounds.center()
            own = math.hypot(cx - bary[cid][0], cy - bary[cid][1])
            for other, (bx, by) in bary.items():
                if other != cid:
                    assert own < math.hypot(cx - bx, cy - by)


def test_without_assignments_cluster_equals_cose_exactly():
    def geometry(algorithm):
        model = GraphModel()
        ids = [model.add_node() for _ in range(10)]
        rng = random.Random(3)
        for _ in range(12):
            model.add_edge(rng.choice(ids), rng.choice(ids))
        run_layout(model, algorithm, LayoutOptions(seed=8, iterations=150))
        return [(n.bounds.x, n.bounds.y) for _, n in sorted(model.nodes.items())]

    assert geometry(ClusterLayout()) == geometry(CoseLayout())


def test_cluster_rejects_compound_models():
    model = GraphModel()
    a = model.add_node()
    model.make_compound(model.root, [a])
    with pytest.raises(LayoutError, match="flat graphs only"):
        run_layout(model, ClusterLayout(), LayoutOptions())


def test_cluster_rejects_unknown_assignment_ids():
    model = GraphModel()
    model.add_node()
    l = build_l_structure(model)
    with pytest.raises(LayoutError, match="unknown node"):
        cluster_run(l, {555: "x"}, LayoutOptions(), random.Random(1))


def test_wrappers_are_fully_dissolved():
    model, groups = two_cluster_model()
    l = build_l_structure(model)
    clusters = {n.node_id: n.cluster for n in l.nodes if n.cluster}
    node_ids_before = sorted(n.node_id for n in l.nodes)
    graph_count_before = len(l.graphs)
    cluster_run(l, clusters, LayoutOptions(seed=1, iterations=50), random.Random(1))
    assert sorted(n.node_id for n in l.nodes) == node_ids_before
    assert len(l.graphs) == graph_count_before
    assert all(n.owner is l.root for n in l.nodes)
    assert all(not e.inter_graph for e in l.edges)


def test_partial_assignment_leaves_free_nodes_free():
    model, groups = two_cluster_model()
    free = model.add_node(bounds=Rect(0, 0, 30, 30))
    model.add_edge(free, groups["left"][0])
    run_layout(model, ClusterLayout(), LayoutOptions(seed=6))
    assert model.validate() == []


def test_cluster_layout_is_deterministic():
    def run(seed):
        model, _ = two_cluster_model(per_side=3, bridges=1)
        run_layout(model, ClusterLayout(), LayoutOptions(seed=seed, iterations=100))
        return [(n.bounds.x, n.bounds.y) for _, n in sorted(model.nodes.items())]

    assert run(4) == run(4)
