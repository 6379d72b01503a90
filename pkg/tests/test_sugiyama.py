"""Layered layout: cycle removal, layering, ordering, and coordinates."""

from __future__ import annotations

import random

import pytest

from conftest import is_acyclic
from nestgraph import GraphModel, Rect
from nestgraph.layout.base import LayoutError, LayoutOptions, run_layout
from nestgraph.layout.sugiyama import (
    SugiyamaLayout,
    assign_coordinates,
    assign_layers,
    barycenter,
    count_layer_crossings,
    order_layers,
    remove_cycles,
)
from nestgraph.registry import resolve


def random_digraph(rng: random.Random, max_nodes: int = 60):
    n = rng.randint(2, max_nodes)
    node_ids = list(range(1, n + 1))
    edges = []
    for edge_id in range(n + 1, n + 1 + rng.randint(1, 2 * n)):
        edges.append((edge_id, rng.choice(node_ids), rng.choice(node_ids)))
    return node_ids, edges


def apply_reversal(edges, flipped):
    return [(eid, t, s) if eid in flipped else (eid, s, t) for eid, s, t in edges]


# --- cycle removal ---------------------------------------------------------


def test_remove_cycles_leaves_dag_alone():
    edges = [(10, 1, 2), (11, 1, 3), (12, 2, 4), (13, 3, 4)]
    assert remove_cycles([1, 2, 3, 4], edges) == set()


def test_remove_cycles_breaks_two_cycle():
    flipped = remove_cycles([1, 2], [(3, 1, 2), (4, 2, 1)])
    assert len(flipped) == 1
    assert flipped <= {3, 4}


def test_remove_cycles_ignores_self_loops():
    edges = [(5, 1, 1), (6, 1, 2), (7, 2, 1)]
    flipped = remove_cycles([1, 2], edges)
    assert 5 not in flipped
    assert is_acyclic([1, 2], apply_reversal([e for e in edges if e[1] != e[2]], flipped))


def test_reversal_makes_random_graphs_acyclic():
    rng = random.Random(2026)
    for _ in range(40):
        node_ids, edges = random_digraph(rng)
        flipped = remove_cycles(node_ids, edges)
        assert is_acyclic(node_ids, apply_reversal(edges, flipped))


# --- layer assignment ------------------------------------------------------


def test_assign_layers_path():
    layer = assign_layers([1, 2, 3], [(10, 1, 2), (11, 2, 3)])
    assert layer == {1: 0, 2: 1, 3: 2}


def test_assign_layers_diamond():
    layer = assign_layers([1, 2, 3, 4], [(5, 1, 2), (6, 1, 3), (7, 2, 4), (8, 3, 4)])
    assert layer[4] == 2


def test_assign_layers_edges_point_down_on_random_dags():
    rng = random.Random(12)
    for _ in range(25):
        node_ids, edges = random_digraph(rng, max_nodes=40)
        flipped = remove_cycles(node_ids, edges)
        acyclic = apply_reversal(edges, flipped)
        layer = assign_layers(node_ids, acyclic)
        for _, source, target in acyclic:
            if source != target:
                assert layer[target] > layer[source]


def test_assign_layers_rejects_cycles():
    with pytest.raises(LayoutError, match="layer assignment ran on a cyclic graph"):
        assign_layers([1, 2], [(8, 1, 2), (9, 2, 1)])


# --- crossing reduction ----------------------------------------------------


def test_barycenter_of_fixed_positions():
    assert barycenter([1, 3]) == 2.0
    assert barycenter([]) == -1.0


def test_order_layers_uncrosses_a_crossed_matching():
    node_ids = [1, 2, 3, 4]
    edges = [(5, 1, 4), (6, 2, 3)]
    layer = {1: 0, 2: 0, 3: 1, 4: 1}
    orders, grown, segments = order_layers(node_ids, edges, layer, sweeps=0)
    assert count_layer_crossings(orders, segments, grown) == 1
    orders, grown, segments = order_layers(node_ids, edges, layer, sweeps=1)
    assert count_layer_crossings(orders, segments, grown) == 0


def test_order_layers_never_increases_crossings():
    rng = random.Random(77)
    for _ in range(20):
        node_ids, edges = random_digraph(rng, max_nodes=25)
        flipped = remove_cycles(node_ids, edges)
        acyclic = apply_reversal(edges, flipped)
        layer = assign_layers(node_ids, acyclic)
        orders0, grown0, segments0 = order_layers(node_ids, acyclic, layer, sweeps=0)
        before = count_layer_crossings(orders0, segments0, grown0)
        for sweeps in (1, 2, 4):
            orders, grown, segments = order_layers(node_ids, acyclic, layer, sweeps)
            assert count_layer_crossings(orders, segments, grown) <= before


def test_order_layers_splits_long_edges_with_dummy_nodes():
    node_ids = [1, 2, 3]
    edges = [(5, 1, 2), (6, 2, 3), (7, 1, 3)]
    layer = assign_layers(node_ids, edges)
    orders, grown, segments = order_layers(node_ids, edges, layer)
    assert grown[-1] == 1
    assert (1, -1) in segments and (-1, 3) in segments
    assert (1, 3) not in segments
    assert -1 in orders[1]


# --- coordinates -----------------------------------------------------------


def test_coordinates_space_a_row_evenly():
    orders = [[1, 2, 3]]
    sizes = {1: (30.0, 30.0), 2: (30.0, 30.0), 3: (30.0, 30.0)}
    centers = assign_coordinates(orders, sizes)
    assert centers[1] == (15.0, 0.0)
    assert centers[2] == (65.0, 0.0)
    assert centers[3] == (115.0, 0.0)


def test_coordinates_step_layers_by_tallest_node_plus_rank_gap():
    orders = [[1], [2]]
    sizes = {1: (30.0, 40.0), 2: (30.0, 10.0)}
    centers = assign_coordinates(orders, sizes)
    assert centers[1][1] == 0.0
    assert centers[2][1] == 90.0


def test_coordinates_align_a_two_layer_path():
    orders = [[1], [2]]
    sizes = {1: (40.0, 30.0), 2: (20.0, 30.0)}
    centers = assign_coordinates(orders, sizes, neighbors={1: [2], 2: [1]})
    assert centers[1][0] == centers[2][0]


def test_coordinates_keep_separation_when_neighbors_collide():
    orders = [[1], [2, 3]]
    sizes = {1: (30.0, 30.0), 2: (30.0, 30.0), 3: (30.0, 30.0)}
    neighbors = {1: [2, 3], 2: [1], 3: [1]}
    centers = assign_coordinates(orders, sizes, neighbors=neighbors)
    assert centers[1][0] == 40.0
    assert centers[2][0] == 40.0
    assert centers[3][0] == 90.0


# --- whole algorithm -------------------------------------------------------


def path_model(widths: list[float]):
    model = GraphModel()
    ids = [model.add_node(bounds=Rect(0, 0, w, 30)) for w in widths]
    for a, b in zip(ids, ids[1:]):
        model.add_edge(a, b)
    return model, ids


def test_layout_orders_a_path_downward():
    model, ids = path_model([40.0, 20.0])
    run_layout(model, SugiyamaLayout(), LayoutOptions())
    top, bottom = (model.nodes[i].bounds.center() for i in ids)
    assert top[0] == bottom[0]
    assert bottom[1] - top[1] == 80.0


def test_layout_keeps_same_layer_nodes_apart():
    rng = random.Random(5)
    for _ in range(15):
        model = GraphModel()
        ids = [
            model.add_node(bounds=Rect(0, 0, rng.uniform(20, 60), rng.uniform(20, 60)))
            for _ in range(rng.randint(4, 30))
        ]
        for _ in range(rng.randint(3, 40)):
            model.add_edge(rng.choice(ids), rng.choice(ids))
        run_layout(model, SugiyamaLayout(), LayoutOptions())
        by_y: dict[float, list[int]] = {}
        for nid in ids:
            by_y.setdefault(model.nodes[nid].bounds.center()[1], []).append(nid)
        for tier in by_y.values():
            for i, a in enumerate(tier):
                for b in tier[i + 1 :]:
                    assert not model.nodes[a].bounds.intersects(model.nodes[b].bounds)


def test_layout_ignores_arrow_style_for_direction():
    model = GraphModel()
    a = model.add_node(bounds=Rect(0, 0, 30, 30))
    b = model.add_node(bounds=Rect(0, 0, 30, 30))
    edge = model.add_edge(a, b)
    model.edges[edge].style.arrow = "NONE"
    run_layout(model, SugiyamaLayout(), LayoutOptions())
    assert model.nodes[b].bounds.y > model.nodes[a].bounds.y


def test_layout_rejects_compound_graphs():
    model = GraphModel()
    a = model.add_node()
    model.add_node()
    model.make_compound(0, [a])
    with pytest.raises(LayoutError, match="flat graphs only"):
        run_layout(model, SugiyamaLayout(), LayoutOptions())


def test_layout_handles_empty_model():
    model = GraphModel()
    report = run_layout(model, SugiyamaLayout(), LayoutOptions())
    assert report.iterations_used == 0


def test_hierarchical_is_an_alias():
    entry = resolve("hierarchical")
    assert entry.name == "sugiyama"
    assert isinstance(entry.factory(), SugiyamaLayout)
