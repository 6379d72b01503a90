"""Model operations and invariants.

Expected geometry values are computed by `expected_compound_bounds`, an
independent min/max re-derivation of the tight-bound rule, and frozen as
literals where a case is worth reading at a glance.
"""

from __future__ import annotations

import math
import random

import pytest

from nestgraph import GraphModel, Rect
from nestgraph.model import (
    DEFAULT_LABEL_STRIP,
    DEFAULT_MARGIN,
    EMPTY_COMPOUND_SIDE,
    ModelError,
    models_equal,
)

from conftest import random_compound_model, random_rect


def expected_compound_bounds(model: GraphModel, compound_id: int) -> Rect:
    """Oracle: recompute a compound's bounds from raw child extents."""
    graph = model.graphs[model.nodes[compound_id].child_graph]
    if not graph.nodes:
        b = model.nodes[compound_id].bounds
        return Rect(b.x, b.y, EMPTY_COMPOUND_SIDE, EMPTY_COMPOUND_SIDE + graph.label_strip)
    xs0 = [model.nodes[n].bounds.x for n in graph.nodes]
    ys0 = [model.nodes[n].bounds.y for n in graph.nodes]
    xs1 = [model.nodes[n].bounds.right for n in graph.nodes]
    ys1 = [model.nodes[n].bounds.bottom for n in graph.nodes]
    m = graph.margins
    return Rect(
        min(xs0) - m,
        min(ys0) - m,
        (max(xs1) - min(xs0)) + 2 * m,
        (max(ys1) - min(ys0)) + 2 * m + graph.label_strip,
    )


def assert_tight(model: GraphModel) -> None:
    for node in model.nodes.values():
        if node.is_compound:
            want = expected_compound_bounds(model, node.id)
            got = node.bounds
            assert (got.x, got.y, got.w, got.h) == (want.x, want.y, want.w, want.h)


# ----------------------------------------------------------------------
# ids and simple ops


def test_ids_are_monotonic_across_kinds():
    model = GraphModel()
    assert model.root == 0
    a = model.add_node()
    b = model.add_node()
    e = model.add_edge(a, b)
    c = model.make_compound(model.root, [a])
    assert (a, b, e, c) == (1, 2, 3, 4)
    # The compound's child graph took id 5.
    assert model.nodes[c].child_graph == 5
    assert model.add_node() == 6


def test_add_node_defaults():
    model = GraphModel()
    nid = model.add_node()
    b = model.nodes[nid].bounds
    assert (b.x, b.y, b.w, b.h) == (0, 0, 40, 40)
    assert model.nodes[nid].owner_graph == model.root


def test_add_edge_requires_endpoints():
    model = GraphModel()
    a = model.add_node()
    with pytest.raises(ModelError):
        model.add_edge(a, 999)


def test_self_loops_and_parallel_edges_are_legal():
    model = GraphModel()
    a = model.add_node()
    b = model.add_node()
    model.add_edge(a, a)
    model.add_edge(a, b)
    model.add_edge(a, b)
    assert model.validate() == []


# ----------------------------------------------------------------------
# compound bounds: frozen worked examples


def test_compound_bounds_single_child_margin_5():
    model = GraphModel()
    a = model.add_node(bounds=Rect(10, 10, 30, 20))
    comp = model.make_compound(model.root, [a])
    model.set_margins(model.nodes[comp].child_graph, margins=5.0)
    b = model.nodes[comp].bounds
    assert (b.x, b.y, b.w, b.h) == (5, 5, 40, 42)
    assert_tight(model)


def test_compound_bounds_two_children_margin_5():
    model = GraphModel()
    a = model.add_node(bounds=Rect(10, 10, 30, 20))
    b = model.add_node(bounds=Rect(30, 40, 30, 20))
    comp = model.make_compound(model.root, [a, b])
    model.set_margins(model.nodes[comp].child_graph, margins=5.0)
    r = model.nodes[comp].bounds
    assert (r.x, r.y, r.w, r.h) == (5, 5, 60, 72)
    assert_tight(model)


def test_compound_bounds_default_margins():
    model = GraphModel()
    a = model.add_node(bounds=Rect(10, 10, 30, 20))
    comp = model.make_compound(model.root, [a])
    r = model.nodes[comp].bounds
    assert (r.x, r.y, r.w, r.h) == (0, 0, 50, 52)
    assert DEFAULT_MARGIN == 10.0 and DEFAULT_LABEL_STRIP == 12.0


def test_grouping_spanning_children():
    model = GraphModel()
    a = model.add_node(bounds=Rect(0, 0, 20, 20))
    b = model.add_node(bounds=Rect(40, 10, 20, 20))
    comp = model.make_compound(model.root, [a, b])
    r = model.nodes[comp].bounds
    assert (r.x, r.y, r.w, r.h) == (-10, -10, 80, 62)


def test_empty_compound_keeps_anchored_minimum_box():
    model = GraphModel()
    a = model.add_node(bounds=Rect(100, 100, 20, 20))
    comp = model.make_compound(model.root, [a])
    model.remove(a)
    r = model.nodes[comp].bounds
    assert (r.w, r.h) == (EMPTY_COMPOUND_SIDE, EMPTY_COMPOUND_SIDE + DEFAULT_LABEL_STRIP)
    # Anchored where the compound last sat, not reset to the origin.
    assert (r.x, r.y) == (90, 90)
    assert model.validate() == []


def test_nested_compound_bounds_compose():
    model = GraphModel()
    a = model.add_node(bounds=Rect(10, 10, 30, 20))
    inner = model.make_compound(model.root, [a])
    outer = model.make_compound(model.root, [inner])
    # inner: (0, 0, 50, 52); outer wraps it with another margin + strip.
    r = model.nodes[outer].bounds
    assert (r.x, r.y, r.w, r.h) == (-10, -10, 70, 84)
    assert_tight(model)


def test_membership_moves_preserve_relative_order():
    model = GraphModel()
    ids = [model.add_node() for _ in range(5)]
    comp = model.make_compound(model.root, [ids[3], ids[1]])
    child = model.graphs[model.nodes[comp].child_graph]
    assert child.nodes == [ids[1], ids[3]]
    assert model.graphs[model.root].nodes == [ids[0], ids[2], ids[4], comp]


def test_make_compound_rejects_foreign_and_duplicate_members():
    model = GraphModel()
    a = model.add_node()
    b = model.add_node()
    comp = model.make_compound(model.root, [a])
    with pytest.raises(ModelError):
        model.make_compound(model.nodes[comp].child_graph, [b])
    with pytest.raises(ModelError):
        model.make_compound(model.root, [b, b])
    with pytest.raises(ModelError):
        model.make_compound(model.root, [])


# ----------------------------------------------------------------------
# translate / resize / margins


def test_translate_moves_subtree_rigidly():
    model = GraphModel()
    a = model.add_node(bounds=Rect(0, 0, 10, 10))
    b = model.add_node(bounds=Rect(30, 0, 10, 10))
    comp = model.make_compound(model.root, [a, b])
    before = {n: model.nodes[n].bounds.copy() for n in (a, b, comp)}
    model.translate(comp, 7.5, -2.25)
    for n in (a, b, comp):
        assert model.nodes[n].bounds.x == before[n].x + 7.5
        assert model.nodes[n].bounds.y == before[n].y - 2.25
        assert model.nodes[n].bounds.w == before[n].w
    assert model.validate() == []


def test_translate_child_retightens_ancestors():
    model = GraphModel()
    a = model.add_node(bounds=Rect(0, 0, 10, 10))
    comp = model.make_compound(model.root, [a])
    model.translate(a, 100, 0)
    r = model.nodes[comp].bounds
    assert (r.x, r.y, r.w, r.h) == (90, -10, 30, 42)


def test_translate_rejects_non_finite():
    model = GraphModel()
    a = model.add_node()
    with pytest.raises(ModelError):
        model.translate(a, math.nan, 0)


def test_resize_leaf_and_reject_compound():
    model = GraphModel()
    a = model.add_node()
    comp = model.make_compound(model.root, [a])
    model.resize(a, 100, 5)
    assert (model.nodes[a].bounds.w, model.nodes[a].bounds.h) == (100, 5)
    assert_tight(model)
    with pytest.raises(ModelError):
        model.resize(comp, 10, 10)
    with pytest.raises(ModelError):
        model.resize(a, -1, 10)


def test_set_margins_retightens():
    model = GraphModel()
    a = model.add_node(bounds=Rect(0, 0, 10, 10))
    comp = model.make_compound(model.root, [a])
    child = model.nodes[comp].child_graph
    model.set_margins(child, margins=0.0, label_strip=0.0)
    r = model.nodes[comp].bounds
    assert (r.x, r.y, r.w, r.h) == (0, 0, 10, 10)
    with pytest.raises(ModelError):
        model.set_margins(child, margins=-1.0)


# ----------------------------------------------------------------------
# removal


def test_remove_edge():
    model = GraphModel()
    a = model.add_node()
    b = model.add_node()
    e = model.add_edge(a, b)
    model.remove(e)
    assert e not in model.edges
    assert model.validate() == []


def test_remove_node_cascades_to_subtree_and_edges():
    model = GraphModel()
    a = model.add_node(bounds=Rect(0, 0, 10, 10))
    b = model.add_node(bounds=Rect(50, 0, 10, 10))
    c = model.add_node(bounds=Rect(0, 50, 10, 10))
    comp = model.make_compound(model.root, [a, b])
    model.add_edge(a, c)
    model.add_edge(c, c)
    keep = model.add_edge(c, c)
    model.remove(comp)
    assert set(model.nodes) == {c}
    assert set(model.edges) == {keep, keep - 1}
    assert len(model.graphs) == 1
    assert model.validate() == []


def test_remove_rejects_graph_ids_and_unknown_ids():
    model = GraphModel()
    a = model.add_node()
    comp = model.make_compound(model.root, [a])
    child = model.nodes[comp].child_graph
    with pytest.raises(ModelError, match="removed with its compound"):
        model.remove(child)
    with pytest.raises(ModelError, match="unknown object"):
        model.remove(12345)


def test_remove_highlighted_object_clears_highlight():
    model = GraphModel()
    a = model.add_node()
    model.highlight.add(a)
    model.remove(a)
    assert model.highlight == set()


# ----------------------------------------------------------------------
# validate() catching corruption


def test_validate_detects_double_listing():
    model = GraphModel()
    a = model.add_node()
    comp = model.make_compound(model.root, [a])
    model.graphs[model.root].nodes.append(a)
    rules = {v.rule for v in model.validate()}
    assert "membership" in rules


def test_validate_detects_broken_backpointer():
    model = GraphModel()
    a = model.add_node()
    comp = model.make_compound(model.root, [a])
    model.graphs[model.nodes[comp].child_graph].parent_node = a
    rules = {v.rule for v in model.validate()}
    assert "nesting" in rules


def test_validate_detects_orphan_graph():
    model = GraphModel()
    a = model.add_node()
    comp = model.make_compound(model.root, [a])
    model.nodes[comp].child_graph = None
    violations = model.validate()
    assert any(v.rule == "nesting" for v in violations)


def test_validate_detects_stale_compound_bounds():
    model = GraphModel()
    a = model.add_node(bounds=Rect(0, 0, 10, 10))
    comp = model.make_compound(model.root, [a])
    model.nodes[comp].bounds.w += 1
    violations = model.validate()
    assert any(v.rule == "tight-bound" and v.object_id == comp for v in violations)


def test_validate_detects_bad_geometry_and_style():
    model = GraphModel()
    a = model.add_node()
    model.nodes[a].bounds.x = math.inf
    model.nodes[a].style.width = 0.0
    rules = {v.rule for v in model.validate()}
    assert {"geometry", "style"} <= rules


def test_validate_detects_dangling_edge_and_highlight():
    model = GraphModel()
    a = model.add_node()
    e = model.add_edge(a, a)
    model.edges[e].target = 999
    model.highlight.add(777)
    rules = {v.rule for v in model.validate()}
    assert {"edge", "highlight"} <= rules


def test_violation_as_dict():
    model = GraphModel()
    a = model.add_node()
    model.nodes[a].style.width = -1
    (v,) = model.validate()
    assert v.as_dict() == {"object": a, "rule": "style", "message": v.message}


# ----------------------------------------------------------------------
# randomized operation sequences


def test_random_operation_sequences_keep_model_valid():
    rng = random.Random(99)
    for trial in range(30):
        model = GraphModel()
        for _ in range(60):
            roll = rng.random()
            node_ids = sorted(model.nodes)
            if roll < 0.35 or not node_ids:
                gid = rng.choice(sorted(model.graphs))
                model.add_node(gid, bounds=random_rect(rng))
            elif roll < 0.55:
                model.add_edge(rng.choice(node_ids), rng.choice(node_ids))
            elif roll < 0.7:
                gid = rng.choice(sorted(model.graphs))
                members = list(model.graphs[gid].nodes)
                if members:
                    model.make_compound(gid, rng.sample(members, rng.randint(1, len(members))))
            elif roll < 0.85:
                target = rng.choice(node_ids)
                if model.nodes[target].is_compound:
                    model.translate(target, rng.uniform(-40, 40), rng.uniform(-40, 40))
                else:
                    model.resize(target, rng.uniform(5, 60), rng.uniform(5, 60))
            else:
                pool = node_ids + sorted(model.edges)
                model.remove(rng.choice(pool))
            assert model.validate() == [], f"trial {trial} broke the model"
        assert_tight(model)


def test_models_equal_tolerance_and_mismatch():
    rng = random.Random(3)
    a = random_compound_model(rng, nodes=12, edges=8, groups=3)
    rng2 = random.Random(3)
    b = random_compound_model(rng2, nodes=12, edges=8, groups=3)
    assert models_equal(a, b)
    b.nodes[sorted(b.nodes)[0]].bounds.x += 5e-10
    assert models_equal(a, b)
    b.nodes[sorted(b.nodes)[0]].bounds.x += 1.0
    assert not models_equal(a, b)
