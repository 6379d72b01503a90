"""Static SVG export: element counts, geometry fidelity, determinism."""

from __future__ import annotations

import random

import pytest

from conftest import random_compound_model
from nestgraph import GraphModel, Rect
from nestgraph.model import ArrowStyle, LineStyle, NodeShape
from nestgraph.svg import render_svg


def count(svg: str, token: str) -> int:
    return svg.count(token)


def test_empty_model_renders_bare_canvas():
    svg = render_svg(GraphModel())
    assert svg.startswith('<?xml version="1.0" encoding="UTF-8"?>\n<svg ')
    assert 'viewBox="-20 -20 40 40"' in svg
    assert svg.endswith("</svg>\n")
    for token in ("<rect", "<ellipse", "<polygon", "<line", "<text", "<defs"):
        assert token not in svg


def test_single_rectangle_is_transcribed():
    model = GraphModel()
    model.add_node(bounds=Rect(10, 10, 40, 20))
    svg = render_svg(model)
    assert count(svg, "<rect") == 1
    assert '<rect x="10" y="10" width="40" height="20"' in svg
    assert 'viewBox="-10 -10 80 60"' in svg


def test_scale_multiplies_every_coordinate():
    model = GraphModel()
    model.add_node(bounds=Rect(10, 10, 40, 20))
    svg = render_svg(model, scale=2.0)
    assert '<rect x="20" y="20" width="80" height="40"' in svg
    assert 'viewBox="-20 -20 160 120"' in svg


def test_one_element_per_object():
    model = GraphModel()
    rect_id = model.add_node(bounds=Rect(0, 0, 30, 30))
    ellipse = model.add_node(bounds=Rect(50, 0, 30, 30), shape=NodeShape.ELLIPSE)
    triangle = model.add_node(bounds=Rect(100, 0, 30, 30), shape=NodeShape.TRIANGLE)
    model.add_edge(rect_id, ellipse)
    model.add_edge(ellipse, triangle)
    model.make_compound(0, [rect_id, ellipse], label="pair")
    svg = render_svg(model)
    assert count(svg, "<rect") == 2  # plain rectangle + the compound box
    assert count(svg, "<ellipse") == 1
    assert count(svg, "<polygon") == 1
    assert count(svg, "<line x1=") == 2
    assert count(svg, "<text") == 1  # compound label only; leaves draw no text
    assert ">pair</text>" in svg


def test_compound_box_includes_label_strip():
    model = GraphModel()
    a = model.add_node(bounds=Rect(0, 0, 30, 30))
    b = model.add_node(bounds=Rect(60, 20, 30, 40))
    comp = model.make_compound(0, [a, b], label="box")
    deepest_bottom = max(model.nodes[a].bounds.bottom, model.nodes[b].bounds.bottom)
    bounds = model.nodes[comp].bounds
    svg = render_svg(model)
    assert f'<rect x="{bounds.x:g}" y="{bounds.y:g}" width="{bounds.w:g}" height="{bounds.h:g}"' in svg
    assert bounds.bottom == deepest_bottom + 10.0 + 12.0


def test_children_are_drawn_above_their_compound():
    model = GraphModel()
    a = model.add_node(bounds=Rect(0, 0, 30, 30))
    comp = model.make_compound(0, [a])
    comp_w = model.nodes[comp].bounds.w
    lines = render_svg(model).splitlines()
    compound_line = next(i for i, s in enumerate(lines) if f'width="{comp_w:g}"' in s)
    child_line = next(i for i, s in enumerate(lines) if 'width="30"' in s)
    assert compound_line < child_line


def test_coordinates_use_six_trimmed_decimals():
    model = GraphModel()
    model.add_node(bounds=Rect(1 / 3, -1e-7, 40, 40))
    svg = render_svg(model)
    assert 'x="0.333333"' in svg
    assert 'y="0"' in svg
    assert ".0000" not in svg


def test_edges_connect_node_centers():
    model = GraphModel()
    a = model.add_node(bounds=Rect(0, 0, 40, 40))
    b = model.add_node(bounds=Rect(100, 0, 40, 40))
    model.add_edge(a, b)
    svg = render_svg(model, scale=2.0)
    assert '<line x1="40" y1="40" x2="240" y2="40"' in svg


def test_arrows_render_as_markers():
    model = GraphModel()
    a = model.add_node(bounds=Rect(0, 0, 40, 40))
    b = model.add_node(bounds=Rect(100, 0, 40, 40))
    edge = model.add_edge(a, b)
    model.edges[edge].style.arrow = ArrowStyle.BOTH
    svg = render_svg(model)
    assert count(svg, "<defs>") == 1
    assert 'markerWidth="8"' in svg and 'refX="7"' in svg and 'refY="4"' in svg
    assert 'marker-end="url(#arrow-000000)"' in svg
    assert 'marker-start="url(#arrow-000000)"' in svg


def test_highlight_replaces_stroke_color():
    model = GraphModel()
    a = model.add_node(bounds=Rect(0, 0, 40, 40))
    b = model.add_node(bounds=Rect(100, 0, 40, 40))
    edge = model.add_edge(a, b)
    model.edges[edge].style.arrow = ArrowStyle.TARGET
    model.highlight.update({a, edge})
    svg = render_svg(model)
    assert count(svg, 'stroke="#ff0000"') == 2  # node a + the edge
    assert 'marker-end="url(#arrow-ff0000)"' in svg
    plain = render_svg(model, highlight_color="#00ff00")
    assert count(plain, 'stroke="#00ff00"') == 2


def test_dashed_objects_get_a_dasharray():
    model = GraphModel()
    a = model.add_node(bounds=Rect(0, 0, 40, 40))
    b = model.add_node(bounds=Rect(100, 0, 40, 40))
    edge = model.add_edge(a, b)
    model.nodes[a].style.line_style = LineStyle.DASHED
    model.edges[edge].style.line_style = LineStyle.DASHED
    svg = render_svg(model)
    assert count(svg, 'stroke-dasharray="6 3"') == 2


def test_rendering_is_deterministic():
    rng = random.Random(31)
    model = random_compound_model(rng, nodes=25, edges=30, groups=4)
    first = render_svg(model, scale=1.5)
    assert render_svg(model, scale=1.5) == first


@pytest.mark.parametrize("scale", [0.0, -2.0, float("inf"), float("nan")])
def test_bad_scale_is_rejected(scale):
    with pytest.raises(ValueError, match="scale must be a positive finite number"):
        render_svg(GraphModel(), scale=scale)
