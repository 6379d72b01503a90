"""Static SVG export of a model.

Output is deterministic: children are drawn inside (above) their parents,
objects iterate by id, and coordinates are formatted with at most six
decimals.  Each node contributes one shape, each edge one line, and each
compound one label text in its bottom strip; arrow markers live in defs.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .geometry import Rect, rect_union
from .model import ArrowStyle, GraphModel, LineStyle, NodeShape

VIEWBOX_PADDING = 20.0
ARROW_SIZE = 8.0
DEFAULT_HIGHLIGHT = "#ff0000"


def _fmt(value: float) -> str:
    text = f"{value:.6f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def render_svg(model: GraphModel, scale: float = 1.0, highlight_color: str = DEFAULT_HIGHLIGHT) -> str:
    """Render the model to a standalone SVG document string."""
    if scale <= 0 or not math.isfinite(scale):
        raise ValueError("scale must be a positive finite number")
    rects = [n.bounds for n in model.nodes.values()]
    if rects:
        box = rect_union(rects)
    else:
        box = Rect(0.0, 0.0, 0.0, 0.0)
    pad = VIEWBOX_PADDING
    view = (
        (box.x - pad) * scale,
        (box.y - pad) * scale,
        (box.w + 2 * pad) * scale,
        (box.h + 2 * pad) * scale,
    )
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_fmt(view[0])} {_fmt(view[1])} {_fmt(view[2])} {_fmt(view[3])}">',
    ]
    lines += _marker_defs(model)
    _render_graph(model, model.root, scale, highlight_color, lines)
    for edge_id in sorted(model.edges):
        lines.append(_edge_element(model, edge_id, scale, highlight_color))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _marker_defs(model: GraphModel) -> list[str]:
    colors = set()
    for edge in model.edges.values():
        if edge.style.arrow is not ArrowStyle.NONE:
            colors.add(edge.style.border_color)
            if edge.id in model.highlight:
                colors.add(DEFAULT_HIGHLIGHT)
    if not colors:
        return []
    out = ["  <defs>"]
    for color in sorted(colors):
        name = f"arrow-{color.lstrip('#')}"
        out.append(
            f'    <marker id="{name}" markerWidth="{_fmt(ARROW_SIZE)}" '
            f'markerHeight="{_fmt(ARROW_SIZE)}" refX="{_fmt(ARROW_SIZE - 1)}" '
            f'refY="{_fmt(ARROW_SIZE / 2)}" orient="auto" markerUnits="userSpaceOnUse">'
            f'<path d="M0,0 L{_fmt(ARROW_SIZE)},{_fmt(ARROW_SIZE / 2)} L0,{_fmt(ARROW_SIZE)} z" '
            f'fill="{color}"/></marker>'
        )
    out.append("  </defs>")
    return out


def _render_graph(
    model: GraphModel, graph_id: int, scale: float, highlight_color: str, lines: list[str]
) -> None:
    graph = model.graphs[graph_id]
    for node_id in sorted(graph.nodes):
        node = model.nodes[node_id]
        stroke = highlight_color if node.id in model.highlight else node.style.border_color
        b = node.bounds
        x, y = b.x * scale, b.y * scale
        w, h = b.w * scale, b.h * scale
        dashes = ' stroke-dasharray="6 3"' if node.style.line_style is LineStyle.DASHED else ""
        common = (
            f'fill="{node.style.fill_color}" stroke="{stroke}" '
            f'stroke-width="{_fmt(node.style.width)}"{dashes}'
        )
        if node.shape is NodeShape.ELLIPSE:
            lines.append(
                f'  <ellipse cx="{_fmt(x + w / 2)}" cy="{_fmt(y + h / 2)}" '
                f'rx="{_fmt(w / 2)}" ry="{_fmt(h / 2)}" {common}/>'
            )
        elif node.shape is NodeShape.TRIANGLE:
            points = f"{_fmt(x + w / 2)},{_fmt(y)} {_fmt(x + w)},{_fmt(y + h)} {_fmt(x)},{_fmt(y + h)}"
            lines.append(f'  <polygon points="{points}" {common}/>')
        else:
            lines.append(
                f'  <rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" height="{_fmt(h)}" {common}/>'
            )
        if node.child_graph is not None:
            strip = model.graphs[node.child_graph].label_strip * scale
            lines.append(
                f'  <text x="{_fmt(x + w / 2)}" y="{_fmt(y + h - strip / 4)}" '
                f'text-anchor="middle" font-size="{_fmt(max(strip - 2 * scale, 1.0))}" '
                f'fill="{stroke}">{escape(node.label)}</text>'
            )
            _render_graph(model, node.child_graph, scale, highlight_color, lines)


def _edge_element(model: GraphModel, edge_id: int, scale: float, highlight_color: str) -> str:
    edge = model.edges[edge_id]
    highlighted = edge.id in model.highlight
    color = highlight_color if highlighted else edge.style.border_color
    x1, y1 = model.nodes[edge.source].bounds.center()
    x2, y2 = model.nodes[edge.target].bounds.center()
    dashes = ' stroke-dasharray="6 3"' if edge.style.line_style is LineStyle.DASHED else ""
    markers = ""
    marker_color = highlight_color if highlighted else edge.style.border_color
    name = f"arrow-{marker_color.lstrip('#')}"
    if edge.style.arrow in (ArrowStyle.TARGET, ArrowStyle.BOTH):
        markers += f' marker-end="url(#{name})"'
    if edge.style.arrow in (ArrowStyle.SOURCE, ArrowStyle.BOTH):
        markers += f' marker-start="url(#{name})"'
    return (
        f'  <line x1="{_fmt(x1 * scale)}" y1="{_fmt(y1 * scale)}" '
        f'x2="{_fmt(x2 * scale)}" y2="{_fmt(y2 * scale)}" stroke="{color}" '
        f'stroke-width="{_fmt(edge.style.width)}"{dashes}{markers}/>'
    )
