"""Compound graph model, layout algorithms, GraphML interchange, SVG export."""

from .geometry import Rect, crossing_count, segments_cross
from .graphml import GraphMLError, parse_graphml, write_graphml
from .layout.base import (
    LayoutAlgorithm,
    LayoutError,
    LayoutOptions,
    LayoutReport,
    build_l_structure,
    run_layout,
    transfer_geometry,
)
from .model import (
    ArrowStyle,
    Edge,
    Graph,
    GraphModel,
    LineStyle,
    ModelError,
    Node,
    NodeShape,
    RenderStyle,
    Violation,
    models_equal,
)
from .svg import render_svg

__version__ = "0.1.0"

__all__ = [
    "ArrowStyle",
    "Edge",
    "Graph",
    "GraphMLError",
    "GraphModel",
    "LayoutAlgorithm",
    "LayoutError",
    "LayoutOptions",
    "LayoutReport",
    "LineStyle",
    "ModelError",
    "Node",
    "NodeShape",
    "Rect",
    "RenderStyle",
    "Violation",
    "build_l_structure",
    "crossing_count",
    "models_equal",
    "parse_graphml",
    "render_svg",
    "run_layout",
    "segments_cross",
    "transfer_geometry",
    "write_graphml",
]
