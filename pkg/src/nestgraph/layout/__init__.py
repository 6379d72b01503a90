"""Layout algorithms and the mirror structure they operate on."""

from .base import (
    LayoutAlgorithm,
    LayoutError,
    LayoutOptions,
    LayoutReport,
    RunStats,
    build_l_structure,
    run_layout,
    transfer_geometry,
)

__all__ = [
    "LayoutAlgorithm",
    "LayoutError",
    "LayoutOptions",
    "LayoutReport",
    "RunStats",
    "build_l_structure",
    "run_layout",
    "transfer_geometry",
]
