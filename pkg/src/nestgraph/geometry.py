"""Plane geometry primitives shared by the model, the layouts, and the renderer.

Everything here is pure: rectangles, vectors, rectangle clipping, and
straight-line segment crossing counts.  Coordinates grow rightward (x)
and downward (y), matching screen conventions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

COINCIDENT_EPS = 1e-9


@dataclass
class Rect:
    """Axis-aligned rectangle anchored at its top-left corner."""

    x: float = 0.0
    y: float = 0.0
    w: float = 0.0
    h: float = 0.0

    @property
    def right(self) -> float:
        return self.x + self.w

    @property
    def bottom(self) -> float:
        return self.y + self.h

    def center(self) -> tuple[float, float]:
        return self.x + self.w / 2.0, self.y + self.h / 2.0

    def diagonal(self) -> float:
        return math.hypot(self.w, self.h)

    def copy(self) -> Rect:
        return Rect(self.x, self.y, self.w, self.h)

    def move(self, dx: float, dy: float) -> None:
        self.x += dx
        self.y += dy

    def set_center(self, cx: float, cy: float) -> None:
        self.x = cx - self.w / 2.0
        self.y = cy - self.h / 2.0

    def contains_point(self, px: float, py: float) -> bool:
        return self.x <= px <= self.right and self.y <= py <= self.bottom

    def intersects(self, other: Rect) -> bool:
        """Strict interior overlap; rectangles that merely touch do not count."""
        return (
            self.x < other.right
            and other.x < self.right
            and self.y < other.bottom
            and other.y < self.bottom
        )


def rect_union(rects: list[Rect]) -> Rect:
    """Smallest rectangle covering every rectangle in a non-empty list."""
    if not rects:
        raise ValueError("rect_union of no rectangles")
    x0 = min(r.x for r in rects)
    y0 = min(r.y for r in rects)
    x1 = max(r.right for r in rects)
    y1 = max(r.bottom for r in rects)
    return Rect(x0, y0, x1 - x0, y1 - y0)


def _boundary_travel(rect: Rect, ux: float, uy: float) -> float:
    """Distance from the rect center to its boundary along unit direction (ux, uy)."""
    tx = math.inf if ux == 0.0 else (rect.w / 2.0) / abs(ux)
    ty = math.inf if uy == 0.0 else (rect.h / 2.0) / abs(uy)
    t = min(tx, ty)
    return 0.0 if t is math.inf else t


def boundary_gap(a: Rect, b: Rect) -> tuple[float, float, float, float]:
    """Gap between two rect boundaries along the line joining their centers.

    Returns (gap, ux, uy, center_distance) where (ux, uy) is the unit vector
    from a's center toward b's center.  The gap is clamped at zero for
    overlapping rectangles.  Raises ValueError when the centers coincide,
    since no direction exists; callers handle that case explicitly.
    """
    ax, ay = a.center()
    bx, by = b.center()
    dx, dy = bx - ax, by - ay
    dist = math.hypot(dx, dy)
    if dist < COINCIDENT_EPS:
        raise ValueError("coincident centers")
    ux, uy = dx / dist, dy / dist
    gap = dist - _boundary_travel(a, ux, uy) - _boundary_travel(b, ux, uy)
    return max(gap, 0.0), ux, uy, dist


Point = tuple[float, float]
Segment = tuple[Point, Point]


def segments_cross(s1: Segment, s2: Segment) -> bool:
    """True when two segments properly intersect (one interior point each).

    Solves the parametric line equations; parallel, collinear, and
    endpoint-touching configurations are not proper crossings.
    """
    (x1, y1), (x2, y2) = s1
    (x3, y3), (x4, y4) = s2
    rx, ry = x2 - x1, y2 - y1
    sx, sy = x4 - x3, y4 - y3
    denom = rx * sy - ry * sx
    if denom == 0.0:
        return False
    qx, qy = x3 - x1, y3 - y1
    t = (qx * sy - qy * sx) / denom
    u = (qx * ry - qy * rx) / denom
    return 0.0 < t < 1.0 and 0.0 < u < 1.0


def crossing_count(segments: list[Segment]) -> int:
    """Number of properly crossing segment pairs, ignoring pairs that share an endpoint."""
    total = 0
    for i in range(len(segments)):
        a = segments[i]
        for j in range(i + 1, len(segments)):
            b = segments[j]
            if a[0] == b[0] or a[0] == b[1] or a[1] == b[0] or a[1] == b[1]:
                continue
            if segments_cross(a, b):
                total += 1
    return total
