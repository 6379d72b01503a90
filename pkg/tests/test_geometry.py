"""Geometry primitives, cross-checked against an independent crossing oracle.

The oracle decides segment intersection by orientation tests (signed areas)
instead of the parametric form used by the package, so agreement between the
two is meaningful.
"""

from __future__ import annotations

import math
import random

import pytest

from conftest import Point, Segment, oracle_count, oracle_cross
from nestgraph.geometry import Rect, boundary_gap, crossing_count, rect_union, segments_cross


def _random_segment(rng: random.Random) -> Segment:
    def pt() -> Point:
        return (round(rng.uniform(-50, 50), 2), round(rng.uniform(-50, 50), 2))

    a = pt()
    b = pt()
    while b == a:
        b = pt()
    return (a, b)


# ----------------------------------------------------------------------
# segments_cross and crossing_count


def test_plain_crossing():
    assert segments_cross(((0, 0), (10, 10)), ((0, 10), (10, 0)))
    assert oracle_cross(((0, 0), (10, 10)), ((0, 10), (10, 0)))


def test_parallel_segments_do_not_cross():
    assert not segments_cross(((0, 0), (10, 0)), ((0, 5), (10, 5)))


def test_collinear_overlap_is_not_a_crossing():
    assert not segments_cross(((0, 0), (10, 0)), ((5, 0), (15, 0)))


def test_touching_at_an_endpoint_is_not_a_crossing():
    # t = 0 on the first segment: boundary contact, not a proper crossing.
    assert not segments_cross(((0, 0), (10, 0)), ((0, 0), (5, 10)))
    assert not segments_cross(((0, 0), (10, 0)), ((5, 0), (5, 10)))


def test_t_interior_but_u_boundary():
    # The second segment only starts on the first one's interior.
    assert not segments_cross(((0, 0), (10, 0)), ((5, 0), (8, 10)))


def test_shared_endpoint_pairs_are_skipped_in_count():
    star = [((0.0, 0.0), (10.0, 0.0)), ((0.0, 0.0), (0.0, 10.0)), ((0.0, 0.0), (-10.0, -10.0))]
    assert crossing_count(star) == 0


def test_k4_straight_line_drawing_has_one_crossing():
    corners = [(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)]
    segments = [
        (corners[i], corners[j]) for i in range(4) for j in range(i + 1, 4)
    ]
    # Only the two diagonals cross.
    assert crossing_count(segments) == 1
    assert oracle_count(segments) == 1


def test_pentagon_cycle_has_no_crossings():
    pts = [
        (math.cos(2 * math.pi * k / 5), math.sin(2 * math.pi * k / 5)) for k in range(5)
    ]
    cycle = [(pts[k], pts[(k + 1) % 5]) for k in range(5)]
    assert crossing_count(cycle) == 0


def test_crossing_count_matches_oracle_on_random_sets():
    rng = random.Random(7)
    for _ in range(300):
        segments = [_random_segment(rng) for _ in range(rng.randint(2, 12))]
        assert crossing_count(segments) == oracle_count(segments)


# ----------------------------------------------------------------------
# rectangles


def test_rect_accessors():
    r = Rect(2, 3, 10, 20)
    assert (r.right, r.bottom) == (12, 23)
    assert r.center() == (7, 13)
    assert math.isclose(r.diagonal(), math.hypot(10, 20))


def test_rect_union():
    u = rect_union([Rect(0, 0, 10, 10), Rect(20, 5, 10, 10)])
    assert (u.x, u.y, u.w, u.h) == (0, 0, 30, 15)


def test_rect_intersects_is_strict():
    assert Rect(0, 0, 10, 10).intersects(Rect(5, 5, 10, 10))
    # Sharing only an edge does not count as overlap.
    assert not Rect(0, 0, 10, 10).intersects(Rect(10, 0, 10, 10))


def test_rect_contains_point():
    r = Rect(0, 0, 10, 10)
    assert r.contains_point(5, 5)
    assert r.contains_point(0, 0)
    assert not r.contains_point(11, 5)


def test_boundary_gap_horizontal():
    gap, ux, uy, dist = boundary_gap(Rect(0, 0, 10, 10), Rect(40, 0, 10, 10))
    assert math.isclose(gap, 30.0)
    assert (ux, uy) == (1.0, 0.0)
    assert math.isclose(dist, 40.0)


def test_boundary_gap_diagonal_is_symmetric():
    a, b = Rect(0, 0, 10, 20), Rect(50, 60, 30, 10)
    gap_ab = boundary_gap(a, b)[0]
    gap_ba = boundary_gap(b, a)[0]
    assert math.isclose(gap_ab, gap_ba)


def test_boundary_gap_clamps_to_zero_when_overlapping():
    gap, _, _, _ = boundary_gap(Rect(0, 0, 10, 10), Rect(5, 0, 10, 10))
    assert gap == 0.0


def test_boundary_gap_rejects_coincident_centers():
    with pytest.raises(ValueError):
        boundary_gap(Rect(0, 0, 10, 10), Rect(2, 2, 6, 6))
