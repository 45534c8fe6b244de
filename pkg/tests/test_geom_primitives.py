"""Primitive shapes, angles, and intersection points."""
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conecover.geom import (Arc, ConvexPolygon, DegenerateOverlap, Disk,
                            HalfPlane, Point2, Segment)
from conecover.geom.primitives import (circle_circle_points,
                                       circle_line_points, dist, wrap_angle)

TAU = 2.0 * math.pi


def test_wrap_angle_range_and_identity():
    for k in (-9.0, -math.pi, -1e-12, 0.0, 1.0, math.pi, 7.5):
        w = wrap_angle(k)
        assert -math.pi < w <= math.pi
        assert math.isclose(math.cos(w), math.cos(k), abs_tol=1e-12)
        assert math.isclose(math.sin(w), math.sin(k), abs_tol=1e-12)


def test_disk_contains():
    d = Disk(Point2(1.0, 2.0), 0.5)
    assert d.contains(Point2(1.2, 2.1))
    assert d.contains(Point2(1.5, 2.0))  # on the rim
    assert not d.contains(Point2(1.6, 2.0))
    assert d.sign(Point2(1.0, 2.0)) < 0 < d.sign(Point2(2.0, 2.0))


def test_halfplane_orientation():
    hp = HalfPlane.from_point_normal(Point2(0.0, 1.0), Point2(0.0, 1.0))
    assert hp.contains(Point2(5.0, 0.5))
    assert hp.contains(Point2(0.0, 1.0))
    assert not hp.contains(Point2(0.0, 1.5))


def test_polygon_basics():
    p = ConvexPolygon(((0, 0), (2, 0), (2, 1), (0, 1)))
    assert p.area() == pytest.approx(2.0)
    assert p.perimeter() == pytest.approx(6.0)
    assert p.contains(Point2(1.0, 0.5))
    assert p.contains(Point2(0.0, 0.0))
    assert not p.contains(Point2(2.1, 0.5))
    inside = p.project(Point2(1.0, 0.5))
    assert inside == Point2(1.0, 0.5)
    out = p.project(Point2(3.0, 0.5))
    assert out == pytest.approx((2.0, 0.5))
    corner = p.project(Point2(3.0, 2.0))
    assert corner == pytest.approx((2.0, 1.0))


def test_polygon_rejects_bad_input():
    with pytest.raises(ValueError):
        ConvexPolygon(((0, 0), (1, 0)))
    with pytest.raises(ValueError):
        # clockwise
        ConvexPolygon(((0, 0), (0, 1), (1, 1), (1, 0)))
    with pytest.raises(ValueError):
        # reflex vertex
        ConvexPolygon(((0, 0), (2, 0), (1, 0.1), (2, 2), (0, 2)))


def test_arc_endpoints_and_length():
    a = Arc(Point2(0, 0), 2.0, 0.0, math.pi / 2)
    assert a.start == pytest.approx((2.0, 0.0))
    assert a.end == pytest.approx((0.0, 2.0))
    assert a.length() == pytest.approx(math.pi)
    assert a.midpoint() == pytest.approx((math.sqrt(2), math.sqrt(2)))
    r = a.reversed_()
    assert r.start == pytest.approx((0.0, 2.0))
    assert r.end == pytest.approx((2.0, 0.0))
    assert r.sweep == pytest.approx(-math.pi / 2)


def test_arc_local_angle_wraps():
    # arc crossing the +-pi seam
    a = Arc(Point2(0, 0), 1.0, 3.0, 1.0)  # covers [3.0, 4.0] i.e. wraps
    assert a.local_angle(3.5) == pytest.approx(0.5)
    assert a.local_angle(4.0 - TAU) == pytest.approx(1.0)
    assert a.local_angle(2.0) is None


def test_arc_split():
    a = Arc(Point2(0, 0), 1.0, 0.0, math.pi)
    parts = a.split_at_angles([math.pi / 3, 2 * math.pi / 3])
    assert len(parts) == 3
    assert parts[0].start == pytest.approx((1.0, 0.0))
    assert parts[-1].end == pytest.approx((-1.0, 0.0))
    assert sum(p.length() for p in parts) == pytest.approx(a.length())
    # cuts outside the span are ignored
    assert len(a.split_at_angles([-1.0])) == 1


def test_segment_split():
    s = Segment(Point2(0, 0), Point2(4, 0))
    parts = s.split_at_params([0.25, 0.5])
    assert len(parts) == 3
    assert parts[1].a == pytest.approx((1.0, 0.0))
    assert parts[1].b == pytest.approx((2.0, 0.0))


def test_circle_circle_two_points():
    pts = circle_circle_points(Point2(0, 0), 1.0, Point2(1, 0), 1.0)
    assert len(pts) == 2
    for p in pts:
        assert dist(p, Point2(0, 0)) == pytest.approx(1.0, abs=1e-12)
        assert dist(p, Point2(1, 0)) == pytest.approx(1.0, abs=1e-12)
    assert {round(p[1], 6) for p in pts} == {0.866025, -0.866025}


def test_circle_circle_swap_symmetric():
    a = circle_circle_points(Point2(0.3, -0.2), 1.7, Point2(1.1, 0.4), 0.9)
    b = circle_circle_points(Point2(1.1, 0.4), 0.9, Point2(0.3, -0.2), 1.7)
    assert sorted(a) == sorted(b)


def test_circle_circle_tangent_and_disjoint():
    assert circle_circle_points(Point2(0, 0), 1.0, Point2(3, 0), 1.0) == []
    # internal containment, no touch
    assert circle_circle_points(Point2(0, 0), 2.0, Point2(0.3, 0), 0.5) == []
    pts = circle_circle_points(Point2(0, 0), 1.0, Point2(2, 0), 1.0)
    assert len(pts) == 1
    assert pts[0] == pytest.approx((1.0, 0.0), abs=1e-6)


def test_circle_circle_coincident_raises():
    with pytest.raises(DegenerateOverlap):
        circle_circle_points(Point2(0, 0), 1.0, Point2(0, 0), 1.0)


def test_circle_circle_huge_radius_conditioning():
    # a nearly-straight cutting circle: points must still sit on both
    # circles to sub-nanometer absolute accuracy
    big_c = Point2(1e5, 3.0)
    big_r = 1e5 - 0.25
    pts = circle_circle_points(big_c, big_r, Point2(0.0, 3.0), 0.8)
    assert len(pts) == 2
    for p in pts:
        assert abs(dist(p, Point2(0.0, 3.0)) - 0.8) < 1e-10
        assert abs(dist(p, big_c) - big_r) < 1e-9


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 3),
       st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 3))
@settings(max_examples=200)
def test_circle_circle_points_lie_on_both(x1, y1, r1, x2, y2, r2):
    c1, c2 = Point2(x1, y1), Point2(x2, y2)
    try:
        pts = circle_circle_points(c1, r1, c2, r2)
    except DegenerateOverlap:
        return
    # a collapsed tangency point is allowed the tangency snap tolerance
    tol = 1e-4 if len(pts) == 1 else 1e-9
    for p in pts:
        assert abs(dist(p, c1) - r1) < tol
        assert abs(dist(p, c2) - r2) < tol


def test_circle_line_points():
    hits = circle_line_points(Point2(0, 0), 1.0, Point2(-2, 0), Point2(1, 0))
    assert len(hits) == 2
    (s1, p1), (s2, p2) = sorted(hits)
    assert s1 == pytest.approx(1.0)
    assert tuple(p1) == pytest.approx((-1.0, 0.0))
    assert s2 == pytest.approx(3.0)
    assert tuple(p2) == pytest.approx((1.0, 0.0))
    assert circle_line_points(Point2(0, 5), 1.0, Point2(-2, 0),
                              Point2(1, 0)) == []
