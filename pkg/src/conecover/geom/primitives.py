"""Planar primitives for disk/polygon coverage geometry.

Coordinates are meters. Circular arcs use the parametrization
p(k) = center + r*(cos k, sin k); stored start angles live in (-pi, pi].
All shapes are immutable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional, Union

TOL = 1e-9          # absolute snapping tolerance, meters
ANG_TOL = 1e-12     # angular tolerance, radians
LEN_TOL = 1e-12     # pieces shorter than this are dropped as degenerate

TAU = 2.0 * math.pi


class DegenerateOverlap(ValueError):
    """Raised when two circles coincide within tolerance."""


class Point2(NamedTuple):
    x: float
    y: float


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    r = math.remainder(a, TAU)
    return math.pi if r <= -math.pi else r


def dist(p: Point2, q: Point2) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def dist2(p: Point2, q: Point2) -> float:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


def dot(p: Point2, q: Point2) -> float:
    return p[0] * q[0] + p[1] * q[1]


def cross(p: Point2, q: Point2) -> float:
    return p[0] * q[1] - p[1] * q[0]


def unit(p: Point2) -> Point2:
    n = math.hypot(p[0], p[1])
    if n == 0.0:
        raise ValueError("cannot normalize zero vector")
    return Point2(p[0] / n, p[1] / n)


def left_normal(t: Point2) -> Point2:
    """Rotate a vector by +90 degrees (interior side for our loops)."""
    return Point2(-t[1], t[0])


@dataclass(frozen=True, slots=True)
class Disk:
    center: Point2
    radius: float

    def __post_init__(self) -> None:
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError(f"disk radius must be positive, got {self.radius}")

    def sign(self, p: Point2) -> float:
        """Negative inside, zero on the circle, positive outside."""
        return dist(p, self.center) - self.radius

    def contains(self, p: Point2, tol: float = TOL) -> bool:
        return self.sign(p) <= tol


@dataclass(frozen=True, slots=True)
class HalfPlane:
    """Closed half-plane {q : normal . q <= offset}, normal unit length."""

    normal: Point2
    offset: float

    def __post_init__(self) -> None:
        n = math.hypot(self.normal[0], self.normal[1])
        if abs(n - 1.0) > 1e-12:
            raise ValueError("half-plane normal must be unit length")

    @staticmethod
    def from_point_normal(p: Point2, outward: Point2) -> "HalfPlane":
        n = unit(outward)
        return HalfPlane(n, dot(n, p))

    def sign(self, p: Point2) -> float:
        return dot(self.normal, p) - self.offset

    def contains(self, p: Point2, tol: float = TOL) -> bool:
        return self.sign(p) <= tol


@dataclass(frozen=True, slots=True)
class ConvexPolygon:
    """Strictly convex polygon, vertices counterclockwise."""

    vertices: tuple[Point2, ...]

    def __post_init__(self) -> None:
        v = self.vertices
        if len(v) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        n = len(v)
        for i in range(n):
            a, b, c = v[i], v[(i + 1) % n], v[(i + 2) % n]
            turn = cross(Point2(b[0] - a[0], b[1] - a[1]),
                         Point2(c[0] - b[0], c[1] - b[1]))
            if turn <= 1e-12:
                raise ValueError(
                    f"vertices must be strictly convex and counterclockwise "
                    f"(bad triple at index {i})")

    def edges(self) -> Iterator[tuple[Point2, Point2]]:
        v = self.vertices
        for i in range(len(v)):
            yield v[i], v[(i + 1) % len(v)]

    def halfplanes(self) -> list[HalfPlane]:
        """One closed half-plane per edge; their intersection is the polygon."""
        out = []
        for a, b in self.edges():
            t = unit(Point2(b[0] - a[0], b[1] - a[1]))
            outward = Point2(t[1], -t[0])  # right of an ccw edge is outside
            out.append(HalfPlane(outward, dot(outward, a)))
        return out

    def contains(self, p: Point2, tol: float = TOL) -> bool:
        return all(hp.sign(p) <= tol for hp in self.halfplanes())

    def area(self) -> float:
        v = self.vertices
        s = 0.0
        for i in range(len(v)):
            a, b = v[i], v[(i + 1) % len(v)]
            s += a[0] * b[1] - b[0] * a[1]
        return 0.5 * s

    def perimeter(self) -> float:
        return sum(dist(a, b) for a, b in self.edges())

    def bounding_box(self) -> tuple[float, float, float, float]:
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def project(self, p: Point2) -> Point2:
        """Closest point of the (closed) polygon to p; p itself if inside."""
        if self.contains(p, 0.0):
            return p
        best = None
        best_d2 = math.inf
        for a, b in self.edges():
            ab = Point2(b[0] - a[0], b[1] - a[1])
            t = dot(Point2(p[0] - a[0], p[1] - a[1]), ab) / dot(ab, ab)
            t = min(1.0, max(0.0, t))
            c = Point2(a[0] + t * ab[0], a[1] + t * ab[1])
            d2 = dist2(p, c)
            if d2 < best_d2:
                best_d2 = d2
                best = c
        return best


# ---------------------------------------------------------------------------
# boundary pieces

@dataclass(frozen=True, slots=True)
class Arc:
    """Circular arc from angle k_start through a signed sweep.

    sweep > 0 is counterclockwise. |sweep| is in (0, 2*pi]; a full circle
    is sweep = +-2*pi. k_end and orientation are derived.
    """

    center: Point2
    radius: float
    k_start: float
    sweep: float

    def __post_init__(self) -> None:
        if not (self.radius > 0.0):
            raise ValueError("arc radius must be positive")
        if not (0.0 < abs(self.sweep) <= TAU + ANG_TOL):
            raise ValueError(f"arc sweep out of range: {self.sweep}")

    @property
    def k_end(self) -> float:
        return wrap_angle(self.k_start + self.sweep)

    @property
    def ccw(self) -> bool:
        return self.sweep > 0.0

    def point_at_angle(self, k: float) -> Point2:
        return Point2(self.center[0] + self.radius * math.cos(k),
                      self.center[1] + self.radius * math.sin(k))

    def point_at(self, t: float) -> Point2:
        return self.point_at_angle(self.k_start + t * self.sweep)

    def tangent_at(self, t: float) -> Point2:
        k = self.k_start + t * self.sweep
        s = 1.0 if self.ccw else -1.0
        return Point2(-s * math.sin(k), s * math.cos(k))

    @property
    def start(self) -> Point2:
        return self.point_at_angle(self.k_start)

    @property
    def end(self) -> Point2:
        return self.point_at_angle(self.k_start + self.sweep)

    def midpoint(self) -> Point2:
        return self.point_at(0.5)

    def length(self) -> float:
        return self.radius * abs(self.sweep)

    def reversed_(self) -> "Arc":
        return Arc(self.center, self.radius,
                   wrap_angle(self.k_start + self.sweep), -self.sweep)

    def local_angle(self, k: float) -> Optional[float]:
        """Offset of angle k along the sweep direction, or None if outside.

        Returns d in [0, |sweep|] with point = k_start + sign(sweep)*d.
        Endpoints count as inside.
        """
        s = 1.0 if self.ccw else -1.0
        d = (s * (k - self.k_start)) % TAU
        span = abs(self.sweep)
        if d <= span:
            return d
        # wrap: values in [2*pi - eps, 2*pi) are the start point
        if TAU - d < ANG_TOL:
            return 0.0
        if d - span < ANG_TOL:
            return span
        return None

    def split_at_angles(self, angles: list[float]) -> list["Arc"]:
        """Split at the given absolute angles (non-interior ones ignored)."""
        span = abs(self.sweep)
        s = 1.0 if self.ccw else -1.0
        offs = []
        for k in angles:
            d = self.local_angle(k)
            if d is not None and ANG_TOL < d < span - ANG_TOL:
                offs.append(d)
        if not offs:
            return [self]
        offs = sorted(set(offs))
        cuts = [0.0] + offs + [span]
        out = []
        for d0, d1 in zip(cuts[:-1], cuts[1:]):
            if d1 - d0 <= ANG_TOL:
                continue
            out.append(Arc(self.center, self.radius,
                           wrap_angle(self.k_start + s * d0), s * (d1 - d0)))
        return out


@dataclass(frozen=True, slots=True)
class Segment:
    a: Point2
    b: Point2

    def point_at(self, t: float) -> Point2:
        return Point2(self.a[0] + t * (self.b[0] - self.a[0]),
                      self.a[1] + t * (self.b[1] - self.a[1]))

    def tangent_at(self, t: float) -> Point2:
        return unit(Point2(self.b[0] - self.a[0], self.b[1] - self.a[1]))

    @property
    def start(self) -> Point2:
        return self.a

    @property
    def end(self) -> Point2:
        return self.b

    def midpoint(self) -> Point2:
        return self.point_at(0.5)

    def length(self) -> float:
        return dist(self.a, self.b)

    def reversed_(self) -> "Segment":
        return Segment(self.b, self.a)

    def split_at_params(self, ts: list[float]) -> list["Segment"]:
        keep = sorted({t for t in ts if 1e-12 < t < 1.0 - 1e-12})
        if not keep:
            return [self]
        pts = [self.a] + [self.point_at(t) for t in keep] + [self.b]
        return [Segment(p, q) for p, q in zip(pts[:-1], pts[1:])
                if dist(p, q) > LEN_TOL]


PieceGeometry = Union[Arc, Segment]


# ---------------------------------------------------------------------------
# labels

@dataclass(frozen=True, slots=True)
class Label:
    """Provenance of a boundary piece within a coverage cell.

    kind is one of "own_circle", "world", "dominance", "tie"; the latter two
    carry the id of the other node involved.
    """

    kind: str
    other: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in ("own_circle", "world", "dominance", "tie"):
            raise ValueError(f"unknown label kind {self.kind!r}")
        if self.kind in ("dominance", "tie") and self.other is None:
            raise ValueError(f"label {self.kind!r} needs the other node id")


OWN_CIRCLE = Label("own_circle")
WORLD = Label("world")


def dominance_vs(j: int) -> Label:
    return Label("dominance", j)


def tie_vs(j: int) -> Label:
    return Label("tie", j)


@dataclass(frozen=True, slots=True)
class BoundaryPiece:
    geometry: PieceGeometry
    label: Label

    @property
    def start(self) -> Point2:
        return self.geometry.start

    @property
    def end(self) -> Point2:
        return self.geometry.end

    def midpoint(self) -> Point2:
        return self.geometry.midpoint()

    def length(self) -> float:
        return self.geometry.length()

    def reversed_(self) -> "BoundaryPiece":
        return BoundaryPiece(self.geometry.reversed_(), self.label)


Loop = tuple[BoundaryPiece, ...]


@dataclass(frozen=True, slots=True)
class ArcRegion:
    """Region bounded by closed chains of arcs and segments.

    Outer loops run counterclockwise (interior on the left), holes run
    clockwise. loops == () is the empty region.
    """

    loops: tuple[Loop, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.loops

    def pieces(self) -> Iterator[BoundaryPiece]:
        for loop in self.loops:
            yield from loop

    def boundary_length(self) -> float:
        return sum(p.length() for p in self.pieces())

    def bounding_box(self) -> tuple[float, float, float, float]:
        if self.is_empty:
            raise ValueError("empty region has no bounding box")
        xmin = ymin = math.inf
        xmax = ymax = -math.inf
        for p in self.pieces():
            g = p.geometry
            if isinstance(g, Arc):
                # conservative: whole circle box (exact box not needed)
                xmin = min(xmin, g.center[0] - g.radius)
                xmax = max(xmax, g.center[0] + g.radius)
                ymin = min(ymin, g.center[1] - g.radius)
                ymax = max(ymax, g.center[1] + g.radius)
            else:
                for q in (g.a, g.b):
                    xmin = min(xmin, q[0])
                    xmax = max(xmax, q[0])
                    ymin = min(ymin, q[1])
                    ymax = max(ymax, q[1])
        return xmin, ymin, xmax, ymax

    def max_closure_gap(self) -> float:
        """Largest endpoint mismatch over all loops (0 for well-formed output)."""
        worst = 0.0
        for loop in self.loops:
            for i, piece in enumerate(loop):
                nxt = loop[(i + 1) % len(loop)]
                worst = max(worst, dist(piece.end, nxt.start))
        return worst


def full_disk_region(d: Disk, label: Label = OWN_CIRCLE) -> ArcRegion:
    arc = Arc(d.center, d.radius, math.pi, TAU)
    return ArcRegion(((BoundaryPiece(arc, label),),))


# ---------------------------------------------------------------------------
# intersections

def circle_circle_points(c1: Point2, r1: float, c2: Point2, r2: float,
                         tol: float = TOL) -> list[Point2]:
    """Intersection points of two circles (0, 1, or 2 of them).

    Tangencies within tol collapse to a single point. Coincident circles
    raise DegenerateOverlap.
    """
    d = dist(c1, c2)
    if d <= tol and abs(r1 - r2) <= tol:
        raise DegenerateOverlap(
            f"circles coincide within tolerance: centers {c1}, {c2}, "
            f"radii {r1}, {r2}")
    if d > r1 + r2 + tol or d < abs(r1 - r2) - tol:
        return []
    if d < tol:
        # concentric, distinct radii
        return []
    # Anchor the computation at the smaller circle. Points are
    # cs + rs*u with u a unit vector, so the other circle's equation
    # reduces to <w, u> = t with numerator rb^2 - d^2 - rs^2. Two
    # algebraically equal factorings cancel in different regimes:
    # (rb - d)*(rb + d) - rs^2 is accurate when rb ~ d >> rs (a
    # nearly-straight cutting circle), (rb - rs)*(rb + rs) - d^2 when
    # rb ~ rs >> d (nearly-coincident circles). Pick whichever
    # subtracts the smaller terms, so its cancellation is benign.
    if r2 < r1:
        cs, rs, cb, rb = c2, r2, c1, r1
    else:
        cs, rs, cb, rb = c1, r1, c2, r2
    wx = (cs[0] - cb[0]) / d
    wy = (cs[1] - cb[1]) / d
    ta = (rb - d) * (rb + d)
    tb = (rb - rs) * (rb + rs)
    if max(abs(ta), rs * rs) <= max(abs(tb), d * d):
        num = ta - rs * rs
    else:
        num = tb - d * d
    t = num / (2.0 * rs * d)
    h2 = rs * rs * (1.0 - t) * (1.0 + t)
    if h2 <= tol * max(rb, 1.0):
        # tangent (externally or internally)
        tc = max(-1.0, min(1.0, t))
        return [Point2(cs[0] + rs * tc * wx, cs[1] + rs * tc * wy)]
    h = math.sqrt(h2)
    px = cs[0] + rs * t * wx
    py = cs[1] + rs * t * wy
    return [Point2(px + h * wy, py - h * wx),
            Point2(px - h * wy, py + h * wx)]


def circle_circle_intersection(d1: Disk, d2: Disk) -> list[Point2]:
    """Public circle intersection on disks; see circle_circle_points."""
    return circle_circle_points(d1.center, d1.radius, d2.center, d2.radius)


def circle_line_points(c: Point2, r: float, p0: Point2, t: Point2,
                       tol: float = TOL) -> list[tuple[float, Point2]]:
    """Intersections of a circle with the line p0 + s*t (t unit).

    Returns (s, point) pairs; a tangency gives one pair.
    """
    # foot of perpendicular from center
    w = Point2(c[0] - p0[0], c[1] - p0[1])
    s0 = dot(w, t)
    foot = Point2(p0[0] + s0 * t[0], p0[1] + s0 * t[1])
    h = dist(foot, c)
    if h > r + tol:
        return []
    disc = r * r - h * h
    if disc <= tol * max(r, 1.0):
        return [(s0, foot)]
    off = math.sqrt(disc)
    pts = []
    for s in (s0 - off, s0 + off):
        pts.append((s, Point2(p0[0] + s * t[0], p0[1] + s * t[1])))
    return pts


def line_line_point(p0: Point2, t0: Point2, p1: Point2, t1: Point2,
                    tol: float = 1e-12) -> Optional[tuple[float, float, Point2]]:
    """Intersection of two parametric lines; None if (near) parallel."""
    denom = cross(t0, t1)
    if abs(denom) < tol:
        return None
    dp = Point2(p1[0] - p0[0], p1[1] - p0[1])
    s0 = cross(dp, t1) / denom
    s1 = cross(dp, t0) / denom
    return s0, s1, Point2(p0[0] + s0 * t0[0], p0[1] + s0 * t0[1])
