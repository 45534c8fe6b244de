"""Boolean operations between arc regions and convex cutters.

Supported cutters: a disk, a closed half-plane, or a finite intersection of
those (needed for removing a lens-shaped dominated patch in one cut).
The algorithm splits existing boundary pieces at every crossing with the
cutter boundary, classifies sub-pieces by midpoint, and restitches chains.
Crossing coordinates are computed once per circle/line pair and shared by
both sides, so loops close to float precision.
"""
from __future__ import annotations

import math
import os
from typing import Optional, Sequence, Union

from .measure import (GeometryError, geom_area_contribution,
                      loop_signed_area, point_in_region)
from .primitives import (LEN_TOL, TAU, TOL, Arc, ArcRegion, BoundaryPiece,
                         ConvexPolygon, DegenerateOverlap, Disk, HalfPlane,
                         Label, Loop, OWN_CIRCLE, PieceGeometry, Point2,
                         Segment, WORLD, circle_circle_points,
                         circle_line_points, dist, dot, full_disk_region,
                         left_normal, line_line_point, unit, wrap_angle)

STITCH_TOL = 1e-7

# closure checks after every boolean; cheap, and catches stitching bugs early
VALIDATE = os.environ.get("CONECOVER_GEOM_VALIDATE", "1") != "0"

Cutter = Union[Disk, HalfPlane, Sequence[Union[Disk, HalfPlane]]]


class _PrimitiveCutter:
    """Uniform interface over a single disk or half-plane."""

    __slots__ = ("shape",)

    def __init__(self, shape: Union[Disk, HalfPlane]):
        self.shape = shape

    def sign(self, p: Point2) -> float:
        return self.shape.sign(p)

    def inward(self, p: Point2) -> Point2:
        """Unit direction of steepest sign decrease (toward the inside)."""
        s = self.shape
        if isinstance(s, Disk):
            dx = s.center[0] - p[0]
            dy = s.center[1] - p[1]
            n = math.hypot(dx, dy)
            if n < 1e-300:
                return Point2(1.0, 0.0)
            return Point2(dx / n, dy / n)
        return Point2(-s.normal[0], -s.normal[1])

    def boundary_geoms(self, bbox) -> list[PieceGeometry]:
        s = self.shape
        if isinstance(s, Disk):
            return [Arc(s.center, s.radius, math.pi, TAU)]
        # half-plane: a long segment across the region box, interior on left
        n = s.normal
        t = Point2(-n[1], n[0])
        base = Point2(n[0] * s.offset, n[1] * s.offset)
        xmin, ymin, xmax, ymax = bbox
        margin = math.hypot(xmax - xmin, ymax - ymin) + 1.0
        ss = []
        for cx, cy in ((xmin, ymin), (xmin, ymax), (xmax, ymin), (xmax, ymax)):
            ss.append((cx - base[0]) * t[0] + (cy - base[1]) * t[1])
        lo = min(ss) - margin
        hi = max(ss) + margin
        return [Segment(Point2(base[0] + lo * t[0], base[1] + lo * t[1]),
                        Point2(base[0] + hi * t[0], base[1] + hi * t[1]))]


class _ConjunctionCutter:
    """Intersection of several primitive cutters."""

    __slots__ = ("members",)

    def __init__(self, members: list[_PrimitiveCutter]):
        self.members = members

    def sign(self, p: Point2) -> float:
        return max(m.sign(p) for m in self.members)

    def inward(self, p: Point2) -> Point2:
        best = max(self.members, key=lambda m: m.sign(p))
        return best.inward(p)

    def boundary_geoms(self, bbox) -> list[PieceGeometry]:
        out: list[PieceGeometry] = []
        cache: dict = {}
        for i, m in enumerate(self.members):
            others = [o for j, o in enumerate(self.members) if j != i]
            for g in m.boundary_geoms(bbox):
                params: list[float] = []
                for o in others:
                    for og in o.boundary_geoms(bbox):
                        for pa, _pb in _pair_params(g, og, cache):
                            params.append(pa)
                for sub in _split_geom(g, params):
                    if sub.length() <= LEN_TOL:
                        continue
                    mid = sub.midpoint()
                    if all(o.sign(mid) <= TOL for o in others):
                        out.append(sub)
        return out


def _wrap_cutter(cutter: Cutter):
    if isinstance(cutter, (Disk, HalfPlane)):
        return _PrimitiveCutter(cutter)
    members = []
    seen: list[Union[Disk, HalfPlane]] = []
    for c in cutter:
        if not isinstance(c, (Disk, HalfPlane)):
            raise TypeError(f"unsupported cutter element {type(c).__name__}")
        dup = False
        for s in seen:
            if isinstance(c, Disk) and isinstance(s, Disk):
                if dist(c.center, s.center) <= TOL and abs(c.radius - s.radius) <= TOL:
                    dup = True
        if not dup:
            seen.append(c)
            members.append(_PrimitiveCutter(c))
    if not members:
        raise ValueError("empty cutter sequence")
    if len(members) == 1:
        return members[0]
    return _ConjunctionCutter(members)


# ---------------------------------------------------------------------------
# pairwise crossings

def _circle_key(g: Arc):
    return (g.center[0], g.center[1], g.radius)


def _pair_params(ga: PieceGeometry, gb: PieceGeometry,
                 cache: dict) -> list[tuple[float, float]]:
    """All crossings of two pieces as (param_on_a, param_on_b).

    Params are absolute angles for arcs and t in [0, 1] for segments.
    Crossing coordinates are cached per circle pair so that both pieces
    see bit-identical split locations.
    """
    out: list[tuple[float, float]] = []
    if isinstance(ga, Arc) and isinstance(gb, Arc):
        ka, kb = _circle_key(ga), _circle_key(gb)
        if ka == kb:
            return []  # same supporting circle: overlap handled by labels
        key = (ka, kb) if ka <= kb else (kb, ka)
        pts = cache.get(key)
        if pts is None:
            pts = circle_circle_points(ga.center, ga.radius, gb.center, gb.radius)
            cache[key] = pts
        for p in pts:
            a_ang = math.atan2(p[1] - ga.center[1], p[0] - ga.center[0])
            b_ang = math.atan2(p[1] - gb.center[1], p[0] - gb.center[0])
            if ga.local_angle(a_ang) is not None and gb.local_angle(b_ang) is not None:
                out.append((a_ang, b_ang))
    elif isinstance(ga, Arc) and isinstance(gb, Segment):
        for t, a_ang in _arc_segment(ga, gb, cache):
            out.append((a_ang, t))
    elif isinstance(ga, Segment) and isinstance(gb, Arc):
        for t, b_ang in _arc_segment(gb, ga, cache):
            out.append((t, b_ang))
    else:
        assert isinstance(ga, Segment) and isinstance(gb, Segment)
        la = ga.length()
        lb = gb.length()
        if la <= LEN_TOL or lb <= LEN_TOL:
            return []
        ta = Point2((ga.b[0] - ga.a[0]) / la, (ga.b[1] - ga.a[1]) / la)
        tb = Point2((gb.b[0] - gb.a[0]) / lb, (gb.b[1] - gb.a[1]) / lb)
        hit = line_line_point(ga.a, ta, gb.a, tb)
        if hit is not None:
            sa, sb, _p = hit
            pa, pb = sa / la, sb / lb
            if -1e-9 <= pa <= 1 + 1e-9 and -1e-9 <= pb <= 1 + 1e-9:
                out.append((pa, pb))
    return out


def _seg_line_key(g: Segment):
    return (g.a[0], g.a[1], g.b[0], g.b[1])


def _line_key(g: Segment):
    """Canonical key of a segment's supporting line (direction + offset)."""
    dx = g.b[0] - g.a[0]
    dy = g.b[1] - g.a[1]
    length = math.hypot(dx, dy)
    dx /= length
    dy /= length
    if dx < 0.0 or (dx == 0.0 and dy < 0.0):
        dx, dy = -dx, -dy
    off = dx * g.a[1] - dy * g.a[0]
    return (round(dx, 9), round(dy, 9), round(off, 9))


def _arc_segment(arc: Arc, seg: Segment,
                 cache: dict) -> list[tuple[float, float]]:
    """Crossings as (t_on_segment, angle_on_arc)."""
    L = seg.length()
    if L <= LEN_TOL:
        return []
    key = (_circle_key(arc), _seg_line_key(seg))
    hits = cache.get(key)
    if hits is None:
        tdir = Point2((seg.b[0] - seg.a[0]) / L, (seg.b[1] - seg.a[1]) / L)
        hits = circle_line_points(arc.center, arc.radius, seg.a, tdir)
        cache[key] = hits
    out = []
    for s, p in hits:
        t = s / L
        if t < -1e-9 or t > 1 + 1e-9:
            continue
        ang = math.atan2(p[1] - arc.center[1], p[0] - arc.center[0])
        if arc.local_angle(ang) is not None:
            out.append((t, ang))
    return out


def _split_geom(g: PieceGeometry, params: list[float]) -> list[PieceGeometry]:
    if isinstance(g, Arc):
        return g.split_at_angles(params)
    return g.split_at_params(params)


# ---------------------------------------------------------------------------
# stitching

def _stitch(pieces: list[BoundaryPiece]) -> tuple[Loop, ...]:
    unused = list(pieces)
    loops: list[Loop] = []
    while unused:
        chain = [unused.pop(0)]
        guard = 0
        while True:
            guard += 1
            if guard > 10000:
                raise GeometryError("stitching failed to terminate")
            end = chain[-1].end
            head = chain[0].start
            close_gap = dist(end, head)
            cands = []
            for idx, piece in enumerate(unused):
                gap = dist(end, piece.start)
                if gap <= STITCH_TOL:
                    cands.append((gap, idx))
            can_close = close_gap <= STITCH_TOL
            if not cands and not can_close:
                raise GeometryError(
                    f"open chain: no continuation within {STITCH_TOL} of {end}")
            # Nearly-coincident circles can put several genuinely distinct
            # vertices inside STITCH_TOL of the chain end; only the nearest
            # vertex (within reconstruction slack) offers real choices, the
            # farther ones belong to later parts of the loop.
            nearest = min([g for g, _ in cands]
                          + ([close_gap] if can_close else []))
            cut = nearest + 1e-12
            cands = [(g, i) for g, i in cands if g <= cut]
            if can_close and close_gap <= cut:
                if not cands:
                    loops.append(tuple(chain))
                    break
                # vertex shared by closure and another departure (pinch):
                # prefer the tightest left turn to keep interior on the left
                t_end = chain[-1].geometry.tangent_at(1.0)
                close_turn = _turn_angle(t_end, chain[0].geometry.tangent_at(0.0))
                best_idx = None
                best_turn = -math.inf
                for _gap, idx in cands:
                    tr = _turn_angle(t_end, unused[idx].geometry.tangent_at(0.0))
                    if tr > best_turn:
                        best_turn = tr
                        best_idx = idx
                if close_turn >= best_turn - 1e-12:
                    loops.append(tuple(chain))
                    break
                chain.append(unused.pop(best_idx))
                continue
            if len(cands) == 1:
                chain.append(unused.pop(cands[0][1]))
                continue
            t_end = chain[-1].geometry.tangent_at(1.0)
            best_idx = None
            best_turn = -math.inf
            for _gap, idx in cands:
                tr = _turn_angle(t_end, unused[idx].geometry.tangent_at(0.0))
                if tr > best_turn:
                    best_turn = tr
                    best_idx = idx
            chain.append(unused.pop(best_idx))
    # drop degenerate slivers left by tangency snapping
    out = []
    for loop in loops:
        total_len = sum(p.length() for p in loop)
        if total_len < 1e-8 or abs(loop_signed_area(loop)) < 1e-16:
            continue
        out.append(loop)
    return tuple(out)


def _turn_angle(t_out: Point2, t_in: Point2) -> float:
    """Signed ccw turn from outgoing to incoming tangent, in (-pi, pi]."""
    return math.atan2(t_out[0] * t_in[1] - t_out[1] * t_in[0],
                      t_out[0] * t_in[0] + t_out[1] * t_in[1])


def _validate_region(region: ArcRegion) -> None:
    gap = region.max_closure_gap()
    if gap > 1e-9:
        raise GeometryError(f"loop closure gap {gap:.3e} exceeds 1e-9")


# ---------------------------------------------------------------------------
# the boolean

def region_boolean(op: str, region: ArcRegion, cutter: Cutter,
                   new_label: Label) -> ArcRegion:
    """Intersect with, or subtract, a convex cutter from an arc region.

    New boundary pieces contributed by the cutter carry new_label; surviving
    pieces keep their labels. op is "intersect" or "subtract".
    """
    if op not in ("intersect", "subtract"):
        raise ValueError(f"op must be 'intersect' or 'subtract', got {op!r}")
    if region.is_empty:
        return region
    cut = _wrap_cutter(cutter)

    # cheap disk/region box screening for the common disjoint/contained cases
    if isinstance(cut, _PrimitiveCutter) and isinstance(cut.shape, Disk):
        rel = _disk_box_relation(cut.shape, region.bounding_box())
        if rel == "disjoint":
            return ArcRegion() if op == "intersect" else region
        if rel == "covers":
            return region if op == "intersect" else ArcRegion()

    bbox = region.bounding_box()
    b_geoms = cut.boundary_geoms(bbox)
    a_pieces = list(region.pieces())
    cache: dict = {}
    a_splits: list[list[float]] = [[] for _ in a_pieces]
    b_splits: list[list[float]] = [[] for _ in b_geoms]
    for ia, ap in enumerate(a_pieces):
        for ib, bg in enumerate(b_geoms):
            for pa, pb in _pair_params(ap.geometry, bg, cache):
                a_splits[ia].append(pa)
                b_splits[ib].append(pb)

    kept: list[BoundaryPiece] = []
    want_inside = op == "intersect"
    for ap, splits in zip(a_pieces, a_splits):
        for sub in _split_geom(ap.geometry, splits):
            if sub.length() <= LEN_TOL:
                continue
            m = sub.midpoint()
            s = cut.sign(m)
            if abs(s) <= TOL:
                # piece runs along the cutter boundary: decide by which side
                # the region interior is on
                nl = left_normal(sub.tangent_at(0.5))
                side = dot(nl, cut.inward(m))
                keep = side > 0.0 if want_inside else side < 0.0
            else:
                keep = (s < 0.0) == want_inside
            if keep:
                kept.append(BoundaryPiece(sub, ap.label))

    # A cutter piece that runs along an existing boundary curve is already
    # covered by the surviving region piece there. Identify such pieces by
    # supporting-curve identity (same circle, same line), never by point
    # proximity: a distinct circle may pass arbitrarily close to the
    # boundary and still contribute real pieces (nearly-coincident disks).
    region_circles = set()
    region_lines = set()
    for ap in a_pieces:
        g = ap.geometry
        if isinstance(g, Arc):
            region_circles.add(_circle_key(g))
        else:
            region_lines.add(_line_key(g))

    for bg, splits in zip(b_geoms, b_splits):
        for sub in _split_geom(bg, splits):
            if sub.length() <= LEN_TOL:
                continue
            if isinstance(sub, Arc):
                if _circle_key(sub) in region_circles:
                    continue
            elif _line_key(sub) in region_lines:
                continue
            m = sub.midpoint()
            if not point_in_region(region, m):
                continue
            g = sub if want_inside else sub.reversed_()
            kept.append(BoundaryPiece(g, new_label))

    if not kept:
        return ArcRegion()
    out = ArcRegion(_stitch(kept))
    if VALIDATE:
        _validate_region(out)
    return out


def _disk_box_relation(d: Disk, bbox) -> str:
    xmin, ymin, xmax, ymax = bbox
    cx, cy = d.center
    # distance from center to box (0 if inside)
    dx = max(xmin - cx, 0.0, cx - xmax)
    dy = max(ymin - cy, 0.0, cy - ymax)
    if math.hypot(dx, dy) > d.radius + TOL:
        return "disjoint"
    # farthest box corner from center
    fx = max(abs(cx - xmin), abs(cx - xmax))
    fy = max(abs(cy - ymin), abs(cy - ymax))
    if math.hypot(fx, fy) < d.radius - TOL:
        return "covers"
    return "mixed"


def clip_disk_to_polygon(d: Disk, omega: ConvexPolygon,
                         circle_label: Label = OWN_CIRCLE,
                         world_label: Label = WORLD) -> ArcRegion:
    """Region of a disk inside a convex polygon, boundary pieces labeled."""
    region = full_disk_region(d, circle_label)
    for hp in omega.halfplanes():
        c_sign = hp.sign(d.center)
        if c_sign <= -(d.radius + TOL):
            continue  # disk entirely on the inner side of this edge
        if c_sign >= d.radius + TOL:
            return ArcRegion()
        region = region_boolean("intersect", region, hp, world_label)
        if region.is_empty:
            return region
    return region
