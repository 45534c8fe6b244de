"""Integration and point-location over arc-bounded regions.

Areas come from the closed form of (1/2) * contour integral of (x dy - y dx).
Higher moments use Gauss-Legendre quadrature on arcs subdivided to spans of
at most pi/2, which is exact to machine precision for these integrands.
"""
from __future__ import annotations

import math
from typing import Callable, Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .primitives import (TAU, TOL, Arc, ArcRegion, BoundaryPiece, Label, Loop,
                         Point2, Segment, dist)


class GeometryError(RuntimeError):
    pass


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on [-1, 1], cached."""
    try:
        return _GL_CACHE[order]
    except KeyError:
        xw = np.polynomial.legendre.leggauss(order)
        _GL_CACHE[order] = xw
        return xw


# ---------------------------------------------------------------------------
# areas

def geom_area_contribution(g: Union[Arc, Segment]) -> float:
    """Contribution of one boundary piece to (1/2) * contour(x dy - y dx)."""
    if isinstance(g, Segment):
        return 0.5 * (g.a[0] * g.b[1] - g.b[0] * g.a[1])
    k0 = g.k_start
    k1 = g.k_start + g.sweep
    cx, cy = g.center
    r = g.radius
    return 0.5 * r * (cx * (math.sin(k1) - math.sin(k0))
                      - cy * (math.cos(k1) - math.cos(k0))
                      + r * g.sweep)


def loop_signed_area(loop: Loop) -> float:
    return sum(geom_area_contribution(p.geometry) for p in loop)


def region_area(region: ArcRegion) -> float:
    """Exact area; holes (clockwise loops) subtract automatically."""
    return sum(loop_signed_area(loop) for loop in region.loops)


class Moments(NamedTuple):
    """Low-order moments of a region about a reference point.

    area = integral of 1, sx/sy = integral of (x-ax)/(y-ay),
    m2 = integral of squared distance to the reference point.
    """

    area: float
    sx: float
    sy: float
    m2: float


def _subdivided(g: Union[Arc, Segment]) -> list[Union[Arc, Segment]]:
    if isinstance(g, Segment):
        return [g]
    n = max(1, math.ceil(abs(g.sweep) / (0.5 * math.pi)))
    if n == 1:
        return [g]
    step = g.sweep / n
    return [Arc(g.center, g.radius, g.k_start + i * step, step)
            for i in range(n)]


def region_moments(region: ArcRegion, about: Point2,
                   order: int = 16) -> Moments:
    """Moments via contour quadrature: integral of (x-ax)^2/2 dy for sx,
    -(y-ay)^2/2 dx for sy, and (x-ax)^3/3 dy - (y-ay)^3/3 dx for m2."""
    ax, ay = about
    if region.is_empty:
        return Moments(0.0, 0.0, 0.0, 0.0)
    xg, wg = gauss_legendre(order)
    t = 0.5 * (xg + 1.0)
    area = sx = sy = m2 = 0.0
    for piece in region.pieces():
        for g in _subdivided(piece.geometry):
            if isinstance(g, Arc):
                k = g.k_start + t * g.sweep
                ck = np.cos(k)
                sk = np.sin(k)
                x = g.center[0] + g.radius * ck
                y = g.center[1] + g.radius * sk
                dx = -g.radius * sk * g.sweep      # dx/dt
                dy = g.radius * ck * g.sweep
            else:
                x = g.a[0] + t * (g.b[0] - g.a[0])
                y = g.a[1] + t * (g.b[1] - g.a[1])
                dx = np.full_like(x, g.b[0] - g.a[0])
                dy = np.full_like(x, g.b[1] - g.a[1])
            w = 0.5 * wg
            u = x - ax
            v = y - ay
            area += float(np.sum(w * 0.5 * (x * dy - y * dx)))
            sx += float(np.sum(w * 0.5 * u * u * dy))
            sy += float(np.sum(w * (-0.5) * v * v * dx))
            m2 += float(np.sum(w * (u ** 3 * dy - v ** 3 * dx) / 3.0))
    return Moments(area, sx, sy, m2)


# ---------------------------------------------------------------------------
# boundary line integrals

LabelFilter = Optional[Callable[[Label], bool]]


def boundary_line_integral(region: ArcRegion,
                           integrand: Callable[[Point2, Point2, BoundaryPiece],
                                               Union[float, np.ndarray]],
                           order: int = 16,
                           label_filter: LabelFilter = None):
    """Fixed-order Gauss-Legendre line integral over the region boundary.

    integrand(q, n, piece) is evaluated at quadrature points with n the unit
    normal pointing away from the region interior. Returns the accumulated
    scalar or vector. Pieces can be filtered by label.
    """
    xg, wg = gauss_legendre(order)
    t = 0.5 * (xg + 1.0)
    total = None
    for piece in region.pieces():
        if label_filter is not None and not label_filter(piece.label):
            continue
        g = piece.geometry
        if isinstance(g, Arc):
            speed = g.radius * abs(g.sweep)
            sgn = 1.0 if g.ccw else -1.0
            ks = g.k_start + t * g.sweep
            for k, w in zip(ks, wg):
                q = g.point_at_angle(k)
                # tangent (-sin, cos)*sgn; outward normal = rot(tangent, -90)
                n = Point2(sgn * math.cos(k), sgn * math.sin(k))
                val = integrand(q, n, piece)
                contrib = np.asarray(val, dtype=float) * (0.5 * w * speed)
                total = contrib if total is None else total + contrib
        else:
            speed = g.length()
            if speed == 0.0:
                continue
            tx = (g.b[0] - g.a[0]) / speed
            ty = (g.b[1] - g.a[1]) / speed
            n = Point2(ty, -tx)
            for ti, w in zip(t, wg):
                q = g.point_at(ti)
                val = integrand(q, n, piece)
                contrib = np.asarray(val, dtype=float) * (0.5 * w * speed)
                total = contrib if total is None else total + contrib
    if total is None:
        return 0.0
    if total.ndim == 0:
        return float(total)
    return total


# ---------------------------------------------------------------------------
# point location

def distance_to_boundary(region: ArcRegion, p: Point2) -> float:
    best = math.inf
    for piece in region.pieces():
        g = piece.geometry
        if isinstance(g, Arc):
            k = math.atan2(p[1] - g.center[1], p[0] - g.center[0])
            if g.local_angle(k) is not None:
                d = abs(dist(p, g.center) - g.radius)
            else:
                d = min(dist(p, g.start), dist(p, g.end))
        else:
            vx = g.b[0] - g.a[0]
            vy = g.b[1] - g.a[1]
            L2 = vx * vx + vy * vy
            if L2 == 0.0:
                d = dist(p, g.a)
            else:
                t = ((p[0] - g.a[0]) * vx + (p[1] - g.a[1]) * vy) / L2
                t = min(1.0, max(0.0, t))
                d = dist(p, g.point_at(t))
        if d < best:
            best = d
    return best


def _ray_parity(region: ArcRegion, px: float, py: float) -> Optional[bool]:
    """Parity of boundary crossings of the ray {x > px, y = py}.

    Returns None when the ray passes too close to an endpoint, a tangency,
    or the query point itself sits on the boundary at this height.
    """
    crossings = 0
    for piece in region.pieces():
        g = piece.geometry
        if isinstance(g, Arc):
            cx, cy = g.center
            r = g.radius
            dy = py - cy
            gap = r - abs(dy)
            if gap < TOL:
                if gap > -TOL:
                    return None  # near-tangent row
                continue
            xoff = math.sqrt(r * r - dy * dy)
            span = abs(g.sweep)
            sgn = 1.0 if g.ccw else -1.0
            for sx in (xoff, -xoff):
                k = math.atan2(dy, sx)
                d = (sgn * (k - g.k_start)) % TAU
                # a crossing near either arc endpoint (inside or just beyond)
                # is ambiguous between adjacent pieces: resolve by jitter
                if d < 1e-9 or abs(d - span) < 1e-9 or TAU - d < 1e-9:
                    return None
                if d > span:
                    continue
                x = cx + sx
                if abs(x - px) < TOL:
                    return None
                if x > px:
                    crossings += 1
        else:
            ay, by = g.a[1], g.b[1]
            if abs(by - ay) < 1e-15:
                if abs(py - ay) < TOL and max(g.a[0], g.b[0]) > px - TOL:
                    return None
                continue
            t = (py - ay) / (by - ay)
            if t < -1e-9 or t > 1.0 + 1e-9:
                continue
            if t < 1e-9 or t > 1.0 - 1e-9:
                return None
            x = g.a[0] + t * (g.b[0] - g.a[0])
            if abs(x - px) < TOL:
                return None
            if x > px:
                crossings += 1
    return crossings % 2 == 1


def point_in_region(region: ArcRegion, p: Point2) -> bool:
    """Point membership (closed region). Deterministic jitter resolves rays
    through endpoints/tangencies; points on the boundary count as inside."""
    if region.is_empty:
        return False
    if distance_to_boundary(region, p) <= TOL:
        return True
    scale = max(1.0, abs(p[1]))
    for attempt in range(12):
        eps = 0.0 if attempt == 0 else ((-1) ** attempt) * attempt * 7.3e-9 * scale
        parity = _ray_parity(region, p[0], p[1] + eps)
        if parity is not None:
            return parity
    raise GeometryError(f"point-in-region parity unresolved at {p}")


def points_in_region(region: ArcRegion, xs: np.ndarray,
                     ys: np.ndarray) -> np.ndarray:
    """Vectorized membership test; falls back to the scalar path for points
    whose ray passes near a boundary feature."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    flat_x = xs.ravel()
    flat_y = ys.ravel()
    n = flat_x.size
    inside = np.zeros(n, dtype=bool)
    if region.is_empty:
        return inside.reshape(xs.shape)
    xmin, ymin, xmax, ymax = region.bounding_box()
    live = ((flat_x >= xmin - TOL) & (flat_x <= xmax + TOL)
            & (flat_y >= ymin - TOL) & (flat_y <= ymax + TOL))
    if not live.any():
        return inside.reshape(xs.shape)
    qx = flat_x[live]
    qy = flat_y[live]
    crossings = np.zeros(qx.size, dtype=np.int64)
    degen = np.zeros(qx.size, dtype=bool)
    for piece in region.pieces():
        g = piece.geometry
        if isinstance(g, Arc):
            cx, cy = g.center
            r = g.radius
            dy = qy - cy
            gap = r - np.abs(dy)
            band = gap >= TOL
            degen |= np.abs(gap) < TOL
            xoff = np.sqrt(np.maximum(r * r - dy * dy, 0.0))
            span = abs(g.sweep)
            sgn = 1.0 if g.ccw else -1.0
            for side in (1.0, -1.0):
                k = np.arctan2(dy, side * xoff)
                d = np.mod(sgn * (k - g.k_start), TAU)
                edge = band & ((d < 1e-9) | (np.abs(d - span) < 1e-9)
                               | (TAU - d < 1e-9))
                degen |= edge
                onarc = band & ~edge & (d < span)
                x = cx + side * xoff
                degen |= onarc & (np.abs(x - qx) < TOL)
                crossings += (onarc & (x > qx)).astype(np.int64)
        else:
            ay, by = g.a[1], g.b[1]
            if abs(by - ay) < 1e-15:
                degen |= np.abs(qy - ay) < TOL
                continue
            t = (qy - ay) / (by - ay)
            valid = (t > -1e-9) & (t < 1.0 + 1e-9)
            edge = valid & ((t < 1e-9) | (t > 1.0 - 1e-9))
            degen |= edge
            on = valid & ~edge
            x = g.a[0] + t * (g.b[0] - g.a[0])
            degen |= on & (np.abs(x - qx) < TOL)
            crossings += (on & (x > qx)).astype(np.int64)
    res = (crossings % 2) == 1
    bad = np.flatnonzero(degen)
    for idx in bad:
        res[idx] = point_in_region(region, Point2(float(qx[idx]), float(qy[idx])))
    inside[np.flatnonzero(live)] = res
    return inside.reshape(xs.shape)


# ---------------------------------------------------------------------------
# grid quadrature

def region_area_integral(region: ArcRegion,
                         integrand: Callable[[Point2], Union[float, np.ndarray]],
                         resolution: int = 200):
    """Area integral on a fixed grid over the region bounding box.

    Cells with all four corners inside use a midpoint rule; cells straddling
    the boundary are refined once into 2x2 subcells classified by their
    centers. Deterministic for a given region and resolution.
    """
    if region.is_empty:
        return 0.0
    xmin, ymin, xmax, ymax = region.bounding_box()
    if xmax - xmin < TOL or ymax - ymin < TOL:
        return 0.0
    xs = np.linspace(xmin, xmax, resolution + 1)
    ys = np.linspace(ymin, ymax, resolution + 1)
    hx = xs[1] - xs[0]
    hy = ys[1] - ys[0]
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    corner_in = points_in_region(region, gx, gy)
    c00 = corner_in[:-1, :-1]
    c10 = corner_in[1:, :-1]
    c01 = corner_in[:-1, 1:]
    c11 = corner_in[1:, 1:]
    count = (c00.astype(np.int8) + c10.astype(np.int8)
             + c01.astype(np.int8) + c11.astype(np.int8))
    total = None
    cell_area = hx * hy

    def add(val, w):
        nonlocal total
        contrib = np.asarray(val, dtype=float) * w
        total = contrib if total is None else total + contrib

    full_i, full_j = np.nonzero(count == 4)
    for i, j in zip(full_i, full_j):
        c = Point2(xmin + (i + 0.5) * hx, ymin + (j + 0.5) * hy)
        add(integrand(c), cell_area)

    part_i, part_j = np.nonzero((count > 0) & (count < 4))
    if part_i.size:
        # 2x2 subcell centers per straddling cell
        offs = np.array([0.25, 0.75])
        sub_x = (xmin + (part_i[:, None, None] + offs[None, :, None]) * hx)
        sub_y = (ymin + (part_j[:, None, None] + offs[None, None, :]) * hy)
        sub_x, sub_y = np.broadcast_arrays(sub_x, sub_y)
        sub_in = points_in_region(region, sub_x, sub_y)
        w_sub = cell_area / 4.0
        for a in range(part_i.size):
            for bi in range(2):
                for bj in range(2):
                    if sub_in[a, bi, bj]:
                        add(integrand(Point2(float(sub_x[a, bi, bj]),
                                             float(sub_y[a, bi, bj]))), w_sub)
    if total is None:
        return 0.0
    if np.ndim(total) == 0:
        return float(total)
    return total
