"""Gradient ascent of the coverage criterion, evaluated per node.

The planar and altitude inputs are the exact cell-wise gradient of
H = sum_i integral_{W_i} f_i: a boundary part over the node's own sensing
circle (weighted by the quality step across it) plus an interior part from
the quality's dependence on the node state. Pieces of the cell boundary
that move with a neighbor's circle, with a dominance curve, or that lie on
the world polygon contribute nothing: the world boundary does not move with
the node, and the quality difference vanishes on dominance and tie curves.

Boundary integrands are piecewise smooth once own-circle arcs are split
where neighbor circles (and, for the paraboloid model, pairwise dominance
curves) cross, so fixed-order Gauss-Legendre per smooth sub-arc is exact to
rounding for the uniform model and spectrally accurate for the paraboloid.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .geom import Arc, Label, Point2
from .geom.measure import gauss_legendre, region_area, region_moments
from .geom.primitives import TAU, circle_circle_points, circle_line_points
from .partition import Cell, SwarmState, compute_cell
from .quality import QualityModel, dominance_boundary, eval_quality

log = logging.getLogger(__name__)


class StaleCells(RuntimeError):
    """Cells were computed for a different team state."""


class NoInteriorRoot(RuntimeError):
    """Altitude equation has no sign change inside the band."""


@dataclass(frozen=True)
class Gains:
    alpha_q: float = 1.0
    alpha_z: float = 1.0

    def __post_init__(self) -> None:
        if self.alpha_q <= 0 or self.alpha_z <= 0:
            raise ValueError("gains must be positive")


@dataclass(frozen=True)
class QuadratureConfig:
    """boundary_order: Gauss-Legendre order per smooth boundary sub-arc.
    grid_resolution: grid used by partition-free criterion evaluation."""

    boundary_order: int = 16
    grid_resolution: int = 200

    def __post_init__(self) -> None:
        if self.boundary_order < 2 or self.grid_resolution < 8:
            raise ValueError("quadrature configuration too coarse")


@dataclass(frozen=True)
class ControlTerms:
    """Gradient contributions before gains are applied."""

    own_boundary_q: Point2
    neighbor_q: Point2
    interior_q: Point2
    own_boundary_z: float
    neighbor_z: float
    interior_z: float


@dataclass(frozen=True)
class ControlInput:
    u_q: Point2
    u_z: float
    terms: ControlTerms


_ZERO_TERMS = ControlTerms(Point2(0.0, 0.0), Point2(0.0, 0.0), Point2(0.0, 0.0),
                           0.0, 0.0, 0.0)


def arc_jacobian(m: QualityModel, label: Label) -> tuple[np.ndarray, float]:
    """Boundary motion Jacobians for a piece of a cell boundary.

    Returns (d(boundary point)/d(q_i) restricted to the normal direction as
    a 2x2 matrix, normal velocity per unit altitude). A node's own circle
    translates rigidly with q_i and its radius grows at tan(a) per unit z;
    every other label is pinned to geometry the node does not move.
    """
    if label.kind == "own_circle":
        return np.eye(2), m.tan_a
    return np.zeros((2, 2)), 0.0


def _find_cell(cells: list[Cell], i: int) -> Cell:
    for c in cells:
        if c.owner == i:
            return c
    raise KeyError(f"no cell for node {i}")


def control_input(s: SwarmState, i: int, cells: list[Cell],
                  gains: Gains = Gains(),
                  quad: QuadratureConfig = QuadratureConfig()) -> ControlInput:
    """Coverage-gradient input for node i given the current cells."""
    cell = _find_cell(cells, i)
    if cell.state_key != s.state_key():
        raise StaleCells(f"cells are stale for node {i}")
    if cell.region.is_empty:
        return ControlInput(Point2(0.0, 0.0), 0.0, _ZERO_TERMS)

    m = s.model
    node = s.node(i)
    t_a = m.tan_a
    R_i = node.z * t_a
    # own quality on the own circle: the plateau value, times the edge
    # ratio for the paraboloid model (rho = R there)
    f_edge = m.peak(node.z)
    if m.variant == "paraboloid":
        f_edge *= m.edge_ratio
    neighbors = [s.node(j) for j in sorted(cell.neighbor_ids)]

    split_angles = _own_circle_split_angles(s, node, R_i, neighbors)

    own_q = np.zeros(2)
    nbr_q = np.zeros(2)
    own_z = 0.0
    nbr_z = 0.0
    xg, wg = gauss_legendre(quad.boundary_order)
    for piece in cell.region.pieces():
        if piece.label.kind != "own_circle":
            continue  # zero contribution; see module docstring
        arc = piece.geometry
        assert isinstance(arc, Arc)
        for sub in arc.split_at_angles(split_angles):
            lo = sub.k_start if sub.ccw else sub.k_start + sub.sweep
            span = abs(sub.sweep)
            mid = sub.midpoint()
            fmax_mid = 0.0
            for nj in neighbors:
                fj = eval_quality(m, nj, mid)
                if fj > fmax_mid:
                    fmax_mid = fj
            covered = fmax_mid > 1e-15
            if m.variant == "uniform":
                # piecewise constant integrand: closed forms
                diff = f_edge - fmax_mid
                k1 = lo + span
                nx = R_i * (math.sin(k1) - math.sin(lo))
                ny = -R_i * (math.cos(k1) - math.cos(lo))
                ds = R_i * span
                if covered:
                    nbr_q[0] += diff * nx
                    nbr_q[1] += diff * ny
                    nbr_z += t_a * diff * ds
                else:
                    own_q[0] += f_edge * nx
                    own_q[1] += f_edge * ny
                    own_z += t_a * f_edge * ds
            else:
                ks = lo + 0.5 * (xg + 1.0) * span
                cx = np.cos(ks)
                sx = np.sin(ks)
                px = node.q[0] + R_i * cx
                py = node.q[1] + R_i * sx
                if covered:
                    fmax = _neighbor_max_grid(m, neighbors, px, py)
                else:
                    fmax = 0.0
                diff = (f_edge - fmax) * (0.5 * wg * R_i * span)
                gx = float(np.sum(diff * cx))
                gy = float(np.sum(diff * sx))
                gz = t_a * float(np.sum(diff))
                if covered:
                    nbr_q[0] += gx
                    nbr_q[1] += gy
                    nbr_z += gz
                else:
                    own_q[0] += gx
                    own_q[1] += gy
                    own_z += gz

    if m.variant == "uniform":
        int_q = Point2(0.0, 0.0)
        int_z = m.peak_grad(node.z) * region_area(cell.region)
    else:
        mom = region_moments(cell.region, node.q, order=quad.boundary_order)
        b = m.edge_ratio
        p = m.peak(node.z)
        pg = m.peak_grad(node.z)
        R2 = R_i * R_i
        c = 2.0 * (1.0 - b) * p / R2
        int_q = Point2(c * mom.sx, c * mom.sy)
        int_z = (pg * (mom.area - (1.0 - b) * mom.m2 / R2)
                 + p * 2.0 * (1.0 - b) * mom.m2 / (node.z * R2))

    terms = ControlTerms(
        own_boundary_q=Point2(own_q[0], own_q[1]),
        neighbor_q=Point2(nbr_q[0], nbr_q[1]),
        interior_q=int_q,
        own_boundary_z=own_z,
        neighbor_z=nbr_z,
        interior_z=int_z,
    )
    u_q = Point2(gains.alpha_q * (terms.own_boundary_q[0] + terms.neighbor_q[0]
                                  + int_q[0]),
                 gains.alpha_q * (terms.own_boundary_q[1] + terms.neighbor_q[1]
                                  + int_q[1]))
    u_z = gains.alpha_z * (own_z + nbr_z + int_z)
    return ControlInput(u_q, u_z, terms)


def _own_circle_split_angles(s: SwarmState, node, R_i: float,
                             neighbors) -> list[float]:
    """Angles on the node's sensing circle where the boundary integrand can
    jump (a neighbor circle crossing) or kink (a dominance curve crossing,
    paraboloid only)."""
    m = s.model
    angles: list[float] = []
    for nj in neighbors:
        R_j = nj.z * m.tan_a
        for p in circle_circle_points(node.q, R_i, nj.q, R_j):
            angles.append(math.atan2(p[1] - node.q[1], p[0] - node.q[0]))
    if m.variant == "paraboloid" and len(neighbors) > 1:
        for a_idx in range(len(neighbors)):
            for b_idx in range(a_idx + 1, len(neighbors)):
                na, nb = neighbors[a_idx], neighbors[b_idx]
                db = dominance_boundary(m, na, nb)
                if db.kind == "circle":
                    pts = circle_circle_points(node.q, R_i, db.disk.center,
                                               db.disk.radius)
                elif db.kind == "bisector":
                    pts = [p for _t, p in circle_line_points(
                        node.q, R_i, db.midpoint,
                        Point2(-db.toward_j[1], db.toward_j[0]))]
                else:
                    pts = []
                for p in pts:
                    angles.append(math.atan2(p[1] - node.q[1],
                                             p[0] - node.q[0]))
    return angles


def _neighbor_max_grid(m: QualityModel, neighbors, px: np.ndarray,
                       py: np.ndarray) -> np.ndarray:
    """max_j f_j at an array of points (0 where nobody covers)."""
    fmax = np.zeros_like(px)
    for nj in neighbors:
        R = nj.z * m.tan_a
        rho2 = (px - nj.q[0]) ** 2 + (py - nj.q[1]) ** 2
        inside = rho2 <= (R + 1e-9) ** 2
        if not inside.any():
            continue
        p = m.peak(nj.z)
        if m.variant == "uniform":
            vals = np.where(inside, p, 0.0)
        else:
            vals = np.where(
                inside,
                (1.0 - (1.0 - m.edge_ratio) * np.minimum(rho2, R * R) / (R * R)) * p,
                0.0)
        np.maximum(fmax, vals, out=fmax)
    return fmax


# ---------------------------------------------------------------------------
# equilibrium altitudes

def _altitude_input(s: SwarmState, i: int, z: float,
                    quad: QuadratureConfig) -> float:
    s2 = s.with_node(i, z=z)
    cell = compute_cell(s2, i)
    return control_input(s2, i, [cell], Gains(), quad).u_z


def _bisect(phi, lo: float, hi: float, tol: float) -> float:
    f_lo = phi(lo)
    f_hi = phi(hi)
    if f_lo <= 0.0 and f_hi <= 0.0:
        return lo
    if f_lo >= 0.0 and f_hi >= 0.0:
        return hi
    a, b = lo, hi
    fa = f_lo
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = phi(mid)
        if (fm > 0.0) == (fa > 0.0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def stable_altitude(s: SwarmState, i: int,
                    quad: QuadratureConfig = QuadratureConfig(),
                    tol: float = 1e-10) -> float:
    """Altitude where node i's climb input vanishes, everything else fixed.

    The cell is recomputed at every probed altitude. Returns z_min when the
    input never turns positive (node dominated at every altitude) and z_max
    when it never turns negative inside the band. The altitude input always
    vanishes at z_max itself (quality and its slope are zero there), so the
    upper probe sits just below the band end.
    """
    m = s.model
    delta = 1e-9 * (m.z_max - m.z_min)
    z = _bisect(lambda zz: _altitude_input(s, i, zz, quad),
                m.z_min, m.z_max - delta, tol)
    if z >= m.z_max - 2.0 * delta:
        return m.z_max
    return z


def full_disk_altitude_input(m: QualityModel, z: float) -> float:
    """Closed-form altitude input of an isolated node with an unclipped
    disk cell (boundary term plus interior term)."""
    m.check_band(z)
    t = m.tan_a
    R = z * t
    p = m.peak(z)
    pg = m.peak_grad(z)
    if m.variant == "uniform":
        return t * p * TAU * R + pg * math.pi * R * R
    b = m.edge_ratio
    area = math.pi * R * R
    m2 = 0.5 * math.pi * R ** 4
    boundary = t * (b * p) * TAU * R
    interior = pg * (area - (1.0 - b) * m2 / (R * R)) \
        + p * 2.0 * (1.0 - b) * m2 / (z * R * R)
    return boundary + interior


def full_disk_coverage(m: QualityModel, z: float) -> float:
    """Integral of one node's quality over its whole sensing disk."""
    m.check_band(z)
    R = z * m.tan_a
    p = m.peak(z)
    if m.variant == "uniform":
        return p * math.pi * R * R
    return p * math.pi * R * R * (1.0 + m.edge_ratio) / 2.0


def optimal_altitude(m: QualityModel, tol: float = 1e-10) -> float:
    """Altitude maximizing an isolated full-disk node's coverage integral.

    Bisection on the closed-form altitude input. Independent of the cone
    half-angle: the opening only scales the disk area. If the input never
    changes sign inside the band (not the case for the built-in models) the
    nearer band end is returned with a warning.
    """
    delta = 1e-9 * (m.z_max - m.z_min)
    lo = m.z_min
    hi = m.z_max - delta
    f_lo = full_disk_altitude_input(m, lo)
    f_hi = full_disk_altitude_input(m, hi)
    if (f_lo <= 0.0 and f_hi <= 0.0) or (f_lo >= 0.0 and f_hi >= 0.0):
        end = lo if abs(f_lo) <= abs(f_hi) else m.z_max
        log.warning("altitude input has no interior root in [%g, %g]; "
                    "reporting band end %g", m.z_min, m.z_max, end)
        return end
    return _bisect(lambda z: full_disk_altitude_input(m, z), lo, hi, tol)
