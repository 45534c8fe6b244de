"""Coverage quality of a downward-facing conic sensor.

A node at ground point q_i and altitude z sees the disk of radius z*tan(a)
around q_i. Inside that disk the "uniform" model scores every point with the
altitude factor

    fu(z) = ((z - z_min)^2 - (z_max - z_min)^2)^2 / (z_max - z_min)^4,

which is 1 at z_min and decays smoothly to 0 at z_max. The "paraboloid"
model additionally degrades with distance rho from the nadir,

    fp = (1 - (1 - b) * rho^2 / (z tan a)^2) * fu(z),

dropping to b*fu at the disk edge. Outside the sensing disk quality is 0;
points exactly on the edge use the closed-disk (inside) value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal, Optional

import numpy as np

from .geom import Disk, Point2
from .geom.primitives import TOL, dist, unit

if TYPE_CHECKING:
    from .partition import NodeState


class AltitudeOutOfBand(ValueError):
    """Altitude outside the closed operating band [z_min, z_max]."""


Variant = Literal["uniform", "paraboloid"]


@dataclass(frozen=True)
class QualityModel:
    """Sensor description shared by every node of a team.

    half_angle is the cone half-opening in radians; edge_ratio is the
    paraboloid edge value b in (0, 1) and must be None for the uniform
    variant.
    """

    half_angle: float
    z_min: float
    z_max: float
    variant: Variant = "uniform"
    edge_ratio: Optional[float] = None

    def __post_init__(self) -> None:
        if not (0.0 < self.half_angle < 0.5 * math.pi):
            raise ValueError(f"half_angle must be in (0, pi/2), got {self.half_angle}")
        if not (0.0 < self.z_min < self.z_max):
            raise ValueError(
                f"need 0 < z_min < z_max, got [{self.z_min}, {self.z_max}]")
        if self.variant == "paraboloid":
            if self.edge_ratio is None or not (0.0 < self.edge_ratio < 1.0):
                raise ValueError(
                    f"paraboloid variant needs edge_ratio in (0, 1), got {self.edge_ratio}")
        elif self.variant == "uniform":
            if self.edge_ratio is not None:
                raise ValueError("uniform variant takes no edge_ratio")
        else:
            raise ValueError(f"unknown variant {self.variant!r}")

    @property
    def tan_a(self) -> float:
        return math.tan(self.half_angle)

    def check_band(self, z: float) -> None:
        if not (self.z_min - 1e-12 <= z <= self.z_max + 1e-12):
            raise AltitudeOutOfBand(
                f"altitude {z} outside [{self.z_min}, {self.z_max}]")

    def radius(self, z: float) -> float:
        """Sensing disk radius at altitude z."""
        self.check_band(z)
        return z * self.tan_a

    def sensing_disk(self, q: Point2, z: float) -> Disk:
        return Disk(q, self.radius(z))

    def peak(self, z: float) -> float:
        """Altitude factor fu(z); the plateau value of the uniform model."""
        self.check_band(z)
        D = self.z_max - self.z_min
        d = z - self.z_min
        return (d * d - D * D) ** 2 / D ** 4

    def peak_grad(self, z: float) -> float:
        """d fu / dz."""
        self.check_band(z)
        D = self.z_max - self.z_min
        d = z - self.z_min
        return 4.0 * d * (d * d - D * D) / D ** 4


def eval_quality(m: QualityModel, node: "NodeState", q: Point2) -> float:
    """Coverage quality of node at ground point q (0 outside its disk)."""
    R = m.radius(node.z)
    rho2 = (q[0] - node.q[0]) ** 2 + (q[1] - node.q[1]) ** 2
    edge = R + TOL
    if rho2 > edge * edge:
        return 0.0
    fu = m.peak(node.z)
    if m.variant == "uniform":
        return fu
    b = m.edge_ratio
    return (1.0 - (1.0 - b) * min(rho2, R * R) / (R * R)) * fu


def eval_quality_grid(m: QualityModel, node: "NodeState",
                      xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Vectorized eval_quality over arrays of ground coordinates."""
    R = m.radius(node.z)
    rho2 = (xs - node.q[0]) ** 2 + (ys - node.q[1]) ** 2
    inside = rho2 <= (R + TOL) ** 2
    fu = m.peak(node.z)
    if m.variant == "uniform":
        return np.where(inside, fu, 0.0)
    b = m.edge_ratio
    vals = (1.0 - (1.0 - b) * np.minimum(rho2, R * R) / (R * R)) * fu
    return np.where(inside, vals, 0.0)


def quality_grad_q(m: QualityModel, node: "NodeState", q: Point2) -> Point2:
    """Gradient of the node's quality at q with respect to the node's
    ground position (zero for the uniform model)."""
    if m.variant == "uniform":
        return Point2(0.0, 0.0)
    R = m.radius(node.z)
    rho2 = (q[0] - node.q[0]) ** 2 + (q[1] - node.q[1]) ** 2
    edge = R + TOL
    if rho2 > edge * edge:
        return Point2(0.0, 0.0)
    c = 2.0 * (1.0 - m.edge_ratio) * m.peak(node.z) / (R * R)
    return Point2(c * (q[0] - node.q[0]), c * (q[1] - node.q[1]))


def quality_grad_z(m: QualityModel, node: "NodeState", q: Point2) -> float:
    """Derivative of the node's quality at q with respect to its altitude."""
    R = m.radius(node.z)
    rho2 = (q[0] - node.q[0]) ** 2 + (q[1] - node.q[1]) ** 2
    edge = R + TOL
    if rho2 > edge * edge:
        return 0.0
    fu_g = m.peak_grad(node.z)
    if m.variant == "uniform":
        return fu_g
    b = m.edge_ratio
    rho2 = min(rho2, R * R)
    fu = m.peak(node.z)
    # d/dz of (1 - (1-b) rho^2 / (z tan a)^2) at fixed rho
    return (fu_g * (1.0 - (1.0 - b) * rho2 / (R * R))
            + fu * 2.0 * (1.0 - b) * rho2 / (node.z * R * R))


# ---------------------------------------------------------------------------
# dominance boundaries

@dataclass(frozen=True)
class DominanceBoundary:
    """Where node i's quality beats node j's, from i's perspective.

    kind "everywhere"/"nowhere": one node dominates the whole overlap.
    kind "circle": i wins inside the disk if i_wins_inside, outside it
    otherwise. kind "bisector": equal altitudes; i wins on its own side of
    the perpendicular bisector {q : toward_j . q <= toward_j . midpoint}
    (and the lower node id wins on the line itself).
    """

    kind: Literal["everywhere", "nowhere", "circle", "bisector"]
    winner_at_center: int
    disk: Optional[Disk] = None
    i_wins_inside: Optional[bool] = None
    midpoint: Optional[Point2] = None
    toward_j: Optional[Point2] = None


def dominance_boundary(m: QualityModel, node_i: "NodeState",
                       node_j: "NodeState") -> DominanceBoundary:
    """Dominance relation between two nodes over their sensing overlap.

    Uniform quality: the lower node wins everywhere (its plateau is higher);
    equal altitudes split along the perpendicular bisector. Paraboloid
    quality: equal altitudes also give the bisector, otherwise the set
    {f_i >= f_j} is bounded by an explicit circle containing the lower
    node's nadir.
    """
    zi, zj = node_i.z, node_j.z
    tie_winner = min(node_i.id, node_j.id)
    # altitudes closer than the snapping scale count as tied; a genuine
    # near-tie would otherwise produce a uselessly enormous dominance circle
    if abs(zi - zj) <= 1e-12:
        if dist(node_i.q, node_j.q) <= TOL:
            # identical sensors: the whole overlap goes to the lower id
            kind = "everywhere" if node_i.id == tie_winner else "nowhere"
            return DominanceBoundary(kind=kind, winner_at_center=tie_winner)
        mid = Point2(0.5 * (node_i.q[0] + node_j.q[0]),
                     0.5 * (node_i.q[1] + node_j.q[1]))
        toward = unit(Point2(node_j.q[0] - node_i.q[0],
                             node_j.q[1] - node_i.q[1]))
        return DominanceBoundary(kind="bisector", winner_at_center=tie_winner,
                                 midpoint=mid, toward_j=toward)
    if m.variant == "uniform":
        if zi < zj:
            return DominanceBoundary(kind="everywhere", winner_at_center=node_i.id)
        return DominanceBoundary(kind="nowhere", winner_at_center=node_j.id)

    # paraboloid, distinct altitudes: solve f_i(q) = f_j(q) for q.
    # With c_k = (1-b) fu(z_k) / R_k^2 the condition f_i >= f_j reads
    # c_j |q - q_j|^2 - c_i |q - q_i|^2 >= fu(z_j) - fu(z_i), a disk since
    # c is strictly decreasing in z (so c_w > c_l for the lower node w).
    b = m.edge_ratio
    if zi < zj:
        w, l = node_i, node_j
    else:
        w, l = node_j, node_i
    Rw = m.radius(w.z)
    Rl = m.radius(l.z)
    pw = m.peak(w.z)
    pl = m.peak(l.z)
    cw = (1.0 - b) * pw / (Rw * Rw)
    cl = (1.0 - b) * pl / (Rl * Rl)
    c = cw - cl
    assert c > 0.0, "altitude factor over squared radius must decrease with z"
    mx = (cw * w.q[0] - cl * l.q[0]) / c
    my = (cw * w.q[1] - cl * l.q[1]) / c
    # r^2 = (pw - pl - cw|qw|^2 + cl|ql|^2)/c + |m|^2
    r2 = ((pw - pl - cw * (w.q[0] ** 2 + w.q[1] ** 2)
           + cl * (l.q[0] ** 2 + l.q[1] ** 2)) / c + mx * mx + my * my)
    assert r2 > 0.0, "dominance disk always contains the winner's nadir"
    disk = Disk(Point2(mx, my), math.sqrt(r2))
    return DominanceBoundary(kind="circle", winner_at_center=w.id, disk=disk,
                             i_wins_inside=(w.id == node_i.id))
