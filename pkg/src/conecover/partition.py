"""Team state and the quality-induced partition of the covered region.

Each node owns the cell W_i of ground points where its coverage quality is
at least every other node's. Cells tessellate the covered part of the world
polygon only; uncovered ground belongs to nobody. Only overlapping sensing
disks interact, which keeps the construction local: W_i starts from the
node's clipped sensing disk and loses ground to each overlap neighbor
according to the pairwise dominance boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .geom import (ArcRegion, ConvexPolygon, Disk, HalfPlane, Point2,
                   clip_disk_to_polygon, region_boolean)
from .geom.primitives import OWN_CIRCLE, TOL, dist, dominance_vs, tie_vs
from .quality import QualityModel, dominance_boundary


@dataclass(frozen=True)
class NodeState:
    """One aerial node: integer id, ground (nadir) point, altitude."""

    id: int
    q: Point2
    z: float


@dataclass(frozen=True)
class SwarmState:
    """Immutable team snapshot: nodes, shared sensor model, world polygon."""

    nodes: tuple[NodeState, ...]
    model: QualityModel
    omega: ConvexPolygon

    def __post_init__(self) -> None:
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate node ids in {ids}")
        for n in self.nodes:
            self.model.check_band(n.z)
            if not self.omega.contains(n.q, tol=1e-9):
                raise ValueError(
                    f"node {n.id} ground point {n.q} outside the world polygon")

    def node(self, i: int) -> NodeState:
        for n in self.nodes:
            if n.id == i:
                return n
        raise KeyError(f"no node with id {i}")

    def sensing_disk(self, i: int) -> Disk:
        n = self.node(i)
        return self.model.sensing_disk(n.q, n.z)

    def state_key(self) -> tuple:
        return tuple((n.id, n.q[0], n.q[1], n.z) for n in self.nodes)

    def with_node(self, i: int, q: Optional[Point2] = None,
                  z: Optional[float] = None) -> "SwarmState":
        new = []
        for n in self.nodes:
            if n.id == i:
                new.append(NodeState(n.id, q if q is not None else n.q,
                                     z if z is not None else n.z))
            else:
                new.append(n)
        return SwarmState(tuple(new), self.model, self.omega)


@dataclass(frozen=True)
class Cell:
    """Dominance cell of one node, tagged with the team state it belongs to."""

    owner: int
    region: ArcRegion
    neighbor_ids: frozenset[int]
    state_key: tuple


def neighbor_set(s: SwarmState, i: int) -> frozenset[int]:
    """Ids of nodes whose sensing disks intersect node i's (closed test)."""
    ni = s.node(i)
    t = s.model.tan_a
    out = []
    for n in s.nodes:
        if n.id == i:
            continue
        if dist(ni.q, n.q) <= (ni.z + n.z) * t:
            out.append(n.id)
    return frozenset(out)


def comm_radius(m: QualityModel, z_i: float) -> float:
    """3-D range that provably reaches every possible overlap neighbor.

    Two disks overlap only while the ground distance is at most
    (z_i + z_j) tan a, so the worst-case 3-D separation is
    sqrt((z_i + z_j)^2 tan^2 a + (z_i - z_j)^2). That bound is convex in
    z_j, hence maximal at a band end; 2 z_i tan a (the equal-altitude case)
    is kept in the max for symmetry with the geometric derivation.
    """
    m.check_band(z_i)
    t = m.tan_a
    cands = [2.0 * z_i * t]
    for zj in (m.z_min, m.z_max):
        cands.append(math.hypot((z_i + zj) * t, z_i - zj))
    return max(cands)


def compute_cell(s: SwarmState, i: int) -> Cell:
    """Dominance cell of node i: clipped sensing disk minus ground lost to
    each overlap neighbor."""
    ni = s.node(i)
    neighbors = neighbor_set(s, i)
    region = clip_disk_to_polygon(s.sensing_disk(i), s.omega)
    for j in sorted(neighbors):
        if region.is_empty:
            break
        nj = s.node(j)
        db = dominance_boundary(s.model, ni, nj)
        if db.kind == "everywhere":
            continue
        if db.kind == "nowhere":
            # i loses the whole overlap
            region = region_boolean("subtract", region, s.sensing_disk(j),
                                    dominance_vs(j))
        elif db.kind == "bisector":
            # with equal altitudes the bisector cannot leave i's disk while
            # inside j's half, so one half-plane cut is exact
            hp = HalfPlane(db.toward_j,
                           db.toward_j[0] * db.midpoint[0]
                           + db.toward_j[1] * db.midpoint[1])
            region = region_boolean("intersect", region, hp, tie_vs(j))
        elif db.i_wins_inside:
            region = region_boolean("intersect", region, db.disk,
                                    dominance_vs(j))
        else:
            # i outranks j outside the dominance disk; it only actually
            # loses points j covers, i.e. the lens C_j intersect disk
            region = region_boolean("subtract", region,
                                    [s.sensing_disk(j), db.disk],
                                    dominance_vs(j))
    return Cell(owner=i, region=region, neighbor_ids=neighbors,
                state_key=s.state_key())


def compute_all_cells(s: SwarmState) -> list[Cell]:
    """Cells for every node, in node order."""
    return [compute_cell(s, n.id) for n in s.nodes]


def degenerate_containments(s: SwarmState) -> list[tuple[int, int]]:
    """Pairs (inner, outer) where one sensing disk contains another.

    A contained lower-altitude disk erases its higher neighbor's quality
    advantage on the whole inner disk; flagged so runs can warn about it.
    """
    out = []
    disks = {n.id: s.sensing_disk(n.id) for n in s.nodes}
    for a in s.nodes:
        for b in s.nodes:
            if a.id >= b.id:
                continue
            da, db_ = disks[a.id], disks[b.id]
            d = dist(da.center, db_.center)
            if d + da.radius <= db_.radius + TOL:
                out.append((a.id, b.id))
            elif d + db_.radius <= da.radius + TOL:
                out.append((b.id, a.id))
    return out
