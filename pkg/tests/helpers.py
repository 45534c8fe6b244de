"""Shared test fixtures: Monte Carlo area oracles and config generators."""
from __future__ import annotations

import math

import numpy as np

from conecover.geom import ArcRegion, ConvexPolygon, Point2
from conecover.geom.measure import points_in_region
from conecover.partition import NodeState, SwarmState
from conecover.quality import QualityModel


def lens_area(r1: float, r2: float, d: float) -> float:
    """Closed-form area of the intersection of two disks."""
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        r = min(r1, r2)
        return math.pi * r * r
    a1 = math.acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1))
    a2 = math.acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2))
    return (r1 * r1 * (a1 - math.sin(2 * a1) / 2)
            + r2 * r2 * (a2 - math.sin(2 * a2) / 2))


def mc_area(region: ArcRegion, seed: int, n: int = 100_000) -> tuple[float, float]:
    """Monte Carlo area of a region: (estimate, one sigma)."""
    if region.is_empty:
        return 0.0, 0.0
    xmin, ymin, xmax, ymax = region.bounding_box()
    box = (xmax - xmin) * (ymax - ymin)
    rng = np.random.default_rng(seed)
    xs = rng.uniform(xmin, xmax, n)
    ys = rng.uniform(ymin, ymax, n)
    hits = points_in_region(region, xs, ys)
    p = float(np.mean(hits))
    sigma = box * math.sqrt(max(p * (1.0 - p), 1e-12) / n)
    return box * p, sigma


def mc_covered_area(s: SwarmState, seed: int,
                    n: int = 100_000) -> tuple[float, float]:
    """Monte Carlo area of (union of sensing disks) ∩ world polygon."""
    xmin, ymin, xmax, ymax = s.omega.bounding_box()
    box = (xmax - xmin) * (ymax - ymin)
    rng = np.random.default_rng(seed)
    xs = rng.uniform(xmin, xmax, n)
    ys = rng.uniform(ymin, ymax, n)
    inside = np.ones(n, dtype=bool)
    for hp in s.omega.halfplanes():
        inside &= hp.normal[0] * xs + hp.normal[1] * ys - hp.offset <= 0.0
    covered = np.zeros(n, dtype=bool)
    for node in s.nodes:
        R = node.z * s.model.tan_a
        covered |= ((xs - node.q[0]) ** 2 + (ys - node.q[1]) ** 2) <= R * R
    hits = inside & covered
    p = float(np.mean(hits))
    sigma = box * math.sqrt(max(p * (1.0 - p), 1e-12) / n)
    return box * p, sigma


_SQUARE4 = ConvexPolygon(((0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)))


def uniform_model(a_deg: float = 20.0) -> QualityModel:
    return QualityModel(math.radians(a_deg), 0.3, 2.3)


def paraboloid_model(a_deg: float = 20.0, b: float = 0.5) -> QualityModel:
    return QualityModel(math.radians(a_deg), 0.3, 2.3, "paraboloid", b)


def random_team(rng: np.random.Generator, model: QualityModel,
                n_nodes: int = 3, omega: ConvexPolygon = _SQUARE4,
                z_sep: float = 0.05, tangency_margin: float = 0.02,
                require_overlap: bool = False) -> SwarmState:
    """Random non-degenerate team.

    Altitudes are pairwise separated by at least z_sep, and no disk pair
    sits within tangency_margin of touching, nesting, or coinciding, so
    the cell topology is stable under small perturbations (finite
    difference probes included).
    """
    xmin, ymin, xmax, ymax = omega.bounding_box()
    for _ in range(10_000):
        zs = rng.uniform(model.z_min + 0.1, model.z_max - 0.1, n_nodes)
        if n_nodes > 1 and np.min(np.diff(np.sort(zs))) < z_sep:
            continue
        margin = 0.15 + float(np.max(zs)) * model.tan_a
        qs = np.column_stack([
            rng.uniform(xmin + margin, xmax - margin, n_nodes),
            rng.uniform(ymin + margin, ymax - margin, n_nodes)])
        if not all(omega.contains(Point2(*q)) for q in qs):
            continue
        ok = True
        any_overlap = n_nodes == 1
        for i in range(n_nodes):
            for j in range(i + 1, n_nodes):
                d = math.hypot(qs[i, 0] - qs[j, 0], qs[i, 1] - qs[j, 1])
                ri = zs[i] * model.tan_a
                rj = zs[j] * model.tan_a
                if (abs(d - (ri + rj)) < tangency_margin
                        or d < abs(ri - rj) + tangency_margin):
                    ok = False
                if d < ri + rj - tangency_margin:
                    any_overlap = True
        if not ok or (require_overlap and not any_overlap):
            continue
        nodes = tuple(NodeState(i, Point2(qs[i, 0], qs[i, 1]), float(zs[i]))
                      for i in range(n_nodes))
        return SwarmState(nodes, model, omega)
    raise RuntimeError("could not generate a non-degenerate team")
