"""Team simulation: criterion evaluation, Euler integration, logging.

The coverage criterion H integrates the best available quality over the
world polygon. Cell-wise it reduces to exact areas (uniform model) or exact
low-order moments (paraboloid model); the partition-free "max over nodes"
form is also provided on a grid as an independent cross-check.
"""
from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .control import (ControlInput, Gains, QuadratureConfig, StaleCells,
                      control_input, full_disk_coverage, optimal_altitude)
from .geom import ConvexPolygon, Point2
from .geom.measure import region_area, region_moments
from .partition import (Cell, NodeState, SwarmState, compute_all_cells,
                        degenerate_containments)
from .quality import QualityModel

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimConfig:
    """Forward-Euler integration settings."""

    steps: int
    dt: float = 0.01
    gains: Gains = field(default_factory=Gains)
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    convergence_tol: float = 1e-6
    record_every: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.steps < 0 or self.dt <= 0:
            raise ValueError("need steps >= 0 and dt > 0")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


# altitude clamp backstop; must never trigger in a healthy run
_Z_EPS = 1e-9


def evaluate_criterion(s: SwarmState, cells: list[Cell]) -> float:
    """Coverage criterion from the cells (exact areas/moments)."""
    key = s.state_key()
    total = 0.0
    m = s.model
    for cell in cells:
        if cell.state_key != key:
            raise StaleCells(f"cell of node {cell.owner} is stale")
        if cell.region.is_empty:
            continue
        node = s.node(cell.owner)
        p = m.peak(node.z)
        if m.variant == "uniform":
            total += p * region_area(cell.region)
        else:
            mom = region_moments(cell.region, node.q)
            R2 = (node.z * m.tan_a) ** 2
            total += p * (mom.area - (1.0 - m.edge_ratio) * mom.m2 / R2)
    return total


def evaluate_criterion_max_form(s: SwarmState, resolution: int = 200) -> float:
    """Partition-free H: grid quadrature of max_i f_i over the world polygon.

    Cells of the grid crossed by the polygon boundary or by any sensing
    circle are refined once into 4x4 subcells.
    """
    omega = s.omega
    xmin, ymin, xmax, ymax = omega.bounding_box()
    xs = np.linspace(xmin, xmax, resolution + 1)
    ys = np.linspace(ymin, ymax, resolution + 1)
    hx = xs[1] - xs[0]
    hy = ys[1] - ys[0]
    gx, gy = np.meshgrid(xs, ys, indexing="ij")

    hps = omega.halfplanes()

    def in_omega(px, py):
        ok = np.ones_like(px, dtype=bool)
        for hp in hps:
            ok &= hp.normal[0] * px + hp.normal[1] * py - hp.offset <= 0.0
        return ok

    def fmax(px, py):
        best = np.zeros_like(px)
        m = s.model
        for n in s.nodes:
            R = n.z * m.tan_a
            rho2 = (px - n.q[0]) ** 2 + (py - n.q[1]) ** 2
            inside = rho2 <= R * R
            p = m.peak(n.z)
            if m.variant == "uniform":
                vals = np.where(inside, p, 0.0)
            else:
                vals = np.where(
                    inside,
                    (1.0 - (1.0 - m.edge_ratio) * rho2 / (R * R)) * p, 0.0)
            np.maximum(best, vals, out=best)
        return best

    corner_om = in_omega(gx, gy)
    # straddle flags: polygon membership or any disk membership changes
    # across a cell's corners
    change = _corner_change(corner_om)
    for n in s.nodes:
        R = n.z * s.model.tan_a
        mask = ((gx - n.q[0]) ** 2 + (gy - n.q[1]) ** 2) <= R * R
        change |= _corner_change(mask)

    cx = 0.5 * (xs[:-1] + xs[1:])
    cy = 0.5 * (ys[:-1] + ys[1:])
    ccx, ccy = np.meshgrid(cx, cy, indexing="ij")
    smooth = ~change & _corner_all(corner_om)
    total = float(np.sum(fmax(ccx[smooth], ccy[smooth]))) * hx * hy

    si, sj = np.nonzero(change)
    if si.size:
        offs = (np.arange(4) + 0.5) / 4.0
        sub_x = xs[si][:, None, None] + offs[None, :, None] * hx
        sub_y = ys[sj][:, None, None] + offs[None, None, :] * hy
        sub_x, sub_y = np.broadcast_arrays(sub_x, sub_y)
        vals = fmax(sub_x, sub_y)
        vals = np.where(in_omega(sub_x, sub_y), vals, 0.0)
        total += float(np.sum(vals)) * (hx * hy / 16.0)
    return total


def _corner_change(mask: np.ndarray) -> np.ndarray:
    a = mask[:-1, :-1]
    b = mask[1:, :-1]
    c = mask[:-1, 1:]
    d = mask[1:, 1:]
    return (a != b) | (a != c) | (a != d)


def _corner_all(mask: np.ndarray) -> np.ndarray:
    return mask[:-1, :-1] & mask[1:, :-1] & mask[:-1, 1:] & mask[1:, 1:]


def criterion_consistency_bound(s: SwarmState, resolution: int) -> float:
    """Conservative bound on the grid error of the max-form criterion:
    peak quality times total discontinuity length times one grid step."""
    xmin, ymin, xmax, ymax = s.omega.bounding_box()
    h = max(xmax - xmin, ymax - ymin) / resolution
    L = s.omega.perimeter()
    f_max = 0.0
    for n in s.nodes:
        L += 2.0 * math.pi * n.z * s.model.tan_a
        f_max = max(f_max, s.model.peak(n.z))
    return f_max * L * h + 1e-12


def h_opt(m: QualityModel, n: int) -> float:
    """Criterion value of n ideally placed nodes: disjoint full disks at the
    optimal altitude (an upper bound used for normalization)."""
    if n <= 0:
        return 0.0
    return n * full_disk_coverage(m, optimal_altitude(m))


# ---------------------------------------------------------------------------
# trajectory logging

@dataclass(frozen=True)
class TrajectoryRecord:
    step: int
    t: float
    nodes: tuple[NodeState, ...]
    inputs: tuple[tuple[float, float, float], ...]
    H: float
    H_max_form: float
    covered_area_ratio: float


@dataclass
class TrajectoryLog:
    model: QualityModel
    omega: ConvexPolygon
    records: list[TrajectoryRecord] = field(default_factory=list)
    h_opt: float = 0.0
    converged: bool = False
    clamp_count: int = 0

    def final_state(self) -> SwarmState:
        return SwarmState(self.records[-1].nodes, self.model, self.omega)

    def altitude_trace(self, node_id: int) -> list[float]:
        out = []
        for r in self.records:
            for n in r.nodes:
                if n.id == node_id:
                    out.append(n.z)
        return out

    def to_csv(self, path: str) -> None:
        """One row per node per recorded step."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "t", "id", "x", "y", "z", "u_x", "u_y", "u_z"])
            for r in self.records:
                for n, u in zip(r.nodes, r.inputs):
                    w.writerow([r.step, _fmt(r.t), n.id, _fmt(n.q[0]),
                                _fmt(n.q[1]), _fmt(n.z), _fmt(u[0]),
                                _fmt(u[1]), _fmt(u[2])])

    def metrics(self) -> dict:
        timeline = []
        for r in self.records:
            timeline.append({
                "t": r.t,
                "H": r.H,
                "H_max_form": r.H_max_form,
                "H_over_Hopt": r.H / self.h_opt if self.h_opt > 0 else 0.0,
                "covered_area_ratio": r.covered_area_ratio,
            })
        return {
            "h_opt": self.h_opt,
            "converged": self.converged,
            "clamp_count": self.clamp_count,
            "steps_recorded": len(self.records),
            "final_step": self.records[-1].step if self.records else 0,
            "timeline": timeline,
        }

    def write_metrics_json(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.metrics(), fh, indent=1, sort_keys=True)
            fh.write("\n")


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# integration

def _advance(s: SwarmState, inputs: list[ControlInput],
             dt: float) -> tuple[SwarmState, int]:
    """One forward-Euler step: ground points projected back into the world
    polygon, altitudes clamped to the open band (backstop only)."""
    m = s.model
    clamps = 0
    new_nodes = []
    for n, u in zip(s.nodes, inputs):
        q = Point2(n.q[0] + dt * u.u_q[0], n.q[1] + dt * u.u_q[1])
        q = s.omega.project(q)
        z = n.z + dt * u.u_z
        z_lo = m.z_min + _Z_EPS
        z_hi = m.z_max - _Z_EPS
        if z < z_lo:
            z = z_lo
            clamps += 1
        elif z > z_hi:
            z = z_hi
            clamps += 1
        new_nodes.append(NodeState(n.id, q, z))
    return SwarmState(tuple(new_nodes), m, s.omega), clamps


def step(s: SwarmState, cfg: SimConfig) -> SwarmState:
    """Single step: fresh cells, fresh inputs, one Euler update."""
    cells = compute_all_cells(s)
    inputs = [control_input(s, n.id, cells, cfg.gains, cfg.quad)
              for n in s.nodes]
    out, _ = _advance(s, inputs, cfg.dt)
    return out


def run(initial: SwarmState, cfg: SimConfig) -> TrajectoryLog:
    """Integrate until the largest input norm drops below convergence_tol
    or cfg.steps Euler steps have been taken. Deterministic."""
    for inner, outer in degenerate_containments(initial):
        log.warning("sensing disk of node %d starts inside node %d's disk",
                    inner, outer)
    traj = TrajectoryLog(model=initial.model, omega=initial.omega,
                         h_opt=h_opt(initial.model, len(initial.nodes)))
    omega_area = initial.omega.area()
    s = initial
    k = 0
    while True:
        cells = compute_all_cells(s)
        inputs = [control_input(s, n.id, cells, cfg.gains, cfg.quad)
                  for n in s.nodes]
        max_norm = 0.0
        for u in inputs:
            max_norm = max(max_norm, math.sqrt(
                u.u_q[0] ** 2 + u.u_q[1] ** 2 + u.u_z ** 2))
        converged = max_norm < cfg.convergence_tol
        last = converged or k >= cfg.steps
        if k % cfg.record_every == 0 or last:
            covered = sum(region_area(c.region) for c in cells)
            traj.records.append(TrajectoryRecord(
                step=k,
                t=k * cfg.dt,
                nodes=s.nodes,
                inputs=tuple((float(u.u_q[0]), float(u.u_q[1]), float(u.u_z))
                             for u in inputs),
                H=evaluate_criterion(s, cells),
                H_max_form=evaluate_criterion_max_form(
                    s, cfg.quad.grid_resolution),
                covered_area_ratio=covered / omega_area,
            ))
        if last:
            traj.converged = converged
            break
        s, clamps = _advance(s, inputs, cfg.dt)
        traj.clamp_count += clamps
        k += 1
    return traj


# ---------------------------------------------------------------------------
# gradient audit

def gradient_check(s: SwarmState, gains: Gains = Gains(),
                   quad: QuadratureConfig = QuadratureConfig(),
                   h: float = 1e-5) -> tuple[float, list[dict]]:
    """Compare the analytic inputs against central differences of H.

    Returns (max relative error, per-coordinate rows). The comparison is
    made with unit gains; denominators are floored so that coordinates whose
    true gradient is zero only see finite-difference noise.
    """
    cells = compute_all_cells(s)
    unit_gains = Gains(1.0, 1.0)
    analytic = {}
    for n in s.nodes:
        u = control_input(s, n.id, cells, unit_gains, quad)
        analytic[n.id] = (u.u_q[0], u.u_q[1], u.u_z)

    def H_of(state: SwarmState) -> float:
        return evaluate_criterion(state, compute_all_cells(state))

    rows = []
    fds = {}
    for n in s.nodes:
        vals = []
        for coord in range(3):
            sp = _perturbed(s, n.id, coord, +h)
            sm = _perturbed(s, n.id, coord, -h)
            vals.append((H_of(sp) - H_of(sm)) / (2.0 * h))
        fds[n.id] = vals
    scale = max((abs(v) for vv in fds.values() for v in vv), default=0.0)
    floor = 1e-6 * max(1.0, scale)
    worst = 0.0
    for n in s.nodes:
        for coord, name in enumerate(("x", "y", "z")):
            a = analytic[n.id][coord]
            fd = fds[n.id][coord]
            rel = abs(a - fd) / max(abs(fd), floor)
            worst = max(worst, rel)
            rows.append({"node": n.id, "coord": name, "analytic": a,
                         "fd": fd, "rel_err": rel})
    return worst, rows


def _perturbed(s: SwarmState, i: int, coord: int, delta: float) -> SwarmState:
    n = s.node(i)
    if coord == 0:
        return s.with_node(i, q=Point2(n.q[0] + delta, n.q[1]))
    if coord == 1:
        return s.with_node(i, q=Point2(n.q[0], n.q[1] + delta))
    return s.with_node(i, z=n.z + delta)
