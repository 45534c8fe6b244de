"""Scenario files: a YAML description of world, sensor, team, and run.

Schema (all lengths in meters, the cone half-angle in degrees):

    name: three-node-demo
    world:
      vertices: [[0, 0], [4, 0], [4, 4], [0, 4]]
    quality:
      variant: uniform            # or paraboloid
      half_angle_deg: 20.0
      z_min: 0.3
      z_max: 2.3
      # edge_ratio: 0.5           # paraboloid only
    nodes:
      - {id: 0, x: 1.7, y: 1.9, z: 0.6}
    sim:
      steps: 4000
      dt: 0.01                    # optional, with the defaults shown
      record_every: 1
      convergence_tol: 1.0e-6
      alpha_q: 1.0
      alpha_z: 1.0
      boundary_order: 16
      grid_resolution: 200
      seed: 0
    output_dir: out/three-node-demo   # optional

Structural problems (missing keys, wrong types, unparseable file) raise
ParseError; semantic ones (altitude outside the band, node outside the
world, duplicate ids) raise ValidationError. Both name the offending field.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import yaml

from .control import Gains, QuadratureConfig
from .geom import ConvexPolygon, Point2
from .partition import NodeState, SwarmState
from .quality import QualityModel
from .sim import SimConfig


class ParseError(ValueError):
    """Scenario file is structurally unusable."""


class ValidationError(ValueError):
    """Scenario file parsed but violates a model constraint."""


class Scenario(NamedTuple):
    state: SwarmState
    sim: SimConfig
    name: str
    output_dir: str


_SIM_DEFAULTS = {
    "dt": 0.01,
    "record_every": 1,
    "convergence_tol": 1e-6,
    "alpha_q": 1.0,
    "alpha_z": 1.0,
    "boundary_order": 16,
    "grid_resolution": 200,
    "seed": 0,
}


def parse_scenario(path: str) -> Scenario:
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except OSError as e:
        raise ParseError(f"cannot read scenario {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ParseError(f"malformed YAML in {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be a mapping")

    name = _get(raw, "name", str)
    world = _get(raw, "world", dict)
    verts = _get(world, "vertices", list, field="world.vertices")
    if len(verts) < 3:
        raise ParseError(f"world.vertices: need at least 3, got {len(verts)}")
    pts = []
    for k, v in enumerate(verts):
        if (not isinstance(v, (list, tuple)) or len(v) != 2
                or not all(isinstance(c, (int, float)) for c in v)):
            raise ParseError(f"world.vertices[{k}]: expected [x, y] numbers")
        pts.append(Point2(float(v[0]), float(v[1])))
    try:
        omega = ConvexPolygon(tuple(pts))
    except ValueError as e:
        raise ValidationError(f"world.vertices: {e}") from e

    q = _get(raw, "quality", dict)
    variant = _get(q, "variant", str, field="quality.variant")
    half_deg = _num(q, "half_angle_deg", field="quality.half_angle_deg")
    z_min = _num(q, "z_min", field="quality.z_min")
    z_max = _num(q, "z_max", field="quality.z_max")
    edge = q.get("edge_ratio")
    if edge is not None and not isinstance(edge, (int, float)):
        raise ParseError(f"quality.edge_ratio: expected a number, got {edge!r}")
    known_q = {"variant", "half_angle_deg", "z_min", "z_max", "edge_ratio"}
    for key in q:
        if key not in known_q:
            raise ParseError(f"quality.{key}: unknown key")
    try:
        model = QualityModel(math.radians(half_deg), z_min, z_max,
                             variant, None if edge is None else float(edge))
    except ValueError as e:
        raise ValidationError(f"quality: {e}") from e

    rows = _get(raw, "nodes", list)
    if not rows:
        raise ValidationError("nodes: scenario needs at least one node")
    nodes = []
    seen = set()
    for k, row in enumerate(rows):
        if not isinstance(row, dict):
            raise ParseError(f"nodes[{k}]: expected a mapping")
        nid = _get(row, "id", int, field=f"nodes[{k}].id")
        x = _num(row, "x", field=f"nodes[{k}].x")
        y = _num(row, "y", field=f"nodes[{k}].y")
        z = _num(row, "z", field=f"nodes[{k}].z")
        if nid in seen:
            raise ValidationError(f"nodes[{k}].id: duplicate id {nid}")
        seen.add(nid)
        if not (model.z_min <= z <= model.z_max):
            raise ValidationError(
                f"nodes[{k}].z: {z} outside altitude band "
                f"[{model.z_min}, {model.z_max}]")
        p = Point2(x, y)
        if not omega.contains(p):
            raise ValidationError(
                f"nodes[{k}]: ground point ({x}, {y}) outside the world "
                "polygon")
        nodes.append(NodeState(nid, p, z))

    sim_raw = dict(raw.get("sim") or {})
    if not isinstance(raw.get("sim", {}), dict):
        raise ParseError("sim: expected a mapping")
    steps = _get(sim_raw, "steps", int, field="sim.steps")
    vals = dict(_SIM_DEFAULTS)
    for key, val in sim_raw.items():
        if key == "steps":
            continue
        if key not in vals:
            raise ParseError(f"sim.{key}: unknown key")
        if not isinstance(val, (int, float)):
            raise ParseError(f"sim.{key}: expected a number, got {val!r}")
        vals[key] = val
    try:
        cfg = SimConfig(
            steps=steps,
            dt=float(vals["dt"]),
            gains=Gains(float(vals["alpha_q"]), float(vals["alpha_z"])),
            quad=QuadratureConfig(int(vals["boundary_order"]),
                                  int(vals["grid_resolution"])),
            convergence_tol=float(vals["convergence_tol"]),
            record_every=int(vals["record_every"]),
            seed=int(vals["seed"]),
        )
    except ValueError as e:
        raise ValidationError(f"sim: {e}") from e

    out_dir = raw.get("output_dir", f"out/{name}")
    if not isinstance(out_dir, str):
        raise ParseError(f"output_dir: expected a string, got {out_dir!r}")
    known_top = {"name", "world", "quality", "nodes", "sim", "output_dir"}
    for key in raw:
        if key not in known_top:
            raise ParseError(f"{key}: unknown top-level key")

    try:
        state = SwarmState(tuple(nodes), model, omega)
    except ValueError as e:
        raise ValidationError(f"nodes: {e}") from e
    return Scenario(state, cfg, name, out_dir)


def _get(d: dict, key: str, typ: type, field: str | None = None):
    field = field or key
    if key not in d:
        raise ParseError(f"{field}: missing")
    v = d[key]
    if typ is int and isinstance(v, bool):
        raise ParseError(f"{field}: expected {typ.__name__}, got bool")
    if not isinstance(v, typ):
        raise ParseError(f"{field}: expected {typ.__name__}, got {v!r}")
    return v


def _num(d: dict, key: str, field: str) -> float:
    if key not in d:
        raise ParseError(f"{field}: missing")
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{field}: expected a number, got {v!r}")
    return float(v)
