"""Distributed visual coverage of a convex region by a UAV team.

Each node carries a downward-facing conic sensor whose ground footprint is
a disk of radius z * tan(a). The package tessellates the covered part of
the world by coverage quality, evaluates the team criterion H, and drives
positions and altitudes up its gradient:

- geom: circular-arc region kernel (booleans, areas, moments, integrals)
- quality: per-node coverage quality models and dominance boundaries
- partition: quality-based cells and neighbor bookkeeping
- control: boundary + interior gradient control inputs
- sim: criterion evaluation, Euler integration, trajectory logging
- scenario / render_svg / cli: YAML scenarios, SVG snapshots, entry point
"""

from .control import (ControlInput, Gains, NoInteriorRoot, QuadratureConfig,
                      StaleCells, control_input, full_disk_coverage,
                      optimal_altitude, stable_altitude)
from .geom import (Arc, ArcRegion, ConvexPolygon, DegenerateOverlap, Disk,
                   GeometryError, HalfPlane, Point2, Segment)
from .partition import (Cell, NodeState, SwarmState, compute_all_cells,
                        compute_cell, comm_radius, degenerate_containments,
                        neighbor_set)
from .quality import (AltitudeOutOfBand, DominanceBoundary, QualityModel,
                      dominance_boundary, eval_quality, quality_grad_q,
                      quality_grad_z)
from .scenario import ParseError, Scenario, ValidationError, parse_scenario
from .sim import (SimConfig, TrajectoryLog, TrajectoryRecord,
                  criterion_consistency_bound, evaluate_criterion,
                  evaluate_criterion_max_form, gradient_check, h_opt, run,
                  step)

__version__ = "0.1.0"

__all__ = [
    "AltitudeOutOfBand", "Arc", "ArcRegion", "Cell", "ControlInput",
    "ConvexPolygon", "DegenerateOverlap", "Disk", "DominanceBoundary",
    "Gains", "GeometryError", "HalfPlane", "NodeState", "NoInteriorRoot",
    "ParseError", "Point2", "QuadratureConfig", "QualityModel", "Scenario",
    "Segment", "SimConfig", "StaleCells", "SwarmState", "TrajectoryLog",
    "TrajectoryRecord", "ValidationError", "comm_radius",
    "compute_all_cells", "compute_cell", "control_input",
    "criterion_consistency_bound", "degenerate_containments",
    "dominance_boundary", "eval_quality", "evaluate_criterion",
    "evaluate_criterion_max_form", "full_disk_coverage", "gradient_check",
    "h_opt", "neighbor_set", "optimal_altitude", "parse_scenario",
    "quality_grad_q", "quality_grad_z", "run", "stable_altitude", "step",
    "__version__",
]
