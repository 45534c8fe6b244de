"""Exact-as-practical planar geometry kernel: disks, convex polygons, and
regions bounded by labeled circular arcs and segments."""
from .primitives import (ANG_TOL, Arc, ArcRegion, BoundaryPiece, ConvexPolygon,
                         DegenerateOverlap, Disk, HalfPlane, Label, Loop,
                         OWN_CIRCLE, Point2, Segment, TOL, WORLD,
                         circle_circle_intersection, dominance_vs,
                         full_disk_region, tie_vs, wrap_angle)
from .boolean import Cutter, clip_disk_to_polygon, region_boolean
from .measure import (GeometryError, Moments, boundary_line_integral,
                      distance_to_boundary, gauss_legendre, point_in_region,
                      points_in_region, region_area, region_area_integral,
                      region_moments)

__all__ = [
    "ANG_TOL", "Arc", "ArcRegion", "BoundaryPiece", "ConvexPolygon", "Cutter",
    "DegenerateOverlap", "Disk", "GeometryError", "HalfPlane", "Label", "Loop",
    "Moments", "OWN_CIRCLE", "Point2", "Segment", "TOL", "WORLD",
    "boundary_line_integral", "circle_circle_intersection",
    "clip_disk_to_polygon", "distance_to_boundary", "dominance_vs",
    "full_disk_region", "gauss_legendre", "point_in_region",
    "points_in_region", "region_area", "region_area_integral",
    "region_boolean", "region_moments", "tie_vs", "wrap_angle",
]
