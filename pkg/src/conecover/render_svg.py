"""Deterministic SVG snapshots of a team state and its tessellation.

Each snapshot shows the world polygon, every node's sensing circle, and the
boundary pieces of every nonempty cell, stroked by piece kind. Node ground
points are drawn as square markers (squares, not circles, so the sensing
circles stay countable in the markup).
"""
from __future__ import annotations

import math

from .geom import Arc, Point2, Segment
from .partition import Cell, SwarmState

_WIDTH = 640.0
_MARGIN = 0.05

_PIECE_COLOR = {
    "own_circle": "#1f77b4",
    "dominance": "#d62728",
    "tie": "#9467bd",
    "world": "#7f7f7f",
}


def render_state(s: SwarmState, cells: list[Cell],
                 caption: str = "") -> str:
    xmin, ymin, xmax, ymax = s.omega.bounding_box()
    for n in s.nodes:
        R = n.z * s.model.tan_a
        xmin = min(xmin, n.q[0] - R)
        ymin = min(ymin, n.q[1] - R)
        xmax = max(xmax, n.q[0] + R)
        ymax = max(ymax, n.q[1] + R)
    span = max(xmax - xmin, ymax - ymin)
    pad = _MARGIN * span
    k = _WIDTH / (xmax - xmin + 2 * pad)
    height = (ymax - ymin + 2 * pad) * k

    def X(x: float) -> float:
        return (x - xmin + pad) * k

    def Y(y: float) -> float:
        # SVG y grows downward; flip about the world bounding box
        return (ymax - y + pad) * k

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {_WIDTH:.0f} {height:.0f}">')
    if caption:
        out.append(f"  <title>{caption}</title>")
    out.append('  <rect width="100%" height="100%" fill="white"/>')

    pts = " ".join(f"{X(v[0]):.3f},{Y(v[1]):.3f}" for v in s.omega.vertices)
    out.append(f'  <polygon points="{pts}" fill="#f4f4f4" stroke="#404040" '
               'stroke-width="1.5"/>')

    for n in s.nodes:
        R = n.z * s.model.tan_a
        out.append(
            f'  <circle class="sensing" cx="{X(n.q[0]):.3f}" '
            f'cy="{Y(n.q[1]):.3f}" r="{R * k:.3f}" fill="none" '
            'stroke="#b0b0b0" stroke-width="0.8" stroke-dasharray="4 3"/>')

    for cell in cells:
        if cell.region.is_empty:
            continue
        out.append(f'  <g class="cell" data-node="{cell.owner}">')
        for piece in cell.region.pieces():
            color = _PIECE_COLOR[piece.label.kind]
            d = _piece_path(piece.geometry, X, Y, k)
            out.append(f'    <path d="{d}" fill="none" stroke="{color}" '
                       'stroke-width="1.6"/>')
        out.append("  </g>")

    for n in s.nodes:
        cx, cy = X(n.q[0]), Y(n.q[1])
        out.append(f'  <rect class="node" x="{cx - 3:.3f}" y="{cy - 3:.3f}" '
                   'width="6" height="6" fill="#111111"/>')
        out.append(f'  <text x="{cx + 5:.3f}" y="{cy - 5:.3f}" '
                   f'font-size="11" font-family="sans-serif">{n.id} '
                   f'(z={n.z:.3f})</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _piece_path(g, X, Y, k: float) -> str:
    if isinstance(g, Segment):
        return (f"M {X(g.a[0]):.3f} {Y(g.a[1]):.3f} "
                f"L {X(g.b[0]):.3f} {Y(g.b[1]):.3f}")
    assert isinstance(g, Arc)
    # a full circle degenerates as a single SVG arc command; halve it
    if abs(g.sweep) > 1.75 * math.pi:
        k_mid = g.k_start + 0.5 * g.sweep
        half = g.split_at_angles([k_mid])
        return " ".join(_piece_path(a, X, Y, k) for a in half)
    start, end = g.start, g.end
    r = g.radius * k
    large = 1 if abs(g.sweep) > math.pi else 0
    # world ccw turns into SVG's negative-angle direction after the y-flip
    flag = 0 if g.sweep > 0 else 1
    return (f"M {X(start[0]):.3f} {Y(start[1]):.3f} "
            f"A {r:.3f} {r:.3f} 0 {large} {flag} "
            f"{X(end[0]):.3f} {Y(end[1]):.3f}")


def write_snapshot(path: str, s: SwarmState, cells: list[Cell],
                   caption: str = "") -> None:
    with open(path, "w") as fh:
        fh.write(render_state(s, cells, caption))
