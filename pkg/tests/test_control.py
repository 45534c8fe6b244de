"""Control inputs: Jacobians, closed-form anchors, stable/optimal altitudes."""
import math

import numpy as np
import pytest

from conecover.control import (Gains, QuadratureConfig, arc_jacobian,
                               control_input, full_disk_altitude_input,
                               full_disk_coverage, optimal_altitude,
                               stable_altitude)
from conecover.geom import ConvexPolygon, Point2
from conecover.geom.primitives import OWN_CIRCLE, WORLD, Label
from conecover.partition import NodeState, SwarmState, compute_all_cells
from conecover.quality import QualityModel

from helpers import paraboloid_model, uniform_model

SQ = ConvexPolygon(((0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)))

Z_OPT = 1.3590225767406015  # root of 3d^2 + 2 z_min d - D^2 for [0.3, 2.3]


def team(nodes, model=None, omega=SQ):
    return SwarmState(tuple(nodes), model or uniform_model(), omega)


def test_arc_jacobian_by_label():
    m = uniform_model()
    J, jz = arc_jacobian(m, OWN_CIRCLE)
    assert np.allclose(J, np.eye(2))
    assert jz == pytest.approx(m.tan_a)
    for label in (WORLD, Label("dominance", 1), Label("tie", 1)):
        J, jz = arc_jacobian(m, label)
        assert np.allclose(J, 0.0)
        assert jz == 0.0


def test_isolated_node_closed_form():
    m = uniform_model()
    s = team([NodeState(0, Point2(2.0, 2.0), 1.3)])
    cells = compute_all_cells(s)
    u = control_input(s, 0, cells)
    assert math.hypot(u.u_q[0], u.u_q[1]) < 1e-12
    assert u.u_z == pytest.approx(full_disk_altitude_input(m, 1.3), abs=1e-12)
    # boundary growth beats quality decay below the optimum
    assert u.u_z > 0


def test_full_disk_input_closed_form_value():
    m = uniform_model()
    # tan(a) * p * 2 pi R + pi R^2 * p'
    z = 1.3
    R = z * m.tan_a
    want = m.tan_a * m.peak(z) * 2 * math.pi * R \
        + math.pi * R * R * m.peak_grad(z)
    assert full_disk_altitude_input(m, z) == pytest.approx(want, rel=1e-13)
    assert want == pytest.approx(0.08115517535099193, abs=1e-12)


def test_isolated_node_above_optimum_descends():
    m = uniform_model()
    s = team([NodeState(0, Point2(2.0, 2.0), 1.8)])
    u = control_input(s, 0, compute_all_cells(s))
    assert u.u_z < 0


def test_input_vanishes_at_optimal_altitude():
    m = uniform_model()
    z = optimal_altitude(m)
    s = team([NodeState(0, Point2(2.0, 2.0), z)])
    u = control_input(s, 0, compute_all_cells(s))
    assert abs(u.u_z) < 1e-9
    assert math.hypot(u.u_q[0], u.u_q[1]) < 1e-12


def test_optimal_altitude_value_and_cone_invariance():
    m20 = uniform_model(20.0)
    m35 = uniform_model(35.0)
    z20 = optimal_altitude(m20)
    z35 = optimal_altitude(m35)
    assert z20 == pytest.approx(Z_OPT, abs=1e-10)
    assert abs(z20 - z35) < 1e-8
    # closed-form root of 3d^2 + 2 z_min d - D^2 = 0
    zm, D = 0.3, 2.0
    d = (-zm + math.sqrt(zm * zm + 3 * D * D)) / 3.0
    assert z20 == pytest.approx(zm + d, abs=1e-10)


def test_optimal_altitude_same_for_paraboloid():
    # the paraboloid input factors as (1 + b)/2 times the uniform one, so
    # the interior root does not move with b
    for b in (0.2, 0.5, 0.9):
        zp = optimal_altitude(paraboloid_model(b=b))
        assert zp == pytest.approx(Z_OPT, abs=1e-9)


def test_stable_equals_optimal_when_isolated():
    m = uniform_model()
    s = team([NodeState(0, Point2(2.0, 2.0), 1.0)])
    assert stable_altitude(s, 0) == pytest.approx(Z_OPT, abs=1e-9)


def test_crowding_lowers_stable_altitude():
    m = uniform_model()
    s = team([NodeState(0, Point2(1.9, 2.0), 1.2),
              NodeState(1, Point2(2.4, 2.0), 0.9)], m)
    z_stb = stable_altitude(s, 0)
    assert z_stb < Z_OPT - 1e-4


def test_overlapping_pair_repels():
    m = uniform_model()
    s = team([NodeState(0, Point2(1.8, 2.0), 1.2),
              NodeState(1, Point2(2.3, 2.0), 1.0)], m)
    cells = compute_all_cells(s)
    u0 = control_input(s, 0, cells)
    u1 = control_input(s, 1, cells)
    assert u0.u_q[0] < -1e-4   # pushed west, away from node 1
    assert u1.u_q[0] > 1e-4    # pushed east
    assert abs(u0.u_q[1]) < 1e-12
    assert abs(u1.u_q[1]) < 1e-12


def test_empty_cell_zero_input():
    m = uniform_model()
    hub = NodeState(0, Point2(2.0, 2.0), 1.0)
    spokes = [NodeState(k + 1, Point2(2.0 + dx, 2.0 + dy), 0.95)
              for k, (dx, dy) in enumerate(
                  ((0.15, 0.15), (-0.15, 0.15), (-0.15, -0.15), (0.15, -0.15)))]
    s = team([hub] + spokes, m)
    cells = compute_all_cells(s)
    assert cells[0].region.is_empty
    u = control_input(s, 0, cells)
    assert u.u_q == (0.0, 0.0)
    assert u.u_z == 0.0


def test_stationary_at_band_top():
    # peak and its derivative both vanish at z_max: no input
    m = uniform_model()
    s = team([NodeState(0, Point2(2.0, 2.0), m.z_max)])
    u = control_input(s, 0, compute_all_cells(s))
    assert abs(u.u_z) < 1e-14
    assert math.hypot(u.u_q[0], u.u_q[1]) < 1e-14


def test_gains_scale_inputs():
    m = uniform_model()
    s = team([NodeState(0, Point2(1.8, 2.0), 1.2),
              NodeState(1, Point2(2.3, 2.0), 1.0)], m)
    cells = compute_all_cells(s)
    u1 = control_input(s, 0, cells, Gains(1.0, 1.0))
    u2 = control_input(s, 0, cells, Gains(2.5, 0.5))
    assert u2.u_q[0] == pytest.approx(2.5 * u1.u_q[0], rel=1e-12)
    assert u2.u_z == pytest.approx(0.5 * u1.u_z, rel=1e-12)


def test_world_boundary_pins_position_input():
    # a lone node whose disk pokes past the wall: the wall piece contributes
    # nothing, so the position input comes only from the visible arc, which
    # pushes the node inward (toward uncovered ground)
    m = uniform_model()
    s = team([NodeState(0, Point2(0.2, 2.0), 1.3)])
    u = control_input(s, 0, compute_all_cells(s))
    assert u.u_q[0] > 1e-3
    assert abs(u.u_q[1]) < 1e-12
    # and H gains by moving east: verified against finite differences in
    # the simulation-level gradient audit
