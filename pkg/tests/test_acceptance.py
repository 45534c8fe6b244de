"""Acceptance gate: nine end-to-end checks, one printed pass/fail line each.

Run with `pytest tests/test_acceptance.py -s` to see the lines; each check
also asserts, so a plain pytest run fails loudly on any regression.
"""
import math
import os
import time

import numpy as np
import pytest

from conecover.control import optimal_altitude
from conecover.geom import Disk, Label, Point2, full_disk_region, region_area, region_boolean
from conecover.partition import NodeState, compute_all_cells
from conecover.quality import dominance_boundary
from conecover.scenario import parse_scenario
from conecover.sim import (criterion_consistency_bound, evaluate_criterion,
                           evaluate_criterion_max_form, gradient_check, run)

from helpers import (lens_area, mc_area, mc_covered_area, paraboloid_model,
                     random_team, uniform_model)

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CS1 = os.path.join(REPO, "scenarios", "case_study_1.yaml")
CS2 = os.path.join(REPO, "scenarios", "case_study_2.yaml")


def _line(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} -- {detail}")


@pytest.fixture(scope="session")
def case1():
    sc = parse_scenario(CS1)
    t0 = time.perf_counter()
    log = run(sc.state, sc.sim)
    return sc, log, time.perf_counter() - t0


@pytest.fixture(scope="session")
def case2():
    sc = parse_scenario(CS2)
    t0 = time.perf_counter()
    log = run(sc.state, sc.sim)
    return sc, log, time.perf_counter() - t0


def test_criterion_1_optimal_altitude():
    t0 = time.perf_counter()
    m20 = uniform_model(20.0)
    m35 = uniform_model(35.0)
    z20 = optimal_altitude(m20)
    z35 = optimal_altitude(m35)
    # closed-form root of 3 d^2 + 2 z_min d - D^2 = 0 with d = z - z_min
    big_d = m20.z_max - m20.z_min
    root = m20.z_min + (-m20.z_min
                        + math.sqrt(m20.z_min ** 2 + 3.0 * big_d ** 2)) / 3.0
    elapsed = time.perf_counter() - t0
    cone_diff = abs(z20 - z35)
    ok = (abs(z20 - 1.35902) <= 1e-4 and abs(z20 - root) <= 1e-4
          and cone_diff < 1e-8 and elapsed < 1.0)
    _line(1, ok, f"z_opt={z20:.7f} root={root:.7f} "
                 f"cone_diff={cone_diff:.1e} t={elapsed:.3f}s")
    assert abs(z20 - 1.35902) <= 1e-4
    assert abs(z20 - root) <= 1e-4
    assert cone_diff < 1e-8
    assert elapsed < 1.0


def test_criterion_2_gradient_fidelity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for k in range(20):
        model = uniform_model() if k % 2 == 0 else paraboloid_model()
        s = random_team(rng, model, n_nodes=3, require_overlap=True)
        w, _rows = gradient_check(s)
        worst = max(worst, w)
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-3 and elapsed < 120.0
    _line(2, ok, f"worst_rel_err={worst:.2e} over 20 configs t={elapsed:.1f}s")
    assert worst < 1e-3
    assert elapsed < 120.0


def test_criterion_3_clustered_team_reaches_optimum(case1):
    sc, log, elapsed = case1
    z_opt = optimal_altitude(sc.state.model)
    final = log.final_state()
    z_err = max(abs(n.z - z_opt) for n in final.nodes)
    ratio = log.records[-1].H / log.h_opt
    ok = (log.converged and z_err <= 1e-3 and ratio >= 0.99
          and elapsed < 300.0)
    _line(3, ok, f"converged={log.converged} max|z-z_opt|={z_err:.2e} "
                 f"H/H_opt={ratio:.6f} t={elapsed:.1f}s")
    assert log.converged
    assert z_err <= 1e-3
    assert ratio >= 0.99
    assert elapsed < 300.0


def test_criterion_4_crowded_team_stays_below_optimum(case2):
    sc, log, elapsed = case2
    ratio = log.records[-1].H / log.h_opt
    zs = [n.z for n in log.final_state().nodes]
    spread = max(zs) - min(zs)
    non_monotone = 0
    for n in log.final_state().nodes:
        d = np.diff(log.altitude_trace(n.id))
        if (d > 1e-9).any() and (d < -1e-9).any():
            non_monotone += 1
    ok = (log.converged and ratio < 1.0 and spread > 1e-3
          and non_monotone >= 1 and elapsed < 600.0)
    _line(4, ok, f"converged={log.converged} H/H_opt={ratio:.6f} "
                 f"z_spread={spread:.4f} non_monotone={non_monotone}/9 "
                 f"t={elapsed:.1f}s")
    assert log.converged
    assert ratio < 1.0
    assert spread > 1e-3
    assert non_monotone >= 1
    assert elapsed < 600.0


def test_criterion_5_monotone_ascent(case1, case2):
    worst = math.inf
    for _sc, log, _t in (case1, case2):
        for a, b in zip(log.records, log.records[1:]):
            worst = min(worst, b.H - a.H + 1e-6 * (b.t - a.t))
    ok = worst >= 0.0
    _line(5, ok, f"min(dH + 1e-6 dt)={worst:.3e} across both case studies")
    assert worst >= 0.0


def test_criterion_6_tessellation_consistency():
    t0 = time.perf_counter()
    rng = np.random.default_rng(606)
    worst_slack = -math.inf     # max of |H_cells - H_grid| - bound
    worst_mc = 0.0              # max of |sum areas - mc| / sigma
    for k in range(50):
        model = uniform_model() if k % 2 == 0 else paraboloid_model()
        n = int(rng.integers(2, 5))
        s = random_team(rng, model, n_nodes=n, require_overlap=(k % 3 == 0))
        cells = compute_all_cells(s)
        h_cells = evaluate_criterion(s, cells)
        h_grid = evaluate_criterion_max_form(s, resolution=200)
        bound = criterion_consistency_bound(s, resolution=200)
        worst_slack = max(worst_slack, abs(h_cells - h_grid) - bound)
        total = sum(region_area(c.region) for c in cells)
        est, sigma = mc_covered_area(s, seed=36000 + k, n=100_000)
        worst_mc = max(worst_mc, abs(total - est) / sigma)
    elapsed = time.perf_counter() - t0
    ok = worst_slack <= 0.0 and worst_mc <= 3.0
    _line(6, ok, f"max(|dH|-bound)={worst_slack:.2e} "
                 f"max_area_dev={worst_mc:.2f} sigma t={elapsed:.1f}s")
    assert worst_slack <= 0.0
    assert worst_mc <= 3.0


def test_criterion_7_disk_pair_boolean_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(707)
    cut_label = Label("dominance", 1)
    worst_mc = 0.0
    worst_exact = 0.0
    worst_gap = 0.0
    for k in range(200):
        while True:
            r1 = float(rng.uniform(0.3, 1.4))
            r2 = float(rng.uniform(0.3, 1.4))
            c1 = Point2(float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1)))
            c2 = Point2(float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1)))
            d = math.hypot(c2[0] - c1[0], c2[1] - c1[1])
            if (abs(d - (r1 + r2)) > 2e-2 and abs(d - abs(r1 - r2)) > 2e-2
                    and d > 1e-3):
                break
        op = "intersect" if k % 2 == 0 else "subtract"
        reg = region_boolean(op, full_disk_region(Disk(c1, r1)),
                             Disk(c2, r2), cut_label)
        lens = lens_area(r1, r2, d)
        exact = lens if op == "intersect" else math.pi * r1 * r1 - lens
        area = region_area(reg)
        worst_exact = max(worst_exact, abs(area - exact))
        worst_gap = max(worst_gap, reg.max_closure_gap())
        if reg.is_empty:
            continue
        est, sigma = mc_area(reg, seed=17000 + k, n=100_000)
        worst_mc = max(worst_mc, abs(area - est) / sigma)
    elapsed = time.perf_counter() - t0
    ok = worst_mc <= 3.0 and worst_gap < 1e-9 and worst_exact < 1e-9
    _line(7, ok, f"max_area_dev={worst_mc:.2f} sigma "
                 f"closed_form_err={worst_exact:.1e} "
                 f"max_closure_gap={worst_gap:.1e} t={elapsed:.1f}s")
    assert worst_mc <= 3.0
    assert worst_gap < 1e-9
    assert worst_exact < 1e-9


def test_criterion_8_band_preservation(case1, case2):
    clamps = 0
    margin = math.inf
    for sc, log, _t in (case1, case2):
        clamps += log.clamp_count
        m = sc.state.model
        for rec in log.records:
            for n in rec.nodes:
                margin = min(margin, n.z - m.z_min, m.z_max - n.z)
    ok = clamps == 0 and margin > 0.0
    _line(8, ok, f"clamp_count={clamps} min_band_margin={margin:.4f}")
    assert clamps == 0
    assert margin > 0.0


def test_criterion_9_paraboloid_dominance_circle():
    rng = np.random.default_rng(909)
    worst = 0.0
    for k in range(100):
        b = (0.2, 0.5, 0.8)[k % 3]
        m = paraboloid_model(20.0, b)

        def unclipped(n, q):
            big_r = m.radius(n.z)
            rho2 = (q[0] - n.q[0]) ** 2 + (q[1] - n.q[1]) ** 2
            return (1.0 - (1.0 - b) * rho2 / (big_r * big_r)) * m.peak(n.z)

        while True:
            z1 = float(rng.uniform(m.z_min + 0.01, m.z_max - 0.01))
            z2 = float(rng.uniform(m.z_min + 0.01, m.z_max - 0.01))
            if abs(z1 - z2) > 0.02:
                break
        ni = NodeState(0, Point2(float(rng.uniform(-1, 1)),
                                 float(rng.uniform(-1, 1))), z1)
        nj = NodeState(1, Point2(float(rng.uniform(-1, 1)),
                                 float(rng.uniform(-1, 1))), z2)
        db = dominance_boundary(m, ni, nj)
        assert db.kind == "circle"
        cx, cy = db.disk.center
        r = db.disk.radius
        for ang in np.linspace(0.0, 2.0 * math.pi, 24, endpoint=False):
            q = Point2(cx + r * math.cos(ang), cy + r * math.sin(ang))
            worst = max(worst, abs(unclipped(ni, q) - unclipped(nj, q)))
        # the stated winner really wins strictly inside the circle
        gap = unclipped(ni, db.disk.center) - unclipped(nj, db.disk.center)
        assert (gap > 0.0) == db.i_wins_inside
    ok = worst < 1e-9
    _line(9, ok, f"max boundary residual={worst:.2e} over 100 pairs")
    assert worst < 1e-9
