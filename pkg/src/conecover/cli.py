"""Command line front end.

    conecover run <scenario.yaml> [--snapshots LIST] [--check-gradient]
                  [--out DIR] [--seed N]
    conecover optimal-altitude <scenario.yaml>

`run` integrates the scenario and writes trajectory.csv plus metrics.json
to the output directory; --snapshots takes a comma-separated list of
"first", "last", or step numbers (snapped to the nearest recorded step) and
writes one SVG per entry. --check-gradient skips the run: it compares the
analytic control inputs on the initial state against central finite
differences of the coverage criterion and exits 3 if the worst relative
error exceeds 1e-3.

Exit codes: 0 success, 2 scenario parse/validation failure, 3 gradient
check failure, 1 anything else. Set CONECOVER_LOG=DEBUG|INFO|... for
logging.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys

from .control import full_disk_coverage, optimal_altitude
from .geom.measure import GeometryError
from .partition import SwarmState, compute_all_cells
from .render_svg import write_snapshot
from .scenario import ParseError, Scenario, ValidationError, parse_scenario
from .sim import TrajectoryLog, gradient_check, run

log = logging.getLogger(__name__)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("CONECOVER_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s")
    ap = argparse.ArgumentParser(
        prog="conecover",
        description="distributed visual-coverage simulation")
    sub = ap.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="integrate a scenario")
    run_p.add_argument("scenario")
    run_p.add_argument("--snapshots", default=None,
                       help='comma list of "first", "last", or step numbers')
    run_p.add_argument("--check-gradient", action="store_true",
                       help="audit the control law on the initial state "
                            "instead of running")
    run_p.add_argument("--out", default=None, help="override output dir")
    run_p.add_argument("--seed", type=int, default=None, help="override seed")

    opt_p = sub.add_parser("optimal-altitude",
                           help="print z_opt and H_opt for a scenario")
    opt_p.add_argument("scenario")

    args = ap.parse_args(argv)
    try:
        sc = parse_scenario(args.scenario)
    except (ParseError, ValidationError) as e:
        print(f"error: {args.scenario}: {e}", file=sys.stderr)
        return 2

    try:
        if args.command == "optimal-altitude":
            return _optimal_altitude(sc)
        return _run(sc, args)
    except (ParseError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except GeometryError as e:
        print(f"error: geometry failure: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e.filename or args.scenario}: {e}", file=sys.stderr)
        return 1


def _optimal_altitude(sc: Scenario) -> int:
    z = optimal_altitude(sc.state.model)
    h = len(sc.state.nodes) * full_disk_coverage(sc.state.model, z)
    print(f"z_opt = {z:.10f}")
    print(f"H_opt = {h:.10f}")
    return 0


def _run(sc: Scenario, args) -> int:
    state, cfg = sc.state, sc.sim
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if args.check_gradient:
        worst, _rows = gradient_check(state, cfg.gains, cfg.quad)
        print(f"max relative gradient error: {worst:.3e}")
        return 0 if worst <= 1e-3 else 3

    out_dir = args.out or sc.output_dir
    os.makedirs(out_dir, exist_ok=True)
    traj = run(state, cfg)
    csv_path = os.path.join(out_dir, "trajectory.csv")
    json_path = os.path.join(out_dir, "metrics.json")
    traj.to_csv(csv_path)
    traj.write_metrics_json(json_path)
    written = [csv_path, json_path]

    if args.snapshots:
        for step in _snapshot_steps(args.snapshots, traj):
            rec = min(traj.records, key=lambda r: abs(r.step - step))
            s = SwarmState(rec.nodes, traj.model, traj.omega)
            path = os.path.join(out_dir, f"snapshot_{rec.step:06d}.svg")
            write_snapshot(path, s, compute_all_cells(s),
                           caption=f"{sc.name} step {rec.step} "
                                   f"t={rec.t:.2f}")
            written.append(path)

    print(f"{sc.name}: {traj.records[-1].step} steps, "
          f"converged={traj.converged}")
    for p in written:
        print(f"wrote {p}")
    return 0


def _snapshot_steps(arg: str, traj: TrajectoryLog) -> list[int]:
    steps = []
    for tok in arg.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok == "first":
            steps.append(traj.records[0].step)
        elif tok == "last":
            steps.append(traj.records[-1].step)
        else:
            try:
                steps.append(int(tok))
            except ValueError:
                raise ParseError(
                    f'--snapshots: expected "first", "last", or an integer, '
                    f"got {tok!r}") from None
    # dedupe, preserve order
    seen = set()
    out = []
    for s in steps:
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


if __name__ == "__main__":
    sys.exit(main())
