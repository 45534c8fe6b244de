#!/usr/bin/env python3
"""Run both bundled case studies and print a convergence summary."""
import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from conecover.cli import main  # noqa: E402

HERE = os.path.dirname(os.path.abspath(__file__))


def run_one(name: str) -> dict:
    scenario = os.path.join(HERE, "..", "scenarios", f"{name}.yaml")
    out = os.path.join(HERE, "..", "out", name)
    rc = main(["run", scenario, "--snapshots", "first,last", "--out", out])
    if rc != 0:
        raise SystemExit(rc)
    with open(os.path.join(out, "metrics.json")) as fh:
        return json.load(fh)


if __name__ == "__main__":
    for name in ("case_study_1", "case_study_2"):
        m = run_one(name)
        last = m["timeline"][-1]
        print(f"{name}: H={last['H']:.6f}  H/H_opt={last['H_over_Hopt']:.4f}"
              f"  covered={last['covered_area_ratio']:.3f}"
              f"  converged={m['converged']}  clamps={m['clamp_count']}")
