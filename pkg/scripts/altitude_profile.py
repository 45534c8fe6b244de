#!/usr/bin/env python3
"""Profile the isolated-node altitude input over the band.

Prints z, the altitude input of an unconstrained isolated node, and the
full-disk criterion value, then the root of the input (the optimal
altitude). Useful for eyeballing why the optimum sits where it does:
footprint growth (boundary term) fights quality decay (interior term).
"""
import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from conecover.control import (full_disk_altitude_input,  # noqa: E402
                               full_disk_coverage, optimal_altitude)
from conecover.quality import QualityModel  # noqa: E402


def main() -> None:
    m = QualityModel(math.radians(20.0), 0.3, 2.3)
    print(f"{'z':>8} {'u_z':>12} {'H_disk':>12}")
    for k in range(41):
        z = m.z_min + (m.z_max - m.z_min) * k / 40.0
        z = min(max(z, m.z_min + 1e-9), m.z_max - 1e-9)
        print(f"{z:8.4f} {full_disk_altitude_input(m, z):12.6f} "
              f"{full_disk_coverage(m, z):12.6f}")
    z_opt = optimal_altitude(m)
    print(f"\nz_opt = {z_opt:.10f}")
    print(f"H per node at z_opt = {full_disk_coverage(m, z_opt):.10f}")


if __name__ == "__main__":
    main()
