#!/usr/bin/env python3
"""Sweep the expansion ratio and report improvement factors per shape.

Also measures how expansion runtime scales with the zone size (expected to
stay within a quadratic envelope at fixed alpha).

Usage: python scripts/expansion_sweep.py [--grid 64] [--zones 30] [--seed 2]
"""

import argparse
import random
import statistics
import sys
import time

from geofence.bench import circle_zone, rect_zone, square_zone
from geofence.encoding import GridSpec
from geofence.expansion import expand_zone

ALPHAS = (0.02, 0.04, 0.06, 0.08, 0.10)
BUILDERS = {"square": square_zone, "rect": rect_zone, "circle": circle_zone}


def sweep(d, n_zones, seed):
    grid = GridSpec(d)
    rng = random.Random(seed)
    print("shape,alpha,median_improvement,mean_cells_added")
    for shape, build in BUILDERS.items():
        zones = [
            build(grid, rng.randrange(d), rng.randrange(d),
                  rng.randrange(d * d // 30, d * d // 10))
            for _ in range(n_zones)
        ]
        for alpha in ALPHAS:
            results = [expand_zone(alpha, z, grid, "gray") for z in zones]
            med = statistics.median(r.improvement for r in results)
            added = statistics.mean(len(r.added) for r in results)
            print(f"{shape},{alpha},{med:.3f},{added:.1f}")


def runtime_scaling(d, seed):
    grid = GridSpec(d)
    rng = random.Random(seed)
    print("\nzone_cells,expand_seconds  (runtime envelope at alpha=0.10)")
    for area in (d * d // 64, d * d // 32, d * d // 16, d * d // 8):
        zones = [
            square_zone(grid, rng.randrange(d), rng.randrange(d), area)
            for _ in range(5)
        ]
        t0 = time.perf_counter()
        for z in zones:
            expand_zone(0.10, z, grid, "gray")
        per = (time.perf_counter() - t0) / len(zones)
        print(f"{area},{per:.4f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=64)
    ap.add_argument("--zones", type=int, default=30)
    ap.add_argument("--seed", type=int, default=2)
    args = ap.parse_args()
    sweep(args.grid, args.zones, args.seed)
    runtime_scaling(args.grid, args.seed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
