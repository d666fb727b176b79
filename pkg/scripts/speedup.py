#!/usr/bin/env python3
"""Measure matching throughput against the worker count.

Usage: python scripts/speedup.py [--workers 1 2 4 8] [--users 80] [--grid 128]
"""

import argparse
import random
import sys
import time

from geofence import bilinear, engine
from geofence.bench import BenchConfig, gen_users, gen_zones, zone_cover
from geofence.encoding import GridSpec, cell_bits, cell_of_point, hve_width
from geofence.hve import encrypt, setup


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--workers", type=int, nargs="+", default=[1, 2, 4, 8])
    ap.add_argument("--users", type=int, default=400,
                    help="keep the workload large enough that worker "
                         "start-up cost stays negligible")
    ap.add_argument("--grid", type=int, default=128)
    ap.add_argument("--coverage", type=float, default=0.06)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()

    cfg = BenchConfig(d=args.grid, encoding="gray", coverage=args.coverage,
                      users=args.users, seed=args.seed)
    grid = GridSpec(cfg.d)
    rng = random.Random(cfg.seed)
    params = bilinear.gen_params(cfg.bits, rng.getrandbits(63))
    pk, sk = setup(hve_width(grid, "gray"), params, rng, precompute=True)
    zones = gen_zones(cfg, rng)
    zone_sets = [
        engine.build_zone_tokens(sk, f"z{i}", zone_cover(grid, z, "gray"), rng)
        for i, z in enumerate(zones)
    ]
    cts = []
    for uid, (px, py) in gen_users(cfg.users, rng):
        cell = cell_of_point(grid, px, py)
        cts.append((uid, encrypt(pk, cell_bits(grid, cell, "gray"), 1, rng)))
    ntasks = len(cts) * len(zone_sets)
    print(f"{ntasks} tasks ({len(cts)} users x {len(zone_sets)} zones)")
    print("workers,seconds,tasks_per_s,speedup")
    baseline = None
    for w in args.workers:
        t0 = time.perf_counter()
        engine.match_all(cts, zone_sets, w)
        dt = time.perf_counter() - t0
        baseline = baseline or dt
        print(f"{w},{dt:.3f},{ntasks / dt:.0f},{baseline / dt:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
