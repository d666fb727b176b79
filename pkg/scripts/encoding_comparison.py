#!/usr/bin/env python3
"""Compare pairing budgets of the three encodings across grid sizes.

For each grid size and zone distribution, generates alert zones at a fixed
coverage and reports the total pairing cost a non-matching user pays under
each encoding (baseline uses its single wide token; hier/gray use minimized
per-zone covers).  Counts are hardware independent.

Usage: python scripts/encoding_comparison.py [--coverage 0.04] [--seed 1]
"""

import argparse
import random
import sys

from geofence.bench import BenchConfig, gen_zones
from geofence.encoding import AlertZone, GridSpec, baseline_token
from geofence.expansion import zone_pairing_cost
from geofence.hve import pairing_cost


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--coverage", type=float, default=0.04)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--grids", type=int, nargs="+", default=[16, 32, 64, 128])
    args = ap.parse_args()

    print("d,dist,baseline_pairings,hier_pairings,gray_pairings,gray_over_hier")
    for d in args.grids:
        grid = GridSpec(d)
        for dist in ("uniform", "gaussian"):
            cfg = BenchConfig(d=d, coverage=args.coverage, distribution=dist)
            zones = gen_zones(cfg, random.Random(args.seed))
            union = AlertZone(frozenset().union(*(z.cells for z in zones)))
            base = pairing_cost(baseline_token(grid, union))
            hier = sum(zone_pairing_cost(grid, z.cells, "hier") for z in zones)
            gray = sum(zone_pairing_cost(grid, z.cells, "gray") for z in zones)
            print(f"{d},{dist},{base},{hier},{gray},{gray / hier:.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
