#!/usr/bin/env python3
"""Generate a batch of planted instances and run the point search on each.

Usage: python3 scripts/batch_search.py --n 5 --count 20 --seed 100

Prints one line per instance (status, route, point height, wall time) and
a summary at the end.  Exits nonzero if any search claims an obstruction
on a planted (hence solvable) instance.
"""

import argparse
import random
import sys
import time

from quadpencil.descent import find_rational_point, generate_planted_instance
from quadpencil.forms import QuadraticForm


CONIC = QuadraticForm.diagonal([1, 1, -3])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=100)
    ap.add_argument("--coefficient-height", type=int, default=9)
    args = ap.parse_args()

    statuses = {"point": 0, "exhausted": 0, "obstruction": 0}
    total_time = 0.0
    for k in range(args.count):
        seed = args.seed + k
        rng = random.Random(seed)
        dim = args.n + 1
        while True:
            pt = [rng.randint(-3, 3) for _ in range(dim)]
            if any(pt[3:]):
                break
        F0, G0, plane = generate_planted_instance(
            args.n, CONIC, pt, seed=seed,
            coefficient_height=args.coefficient_height)
        t0 = time.monotonic()
        out = find_rational_point(F0, G0, plane)
        dt = time.monotonic() - t0
        total_time += dt
        statuses[out.status] += 1
        if out.status == "point":
            height = max(abs(c) for c in out.point.coords)
            print(f"seed {seed}: point  route={out.route} "
                  f"height={height} ({dt:.2f}s)")
        else:
            print(f"seed {seed}: {out.status}  route={out.route} ({dt:.2f}s)")
    print(f"\n{statuses['point']}/{args.count} points, "
          f"{statuses['exhausted']} exhausted, "
          f"{statuses['obstruction']} obstructions, "
          f"{total_time:.1f}s total")
    return 1 if statuses["obstruction"] else 0


if __name__ == "__main__":
    sys.exit(main())
