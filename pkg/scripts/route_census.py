#!/usr/bin/env python3
"""Survey how random conic-containing pencils distribute over the case
routes, and how often each hypothesis fails.

Usage: python3 scripts/route_census.py --n 6 --count 200 --seed 0
"""

import argparse
import random
import sys
from collections import Counter
from fractions import Fraction

from quadpencil.forms import QuadraticForm
from quadpencil.normalize import (
    DiscriminantZero,
    hypothesis_report,
    normalize_pencil,
    verify_conic_plane,
)
from quadpencil.forms import LinearSubspace

CONIC = QuadraticForm.diagonal([1, 1, -3])


def random_conic_instance(rng, dim, height):
    f = [[Fraction(0)] * dim for _ in range(dim)]
    g = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(3):
        for j in range(3):
            f[i][j] = CONIC.gram[i][j]
    for i in range(3, dim):
        for j in range(dim):
            cf = Fraction(rng.randint(-height, height), 2)
            cg = Fraction(rng.randint(-height, height), 2)
            f[i][j] += cf
            f[j][i] += cf
            g[i][j] += cg
            g[j][i] += cg
    return QuadraticForm(f), QuadraticForm(g)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--height", type=int, default=9)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    dim = args.n + 1
    plane = LinearSubspace.standard(dim, (0, 1, 2))
    routes = Counter()
    failures = Counter()
    degenerate = 0
    for _ in range(args.count):
        F0, G0 = random_conic_instance(rng, dim, args.height)
        try:
            sys_ = normalize_pencil(F0, G0, verify_conic_plane(F0, G0, plane))
            rep = hypothesis_report(sys_)
        except (DiscriminantZero, ValueError, ArithmeticError):
            degenerate += 1
            continue
        routes[rep.route] += 1
        for f in rep.hypothesis_failures:
            failures[f] += 1

    print(f"n = {args.n}, {args.count} instances, seed {args.seed}")
    print(f"degenerate (P = 0 or cone): {degenerate}")
    print("\nroutes:")
    for route, c in routes.most_common():
        print(f"  {route:26s} {c}")
    if failures:
        print("\nhypothesis failures:")
        for f, c in failures.most_common():
            print(f"  {f:40s} {c}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
