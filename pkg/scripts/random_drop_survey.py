#!/usr/bin/env python3
"""Sample random reduced map pairs over F_p and tabulate their degree drops.

Every composition must satisfy deg(f∘g) <= deg(f)·deg(g); the deficit is the
degree of the common factor cancelled after substitution.  The survey prints
a drop histogram per (deg f, deg g) cell and the overall drop frequency.

Usage: python3 scripts/random_drop_survey.py [--pairs N] [--p P] [--dim D] [--max-deg K]
"""

import argparse
import random
from collections import Counter, defaultdict

from degseq import PrimeField, Polynomial, compose_maps, reduce_map


def rand_map(rng, field, d, deg, max_terms=4):
    while True:
        comps = []
        for _ in range(d + 1):
            terms = {}
            for _ in range(rng.randrange(1, max_terms + 1)):
                cuts = sorted(rng.randrange(0, deg + 1) for _ in range(d))
                e = tuple(b - a for a, b in zip([0] + cuts, cuts + [deg]))
                terms[e] = rng.randrange(1, field.p)
            comps.append(Polynomial(field, d + 1, terms))
        f, _ = reduce_map(comps)
        if f.degree() == deg:
            return f


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=500)
    ap.add_argument("--p", type=int, default=7)
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--max-deg", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    field = PrimeField(args.p)
    rng = random.Random(args.seed)
    cells: dict = defaultdict(Counter)
    dropped = 0
    for _ in range(args.pairs):
        df = rng.randrange(1, args.max_deg + 1)
        dg = rng.randrange(1, args.max_deg + 1)
        f = rand_map(rng, field, args.dim, df)
        g = rand_map(rng, field, args.dim, dg)
        comp, drop = compose_maps(f, g)
        assert comp.degree() == df * dg - drop  # bookkeeping must reconcile
        cells[(df, dg)][drop] += 1
        dropped += drop > 0

    print(f"{args.pairs} pairs over F_{args.p}, dim {args.dim}, degrees <= {args.max_deg}")
    print(f"compositions with a drop: {dropped} ({100.0 * dropped / args.pairs:.1f}%)\n")
    print("deg(f) deg(g)  drop histogram")
    for (df, dg) in sorted(cells):
        hist = "  ".join(f"{d}:{c}" for d, c in sorted(cells[(df, dg)].items()))
        print(f"{df:^6} {dg:^6}  {hist}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
