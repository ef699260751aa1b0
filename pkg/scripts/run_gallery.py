#!/usr/bin/env python3
"""Iterate every built-in map, compare against its expected law, classify.

Usage: python3 scripts/run_gallery.py [--n N] [--names a,b,c]
"""

import argparse
import time

from degseq import classify_growth, iterate_degrees, list_gallery


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=12, help="iterates per entry")
    ap.add_argument("--names", default=None, help="comma-separated subset")
    args = ap.parse_args()

    wanted = set(args.names.split(",")) if args.names else None
    bad = 0
    for entry in list_gallery():
        if wanted and entry.name not in wanted:
            continue
        t0 = time.perf_counter()
        seq = iterate_degrees(entry.projective, args.n, source_description=entry.name)
        elapsed = time.perf_counter() - t0
        law = "?"
        if entry.expected_degree_fn is not None:
            want = [entry.expected_degree_fn(n) for n in range(1, len(seq.degrees) + 1)]
            law = "ok" if list(seq.degrees) == want else "MISMATCH"
            bad += law == "MISMATCH"
        try:
            label = classify_growth(seq).label
        except ValueError:
            label = "(window too short)"
        flag = " partial" if seq.truncated else ""
        print(f"{entry.name:<24} {label:<13} law={law:<8} {elapsed:6.2f}s{flag}")
        print(f"  degrees: {list(seq.degrees)}")
        if entry.expected_law:
            print(f"  expected: {entry.expected_law}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
