"""Command-line driver.

Exit codes: 0 success (including budget-truncated runs, which set a
"partial" flag in the payload), 1 gallery expectation mismatch, 2 parse or
usage errors (diagnostics on stderr).  JSON output is UTF-8 with sorted
keys and a versioned schema tag; identical configurations produce
byte-identical bytes.  CSV columns for the degrees command are
n, degree, drop, cumulativeNaiveDegree.  The DEGSEQ_BUDGET environment
variable overrides the default term budget; the --budget flag overrides
both.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .budget import BudgetExceeded, term_budget
from .dynamics import (
    aut1_certificate,
    iterate_degrees,
    monoid_ball_degrees,
    period_detect,
)
from .fields import QQ, PrimeField
from .gallery import gallery_entry, list_gallery
from .growth import classify_growth, degaut_bound, finite_field_count_bound
from .maps import AffineEndomorphism, homogenize
from .parsing import ParseError, expression_to_map, map_to_text, parse_map

SCHEMA = "degseq/1"


class UsageError(ValueError):
    pass


def _parse_field(spec: str):
    if spec == "Q":
        return QQ
    if spec.startswith("F") and spec[1:].isdigit():
        return PrimeField(int(spec[1:]))
    raise UsageError(f"unknown field {spec!r}: use Q or F<p> (e.g. F7)")


def _field_name(field) -> str:
    return "Q" if field is QQ else f"F{field.p}"


def _load_map(text: str, field):
    expr = parse_map(text, field)
    return expression_to_map(expr)


def _as_projective(m):
    return homogenize(m) if isinstance(m, AffineEndomorphism) else m


def _rational_json(value: Fraction):
    return int(value) if value.denominator == 1 else str(value)


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    _write_text(args.output, text)


def _write_text(path, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _config_of(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _sequence_payload(seq) -> dict:
    return {
        "degrees": list(seq.degrees),
        "drops": list(seq.drops),
        "strategy": seq.strategy,
        "partial": seq.truncated,
    }


# --- subcommands -----------------------------------------------------------


def _cmd_degrees(args) -> int:
    field = _parse_field(args.field)
    fmap = _as_projective(_load_map(args.map, field))
    seq = iterate_degrees(fmap, args.n, source_description=args.map)
    if args.format == "csv":
        d1 = seq.degrees[0]
        lines = ["n,degree,drop,cumulativeNaiveDegree"]
        for i, deg in enumerate(seq.degrees):
            # drop incurred producing f^n; the first iterate is exact by definition
            drop = 0 if i == 0 else seq.drops[i - 1]
            lines.append(f"{i + 1},{deg},{drop},{d1 ** (i + 1)}")
        _write_text(args.output, "\r\n".join(lines) + "\r\n")
        return 0
    payload = {
        "schema": SCHEMA,
        "command": "degrees",
        "config": _config_of(args, ("map", "n", "field", "budget")),
        "field": _field_name(field),
        **_sequence_payload(seq),
    }
    _emit(payload, args)
    return 0


def _cmd_classify(args) -> int:
    field = _parse_field(args.field)
    fmap = _as_projective(_load_map(args.map, field))
    seq = iterate_degrees(fmap, args.n, source_description=args.map)
    report = classify_growth(seq, eps_exp=args.eps, dim=fmap.dim)
    payload = {
        "schema": SCHEMA,
        "command": "classify",
        "config": _config_of(args, ("map", "n", "field", "eps", "budget")),
        "field": _field_name(field),
        "label": report.label,
        "dpolEstimate": report.dpol_estimate,
        "lambdaEstimate": report.lambda_estimate,
        "fitResidual": report.fit_residual,
        "windowUsed": list(report.window_used),
        "dim2Category": report.dim2_category,
        **_sequence_payload(seq),
    }
    _emit(payload, args)
    return 0


def _cmd_aut1(args) -> int:
    field = _parse_field(args.field)
    m = _load_map(args.map, field)
    if not isinstance(m, AffineEndomorphism):
        raise UsageError("aut1 takes an affine map (A<d> form)")
    cert = aut1_certificate(m, asserted_automorphism=args.asserted)
    payload = {
        "schema": SCHEMA,
        "command": "aut1",
        "config": _config_of(args, ("map", "field", "asserted", "budget")),
        "field": _field_name(field),
        "certified": cert.certified,
        "degrees": list(cert.degrees),
        "predictedGrowth": cert.predicted_growth,
        "assertedAutomorphism": cert.asserted_automorphism,
        "partial": False,
    }
    _emit(payload, args)
    return 0


def _cmd_ball(args) -> int:
    field = _parse_field(args.field)
    maps = [_as_projective(_load_map(t, field)) for t in args.map]
    ball, degrees = monoid_ball_degrees(maps, args.n)
    payload = {
        "schema": SCHEMA,
        "command": "ball",
        "config": _config_of(args, ("map", "n", "field", "budget")),
        "field": _field_name(field),
        "radius": ball.radius,
        "degrees": list(degrees),
        "representatives": len(ball.representatives),
        "partial": ball.truncated,
    }
    _emit(payload, args)
    return 0


def _cmd_period(args) -> int:
    field = _parse_field(args.field)
    if field is QQ:
        raise UsageError("period needs a finite field (--field F<p>)")
    fmap = _as_projective(_load_map(args.map, field))
    partial = False
    try:
        report = period_detect(fmap, args.max_steps)
    except BudgetExceeded:
        report, partial = None, True
    payload = {
        "schema": SCHEMA,
        "command": "period",
        "config": _config_of(args, ("map", "field", "max_steps", "budget")),
        "field": _field_name(field),
        "found": report is not None,
        "preperiod": report.preperiod if report else None,
        "period": report.period if report else None,
        "partial": partial,
    }
    _emit(payload, args)
    return 0


def _cmd_bounds(args) -> int:
    report = degaut_bound(args.d, args.K)
    payload = {
        "schema": SCHEMA,
        "command": "bounds",
        "config": _config_of(args, ("d", "K", "q")),
        "C_d": _rational_json(report.c_d),
        "bound": _rational_json(report.bound),
        "dimCheck": report.dim_check,
        "strict": report.strict,
        "partial": False,
    }
    if args.q is not None:
        payload["qCountBound"] = finite_field_count_bound(args.q, args.d, args.K)
    _emit(payload, args)
    return 0


def _cmd_gallery(args) -> int:
    if args.run is None:
        entries = []
        for e in list_gallery():
            entries.append(
                {
                    "name": e.name,
                    "dim": e.dim,
                    "kind": e.kind,
                    "map": map_to_text(e.affine or e.projective),
                    "expectedLaw": e.expected_law,
                    "expectedDpol": e.expected_dpol,
                    "expectedLambda": e.expected_lambda,
                    "provenance": e.provenance,
                }
            )
        payload = {
            "schema": SCHEMA,
            "command": "gallery",
            "config": {},
            "entries": entries,
            "partial": False,
        }
        _emit(payload, args)
        return 0

    try:
        entry = gallery_entry(args.run)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    seq = iterate_degrees(entry.projective, args.n, source_description=entry.name)
    expected = None
    matches = None
    if entry.expected_degree_fn is not None:
        expected = [entry.expected_degree_fn(n) for n in range(1, args.n + 1)]
        matches = list(seq.degrees) == expected[: len(seq.degrees)]
    payload = {
        "schema": SCHEMA,
        "command": "gallery",
        "config": _config_of(args, ("run", "n", "budget")),
        "name": entry.name,
        "expected": expected,
        "matches": matches,
        **_sequence_payload(seq),
    }
    _emit(payload, args)
    return 1 if matches is False else 0


def _cmd_plotdata(args) -> int:
    field = _parse_field(args.field)
    fmap = _as_projective(_load_map(args.map, field))
    seq = iterate_degrees(fmap, args.n, source_description=args.map)
    raw = "".join(f"{i + 1} {deg}\n" for i, deg in enumerate(seq.degrees))
    loglog = "".join(
        f"{math.log(i + 1):.12f} {math.log(deg):.12f}\n"
        for i, deg in enumerate(seq.degrees)
    )
    _write_text(f"{args.output}.dat", raw)
    _write_text(f"{args.output}.loglog.dat", loglog)
    payload = {
        "schema": SCHEMA,
        "command": "plotdata",
        "config": _config_of(args, ("map", "n", "field", "budget")),
        "field": _field_name(field),
        "files": [f"{args.output}.dat", f"{args.output}.loglog.dat"],
        "points": len(seq.degrees),
        "partial": seq.truncated,
    }
    text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    sys.stdout.write(text)
    return 0


# --- argument plumbing -----------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="degseq",
        description="degree sequences of rational self-maps, exactly",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, *, map_arg=True, n_default=None):
        if map_arg:
            p.add_argument("--map", required=True, help="map literal, P<d> [...] or A<d> (...)")
        if n_default is not None:
            p.add_argument("--n", type=int, default=n_default, help="iteration count")
        p.add_argument("--field", default="Q", help="Q (default) or F<p>")
        p.add_argument("--budget", type=int, default=None, help="term budget override")
        p.add_argument("--output", default=None, help="output path (default stdout)")

    p = sub.add_parser("degrees", help="iterate a map and print its degree sequence")
    common(p, n_default=10)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_degrees)

    p = sub.add_parser("classify", help="classify degree growth")
    common(p, n_default=30)
    p.add_argument("--eps", type=float, default=0.05, help="exponential margin")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("aut1", help="degree-doubling certificate for affine maps")
    common(p)
    p.add_argument("--asserted", action="store_true", help="caller asserts f is an automorphism")
    p.set_defaults(func=_cmd_aut1)

    p = sub.add_parser("ball", help="max degree over words of bounded length")
    p.add_argument("--map", action="append", required=True, help="repeatable generator literal")
    p.add_argument("--n", type=int, default=4, help="word-length radius")
    p.add_argument("--field", default="Q")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_ball)

    p = sub.add_parser("period", help="detect eventual periodicity over a finite field")
    common(p)
    p.add_argument("--max-steps", type=int, default=64, dest="max_steps")
    p.set_defaults(func=_cmd_period)

    p = sub.add_parser("bounds", help="counting-bound calculators")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--q", type=int, default=None, help="also report the F_q census bound")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("gallery", help="list built-in maps, or run one against its law")
    p.add_argument("--run", default=None, help="entry name to iterate")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_gallery)

    p = sub.add_parser("plotdata", help="write n/deg and log-log files")
    p.add_argument("--map", required=True)
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--field", default="Q")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--output", required=True, help="file prefix")
    p.set_defaults(func=_cmd_plotdata)
    return top


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
            raise UsageError("--n must be at least 1")
        budget = getattr(args, "budget", None)
        if budget is not None:
            with term_budget(budget):
                return args.func(args)
        return args.func(args)
    except (ParseError, UsageError, ValueError) as exc:
        print(f"degseq: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
