"""Command-line driver: ``permtri <command> --q Q [options]``.

Every report is a JSON object carrying (p, n, modulus) so the integer
element encodings can be decoded offline.  Exit status: 0 when every check
passes, 1 when a mismatch was found (the report is still written), 2 on a
usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time

from . import classify as cls
from . import cubic, trinomial
from .combinat import identity_suite
from .field import FieldCtx, FieldError, build_context, prime_power

SCHEMA = 1
EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


def _context(args) -> FieldCtx:
    if args.q is not None:
        if args.p is not None or args.n is not None:
            raise FieldError("give either --q or --p/--n, not both")
        p, n = prime_power(args.q)
    elif args.p is not None:
        p, n = args.p, args.n if args.n is not None else 1
    else:
        raise FieldError("a field is required: --q Q or --p P --n N")
    return build_context(p, n)


def _element(ctx: FieldCtx, value, name: str) -> int:
    if value is None:
        raise FieldError(f"--{name} is required")
    if not 0 <= value < ctx.q2:
        raise FieldError(f"--{name}={value} is not an encoding below q^2 = {ctx.q2}")
    return value


def _envelope(ctx: FieldCtx, command: str) -> dict:
    return {"schema": SCHEMA, "command": command, **ctx.describe()}


def _failures(obj) -> int:
    """Count entries of every "failures"/"mismatches"/"counterexamples" list inside obj."""
    if isinstance(obj, dict):
        total = 0
        for k, v in obj.items():
            if k in ("failures", "mismatches", "counterexamples") and isinstance(v, list):
                total += len(v)
            elif k == "failures" and isinstance(v, dict):
                total += sum(x for x in v.values() if isinstance(x, int))
            else:
                total += _failures(v)
        return total
    if isinstance(obj, list):
        return sum(_failures(x) for x in obj)
    return 0


# -- commands ------------------------------------------------------------------
# Each returns (report dict, csv rows or None).

def cmd_verify(ctx, args):
    if args.samples:
        report = cls.sample_verify(ctx, args.samples, seed=args.seed)
    else:
        report = cls.exhaustive_verify(ctx, workers=args.workers)
    d = report.to_dict(timing=args.timing)
    rows = [("a_enc", "b_enc", "case_tag")] + [(a, b, tag or "") for a, b, tag in report.pp_pairs]
    return d, rows


def cmd_classify(ctx, args):
    a, b = _element(ctx, args.a, "a"), _element(ctx, args.b, "b")
    v = cls.classify(ctx, a, b)
    d = _envelope(ctx, "classify")
    d.update({"a": a, "b": b, "is_pp": v.is_pp, "case": v.case_tag})
    if args.check:
        oracle = trinomial.is_permutation(trinomial.Trinomial(ctx, a, b))
        d["oracle_is_pp"] = oracle
        d["mismatches"] = [] if oracle == v.is_pp else [{"a": a, "b": b}]
    return d, None


def cmd_identities(ctx, args):
    d = _envelope(ctx, "identities")
    d["identities"] = identity_suite(ctx)
    return d, None


def cmd_powersums(ctx, args):
    d = _envelope(ctx, "powersums")
    d["expansion"] = trinomial.expansion_check(ctx, samples=args.samples or 1000, seed=args.seed)
    d["closed_forms"] = trinomial.closed_form_check(ctx)
    return d, None


def cmd_hermite(ctx, args):
    d = _envelope(ctx, "hermite")
    d["hermite"] = trinomial.hermite_crosscheck(ctx)
    return d, None


def cmd_cubic(ctx, args):
    d = _envelope(ctx, "cubic")
    if ctx.p != 2:
        d["disc_identities"] = cubic.sweep_disc_identities(ctx, workers=args.workers)
    if args.a is not None or args.b is not None:
        pairs = [(_element(ctx, args.a, "a"), _element(ctx, args.b, "b"))]
    else:
        pairs = cubic.nondegenerate_instances(ctx)
    if args.w is not None:
        a, b = pairs[0]
        w = _element(ctx, args.w, "w")
        params = cubic.coords_from_instance(ctx, a, b, w)
        point = dict(zip("cdeuv", params.values), epsilon=params.epsilon)
        if params.epsilon:
            g = cubic.build_g(params)
            point.update(g=list(g.coeffs), disc=cubic.disc_cubic(g), roots_in_fq=cubic.count_roots_fq(ctx, g))
        d["point"] = {"w": w, **point}
    results = []
    for a, b in pairs:
        r = cubic.uniqueness_property(ctx, a, b)
        results.append({"a": a, "b": b, "ok": r["ok"], "counterexamples": r["counterexamples"]})
    d["uniqueness"] = {"instances": len(results), "all_ok": all(r["ok"] for r in results),
                       "results": results}
    return d, None


COMMANDS = {
    "verify": (cmd_verify, "compare the closed-form classification with brute force"),
    "classify": (cmd_classify, "classify a single pair (a, b)"),
    "identities": (cmd_identities, "check the binomial-sum identities at every admissible z"),
    "powersums": (cmd_powersums, "check the power-sum expansion and its closed forms"),
    "hermite": (cmd_hermite, "cross-check Hermite's criterion against brute force (q^2 <= 64)"),
    "cubic": (cmd_cubic, "check the discriminant identities and root uniqueness"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permtri",
        description="Permutation trinomials a*x + b*x^q + x^(2q-1) over F_{q^2}.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--q", type=int, help="field order q (a prime power)")
        p.add_argument("--p", type=int, help="characteristic")
        p.add_argument("--n", type=int, help="extension degree, q = p^n")
        p.add_argument("--a", type=int, help="encoding of a")
        p.add_argument("--b", type=int, help="encoding of b")
        p.add_argument("--w", type=int, help="cubic: encoding of w; reports the coordinates and cubic at that point")
        p.add_argument("--samples", type=int, default=0, help="random sample count")
        p.add_argument("--seed", type=int, default=0, help="seed for sampling")
        p.add_argument("--workers", type=int, default=1, help="worker processes")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--timing", action="store_true",
                       help="record elapsed_ms (reports are then not reproducible byte for byte)")
        p.add_argument("--check", action="store_true", help="classify: also run the brute-force oracle")
    return parser


def _csv_text(report: dict, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if rows is None:
        rows = [("key", "value")] + list(_flatten(report))
    writer.writerows(rows)
    return buf.getvalue()


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        yield prefix.rstrip("."), json.dumps(obj, sort_keys=True)
    else:
        yield prefix.rstrip("."), json.dumps(obj) if isinstance(obj, (list, bool)) or obj is None else obj


def render(report: dict, rows, fmt: str) -> str:
    if fmt == "csv":
        return _csv_text(report, rows)
    return json.dumps(report, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler, _ = COMMANDS[args.command]
    try:
        if args.workers < 1:
            raise FieldError("--workers must be at least 1")
        if args.samples < 0:
            raise FieldError("--samples must be nonnegative")
        ctx = _context(args)
        start = time.perf_counter()
        report, rows = handler(ctx, args)
        elapsed = (time.perf_counter() - start) * 1000
    except FieldError as exc:
        print(f"permtri: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report.setdefault("elapsed_ms", round(elapsed, 3) if args.timing else None)
    text = render(report, rows, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_MISMATCH if _failures(report) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
