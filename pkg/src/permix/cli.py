"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from fractions import Fraction

from .core import DomainError, FamilySpec, breakpoints, make_config
from .geometry import metric_gram_determinants, mixed_volume, normalizer_V
from .rational import format_fraction, parse_list
from .records import CACHE_ENV, RunRecord, ResultCache, default_cache_path
from .suites import SUITES, run_suite
from .walk import READINGS, MIRRORED, guess_scan, product_formula, walk_probability

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

# closed form of the normalizer of n=4, R={1,3} in the facet embedding metric
REFERENCE_V_COEF, REFERENCE_V_RADICAND = 32, 2


def _config_arg(text):
    try:
        return parse_list(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"--u must be comma-separated rationals p/q: {exc}")


def _add_family(p, require_rs=True):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=require_rs, default=None)
    p.add_argument("--s", type=int, required=require_rs, default=None)


def _add_format(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json")
    g.add_argument("--csv", dest="fmt", action="store_const", const="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permix",
        description="Exact mixed volumes of two-parameter permutahedral families.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="mixed volume of one configuration")
    _add_family(p)
    p.add_argument("--u", type=_config_arg, required=True,
                   help="comma-separated rationals, e.g. 1/4,1/2,3/4")
    p.add_argument("--method", choices=("walk", "oracle", "formula"), default="walk")
    p.add_argument("--reading", choices=READINGS, default=MIRRORED,
                   help="descending-case reading for --method formula")
    p.add_argument("--cache", default=None, help=f"NDJSON cache file (default ${CACHE_ENV})")
    p.add_argument("--no-cache", action="store_true")
    _add_format(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    _add_format(p)

    p = sub.add_parser("guess-scan", help="scan the mod-n congruence on grid configurations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int, default=None, help="stop after this many configurations")
    p.add_argument("--include-degenerate", action="store_true",
                   help="also scan configurations containing 0 or 1")
    _add_format(p)

    p = sub.add_parser("normalizer", help="normalizer V and its metric scale factors")
    _add_family(p)
    _add_format(p)

    p = sub.add_parser("dump-breakpoints", help="absorption sites and capacities")
    _add_family(p)
    _add_format(p)
    return parser


def _emit_rows(rows: list[dict], fmt: str | None, out):
    if fmt == "csv":
        if not rows:
            return
        writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v)
                             for k, v in row.items()})
    else:
        for row in rows:
            out.write(json.dumps(row) + "\n")


def _compute(family: FamilySpec, cfg, method: str, reading: str) -> RunRecord:
    start = time.perf_counter()
    if method == "walk":
        ratio = walk_probability(family, cfg).success_probability
        value = ratio * normalizer_V(family)
    elif method == "oracle":
        res = mixed_volume(family, cfg)
        ratio, value = res.ratio, res.value
    else:
        ratio = product_formula(family, cfg, reading)
        if ratio is None:
            raise DomainError("closed form needs the sorted configuration entrywise below "
                              "or entrywise above the sorted target multiset")
        value = ratio * normalizer_V(family)
    elapsed = (time.perf_counter() - start) * 1000
    return RunRecord(family, cfg, method, format_fraction(value), format_fraction(ratio),
                     round(elapsed, 3))


def cmd_compute(args, out) -> int:
    family = FamilySpec(args.n, args.r, args.s)
    cfg = make_config(family, args.u)
    cache = None
    # cache keys carry no reading, so only the default one is cached
    if not args.no_cache and not (args.method == "formula" and args.reading != MIRRORED):
        path = args.cache or default_cache_path()
        if path:
            cache = ResultCache(path)
    record = cache.get(family, cfg, args.method) if cache else None
    if record is None:
        record = _compute(family, cfg, args.method, args.reading)
        if cache is not None:
            record = cache.put(record)
    _emit_rows([record.to_json()], args.fmt, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    results = run_suite(args.suite)
    if args.fmt in ("json", "csv"):
        _emit_rows([r.to_json() for r in results], args.fmt, out)
    else:
        for r in results:
            out.write(r.line() + "\n")
    failed = sum(not r.passed for r in results)
    summary = f"{args.suite}: {len(results) - failed}/{len(results)} passed"
    print(summary, file=sys.stderr if args.fmt else out)
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_guess_scan(args, out) -> int:
    if not 3 <= args.n <= 6:
        raise DomainError(f"guess-scan supports 3 <= n <= 6, got {args.n}")
    reports = guess_scan(args.n, args.bound, args.include_degenerate)
    if args.fmt in ("json", "csv"):
        _emit_rows([r.to_json() for r in reports], args.fmt, out)
    else:
        out.write(f"{'config':<28} {'lhs':>12} {'rhs':>8}  holds\n")
        for r in reports:
            cfg = ",".join(format_fraction(x) for x in r.config)
            lhs = "NON_INTEGER" if r.lhs is None else str(r.lhs)
            out.write(f"{cfg:<28} {lhs:>12} {r.rhs:>8}  {r.holds}\n")
    holds = sum(r.holds is True for r in reports)
    print(f"n={args.n}: {holds}/{len(reports)} configurations satisfy the congruence "
          f"(report only, not an assertion)", file=sys.stderr if args.fmt else out)
    return EXIT_OK


def sqrt_form(x: Fraction) -> tuple[Fraction, int]:
    """Write sqrt(x) as coef * sqrt(radicand) with a squarefree integer radicand."""
    x = Fraction(x)
    num = x.numerator * x.denominator
    coef, radicand, k = 1, 1, 2
    while k * k <= num:
        while num % (k * k) == 0:
            num //= k * k
            coef *= k
        if num % k == 0:
            num //= k
            radicand *= k
        k += 1
    radicand *= num
    return Fraction(coef, x.denominator), radicand


def normalizer_report(family: FamilySpec) -> dict:
    v0 = normalizer_V(family)
    report = {"family": family.to_json(), "value": format_fraction(v0),
              "convention": "coordinates v_1..v_{n-1}", "metrics": {}}
    for name, gram in metric_gram_determinants(family).items():
        coef, rad = sqrt_form(gram)
        scaled = v0 * coef
        text = format_fraction(scaled) + (f"*sqrt({rad})" if rad != 1 else "")
        report["metrics"][name] = {"gram_determinant": format_fraction(gram), "value": text}
    if (family.n, family.r, family.s) == (4, 1, 3):
        report["reference_value"] = f"{REFERENCE_V_COEF}*sqrt({REFERENCE_V_RADICAND})"
        # squared scale from coordinates to the reference value
        report["reference_scale_squared"] = format_fraction(
            Fraction(REFERENCE_V_COEF ** 2 * REFERENCE_V_RADICAND) / v0 ** 2)
    return report


def cmd_normalizer(args, out) -> int:
    family = FamilySpec(args.n, args.r, args.s)
    report = normalizer_report(family)
    if args.fmt == "csv":
        rows = [{"metric": k, **v} for k, v in report["metrics"].items()]
        rows.insert(0, {"metric": "coordinates", "gram_determinant": "1/1",
                        "value": report["value"]})
        _emit_rows(rows, "csv", out)
    else:
        out.write(json.dumps(report, indent=None if args.fmt else 2) + "\n")
    return EXIT_OK


def cmd_dump_breakpoints(args, out) -> int:
    family = FamilySpec(args.n, args.r, args.s)
    rows = [{"t": b.t, "position": format_fraction(b.position),
             "capacity": "KILL" if b.is_kill else b.capacity}
            for b in breakpoints(family)]
    if args.fmt:
        _emit_rows(rows, args.fmt, out)
    else:
        for row in rows:
            out.write(f"t={row['t']:<3} p={row['position']:<10} capacity={row['capacity']}\n")
    return EXIT_OK


COMMANDS = {
    "compute": cmd_compute,
    "verify": cmd_verify,
    "guess-scan": cmd_guess_scan,
    "normalizer": cmd_normalizer,
    "dump-breakpoints": cmd_dump_breakpoints,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
