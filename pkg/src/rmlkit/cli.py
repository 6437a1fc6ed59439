"""Command-line interface.

Subcommands mirror the library surface: censuses, Whitney verification,
density tables, and the hyperoval / scattered-MRD property sweeps.  All
commands print a JSON document; exit status is 0 when every requested
check passes, 2 when a comparison was flagged as a mismatch, and 1 on
errors (bad parameters, budget refusals).
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys

from .census import asymptotic_report, count_mrd_exhaustive, count_one_weight
from .errors import RmlkitError
from .fields import field_tower
from .geometry import classify_translation_hyperovals, is_scattered_pair
from .lattice import (LatticeParams, build_lattice, cache_path,
                      closed_formula_i2m3, load_lattice, mobius_and_whitney,
                      save_lattice, verify_whitney)
from .errors import DegenerateSubspace
from .qpoly import QPolynomial
from .codes import PolyCode

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2, default=str)
    print(text)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")


def _cmd_census_mrd(args) -> int:
    result = count_mrd_exhaustive(args.q, args.m, heavy=args.heavy,
                                  threads=args.threads,
                                  checkpoint_dir=args.checkpoint,
                                  fingerprint=args.fingerprint)
    payload = result.to_dict()
    if not args.trace:
        payload["shards"] = f"{len(result.shards)} shards (pass --trace for details)"
    _emit(payload, args.out)
    return EXIT_OK if result.match in (True, None) else EXIT_MISMATCH


def _cmd_census_one_weight(args) -> int:
    result = count_one_weight(args.m, args.k, args.q, mode=args.mode)
    _emit(result.to_dict(), args.out)
    return EXIT_OK if result.match in (True, None) else EXIT_MISMATCH


def _cmd_whitney(args) -> int:
    params = LatticeParams(args.i, args.n, args.m, args.q)
    lattice = None
    if args.cache:
        path = cache_path(args.cache, params)
        try:
            lattice = load_lattice(path)
        except FileNotFoundError:
            lattice = None
    if args.method == "closed":
        values = {j: closed_formula_i2m3(args.n, j, args.q) for j in _js(args, params)}
        _emit({"params": vars(args), "closed_formula": {str(j): v for j, v in values.items()}},
              args.out)
        return EXIT_OK
    if args.method == "recursion":
        from .lattice import recursion_base, whitney_recursion
        values, skipped = {}, []
        for j in _js(args, params):
            if params.n <= params.i * j:
                skipped.append(j)  # circular as printed; brute force only
                continue
            base = recursion_base(params.i, params.m, params.q, j,
                                  min(params.i * j, params.n - 1))
            values[str(j)] = whitney_recursion(params.i, params.n, params.m,
                                               params.q, j, base)
        _emit({"params": {"i": params.i, "n": params.n, "m": params.m, "q": params.q},
               "recursion": values, "skipped_circular_j": skipped}, args.out)
        return EXIT_OK
    if args.method == "brute":
        if lattice is None:
            lattice = build_lattice(params)
        wv = mobius_and_whitney(lattice)
        if args.cache:
            save_lattice(lattice, cache_path(args.cache, params))
        payload = {"params": {"i": params.i, "n": params.n, "m": params.m, "q": params.q},
                   "whitney_first_kind": list(wv.first_kind),
                   "whitney_second_kind": list(wv.second_kind),
                   "sanity": wv.check_sanity()}
        _emit(payload, args.out)
        return EXIT_OK if not payload["sanity"] else EXIT_MISMATCH
    # method "all" (default): brute + recursion + closed formula comparison
    record = verify_whitney(params, j=args.j)
    _emit(json.loads(record.to_json()), args.out)
    if args.cache:
        from .lattice import _BRUTE_CACHE
        lat = _BRUTE_CACHE[(min(params.i, params.n), params.n, params.m, params.q)][0]
        save_lattice(lat, cache_path(args.cache, params))
    return EXIT_MISMATCH if record.mismatch else EXIT_OK


def _js(args, params):
    return [args.j] if args.j is not None else range(1, params.n + 1)


def _cmd_verify_hyperovals(args) -> int:
    report = classify_translation_hyperovals(args.q)
    _emit(json.loads(report.to_json()), args.out)
    return EXIT_OK if report.prediction_match else EXIT_MISMATCH


def _cmd_verify_scattered(args) -> int:
    tower = field_tower(args.q, args.m)
    rng = random.Random(args.seed)
    Q = tower.big_order
    tested = violations = degenerate = 0
    while tested < args.samples:
        f1 = QPolynomial(tower, [rng.randrange(Q) for _ in range(tower.m)])
        f2 = QPolynomial(tower, [rng.randrange(Q) for _ in range(tower.m)])
        code = PolyCode.from_polys(tower, [f1, f2])
        if code.k != 2:
            continue
        try:
            scattered = is_scattered_pair(f1, f2)
        except DegenerateSubspace:
            degenerate += 1
            if code.is_mrd():
                violations += 1  # degenerate U must never be MRD
            tested += 1
            continue
        if scattered != code.is_mrd():
            violations += 1
        tested += 1
    payload = {"q": args.q, "m": args.m, "samples": tested, "seed": args.seed,
               "degenerate_pairs": degenerate, "violations": violations}
    _emit(payload, args.out)
    return EXIT_OK if violations == 0 else EXIT_MISMATCH


def _cmd_density(args) -> int:
    report = asymptotic_report(args.family, limit=args.range_end)
    _emit(report, args.out)
    if args.csv:
        rows = report["rows"]
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
    ok = report.get("bounded_by_envelope", True) and all(
        report.get("limit_checks", {"": True}).values())
    if "limit_check" in report:
        ok = ok and report["limit_check"]["limit_is_half"]
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmlkit",
        description="exact censuses, Whitney numbers, and property sweeps "
                    "for rank-metric codes and lattices")
    sub = parser.add_subparsers(dest="command", required=True)

    census = sub.add_parser("census", help="exhaustive code censuses")
    census_sub = census.add_subparsers(dest="what", required=True)

    mrd = census_sub.add_parser("mrd", help="count 2-dimensional MRD codes in F_{q^m}^m")
    mrd.add_argument("--q", type=int, required=True)
    mrd.add_argument("--m", type=int, required=True)
    mrd.add_argument("--heavy", action="store_true",
                     help="allow censuses beyond the light-tier budget")
    mrd.add_argument("--threads", type=int, default=1)
    mrd.add_argument("--checkpoint", metavar="DIR", default=None,
                     help="persist finished shards here and resume from them")
    mrd.add_argument("--fingerprint", action="store_true",
                     help="also tally monomial idealizer sizes per MRD code")
    mrd.add_argument("--trace", action="store_true", help="include per-shard counts")
    mrd.add_argument("--out", metavar="FILE.json", default=None)
    mrd.set_defaults(func=_cmd_census_mrd)

    ow = census_sub.add_parser("one-weight", help="count [mk, k, m] one-weight codes")
    ow.add_argument("--q", type=int, required=True)
    ow.add_argument("--m", type=int, required=True)
    ow.add_argument("--k", type=int, required=True)
    ow.add_argument("--mode", choices=["exhaustive", "formula", "both"], default="both")
    ow.add_argument("--out", default=None)
    ow.set_defaults(func=_cmd_census_one_weight)

    wh = sub.add_parser("whitney", help="Whitney numbers by brute force, recursion, closed form")
    wh.add_argument("--i", type=int, required=True)
    wh.add_argument("--n", type=int, required=True)
    wh.add_argument("--m", type=int, required=True)
    wh.add_argument("--q", type=int, required=True)
    wh.add_argument("--j", type=int, default=None, help="single rank to check")
    wh.add_argument("--method", choices=["brute", "recursion", "closed", "all"],
                    default="all",
                    help="'all' compares every applicable method and exits 2 on mismatch")
    wh.add_argument("--cache", metavar="DIR", default=None,
                    help="lattice cache directory (reused and refreshed)")
    wh.add_argument("--out", default=None)
    wh.set_defaults(func=_cmd_whitney)

    verify = sub.add_parser("verify", help="property sweeps")
    verify_sub = verify.add_subparsers(dest="what", required=True)

    hyp = verify_sub.add_parser("hyperovals",
                                help="classify additive-map hyperovals against the monomial prediction")
    hyp.add_argument("--q", type=int, required=True)
    hyp.add_argument("--out", default=None)
    hyp.set_defaults(func=_cmd_verify_hyperovals)

    sc = verify_sub.add_parser("scattered-mrd",
                               help="random pairs: scattered iff MRD biconditional")
    sc.add_argument("--q", type=int, required=True)
    sc.add_argument("--m", type=int, required=True)
    sc.add_argument("--samples", type=int, default=1000)
    sc.add_argument("--seed", type=int, default=0)
    sc.add_argument("--out", default=None)
    sc.set_defaults(func=_cmd_verify_scattered)

    dens = sub.add_parser("density", help="exact density tables and asymptotic checks")
    dens.add_argument("--family", choices=["m4_mrd", "q2_mrd", "one_weight"], required=True)
    dens.add_argument("--range", type=int, default=None, dest="range_end",
                      help="upper end of the parameter range (m or q)")
    dens.add_argument("--csv", metavar="FILE.csv", default=None)
    dens.add_argument("--out", default=None)
    dens.set_defaults(func=_cmd_density)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RmlkitError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
