"""Command-line entry point.

Exit codes: 0 success, 1 usage or input error, 2 missing resource,
3 capability exceeded, 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISSING = 2
EXIT_CAPACITY = 3
EXIT_MISMATCH = 4

CENSUS_CSV_HEADER = "n,graph6,connected,regular,bipartite,worthy,vt,et,at,hat,semisym,aut_order"

# largest order whose full row the default pipelines can compute
GROUP_PIPELINE_MAX = 8
ORACLE_DEFAULT_MAX = 9
ORACLE_LONG_MAX = 10
BIPARTITE_MAX = 16


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_orders(text: str) -> list[int]:
    """Parse '5', '1..8', '3,5,9' or combinations such as '1..4,9'."""
    out: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            if ".." in chunk:
                a, b = chunk.split("..", 1)
                lo, hi = int(a), int(b)
                if lo > hi:
                    raise UsageError(f"empty order range {chunk!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(chunk))
        except ValueError:
            raise UsageError(f"cannot parse order list {text!r}") from None
    if not out or min(out) < 1:
        raise UsageError("orders must be positive integers")
    return sorted(set(out))


def _default_workers() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity")
               else (os.cpu_count() or 1))


def _catalogue(args):
    from .transcat import Catalogue, load_catalogue, shipped_catalogue

    path = getattr(args, "catalogue", None)
    try:
        cat = load_catalogue(path) if path else shipped_catalogue()
    except FileNotFoundError as exc:
        raise FileNotFoundError(
            f"{exc}; build one with `etcensus catalogue build --max-degree K --out PATH` "
            f"and pass it with --catalogue PATH") from None
    cap = getattr(args, "max_degree", None)
    if cap is not None and cap < cat.max_degree:
        cat = Catalogue(cap, {k: v for k, v in cat.entries.items() if k <= cap}, cat.provenance)
    return cat


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _record_csv(records) -> str:
    lines = [CENSUS_CSV_HEADER]
    for r in records:
        lines.append(",".join(str(x) for x in [r.n, r.graph6, *r.flags.csv_values()]))
    return "\n".join(lines) + "\n"


# -- catalogue ------------------------------------------------------------------------


def cmd_catalogue(args) -> int:
    from .transcat import (KNOWN_COUNTS, build_catalogue, load_catalogue, save_catalogue,
                           shipped_catalogue)

    if args.action == "build":
        t0 = time.time()
        cat = build_catalogue(args.max_degree, allow_long=args.long)
        for k in range(args.max_degree, 0, -1):
            print(f"degree {k}: {len(cat.degree(k))} groups")
        print(f"total: {sum(cat.counts().values())} groups in {time.time() - t0:.1f}s")
        if args.out:
            save_catalogue(cat, args.out)
            print(f"written to {args.out}")
        return EXIT_OK
    cat = load_catalogue(args.path) if args.path else shipped_catalogue()
    bad = 0
    for k, c in sorted(cat.counts().items()):
        known = KNOWN_COUNTS.get(k)
        status = "MATCH" if known == c else ("UNKNOWN" if known is None else "MISMATCH")
        bad += status == "MISMATCH"
        print(f"degree {k}: {c} groups (expected {known}) {status}")
    if args.rebuild is not None:
        fresh = build_catalogue(args.rebuild, allow_long=args.long)
        for k in range(1, args.rebuild + 1):
            same = k in cat.entries and fresh.degree(k) == cat.degree(k)
            bad += not same
            print(f"degree {k}: rebuilt {'identical' if same else 'DIFFERENT'}")
    return EXIT_MISMATCH if bad else EXIT_OK


# -- census ----------------------------------------------------------------------------


def cmd_census(args) -> int:
    from .census import bipartite_census, full_census

    orders = parse_orders(args.order)
    cat = _catalogue(args)
    workers = args.workers or _default_workers()
    cache: dict = {}
    by_n = {}
    for n in orders:
        if args.bipartite_only:
            by_n[n] = bipartite_census(n, cat, workers=workers, worthy_cache=cache)
        else:
            by_n[n] = full_census(n, cat, workers=workers, worthy_cache=cache)
    _emit_census(args, by_n)
    return EXIT_OK


def _emit_census(args, by_n: dict) -> None:
    from .census import tabulate

    records = [r for n in sorted(by_n) for r in by_n[n]]
    _write(args.out, "".join(r.graph6 + "\n" for r in records))
    if args.csv:
        _write(args.csv, _record_csv(records))
    if args.table:
        _write(args.table, tabulate(by_n).to_csv())


def cmd_oracle(args) -> int:
    from .census import tabulate
    from .oracle import oracle_census

    recs = oracle_census(args.n, allow_long=args.long, workers=args.workers or _default_workers())
    if args.emit_et:
        _write(args.emit_et, _record_csv(recs))
    sys.stdout.write(tabulate({args.n: recs}).to_csv())
    return EXIT_OK


# -- classify ---------------------------------------------------------------------------


def cmd_classify(args) -> int:
    from .graph import classify, from_graph6

    stream = open(args.path, encoding="utf-8") if args.path and args.path != "-" else sys.stdin
    status = EXIT_OK
    header_done = False
    with stream:
        for lineno, raw in enumerate(stream, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                X = from_graph6(line)
            except ValueError as exc:
                print(f"line {lineno}: {exc}", file=sys.stderr)
                status = EXIT_USAGE
                continue
            if not header_done:
                print(CENSUS_CSV_HEADER)
                header_done = True
            print(",".join(str(x) for x in [X.n, line, *classify(X).csv_values()]))
    return status


# -- constructions ------------------------------------------------------------------------


def cmd_construct(args) -> int:
    from .constructions import (construction_report, folkman_blowup, levi_and_complement,
                                symplectic_gq)
    from .graph import to_graph6

    if args.family == "folkman":
        X, Y = folkman_blowup(args.k)
        G = X if args.base else Y
    else:
        levi, comp = levi_and_complement(symplectic_gq(args.q))
        G = comp if args.complement else levi
    _write(args.out, to_graph6(G) + "\n")
    rep = construction_report(G, aut=not args.no_aut)
    for key, val in rep.items():
        if isinstance(val, bool):
            val = int(val)
        print(f"{key}: {val}")
    return EXIT_OK


# -- verify-table ------------------------------------------------------------------------


def _fmt(row) -> str:
    return "/".join(str(x) for x in row)


def cmd_verify_table(args) -> int:
    from .census import bipartite_census, full_census, tabulate
    from .oracle import oracle_census
    from .published import PUBLISHED_HAT_COUNT, PUBLISHED_ROWS, PUBLISHED_TOTALS

    orders = parse_orders(args.orders)
    workers = args.workers or _default_workers()
    cat = None
    cache: dict = {}
    mismatches = 0
    for n in orders:
        if n not in PUBLISHED_ROWS:
            print(f"n={n}: SKIPPED (no published row)")
            continue
        want = PUBLISHED_ROWS[n]
        t0 = time.time()
        if args.bipartite_only:
            if n > BIPARTITE_MAX:
                print(f"n={n}: SKIPPED (bipartite census stops at order {BIPARTITE_MAX})")
                continue
            cat = cat or _catalogue(args)
            got = len(bipartite_census(n, cat, workers=workers, worthy_cache=cache))
            ok = got == want[2]
            mismatches += not ok
            print(f"n={n}: Bpte computed {got} published {want[2]} "
                  f"{'MATCH' if ok else 'MISMATCH'} [bipartite, {time.time() - t0:.1f}s]")
            continue
        method = args.method
        if method == "auto":
            method = "group" if n <= GROUP_PIPELINE_MAX else "oracle"
        oracle_cap = ORACLE_LONG_MAX if args.long else ORACLE_DEFAULT_MAX
        if method == "oracle" and n > oracle_cap:
            why = "needs --long" if n <= ORACLE_LONG_MAX else "beyond desk scale"
            print(f"n={n}: SKIPPED ({why})")
            continue
        if method == "group":
            cat = cat or _catalogue(args)
            if n > cat.max_degree:
                print(f"n={n}: SKIPPED (catalogue stops at degree {cat.max_degree})")
                continue
            recs = full_census(n, cat, workers=workers, worthy_cache=cache)
        else:
            recs = oracle_census(n, allow_long=args.long, workers=workers)
        got = tabulate({n: recs}).row(n).as_tuple()
        ok = got == want
        mismatches += not ok
        print(f"n={n}: computed {_fmt(got)} published {_fmt(want)} "
              f"{'MATCH' if ok else 'MISMATCH'} [{method}, {time.time() - t0:.1f}s]")
    if not args.bipartite_only:
        print(f"All: SKIPPED (published totals {_fmt(PUBLISHED_TOTALS)} need every order up to 47)")
        print(f"HAT: SKIPPED (published count {PUBLISHED_HAT_COUNT} needs orders beyond desk scale)")
    return EXIT_MISMATCH if mismatches else EXIT_OK


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="etcensus", description="Census of connected edge-transitive graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, catalogue=True):
        sp.add_argument("--workers", type=int, default=None,
                        help="worker processes (default: available CPUs)")
        if catalogue:
            sp.add_argument("--catalogue", help="catalogue file (default: the bundled one)")
            sp.add_argument("--max-degree", type=int, help="ignore catalogue degrees above this")

    c = sub.add_parser("catalogue", help="build or check the transitive-group catalogue")
    csub = c.add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = csub.add_parser("build")
    b.add_argument("--max-degree", type=int, required=True)
    b.add_argument("--out")
    b.add_argument("--long", action="store_true", help="allow degrees 9 and 10")
    v = csub.add_parser("verify")
    v.add_argument("path", nargs="?")
    v.add_argument("--rebuild", type=int, metavar="K", help="rebuild degrees 1..K and compare")
    v.add_argument("--long", action="store_true")

    s = sub.add_parser("census", help="list connected edge-transitive graphs")
    s.add_argument("--order", required=True, help="order, range a..b, or comma list")
    s.add_argument("--bipartite-only", action="store_true")
    s.add_argument("--out", help="graph6 output (default: stdout)")
    s.add_argument("--csv", help="per-graph classification CSV")
    s.add_argument("--table", help="summary table CSV")
    common(s)

    k = sub.add_parser("classify", help="classify graph6 input")
    k.add_argument("path", nargs="?", help="input file (default: stdin)")

    o = sub.add_parser("oracle", help="census by exhaustive generation")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--long", action="store_true", help="allow order 10")
    o.add_argument("--emit-et", metavar="PATH")
    common(o, catalogue=False)

    t = sub.add_parser("construct", help="semi-symmetric constructions")
    tsub = t.add_subparsers(dest="family", required=True, parser_class=_Parser)
    f = tsub.add_parser("folkman")
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--base", action="store_true", help="emit the base graph instead")
    g = tsub.add_parser("gq")
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--complement", action="store_true")
    for sp in (f, g):
        sp.add_argument("--out", help="graph6 output (default: stdout)")
        sp.add_argument("--no-aut", action="store_true", help="skip the automorphism group")

    r = sub.add_parser("verify-table", help="compare computed rows with the published table")
    r.add_argument("--orders", required=True)
    r.add_argument("--long", action="store_true")
    r.add_argument("--method", choices=("auto", "group", "oracle"), default="auto")
    r.add_argument("--bipartite-only", action="store_true", help="check the Bpte column only")
    common(r)
    return p


COMMANDS = {
    "catalogue": cmd_catalogue,
    "census": cmd_census,
    "classify": cmd_classify,
    "oracle": cmd_oracle,
    "construct": cmd_construct,
    "verify-table": cmd_verify_table,
}


def main(argv=None) -> int:
    from .census import CapacityError
    from .transcat import CatalogueError

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if getattr(args, "workers", None) is not None and args.workers < 1:
            raise UsageError("--workers must be at least 1")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"etcensus: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"etcensus: missing resource: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except CatalogueError as exc:
        print(f"etcensus: bad catalogue: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except CapacityError as exc:
        print(f"etcensus: capability exceeded: {exc} (blocking parts {exc.blocking})",
              file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as exc:
        print(f"etcensus: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
