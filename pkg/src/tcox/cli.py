"""Command line front end: ``tcox fan|owgraph|bundle|cotangent FILE`` and ``tcox catalog --verify``."""
from __future__ import annotations

import argparse
import json
import sys
import time

from .catalog import report_json, report_text, run, verify_catalog
from .dialects import KINDS, parse_input
from .errors import SchemaError, TcoxError
from .presentation import ideal_listing

EXIT_OK, EXIT_INVALID, EXIT_SCHEMA = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tcox", description="Cox rings of varieties with a torus action of complexity one.")
    sub = ap.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"compute the Cox ring of a {kind} input file")
        p.add_argument("file", help="JSON input ('-' for stdin)")
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--check", action="store_true", help="run the structural invariants on the output")
        p.add_argument("--ideal-out", metavar="FILE", help="write a plain-text listing of the ideal")
    c = sub.add_parser("catalog", help="built-in fixtures")
    c.add_argument("--verify", action="store_true", help="recompute every fixture and compare")
    c.add_argument("--jobs", type=int, default=1, help="worker processes for verification")
    c.add_argument("--format", choices=("json", "text"), default="text")
    return ap


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _run_job(args) -> int:
    try:
        job = parse_input(_read(args.file), args.command)
    except OSError as e:
        print(f"error: cannot read {args.file}: {e.strerror}", file=sys.stderr)
        return EXIT_SCHEMA
    except SchemaError as e:
        print(f"schema error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        rep = run(job, check=args.check)
    except TcoxError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INVALID
    if args.format == "json":
        sys.stdout.write(json.dumps(report_json(rep), indent=2) + "\n")
    else:
        sys.stdout.write(report_text(rep))
    if args.ideal_out and rep.presentation is not None:
        with open(args.ideal_out, "w", encoding="utf-8") as fh:
            fh.write(ideal_listing(rep.presentation))
    return EXIT_OK if rep.ok else EXIT_INVALID


def _catalog(args) -> int:
    if not args.verify:
        from .catalog import load_catalog
        for fx in load_catalog():
            print(f"{fx['name']:<32} {fx['kind']:<10} {fx.get('source', '')}")
        return EXIT_OK
    t = time.perf_counter()
    results = verify_catalog(jobs=args.jobs)
    total = time.perf_counter() - t
    ok = all(r.ok for r in results)
    if args.format == "json":
        doc = {"ok": ok, "seconds": round(total, 3),
               "fixtures": [{"name": r.name, "ok": r.ok, "failures": r.failures} for r in results]}
        print(json.dumps(doc, indent=2))
    else:
        for r in results:
            print(f"{'PASS' if r.ok else 'FAIL'}  {r.name}")
            for f in r.failures:
                print(f"      {f}")
        print(f"{sum(r.ok for r in results)}/{len(results)} fixtures pass in {total:.2f} s")
    return EXIT_OK if ok else EXIT_INVALID


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "catalog":
        return _catalog(args)
    return _run_job(args)


if __name__ == "__main__":
    sys.exit(main())
