"""Command-line front end.

Exit codes: 0 success / valid, 1 invalid or failed check, 2 I/O or parse error.
"""

import argparse
import sys
from pathlib import Path

from .catalog import builtin_paper_catalog, dumps_canonical, parse_catalog, serialize_certificate
from .errors import ParseError, ValidationError
from .search import (
    SearchParams,
    format_lattice_info,
    format_search_text,
    lattice_info,
    parse_gram_spec,
    run_search,
    verify_paper_example,
    write_search_output,
)


def _cmd_verify(args, out):
    rep = verify_paper_example()
    print(rep.format_text(), file=out)
    if args.json and rep.certificate is not None:
        try:
            Path(args.json).write_text(serialize_certificate(rep.certificate), encoding="utf-8")
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    return 0 if rep.ok else 1


def _cmd_search(args, out):
    try:
        if args.catalog is None:
            catalog = builtin_paper_catalog()
        else:
            catalog = parse_catalog(Path(args.catalog).read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc.reason}: {exc}", file=sys.stderr)
        return 2
    try:
        params = SearchParams(args.max_rank, args.coeff_bound, args.enumerate_ample)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run_search(catalog, params)
    if args.output:
        try:
            write_search_output(report, args.output)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    if args.format == "json":
        out.write(dumps_canonical(report.summary()))
    else:
        print(format_search_text(report), file=out)
    return 0


def _cmd_lattice_info(args, out):
    try:
        lat = parse_gram_spec(args.gram)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(format_lattice_info(lattice_info(lat)), file=out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tcsmatch",
        description="Exact lattice and Chern-class arithmetic for matched building blocks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-paper-example", help="reproduce the MM2-13 / MM2-14 configuration")
    p.add_argument("--json", metavar="PATH", help="write the bundle certificate as canonical JSON")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("search", help="search a block catalog for admissible configurations")
    p.add_argument("--catalog", metavar="PATH", help="catalog file (default: built-in catalog)")
    p.add_argument("--max-rank", type=int, default=4, metavar="N")
    p.add_argument("--coeff-bound", type=int, default=5, metavar="K")
    p.add_argument("--enumerate-ample", type=int, default=None, metavar="B",
                   help="also try every primitive positive class in [-B, B]^2 (ample-unverified)")
    p.add_argument("--output", metavar="DIR", help="write report.json and certificates/ here")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("lattice-info", help="invariants of a Gram matrix")
    p.add_argument("--gram", required=True, metavar="SPEC", help='e.g. "[[6,6],[6,2]]"')
    p.set_defaults(func=_cmd_lattice_info)
    return parser


def main(argv=None, out=None):
    args = build_parser().parse_args(argv)
    return args.func(args, out or sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
