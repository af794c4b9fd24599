"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error, 2 budget violation,
3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import os
import sys
from typing import Optional, Sequence

from . import algebraic, lab, machines
from .allocator import BudgetExceeded, CodeBook, RequestStream, allocate_stream, verify_codebook
from .lengths import (DEFAULT_CAP, KLengthSpec, LevelTooLarge, check_bits, count_level,
                      enumerate_level, k_length)

EXIT_USAGE, EXIT_BUDGET, EXIT_CAP = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    return int(value) if value else default


def show_bits(s: str) -> str:
    return s if s else '""'


def _bits_arg(s: str) -> str:
    s = "" if s in ('""', "''") else s
    try:
        return check_bits(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _open_out(path: Optional[str]):
    return open(path, "w", newline="") if path else contextlib.nullcontext(sys.stdout)


def _write_rows(out, header, rows, fmt: str):
    if fmt == "json":
        json.dump([dict(zip(header, r)) for r in rows], out, indent=2)
        out.write("\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {path}: {exc}")


def _load_machine(path: str) -> machines.TableMachine:
    data = _load_json(path)
    try:
        return machines.TableMachine.from_codebook(CodeBook.from_json(data))
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad machine file {path}: {exc}")


# ---------------------------------------------------------------- commands

def cmd_length(args) -> int:
    spec = KLengthSpec(args.k, args.marked)
    if args.level is None:
        if args.string is None:
            raise UsageError("give a bit string or --level")
        print(k_length(spec, args.string))
        return 0
    if not args.enumerate:
        print(count_level(spec, args.level).count)
        return 0
    try:
        level = enumerate_level(spec, args.level, cap=args.cap)
    except LevelTooLarge as exc:
        print(f"refused: level has {exc.count} strings (cap {exc.cap})", file=sys.stderr)
        return EXIT_CAP
    for s in level:
        print(show_bits(s))
    return 0


def cmd_tables(args) -> int:
    roots, conversion = algebraic.emit_tables(args.precision)
    with _open_out(args.out) as out:
        if args.which == "roots":
            _write_rows(out, ("k", "p_k"), roots, args.format)
        else:
            _write_rows(out, ("j", "k", "ratio"), conversion, args.format)
    return 0


def cmd_kc(args) -> int:
    try:
        with open(args.requests) as fh:
            stream = RequestStream.from_jsonl(args.k, fh)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read requests: {exc}")
    try:
        book = allocate_stream(stream)
    except BudgetExceeded as exc:
        print(f"budget exceeded at index {exc.index}", file=sys.stderr)
        return EXIT_BUDGET
    with _open_out(args.out) as out:
        json.dump(book.to_json(), out, indent=2)
        out.write("\n")
    return 0


def cmd_verify(args) -> int:
    data = _load_json(args.codebook)
    book = CodeBook.from_json(data)
    report = verify_codebook(book)
    for a, b in report.prefix_violations:
        print(f"prefix violation: {show_bits(a)} {show_bits(b)}")
    print(f"prefix_free={not report.prefix_violations} "
          f"within_budget={report.within_budget}")
    return 0 if report.ok else EXIT_BUDGET


def cmd_machine(args) -> int:
    m = _load_machine(args.machine)
    if args.action == "decode":
        out = m.decode(args.input)
        print("undefined" if out is None else show_bits(out))
    elif args.action == "complexity":
        K = machines.k_complexity(m, args.k, args.input)
        print("inf" if K == machines.INFINITE else K)
    else:
        report = machines.deficiency_set(m, args.k, args.j, args.n)
        with _open_out(args.out) as out:
            _write_rows(out, ("sigma", "K", "l_j", "member"), report.csv_rows(), args.format)
        print(f"certified={report.certified}", file=sys.stderr)
    return 0


def cmd_icm(args) -> int:
    data = _load_json(args.icm)
    try:
        icm = machines.Icm.from_json(data)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad icm file: {exc}")
    if args.action == "validate":
        ok = machines.icm_validate(icm)
        print("true" if ok else "false")
        return 0 if ok else EXIT_BUDGET
    if not machines.icm_validate(icm):
        print("icm weight exceeds 1", file=sys.stderr)
        return EXIT_BUDGET
    m = machines.icm_compile(icm)
    book = {"k": icm.k, "entries": [{"code": c, "output": o} for c, o in m.table.items()]}
    with _open_out(args.out) as out:
        json.dump(book, out, indent=2)
        out.write("\n")
    return 0


def cmd_lab(args) -> int:
    if args.action == "sample":
        print(show_bits(lab.sample(args.j, args.seed, args.n)))
        return 0
    seeds = list(range(args.seed, args.seed + args.seeds))
    reports = lab.rate_reports(args.j, args.k, seeds, args.n, workers=args.workers)
    with _open_out(args.out) as out:
        _write_rows(out, lab.REPORT_HEADER, [r.csv_row() for r in reports], args.format)
    print(lab.LIMITATION, file=sys.stderr)
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    precision = _env_int("KLENGTH_PRECISION", algebraic.DEFAULT_PRECISION)
    cap = _env_int("KLENGTH_CAP", DEFAULT_CAP)

    parser = _Parser(prog="klength", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, out=True):
        p.add_argument("--precision", type=int, default=precision)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if out:
            p.add_argument("--out", "-o")

    p = sub.add_parser("length", help="k-length, level counts and level enumeration")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--marked", choices=("0", "1"), default="1")
    p.add_argument("string", nargs="?", type=_bits_arg)
    p.add_argument("--level", type=int)
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--cap", type=int, default=cap)
    p.set_defaults(func=cmd_length)

    p = sub.add_parser("tables", help="p_k table and conversion factors")
    p.add_argument("--which", choices=("roots", "conversion"), default="roots")
    common(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("kc", help="allocate codewords for a request stream")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("requests")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_kc)

    p = sub.add_parser("verify", help="check a codebook file")
    p.add_argument("codebook")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("machine", help="table machine tools")
    msub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("decode", "complexity", "deficiency"):
        q = msub.add_parser(name)
        q.add_argument("--machine", required=True)
        if name != "deficiency":
            q.add_argument("input", type=_bits_arg)
        q.add_argument("--k", type=int, default=1)
        if name == "deficiency":
            q.add_argument("--j", type=int, default=1)
            q.add_argument("--n", type=int, default=0)
            common(q)
        q.set_defaults(func=cmd_machine)

    p = sub.add_parser("icm", help="validate or compile an information content measure")
    p.add_argument("action", choices=("validate", "compile"))
    p.add_argument("icm")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_icm)

    p = sub.add_parser("lab", help="sampling and rate reports")
    p.add_argument("action", choices=("sample", "report"))
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_lab)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "precision", 32) < 32:
        parser.error("--precision must be at least 32")
    if getattr(args, "cap", 1) < 1:
        parser.error("--cap must be at least 1")
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"klength: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
