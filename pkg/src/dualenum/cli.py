"""Command-line front end.

Exit codes: 0 enumeration complete, 1 usage or parse error, 2 limit reached
(output is partial), 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import oracle
from .dimacs import DimacsError, ProblemInstance, parse_dimacs, parse_show, write_cube, write_summary
from .enumerator import MODES, Enumerator
from .shrink import InvariantViolation

EXIT_OK, EXIT_USAGE, EXIT_LIMIT, EXIT_INVARIANT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dualenum", description="Enumerate the models of a DIMACS CNF "
                 "projected onto the variables of its 'c p show' lines.")
    ap.add_argument("input", help="DIMACS CNF file, or - for stdin")
    ap.add_argument("--mode", choices=MODES, default="irredundant")
    ap.add_argument("--project", metavar="FILE",
                    help="read the relevant variables from the show lines of FILE")
    ap.add_argument("--max-models", type=_positive, metavar="N")
    ap.add_argument("--max-conflicts", type=_positive, metavar="N")
    ap.add_argument("--check", action="store_true",
                    help="compare the result against a truth-table oracle")
    ap.add_argument("--debug-invariants", action="store_true",
                    help="check invariants after every rule application")
    ap.add_argument("--stats", action="store_true", help="print 's' summary lines")
    ap.add_argument("--quiet", action="store_true", help="suppress 'v' lines")
    return ap


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as f:
        return f.read()


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        inst = parse_dimacs(_read(args.input))
        if args.project:
            shown = parse_show(_read(args.project), inst.num_vars)
            if shown is None:
                raise DimacsError("no show line in %s" % args.project)
            inst = ProblemInstance(inst.formula, frozenset(shown), inst.num_vars, inst.num_clauses)
    except (OSError, DimacsError) as e:
        print("dualenum: %s" % e, file=stderr)
        return EXIT_USAGE

    def emit(cube):
        if not args.quiet:
            write_cube(cube, stdout)
            stdout.flush()

    enum = Enumerator(inst, args.mode, max_models=args.max_models,
                      max_conflicts=args.max_conflicts,
                      debug_invariants=args.debug_invariants, on_cube=emit)
    try:
        result = enum.run()
    except InvariantViolation as e:
        print("dualenum: %s" % e, file=stderr)
        return EXIT_INVARIANT
    if args.stats:
        write_summary(result.M, result.stats, stdout, len(inst.relevant))
        stdout.write("s termination %s\n" % result.cause)
    code = EXIT_OK if result.complete else EXIT_LIMIT
    if args.check:
        try:
            ok = result.complete and oracle.covers_equal(result.M, inst.formula, inst.relevant)
            if ok and args.mode == "irredundant":
                ok = oracle.is_dsop(result.M)
        except oracle.CapExceeded as e:
            print("dualenum: check skipped: %s" % e, file=stderr)
        else:
            if not result.complete:
                print("dualenum: check skipped: enumeration incomplete", file=stderr)
            elif not ok:
                print("dualenum: check failed: output differs from the oracle", file=stderr)
                return EXIT_INVARIANT
            else:
                print("c check passed", file=stderr)
    return code


def main() -> None:
    sys.exit(run())
