"""DIMACS CNF input with a ``c p show ... 0`` projection, and result output."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, TextIO, Union

from .core import CnfFormula, DnfAccumulator, var


class DimacsError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


@dataclass
class ProblemInstance:
    formula: CnfFormula
    relevant: frozenset
    num_vars: int
    num_clauses: int

    @property
    def irrelevant(self) -> frozenset:
        return frozenset(range(1, self.num_vars + 1)) - self.relevant

    @classmethod
    def from_clauses(cls, clauses, num_vars: Optional[int] = None, relevant=None):
        clauses = [list(c) for c in clauses]
        if num_vars is None:
            num_vars = max((abs(l) for c in clauses for l in c), default=0)
        f = CnfFormula(num_vars, clauses)
        if relevant is None:
            relevant = range(1, num_vars + 1)
        relevant = frozenset(relevant)
        if any(v < 1 or v > num_vars for v in relevant):
            raise ValueError("relevant variable out of range")
        return cls(f, relevant, num_vars, len(clauses))


def _text(data: Union[bytes, str, TextIO]) -> str:
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8", errors="replace")
    return data


def parse_show(data: Union[bytes, str, TextIO], num_vars: Optional[int] = None) -> Optional[set]:
    """Union of all ``c p show`` (or bare ``p show``) lines; None when there is none."""
    shown = None
    for lineno, line in enumerate(_text(data).splitlines(), 1):
        toks = line.split()
        if toks[:1] == ["c"]:
            toks = toks[1:]
        if toks[:2] != ["p", "show"]:
            continue
        shown = _show_vars(toks[2:], lineno, num_vars, shown)
    return shown


def _show_vars(toks, lineno, num_vars, shown):
    if shown is None:
        shown = set()
    try:
        nums = [int(t) for t in toks]
    except ValueError:
        raise DimacsError("non-integer in show line", lineno) from None
    if not nums or nums[-1] != 0:
        raise DimacsError("show line must end with 0", lineno)
    for v in nums[:-1]:
        if v <= 0 or (num_vars is not None and v > num_vars):
            raise DimacsError("show variable %d out of range" % v, lineno)
        shown.add(v)
    return shown


def parse_dimacs(data: Union[bytes, str, TextIO]) -> ProblemInstance:
    text = _text(data)
    num_vars = num_clauses = None
    clauses = []
    current: list = []
    shown = None
    lineno = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = line.split()
        if not toks:
            continue
        if toks[0] == "c":
            if toks[1:3] == ["p", "show"]:
                shown = _show_vars(toks[3:], lineno, num_vars, shown)
            continue
        if toks[0].startswith("c"):
            continue
        if toks[0] == "p":
            if num_vars is not None:
                raise DimacsError("duplicate header", lineno)
            if len(toks) != 4 or toks[1] != "cnf":
                raise DimacsError("malformed header %r" % line.strip(), lineno)
            try:
                num_vars, num_clauses = int(toks[2]), int(toks[3])
            except ValueError:
                raise DimacsError("malformed header %r" % line.strip(), lineno) from None
            if num_vars < 0 or num_clauses < 0:
                raise DimacsError("negative count in header", lineno)
            continue
        if toks[0] == "%":
            break
        if num_vars is None:
            raise DimacsError("clause before header", lineno)
        for tok in toks:
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError("not an integer: %r" % tok, lineno) from None
            if lit == 0:
                clauses.append(current)
                current = []
            elif abs(lit) > num_vars:
                raise DimacsError("literal %d out of range 1..%d" % (lit, num_vars), lineno)
            else:
                current.append(lit)
    if num_vars is None:
        raise DimacsError("empty input" if not text.strip() else "missing header", lineno or 1)
    if current:
        raise DimacsError("missing terminating 0", lineno)
    if shown is not None and any(v > num_vars for v in shown):
        raise DimacsError("show variable out of range", lineno)
    formula = CnfFormula(num_vars, clauses)
    relevant = frozenset(range(1, num_vars + 1)) if shown is None else frozenset(shown)
    return ProblemInstance(formula, relevant, num_vars, num_clauses)


def format_cube(cube: Iterable[int]) -> str:
    lits = sorted(cube, key=var)
    return "v " + "".join("%d " % l for l in lits) + "0"


def write_cube(cube: Iterable[int], sink: TextIO) -> None:
    sink.write(format_cube(cube) + "\n")


def write_summary(M: DnfAccumulator, stats: dict, sink: TextIO, num_relevant: int) -> None:
    sink.write("s cubes %d\n" % len(M))
    cover = M.cover_count(num_relevant)
    if cover is not None:
        sink.write("s models %d\n" % cover)
    for key in ("decisions", "propagations", "conflicts", "shrinks"):
        sink.write("s %s %d\n" % (key, stats.get(key, 0)))
