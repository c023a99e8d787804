"""Value types shared by the enumerator and both solver instances.

Literals are DIMACS-style signed integers: ``v`` is the positive literal of
variable ``v`` and ``-v`` its complement.  Cubes are tuples of literals.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, Union

Literal = int
Cube = tuple


def var(lit: Literal) -> int:
    return lit if lit > 0 else -lit


def neg(lit: Literal) -> Literal:
    return -lit


class Origin(enum.Enum):
    INPUT = "input"
    LEARNED = "learned"
    BLOCKING = "blocking"
    VIRTUAL = "virtual-reason"
    NEGATION = "negation-encoding"


def normalize(lits: Iterable[Literal]) -> Optional[list]:
    """Drop duplicate literals, keeping first occurrences.

    Returns None when the literals contain a complementary pair.
    """
    out = []
    seen = set()
    for lit in lits:
        if lit == 0:
            raise ValueError("0 is not a literal")
        if -lit in seen:
            return None
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return out


class Clause:
    __slots__ = ("lits", "origin", "id")

    def __init__(self, lits: Iterable[Literal], origin: Origin = Origin.INPUT, id: int = -1):
        self.lits = list(lits)
        self.origin = origin
        self.id = id

    def __len__(self):
        return len(self.lits)

    def __iter__(self):
        return iter(self.lits)

    def __contains__(self, lit):
        return lit in self.lits

    def __repr__(self):
        return "Clause(%s, %s)" % (self.lits, self.origin.value)

    def as_set(self) -> frozenset:
        return frozenset(self.lits)


class CnfFormula:
    """A clause list over variables ``1..num_vars``.

    An empty formula is true; a formula holding the empty clause is false.
    Tautologies are silently dropped by :meth:`add`.
    """

    def __init__(self, num_vars: int = 0, clauses: Iterable[Iterable[Literal]] = ()):
        self.num_vars = num_vars
        self.clauses: list = []
        for c in clauses:
            self.add(c)

    def add(self, lits: Iterable[Literal], origin: Origin = Origin.INPUT) -> Optional[Clause]:
        norm = normalize(lits)
        if norm is None:
            return None
        for lit in norm:
            self.num_vars = max(self.num_vars, var(lit))
        clause = Clause(norm, origin, len(self.clauses))
        self.clauses.append(clause)
        return clause

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def __len__(self):
        return len(self.clauses)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __getitem__(self, i) -> Clause:
        return self.clauses[i]

    def variables(self) -> set:
        return {var(l) for c in self.clauses for l in c.lits}

    def as_lists(self) -> list:
        return [list(c.lits) for c in self.clauses]

    def evaluate(self, assignment) -> bool:
        """Truth value under a total assignment (a container of true literals)."""
        return all(any(l in assignment for l in c.lits) for c in self.clauses)

    def __repr__(self):
        return "CnfFormula(%d vars, %s)" % (self.num_vars, self.as_lists())


@dataclass
class VariablePartition:
    relevant: set = field(default_factory=set)
    irrelevant: set = field(default_factory=set)
    positive_tseitin: set = field(default_factory=set)
    negative_tseitin: set = field(default_factory=set)

    def __post_init__(self):
        groups = [self.relevant, self.irrelevant, self.positive_tseitin, self.negative_tseitin]
        for i, a in enumerate(groups):
            for b in groups[i + 1:]:
                if a & b:
                    raise ValueError("variable classes overlap: %s" % sorted(a & b))

    @property
    def inputs(self) -> set:
        return self.relevant | self.irrelevant

    def check_covers(self, p: CnfFormula, n: Optional[CnfFormula] = None) -> None:
        missing = p.variables() - self.inputs - self.positive_tseitin
        if missing:
            raise ValueError("P mentions unclassified variables %s" % sorted(missing))
        if n is not None:
            missing = n.variables() - self.inputs - self.negative_tseitin
            if missing:
                raise ValueError("N mentions unclassified variables %s" % sorted(missing))


class Kind(enum.Enum):
    DECISION = "d"
    PROPAGATED = "p"
    ASSUMED = "a"


class Trail:
    """Assignment sequence with per-entry kind, reason and decision level.

    ``value`` is keyed by literal (True for a true literal, False for its
    complement) so the propagation loop needs a single dict lookup.
    """

    def __init__(self):
        self.lits: list = []
        self.kinds: list = []
        self.reasons: list = []
        self.value: dict = {}
        self.levels: dict = {}
        self.lim: list = []  # trail index opening each level >= 1

    def __len__(self):
        return len(self.lits)

    def __iter__(self):
        return iter(self.lits)

    def __contains__(self, lit):
        return self.value.get(lit) is True

    @property
    def current_level(self) -> int:
        return len(self.lim)

    def _push(self, lit, kind, reason, level):
        if lit in self.value:
            raise ValueError("variable %d already assigned" % var(lit))
        self.lits.append(lit)
        self.kinds.append(kind)
        self.reasons.append(reason)
        self.value[lit] = True
        self.value[-lit] = False
        self.levels[var(lit)] = level

    def decide(self, lit: Literal) -> None:
        self.lim.append(len(self.lits))
        self._push(lit, Kind.DECISION, None, len(self.lim))

    def assume(self, lit: Literal) -> None:
        self.lim.append(len(self.lits))
        self._push(lit, Kind.ASSUMED, None, len(self.lim))

    def propagate(self, lit: Literal, reason) -> None:
        self._push(lit, Kind.PROPAGATED, reason, len(self.lim))

    def level(self, v: int) -> Optional[int]:
        return self.levels.get(v)

    def reason_of(self, v: int):
        lit = v if v in self.value and self.value[v] else -v
        try:
            i = self.index_of(lit)
        except ValueError:
            return None
        return self.reasons[i]

    def index_of(self, lit: Literal) -> int:
        return self.lits.index(lit)

    def backtrack(self, level: int) -> list:
        """Remove every entry above ``level``; returns removed literals, latest first."""
        if level >= len(self.lim):
            return []
        start = self.lim[level]
        removed = []
        for i in range(len(self.lits) - 1, start - 1, -1):
            lit = self.lits[i]
            del self.value[lit]
            del self.value[-lit]
            del self.levels[var(lit)]
            removed.append(lit)
        del self.lits[start:]
        del self.kinds[start:]
        del self.reasons[start:]
        del self.lim[level:]
        return removed

    def entries(self) -> Iterator[tuple]:
        for lit, kind, reason in zip(self.lits, self.kinds, self.reasons):
            yield lit, kind, reason, self.levels[var(lit)]

    def prefix(self, level: int) -> list:
        """Literals assigned at decision level <= ``level``."""
        end = self.lim[level] if level < len(self.lim) else len(self.lits)
        return self.lits[:end]

    def check(self) -> list:
        """Structural well-formedness problems, empty when the trail is sound."""
        problems = []
        vs = [var(l) for l in self.lits]
        if len(set(vs)) != len(vs):
            problems.append("variables repeat on trail")
        prev = 0
        opened = 0
        for i, (lit, kind, _, lvl) in enumerate(self.entries()):
            if lvl < prev:
                problems.append("levels decrease at entry %d" % i)
            if kind in (Kind.DECISION, Kind.ASSUMED):
                opened += 1
                if lvl != opened or (i and lvl != prev + 1):
                    problems.append("entry %d opens level %d after level %d" % (i, lvl, prev))
            elif lvl != opened:
                problems.append("entry %d at level %d inside level %d block" % (i, lvl, opened))
            prev = lvl
        if opened != self.current_level:
            problems.append("Decs: %d level openers for current level %d"
                            % (opened, self.current_level))
        return problems

    def __repr__(self):
        marks = {Kind.DECISION: "d", Kind.ASSUMED: "a", Kind.PROPAGATED: ""}
        return "Trail[%s]" % " ".join("%d%s" % (l, marks[k]) for l, k in zip(self.lits, self.kinds))


@dataclass
class Residual:
    status: str  # "satisfied" | "falsified" | "reduced"
    clause: Optional[Clause] = None
    units: list = field(default_factory=list)
    remaining: list = field(default_factory=list)


def residual(formula: Union[CnfFormula, Sequence], trail) -> Residual:
    """Residual of ``formula`` under ``trail`` (anything supporting ``in`` on true literals).

    ``remaining`` holds the reduced clauses still to be satisfied.
    """
    clauses = formula.clauses if isinstance(formula, CnfFormula) else formula
    remaining = []
    units = []
    for c in clauses:
        lits = c.lits if isinstance(c, Clause) else list(c)
        if any(l in trail for l in lits):
            continue
        rest = [l for l in lits if -l not in trail]
        if not rest:
            return Residual("falsified", c if isinstance(c, Clause) else Clause(lits))
        if len(rest) == 1 and rest[0] not in units:
            units.append(rest[0])
        remaining.append(rest)
    if not remaining:
        return Residual("satisfied")
    return Residual("reduced", units=units, remaining=remaining)


def decisions_of(trail: Trail) -> Cube:
    return tuple(l for l, k in zip(trail.lits, trail.kinds) if k is Kind.DECISION)


def level_of(target, trail: Trail) -> Optional[int]:
    """Decision level of a literal, clause or trail; None stands for unassigned.

    Empty clauses and sequences have level 0.
    """
    if isinstance(target, int):
        return trail.level(var(target))
    lits = target.lits if isinstance(target, (Clause, Trail)) else list(target)
    best = 0
    for l in lits:
        d = trail.level(var(l))
        if d is None:
            return None
        best = max(best, d)
    return best


class DnfAccumulator:
    """Enumerated cubes over the relevant variables, in discovery order."""

    def __init__(self, mode: str = "irredundant"):
        if mode not in ("irredundant", "redundant"):
            raise ValueError("unknown mode %r" % mode)
        self.mode = mode
        self.cubes: list = []

    def append(self, cube: Iterable[Literal]) -> Cube:
        cube = tuple(cube)
        if normalize(cube) is None or len(set(cube)) != len(cube):
            raise ValueError("cube is not variable-distinct: %s" % (cube,))
        self.cubes.append(cube)
        return cube

    def __len__(self):
        return len(self.cubes)

    def __iter__(self):
        return iter(self.cubes)

    def __getitem__(self, i):
        return self.cubes[i]

    def is_dsop(self) -> bool:
        return all(clash(a, b) for i, a in enumerate(self.cubes) for b in self.cubes[i + 1:])

    def cover_count(self, num_relevant: int) -> Optional[int]:
        """Exact projected model count in irredundant mode; None otherwise."""
        if self.mode != "irredundant":
            return None
        return sum(2 ** (num_relevant - len(c)) for c in self.cubes)

    def __repr__(self):
        return "DnfAccumulator(%s, %s)" % (self.mode, self.cubes)


def clash(a: Iterable[Literal], b: Iterable[Literal]) -> bool:
    sb = set(b)
    return any(-l in sb for l in a)
