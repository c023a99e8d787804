"""Watched-literal CDCL machinery shared by the P and N solver instances."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .core import Clause, Kind, Origin, Trail, var


@dataclass
class Analysis:
    learned: list            # asserting literal first (first-uip mode)
    backjump: int
    chain: list = field(default_factory=list)  # conflict clause, then each reason resolved on

    @property
    def asserting(self):
        return self.learned[0] if self.learned else None


@dataclass
class SolveResult:
    sat: bool
    core: list = field(default_factory=list)   # subset of the assumptions, in assumption order
    model: list = field(default_factory=list)
    chain: list = field(default_factory=list)

    @property
    def learned(self) -> list:
        return [-l for l in reversed(self.core)]


class Solver:
    """A single CDCL instance.

    Reasons that are not part of the formula (virtual reasons) can be put on
    the trail through :meth:`assign`; they are never watched.
    """

    def __init__(self, num_vars: int = 0, clauses: Iterable = ()):
        self.num_vars = num_vars
        self.trail = Trail()
        self.clauses: list = []
        self.watches = defaultdict(list)
        self.qhead = 0
        self._units: list = []
        self.root_conflict: Optional[Clause] = None  # the formula is unsat once set
        self.stats = {"decisions": 0, "propagations": 0, "conflicts": 0}
        for c in clauses:
            lits = c.lits if isinstance(c, Clause) else c
            origin = c.origin if isinstance(c, Clause) else Origin.INPUT
            self.add_clause(lits, origin)

    # -- clause database ---------------------------------------------------

    def add_clause(self, lits: Sequence[int], origin: Origin = Origin.INPUT) -> Clause:
        """Add a clause and watch it.

        The two watched positions go to the literals that are best under the
        current trail: true or unassigned first, then false literals by
        decreasing level.  Unit and empty clauses are queued for level 0.
        """
        clause = Clause(lits, origin, len(self.clauses))
        self.clauses.append(clause)
        for l in clause.lits:
            if var(l) > self.num_vars:
                self.num_vars = var(l)
        if len(clause.lits) < 2:
            self._units.append(clause)
            return clause
        value = self.trail.value
        levels = self.trail.levels
        if any(value.get(l) is not None for l in clause.lits):
            def rank(l):
                v = value.get(l)
                if v is None or v:
                    return (1, 0)
                return (0, levels[var(l)])
            cl = clause.lits
            cl.sort(key=rank, reverse=True)
        self.watches[clause.lits[0]].append(clause)
        self.watches[clause.lits[1]].append(clause)
        return clause

    # -- trail -------------------------------------------------------------

    def value(self, lit: int) -> Optional[bool]:
        return self.trail.value.get(lit)

    def assign(self, lit: int, reason) -> None:
        self.trail.propagate(lit, reason)

    def decide(self, lit: int) -> None:
        self.stats["decisions"] += 1
        self.trail.decide(lit)

    def backtrack(self, level: int) -> None:
        if level < self.trail.current_level:
            self.trail.backtrack(level)
            if self.qhead > len(self.trail):
                self.qhead = len(self.trail)

    def pick_branch(self, groups: Sequence[Sequence[int]]):
        """First unassigned variable in the earliest group, as ``(group index, var)``."""
        value = self.trail.value
        for gi, vs in enumerate(groups):
            for v in vs:
                if v not in value:
                    return gi, v
        return None

    def all_assigned(self, count: Optional[int] = None) -> bool:
        return len(self.trail) >= (self.num_vars if count is None else count)

    # -- propagation -------------------------------------------------------

    def propagate(self) -> Optional[Clause]:
        """Unit propagation to fixpoint; returns a falsified clause or None."""
        if self.root_conflict is not None:
            return self.root_conflict
        trail = self.trail
        value = trail.value
        if self._units:
            if trail.current_level:
                raise RuntimeError("unit clause pending above level 0")
            pending = self._units
            self._units = []
            for i, c in enumerate(pending):
                lit = c.lits[0] if c.lits else None
                v = value.get(lit) if lit else False
                if v is False:
                    self.root_conflict = c
                    return c
                if v is None:
                    trail.propagate(lit, c)
                    self.stats["propagations"] += 1
        lits = trail.lits
        watches = self.watches
        while self.qhead < len(lits):
            false_lit = -lits[self.qhead]
            self.qhead += 1
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                cl = c.lits
                if cl[0] == false_lit:
                    cl[0] = cl[1]
                    cl[1] = false_lit
                first = cl[0]
                if value.get(first) is True:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(cl)):
                    if value.get(cl[k]) is not False:
                        cl[1] = cl[k]
                        cl[k] = false_lit
                        watches[cl[1]].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if value.get(first) is False:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(lits)
                        if not trail.current_level:
                            self.root_conflict = c
                        return c
                    trail.propagate(first, c)
                    self.stats["propagations"] += 1
            del ws[j:]
        return None

    # -- conflict analysis -------------------------------------------------

    def analyze(self, conflict: Clause) -> Analysis:
        """First-UIP analysis, resolving in reverse trail order.

        Literals falsified at level 0 are dropped from the resolvent.  The
        conflict must have a literal at the current level, which must be > 0.
        """
        trail = self.trail
        levels = trail.levels
        level = trail.current_level
        if level == 0:
            raise ValueError("conflict at level 0 cannot be analyzed")
        seen = set()
        learned = [0]
        chain = [conflict]
        pending = 0
        clause = conflict
        idx = len(trail.lits) - 1
        pivot = None
        while True:
            for l in clause.lits:
                v = var(l)
                if v == pivot or v in seen:
                    continue
                lvl = levels[v]
                if lvl == 0:
                    continue
                seen.add(v)
                if lvl == level:
                    pending += 1
                else:
                    learned.append(l)
            while var(trail.lits[idx]) not in seen:
                idx -= 1
            lit = trail.lits[idx]
            pivot = var(lit)
            seen.discard(pivot)
            idx -= 1
            pending -= 1
            if pending == 0:
                learned[0] = -lit
                break
            clause = trail.reasons[idx + 1]
            chain.append(clause)
        backjump = 0
        if len(learned) > 1:
            best = 1
            for i in range(2, len(learned)):
                if levels[var(learned[i])] > levels[var(learned[best])]:
                    best = i
            learned[1], learned[best] = learned[best], learned[1]
            backjump = levels[var(learned[1])]
        return Analysis(learned, backjump, chain)

    def learn(self, analysis: Analysis) -> Clause:
        """Backjump, store the learned clause and assert its first literal."""
        self.backtrack(analysis.backjump)
        clause = self.add_clause(analysis.learned, Origin.LEARNED)
        if len(clause.lits) == 1:
            self._units.remove(clause)
        self.assign(clause.lits[0], clause)
        self.stats["propagations"] += 1
        return clause

    def analyze_final(self, seed: Sequence[int], chain: Optional[list] = None) -> list:
        """Assumed literals responsible for falsifying every literal in ``seed``.

        Exhaustive: reasons are followed until only assumptions (which have no
        reason) remain.  Level-0 literals are implied by the formula and skipped.
        """
        trail = self.trail
        levels = trail.levels
        seen = {var(l) for l in seed if levels.get(var(l), 0) > 0}
        core = []
        for i in range(len(trail.lits) - 1, -1, -1):
            if not seen:
                break
            lit = trail.lits[i]
            v = var(lit)
            if v not in seen:
                continue
            seen.discard(v)
            if trail.kinds[i] is Kind.ASSUMED:
                core.append(lit)
                continue
            reason = trail.reasons[i]
            if reason is None:
                raise ValueError("decision %d reached during exhaustive analysis" % lit)
            if chain is not None:
                chain.append(reason)
            for l in reason.lits:
                u = var(l)
                if u != v and levels[u] > 0:
                    seen.add(u)
        core.reverse()
        return core

    # -- incremental solving -----------------------------------------------

    def _only_assumptions(self) -> bool:
        trail = self.trail
        return all(trail.kinds[s] is Kind.ASSUMED for s in trail.lim)

    def solve_under_assumptions(self, assumptions: Sequence[int], polarity: bool = False) -> SolveResult:
        """Full CDCL search with ``assumptions`` pushed as the first levels.

        On unsat the core lists the assumptions used to derive the conflict.
        The trail is restored to level 0 before returning.
        """
        if self.trail.current_level:
            raise ValueError("solve_under_assumptions needs a level-0 trail")
        order = {l: i for i, l in enumerate(assumptions)}
        value = self.trail.value
        ai = 0  # assumptions before this index are true on the trail
        try:
            while True:
                conflict = self.propagate()
                if conflict is not None:
                    self.stats["conflicts"] += 1
                    if self.trail.current_level == 0:
                        return SolveResult(False, [], chain=[conflict])
                    if self._only_assumptions():
                        chain = [conflict]
                        core = self.analyze_final(conflict.lits, chain)
                        core.sort(key=order.__getitem__)
                        return SolveResult(False, core, chain=chain)
                    self.learn(self.analyze(conflict))
                    ai = 0
                    continue
                while ai < len(assumptions) and value.get(assumptions[ai]) is True:
                    ai += 1
                if ai < len(assumptions):
                    a = assumptions[ai]
                    if value.get(a) is None:
                        self.trail.assume(a)
                        continue
                    if self.trail.levels[var(a)] == 0:
                        return SolveResult(False, [a])
                    if not self._only_assumptions():
                        raise RuntimeError("assumption %d falsified under a decision" % a)
                    chain = []
                    core = self.analyze_final([a], chain) + [a]
                    core.sort(key=order.__getitem__)
                    return SolveResult(False, core, chain=chain)
                v = next((u for u in range(1, self.num_vars + 1)
                          if u not in self.trail.value), None)
                if v is None:
                    return SolveResult(True, model=list(self.trail.lits))
                self.decide(v if polarity else -v)
        finally:
            self.backtrack(0)
