"""Projected model enumeration in irredundant and redundant mode.

Each loop iteration applies one rule of the calculus (a batch of unit
propagations counts as a run of Unit steps): propagate, then handle a
conflict, then handle a total model, else decide.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import oracle
from .cdcl import Solver
from .core import Clause, DnfAccumulator, Kind, Origin, VariablePartition, clash, decisions_of, level_of, var
from .dimacs import ProblemInstance
from .encoding import DualState, block_model, encode_negation
from .shrink import InvariantViolation, shrink

MODES = ("irredundant", "redundant")

_MEASURE = {Kind.PROPAGATED: 0, Kind.DECISION: 1}


class Rule(str, enum.Enum):
    DEC_X = "DecX"
    DEC_YS = "DecYS"
    UNIT = "Unit"
    BLOCK_MODEL = "B⊤"
    BACKJUMP = "B⊥"
    END_MODEL = "E⊤"
    END_CONFLICT = "E⊥"

    def __str__(self):
        return self.value


@dataclass
class Step:
    rule: Rule
    literal: Optional[int] = None
    clause: Optional[tuple] = None   # reason, learned or blocking clause
    cube: Optional[tuple] = None     # cube appended to M

    def __str__(self):
        parts = [str(self.rule)]
        if self.literal is not None:
            parts.append(str(self.literal))
        if self.clause is not None:
            parts.append("C=%s" % (list(self.clause),))
        if self.cube is not None:
            parts.append("m=%s" % (list(self.cube),))
        return " ".join(parts)


@dataclass
class EnumResult:
    M: DnfAccumulator
    cause: str
    stats: dict
    trace: list = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.cause in ("exhausted", "no-relevant-decision", "empty-block")

    @property
    def cubes(self) -> list:
        return list(self.M.cubes)


class Enumerator:
    """One enumeration session: the state tuple (P, N, M, I, levels) plus counters."""

    def __init__(self, instance: ProblemInstance, mode: str = "irredundant",
                 max_models: Optional[int] = None, max_conflicts: Optional[int] = None,
                 debug_invariants: bool = False, oracle_budget: int = oracle.DUAL_CAP,
                 on_cube: Optional[Callable] = None, update_negation: bool = True,
                 bidirectional: bool = False, trace: bool = False):
        if mode not in MODES:
            raise ValueError("unknown mode %r" % mode)
        self.instance = instance
        self.mode = mode
        self.X = sorted(instance.relevant)
        self.Y = sorted(instance.irrelevant)
        self._relevant = frozenset(self.X)
        partition = VariablePartition(relevant=set(self.X), irrelevant=set(self.Y))
        self.dual: DualState = encode_negation(instance.formula, partition, bidirectional)
        self.p = Solver(instance.num_vars, self.dual.P.clauses)
        self.n = Solver(self.dual.N.num_vars, self.dual.N.clauses)
        self.M = DnfAccumulator(mode)
        self.max_models = max_models
        self.max_conflicts = max_conflicts
        self.debug = debug_invariants
        self.oracle_budget = oracle_budget
        self.on_cube = on_cube
        self.update_negation = update_negation
        self.trace: Optional[list] = [] if trace else None
        self.cause: Optional[str] = None
        self.conflicts = 0
        self.shrinks = 0
        self._tt = None
        self._dual_key = None
        self._p_vec = None
        self._p_seen = 0
        self._m_vec = None
        self._m_seen = 0
        self._dsop_seen = 0

    # -- bookkeeping -------------------------------------------------------

    @property
    def stats(self) -> dict:
        return {
            "models": len(self.M),
            "decisions": self.p.stats["decisions"],
            "propagations": self.p.stats["propagations"],
            "conflicts": self.conflicts,
            "shrinks": self.shrinks,
        }

    def _log(self, rule, literal=None, clause=None, cube=None):
        if self.trace is not None:
            self.trace.append(Step(rule, literal,
                                   None if clause is None else tuple(clause), cube))

    def _emit(self, cube) -> None:
        cube = self.M.append(cube)
        if self.on_cube is not None:
            self.on_cube(cube)

    def measure(self) -> list:
        """Trail mapped to a list over {0: propagated, 1: decision, 2: unassigned}.

        Terminal states map to the empty list.
        """
        if self.cause in ("exhausted", "no-relevant-decision", "empty-block"):
            return []
        trail = self.p.trail
        out = [_MEASURE[k] for k in trail.kinds]
        out.extend([2] * (self.p.num_vars - len(out)))
        return out

    # -- main loop ---------------------------------------------------------

    def run(self) -> EnumResult:
        while self.cause is None:
            self.step()
        return EnumResult(self.M, self.cause, self.stats, self.trace or [])

    def step(self) -> None:
        trail = self.p.trail
        before = self.measure() if self.debug else None
        start = len(trail)
        conflict = self.p.propagate()
        if len(trail) > start:
            if self.trace is not None:
                for i in range(start, len(trail)):
                    self._log(Rule.UNIT, trail.lits[i], trail.reasons[i].lits)
            if self.debug:
                self._check(before)
                before = self.measure()
        if conflict is not None:
            self.on_conflict(conflict)
        elif self.p.all_assigned():
            self.on_total_model()
        else:
            pick = self.p.pick_branch((self.X, self.Y))
            if pick is None:
                raise InvariantViolation("Progress", "no rule applies to %r" % trail)
            group, v = pick
            self.p.decide(v)
            self._log(Rule.DEC_X if group == 0 else Rule.DEC_YS, v)
        if self.debug:
            self._check(before)

    def on_conflict(self, conflict: Clause) -> bool:
        """Rules E⊥ and B⊥; returns True when enumeration terminated."""
        lvl = level_of(conflict.lits, self.p.trail)
        if lvl == 0:
            self.cause = "exhausted"
            self._log(Rule.END_CONFLICT, clause=conflict.lits)
            return True
        if lvl < self.p.trail.current_level:
            self.p.backtrack(lvl)
        analysis = self.p.analyze(conflict)
        if self.debug:
            self._check_learned(analysis.learned)
        clause = self.p.learn(analysis)
        if self.debug and self.p.trail.lits[-1] != clause.lits[0]:
            raise InvariantViolation("Learning", "%s is not asserting" % clause)
        self.conflicts += 1
        self._log(Rule.BACKJUMP, analysis.asserting, analysis.learned)
        if self.max_conflicts is not None and self.conflicts >= self.max_conflicts:
            self.cause = "max-conflicts"
        return False

    def on_total_model(self) -> bool:
        """Rules E⊤ and B⊤; returns True when enumeration terminated."""
        trail = self.p.trail
        core = shrink(trail, self.dual, self.n)
        self.shrinks += 1
        if self.debug:
            self._check_shrink(core)
        m = tuple(l for l in core if var(l) in self._relevant)
        decisions = decisions_of(trail)
        if not any(var(d) in self._relevant for d in decisions):
            self._emit(m)
            self.cause = "no-relevant-decision"
            self._log(Rule.END_MODEL, cube=m)
            return True
        # Close m under the decisions up to its level so the blocking
        # clause holds exactly one literal per level 1..k.
        k = level_of(m, trail)
        decs = decisions[:k]
        if self.mode == "irredundant":
            keep = set(m) | set(decs)
            cube = tuple(l for l in trail.lits if l in keep)
        else:
            cube = m
        self._emit(cube)
        if k == 0:
            self.cause = "empty-block"
            self._log(Rule.BLOCK_MODEL, cube=cube, clause=())
            return True
        flip = -decs[-1]
        block = [flip] + [-d for d in decs[:-1]]
        if self.mode == "irredundant":
            _, n_clauses = block_model(self.dual, decs, self.update_negation)
            for c in n_clauses:
                self.n.add_clause(c.lits, c.origin)
            self.p.backtrack(k - 1)
            reason = self.p.add_clause(block, Origin.BLOCKING)
            if len(block) == 1:
                self.p._units.remove(reason)
        else:
            self.p.backtrack(k - 1)
            reason = Clause(block, Origin.VIRTUAL)
        self.p.assign(flip, reason)
        self._log(Rule.BLOCK_MODEL, flip, block, cube)
        if self.max_models is not None and len(self.M) >= self.max_models:
            self.cause = "max-models"
        return False

    # -- invariant checks --------------------------------------------------

    def _check(self, before: Optional[list]) -> None:
        report = self.check_invariants()
        for name, problem in report.items():
            if problem:
                raise InvariantViolation(name, problem)
        if before is not None:
            after = self.measure()
            if not after < before:
                raise InvariantViolation("Termination", "measure %s -> %s" % (before, after))

    def _check_shrink(self, core: tuple) -> None:
        on_trail = set(self.p.trail.lits)
        if not set(core) <= on_trail:
            raise InvariantViolation("Shrink", "I* %s not within I" % (core,))
        res = self.n.solve_under_assumptions([-self.dual.selector] + list(core))
        if res.sat:
            raise InvariantViolation("Shrink", "core %s does not reproduce unsat" % (core,))

    def _check_learned(self, learned: list) -> None:
        if not all(-l in self.p.trail for l in learned):
            raise InvariantViolation("Learning", "%s not falsified by the trail" % learned)
        if len(self.dual.partition.inputs) > self.oracle_budget:
            return
        tt = self._table()
        base = tt.cnf(self.dual.P)
        if self.mode == "redundant":
            base &= ~tt.dnf(self.M.cubes)
        if (base & ~tt.clause(learned)).any():
            name = "ImplI" if self.mode == "irredundant" else "ImplIRed"
            raise InvariantViolation(name, "learned clause %s is not entailed" % learned)

    def _table(self):
        if self._tt is None:
            self._tt = oracle.TruthTable(self.dual.partition.inputs)
        return self._tt

    def check_invariants(self) -> dict:
        """Map each invariant name to a problem description, or None when it holds.

        Oracle-based checks run only while the inputs fit ``oracle_budget``;
        skipped checks are absent from the report.
        """
        report = {}
        problems = self.p.trail.check()
        report["Decs"] = "; ".join(problems) if problems else None
        if self.mode == "irredundant":
            bad = None
            cubes = self.M.cubes
            for i in range(self._dsop_seen, len(cubes)):
                for j in range(i):
                    if not clash(cubes[i], cubes[j]):
                        bad = "cubes %s and %s overlap" % (cubes[j], cubes[i])
            self._dsop_seen = len(cubes)
            report["DSOP"] = bad
        if len(self.dual.partition.inputs) > self.oracle_budget:
            return report
        key = (len(self.dual.P), len(self.dual.N))
        if key != self._dual_key:
            alpha = oracle.dual_pn_counterexample(self.dual.P, self.dual.N, self.dual.partition,
                                                  self.dual.selector, cap=self.oracle_budget)
            self._dual_key = key
            self._dual_problem = None if alpha is None else (
                "P and N agree on input assignment %s" % (alpha,))
        report["DualPN"] = self._dual_problem
        name = "ImplI" if self.mode == "irredundant" else "ImplIRed"
        report[name] = self._check_impl()
        return report

    def _check_impl(self) -> Optional[str]:
        tt = self._table()
        if self._p_vec is None:
            self._p_vec = np.ones(tt.rows, dtype=bool)
            self._m_vec = np.zeros(tt.rows, dtype=bool)
        clauses = self.p.clauses
        for c in clauses[self._p_seen:]:
            self._p_vec &= tt.clause(c.lits)
        self._p_seen = len(clauses)
        premise = self._p_vec
        if self.mode == "redundant":
            for m in self.M.cubes[self._m_seen:]:
                self._m_vec |= tt.cube(m)
            self._m_seen = len(self.M.cubes)
            premise = premise & ~self._m_vec
        trail = self.p.trail
        decs = premise.copy()
        implied = np.ones(tt.rows, dtype=bool)
        level = 0
        for lit, kind, _, lvl in trail.entries():
            if lvl != level:
                if (decs & ~implied).any():
                    return "level %d of %r not implied by its decisions" % (level, trail)
                level = lvl
            if kind is Kind.DECISION:
                decs &= tt.lit(lit)
            implied &= tt.lit(lit)
        if (decs & ~implied).any():
            return "level %d of %r not implied by its decisions" % (level, trail)
        return None


def enumerate_models(instance: ProblemInstance, mode: str = "irredundant", **kwargs) -> EnumResult:
    return Enumerator(instance, mode, **kwargs).run()
