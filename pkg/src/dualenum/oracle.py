"""Brute-force reference semantics for tests and debug checks.

Truth tables are numpy boolean vectors indexed by assignment number; bit i
of the row index is the value of the i-th variable in sorted order.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Optional, Sequence

import numpy as np
from pysat.solvers import Minisat22

from .core import CnfFormula, DnfAccumulator, VariablePartition, clash, var

CAP = 24
DUAL_CAP = 10


class CapExceeded(ValueError):
    pass


def _clauses(F) -> list:
    if isinstance(F, CnfFormula):
        return [c.lits for c in F.clauses]
    return [list(getattr(c, "lits", c)) for c in F]


class TruthTable:
    def __init__(self, variables: Iterable[int], cap: int = CAP):
        self.vars = sorted(set(variables))
        if len(self.vars) > cap:
            raise CapExceeded("%d variables exceed the cap of %d" % (len(self.vars), cap))
        self.index = {v: i for i, v in enumerate(self.vars)}
        self.rows = 1 << len(self.vars)
        self._rowids = np.arange(self.rows, dtype=np.uint32)
        self._cols: dict = {}
        self._cache: dict = {}

    def lit(self, l: int) -> np.ndarray:
        v = var(l)
        col = self._cols.get(v)
        if col is None:
            col = ((self._rowids >> self.index[v]) & 1).astype(bool)
            self._cols[v] = col
        return col if l > 0 else ~col

    def clause(self, lits: Sequence[int]) -> np.ndarray:
        key = tuple(sorted(lits))
        out = self._cache.get(key)
        if out is None:
            out = np.zeros(self.rows, dtype=bool)
            for l in key:
                out |= self.lit(l)
            self._cache[key] = out
        return out

    def cube(self, lits: Iterable[int]) -> np.ndarray:
        out = np.ones(self.rows, dtype=bool)
        for l in lits:
            out &= self.lit(l)
        return out

    def cnf(self, F) -> np.ndarray:
        out = np.ones(self.rows, dtype=bool)
        for c in _clauses(F):
            out &= self.clause(c)
        return out

    def dnf(self, cubes: Iterable[Iterable[int]]) -> np.ndarray:
        out = np.zeros(self.rows, dtype=bool)
        for m in cubes:
            out |= self.cube(m)
        return out

    def assignment(self, row: int) -> tuple:
        return tuple(v if (row >> i) & 1 else -v for i, v in enumerate(self.vars))

    def project(self, mask: np.ndarray, onto: Iterable[int]) -> np.ndarray:
        """Row indices of a table over ``onto`` reached by the rows in ``mask``."""
        onto = sorted(onto)
        rows = self._rowids[mask]
        out = np.zeros(rows.shape, dtype=np.uint32)
        for j, v in enumerate(onto):
            out |= ((rows >> self.index[v]) & 1) << j
        return np.unique(out)


def _formula_vars(F, extra: Iterable[int] = ()) -> set:
    vs = set(extra)
    if isinstance(F, CnfFormula):
        vs |= set(range(1, F.num_vars + 1))
    vs |= {var(l) for c in _clauses(F) for l in c}
    return vs


def total_models(F, variables: Optional[Iterable[int]] = None) -> set:
    vs = _formula_vars(F) if variables is None else set(variables)
    if {var(l) for c in _clauses(F) for l in c} - vs:
        raise ValueError("formula mentions variables outside the table")
    tt = TruthTable(vs)
    mask = tt.cnf(F)
    return {tt.assignment(int(r)) for r in np.flatnonzero(mask)}


def projected_models(F, X: Iterable[int]) -> set:
    X = sorted(set(X))
    tt = TruthTable(_formula_vars(F, X))
    rows = tt.project(tt.cnf(F), X)
    return {tuple(v if (int(r) >> j) & 1 else -v for j, v in enumerate(X)) for r in rows}


def cover_rows(M: Iterable[Iterable[int]], X: Iterable[int]) -> np.ndarray:
    tt = TruthTable(X)
    cubes = [tuple(m) for m in M]
    for m in cubes:
        if any(var(l) not in tt.index for l in m):
            raise ValueError("cube %s leaves the relevant variables" % (m,))
    return np.flatnonzero(tt.dnf(cubes))


def covers_equal(M: Iterable[Iterable[int]], F, X: Iterable[int]) -> bool:
    X = sorted(set(X))
    tt = TruthTable(_formula_vars(F, X))
    expected = tt.project(tt.cnf(F), X)
    got = cover_rows(M, X)
    return np.array_equal(expected, got.astype(expected.dtype))


def is_dsop(M) -> bool:
    cubes = list(M.cubes if isinstance(M, DnfAccumulator) else M)
    return all(clash(a, b) for a, b in itertools.combinations(cubes, 2))


def dual_pn_counterexample(P, N, partition: VariablePartition, selector: Optional[int],
                           cap: int = DUAL_CAP) -> Optional[tuple]:
    """An input assignment where P and N agree on satisfiability, or None.

    Satisfiability over the Tseitin variables is decided with Minisat under
    assumptions; P is evaluated by truth table when it has no Tseitin
    variables of its own.
    """
    inputs = sorted(partition.inputs)
    if len(inputs) > cap:
        raise CapExceeded("%d input variables exceed the cap of %d" % (len(inputs), cap))
    p_clauses = _clauses(P)
    n_clauses = _clauses(N)
    tt = TruthTable(inputs)
    extra = [] if selector is None else [-selector]
    p_aux = {var(l) for c in p_clauses for l in c} - set(inputs)
    with Minisat22(bootstrap_with=n_clauses) as ns:
        if p_aux:
            ps = Minisat22(bootstrap_with=p_clauses)
        try:
            p_vec = None if p_aux else tt.cnf(p_clauses)
            for row in range(tt.rows):
                alpha = list(tt.assignment(row))
                p_sat = ps.solve(assumptions=alpha) if p_aux else bool(p_vec[row])
                if p_sat == ns.solve(assumptions=alpha + extra):
                    return tuple(alpha)
        finally:
            if p_aux:
                ps.delete()
    return None


def dual_pn_holds(P, N, partition: VariablePartition, selector: Optional[int],
                  cap: int = DUAL_CAP) -> bool:
    return dual_pn_counterexample(P, N, partition, selector, cap) is None


def random_instance(rng: random.Random, vars_range=(4, 10), clauses_range=(1, 40),
                    width_range=(1, 4)):
    """A random (clauses, num_vars, relevant) triple.

    The relevant set is all variables, a small set, or a random subset.
    """
    n = rng.randint(*vars_range)
    m = rng.randint(*clauses_range)
    clauses = []
    for _ in range(m):
        w = rng.randint(width_range[0], min(width_range[1], n))
        vs = rng.sample(range(1, n + 1), w)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    kind = rng.random()
    if kind < 0.25:
        X = set(range(1, n + 1))
    elif kind < 0.5:
        X = set(rng.sample(range(1, n + 1), rng.randint(0, 2)))
    else:
        X = set(rng.sample(range(1, n + 1), rng.randint(1, n)))
    return clauses, n, X
