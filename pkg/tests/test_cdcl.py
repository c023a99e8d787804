from dualenum.cdcl import Solver
from dualenum.core import Clause, Kind, Origin
from dualenum.encoding import block_model, encode_negation
from dualenum.core import CnfFormula
from helpers import A, B, C, D, FORCED

E = 5
CHAIN = [[-A, B], [-C, D], [-B, -C, -D]]


def test_propagation_reaches_conflict():
    s = Solver(4, CHAIN)
    s.decide(A)
    assert s.propagate() is None
    assert s.trail.lits == [A, B]
    assert s.trail.reasons[1].lits == [B, -A]
    s.decide(C)
    conflict = s.propagate()
    assert set(conflict.lits) == {-B, -C, -D}
    assert s.trail.lits == [A, B, C, D]


def test_no_units_is_fixpoint():
    s = Solver(2, [[1, 2]])
    assert s.propagate() is None and s.trail.lits == []


def test_propagation_after_block():
    s = Solver(4, FORCED)
    s.add_clause([-A], Origin.BLOCKING)
    conflict = s.propagate()
    assert s.trail.lits == [-A, C]
    assert set(conflict.lits) == {A, -C}


def test_first_uip_learning():
    s = Solver(4, CHAIN)
    s.decide(A)
    s.propagate()
    s.decide(C)
    a = s.analyze(s.propagate())
    assert set(a.learned) == {-B, -C} and a.asserting == -C
    assert a.backjump == 1
    assert [set(c.lits) for c in a.chain] == [{-B, -C, -D}, {-C, D}]


def test_analysis_through_virtual_reason():
    clauses = [[A, B, -C], [-B, C], [D, -C, E], [D, -C, -E]]
    s = Solver(5, clauses)
    for lit in (A, B):
        s.decide(lit)
        assert s.propagate() is None
    assert s.trail.lits == [A, B, C]
    s.decide(D)
    s.decide(E)
    s.propagate()
    s.backtrack(2)
    assert s.trail.lits == [A, B, C]
    b1 = Clause([-D, -A, -B], Origin.VIRTUAL)
    s.assign(-D, b1)
    assert all(b1 not in ws for ws in s.watches.values())
    conflict = s.propagate()
    assert set(conflict.lits) == {D, -C, -E}
    a = s.analyze(conflict)
    assert set(a.learned) == {-A, -B}
    assert a.chain[2] is b1
    assert [c.lits for c in a.chain[1:]][-1] == s.clauses[1].lits


def test_learned_clause_is_unit_after_backjump():
    s = Solver(4, CHAIN)
    s.decide(A)
    s.propagate()
    s.decide(C)
    a = s.analyze(s.propagate())
    learned = s.learn(a)
    assert s.trail.current_level == 1
    assert s.trail.lits[-1] == -C and s.trail.reasons[-1] is learned
    assert learned.origin is Origin.LEARNED


def test_backtrack_zero_keeps_level_zero():
    s = Solver(3, [[1], [-1, 2]])
    s.propagate()
    s.decide(3)
    s.backtrack(0)
    assert s.trail.lits == [1, 2]


def test_decide_prefers_relevant():
    s = Solver(4, FORCED)
    assert s.pick_branch(([A, C], [B, D])) == (0, A)
    s.decide(A)
    s.decide(C)
    assert s.pick_branch(([A, C], [B, D])) == (1, B)
    s.decide(B)
    s.decide(D)
    assert s.pick_branch(([A, C], [B, D])) is None


def test_exhaustive_core():
    ds = encode_negation(CnfFormula(4, [[A, B], [C, D]]))
    s = Solver(ds.N.num_vars, ds.N.clauses)
    res = s.solve_under_assumptions([-ds.selector, A, B, C, D])
    assert not res.sat
    assert res.core == [-ds.selector, A, C]
    # resolves the top clause with both definition clauses; the order depends on
    # which of them unit propagation meets first
    used = sorted(sorted(c.lits) for c in res.chain)
    assert used == sorted(sorted(c) for c in ([5, 6, 7], [-6, -C], [-5, -A]))
    assert s.trail.lits == []


def test_dual_blocking_core():
    ds = encode_negation(CnfFormula(3, [[1, 2], [1, 3]]))
    _, added = block_model(ds, (1,))
    s = Solver(ds.N.num_vars, ds.N.clauses)
    res = s.solve_under_assumptions([-ds.selector, -1, 2, 3])
    assert not res.sat
    core = [l for l in res.core if abs(l) <= 3]
    assert set(core) == {-1, 2, 3}
    assert set(l for l in res.learned if abs(l) <= 3) == {-3, -2, 1}


def test_unit_violating_assumption_gives_singleton_core():
    s = Solver(1, [[A]])
    res = s.solve_under_assumptions([-A])
    assert not res.sat and res.core == [-A]


def test_sat_under_assumptions_restores_trail():
    s = Solver(3, [[1, 2], [-1, 3]])
    res = s.solve_under_assumptions([1])
    assert res.sat and 3 in res.model and 1 in res.model
    assert s.trail.lits == [] and s.trail.current_level == 0
    assert s.trail.kinds == []


def test_search_learns_below_assumptions():
    # pigeonhole-like core hidden behind free variables
    clauses = [[4, 5], [4, -5], [-4, 5], [-4, -5, -1]]
    s = Solver(5, clauses)
    res = s.solve_under_assumptions([1, 2])
    assert not res.sat
    assert res.core == [1]
    assert s.solve_under_assumptions([-1, 2]).sat
