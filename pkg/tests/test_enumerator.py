import pytest

from dualenum import oracle
from dualenum.core import Kind
from dualenum.dimacs import ProblemInstance
from dualenum.enumerator import Enumerator, Rule, enumerate_models
from dualenum.shrink import InvariantViolation
from helpers import A, B, C, D, FORCED


def rules(result):
    return [s.rule for s in result.trace]


def test_irredundant_example():
    r = enumerate_models(ProblemInstance.from_clauses(FORCED, 4, {A, C}), trace=True)
    assert r.cubes == [(A,)]
    assert r.complete and r.cause == "exhausted"


def test_redundant_example():
    r = enumerate_models(ProblemInstance.from_clauses(FORCED, 4, {A, B}), "redundant", trace=True)
    assert [set(m) for m in r.cubes] == [{A, B}, {A, B}]


def test_unsat_input():
    r = enumerate_models(ProblemInstance.from_clauses([[A], [-A]], 1), trace=True)
    assert r.cubes == [] and rules(r)[-1] is Rule.END_CONFLICT
    r = enumerate_models(ProblemInstance.from_clauses([[]], 1), trace=True)
    assert r.cubes == [] and rules(r) == [Rule.END_CONFLICT]


def test_level_zero_relearn_reaches_end():
    r = enumerate_models(ProblemInstance.from_clauses([[A], [-A, B], [-B]], 2), trace=True)
    assert r.cubes == [] and r.cause == "exhausted"


def test_state_after_first_block():
    e = Enumerator(ProblemInstance.from_clauses(FORCED, 4, {A, C}), trace=True)
    while not e.trace or e.trace[-1].rule is not Rule.BLOCK_MODEL:
        e.step()
    t = e.p.trail
    assert t.lits == [-A] and t.kinds == [Kind.PROPAGATED]
    assert t.reasons[0].lits == [-A]
    assert e.dual.P.as_lists()[-1] == [-A]
    assert all(v is None for v in e.check_invariants().values())


def test_redundant_state_after_first_block():
    e = Enumerator(ProblemInstance.from_clauses(FORCED, 4, {A, B}), "redundant", trace=True)
    while not e.trace or e.trace[-1].rule is not Rule.BLOCK_MODEL:
        e.step()
    t = e.p.trail
    assert t.lits == [A, -B] and t.kinds == [Kind.DECISION, Kind.PROPAGATED]
    assert set(t.reasons[1].lits) == {-A, -B}
    assert len(e.dual.P) == 4 and len(e.dual.N) == 13


def test_no_relevant_variables():
    r = enumerate_models(ProblemInstance.from_clauses([[1, 2]], 2, set()), trace=True)
    assert r.cubes == [()] and r.cause == "no-relevant-decision"
    assert rules(r)[-1] is Rule.END_MODEL


def test_true_formula_gives_empty_cube():
    r = enumerate_models(ProblemInstance.from_clauses([], 3))
    assert r.cubes == [()] and r.cause == "empty-block"


def test_shrunk_cube_without_decision_is_closed():
    # x2 is implied by x1; shrinking the first model keeps only x2, which
    # must not hide the model -x1 -x2
    inst = ProblemInstance.from_clauses([[-1, 2]], 2)
    for mode in ("irredundant", "redundant"):
        r = enumerate_models(inst, mode, debug_invariants=True)
        assert oracle.covers_equal(r.M, inst.formula, {1, 2})
    r = enumerate_models(inst)
    assert oracle.is_dsop(r.M) and r.M.cover_count(2) == 3


def test_limits():
    inst = ProblemInstance.from_clauses([[1, 2]], 2)
    r = enumerate_models(inst, max_models=1)
    assert len(r.cubes) == 1 and r.cause == "max-models" and not r.complete
    inst = ProblemInstance.from_clauses([[1, 2], [1, -2], [-1, 3], [-1, -3]], 3)
    r = enumerate_models(inst, max_conflicts=1)
    assert r.cause in ("max-conflicts", "exhausted")


def test_streaming_callback_order():
    seen = []
    r = enumerate_models(ProblemInstance.from_clauses([[1, 2]], 2), on_cube=seen.append)
    assert seen == r.cubes and len(seen) >= 2


def test_check_invariants_flags_two_decisions_on_one_level():
    e = Enumerator(ProblemInstance.from_clauses(FORCED, 4, {A, C}))
    e.step()
    e.step()
    e.p.trail.kinds[1] = Kind.DECISION
    e.p.trail.levels[C] = 1
    e.p.trail.lim.pop()
    assert e.check_invariants()["Decs"]


def test_mutation_is_detected():
    inst = ProblemInstance.from_clauses(FORCED, 4, {A, C})
    with pytest.raises(InvariantViolation) as exc:
        enumerate_models(inst, debug_invariants=True, update_negation=False)
    assert exc.value.invariant == "DualPN"


def test_budget_skips_oracle_checks():
    e = Enumerator(ProblemInstance.from_clauses(FORCED, 4, {A, C}), oracle_budget=3)
    e.step()
    assert set(e.check_invariants()) == {"Decs", "DSOP"}


def test_measure_decreases_on_trace():
    e = Enumerator(ProblemInstance.from_clauses(FORCED, 4, {A, B}), "redundant")
    seen = [e.measure()]
    while e.cause is None:
        e.step()
        seen.append(e.measure())
    assert all(b < a for a, b in zip(seen, seen[1:]))
    assert seen[-1] == []


def test_unknown_mode():
    with pytest.raises(ValueError):
        Enumerator(ProblemInstance.from_clauses(FORCED, 4), "fast")


@pytest.mark.parametrize("clauses,n,X,count", [
    ([[-4, 7, 8], [-6, -7, 5], [-9, -2, -6], [3, 4, 7], [-8, -2, 6], [4, -6, -9], [-4, -9, -1]],
     9, [6, 7], 4),
    ([[2, 4], [5, 2, -3], [-2, -6, 3], [1, 2], [-1, 2], [-5, 3, -4], [1, 3], [5, 1, 4],
      [-3, -6], [5, -6]], 6, [1], 2),
    ([[-7, -2], [5, -2], [2, 1], [-5, -1], [1, 7, -3]], 7, [2, 3, 5, 6, 7], 10),
    ([[4, 3], [7, -6, -2], [2, 7], [-3, 4], [-7, 2], [2, 5], [4, 3], [6, -7, -2], [1, 2, -6],
      [-4, -2, -3], [2, 1, -6], [1, 6]], 7, [1, 2, 3], 2),
])
def test_projected_counts(clauses, n, X, count):
    # counts computed once with an external SAT solver under assumptions
    r = enumerate_models(ProblemInstance.from_clauses(clauses, n, X))
    assert r.M.cover_count(len(X)) == count
