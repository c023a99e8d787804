"""Dual model shrinking: cut a total model of P down through a conflict in N."""

from __future__ import annotations

from typing import Optional

from .cdcl import SolveResult, Solver
from .core import Trail, var
from .encoding import DualState


class InvariantViolation(RuntimeError):
    """A checked invariant failed; ``invariant`` names it."""

    def __init__(self, invariant: str, detail: str = ""):
        super().__init__("%s violated%s" % (invariant, ": " + detail if detail else ""))
        self.invariant = invariant
        self.detail = detail


def shrink(trail: Trail, ds: DualState, n_solver: Solver,
           last: Optional[list] = None) -> tuple:
    """Return the sub-model I* of ``trail`` over X and Y, in trail order.

    The inputs on the trail are assumed in trail order after the current
    selector is assumed false.  ``last``, when given, receives the raw
    solver result.
    """
    inputs = ds.partition.inputs
    assumptions = [-ds.selector] + [l for l in trail.lits if var(l) in inputs]
    res: SolveResult = n_solver.solve_under_assumptions(assumptions)
    if last is not None:
        last.append(res)
    if res.sat:
        raise InvariantViolation(
            "DualPN", "N satisfiable under the total model %s" % (assumptions[1:],))
    sel = var(ds.selector)
    return tuple(l for l in res.core if var(l) != sel)
