"""The dual pair (P, N) and the blocking update keeping them complementary.

N is built clause by clause: every input clause C_i gets a definition
variable t_i with t_i <-> not C_i, and the disjunction over all t_i is
closed by a selector.  Blocked cubes extend that disjunction through a chain
of selectors so that N only ever grows:

    (t_1 v ... v t_m v s_0)  (-s_0 v t_{m+1} v s_1)  (-s_1 v t_{m+2} v s_2) ...

Assuming the newest selector false activates the whole chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import CnfFormula, Cube, Origin, VariablePartition, var


@dataclass
class DualState:
    P: CnfFormula
    N: CnfFormula
    partition: VariablePartition
    selectors: list = field(default_factory=list)
    clause_vars: list = field(default_factory=list)   # t_i for input clause i
    block_vars: list = field(default_factory=list)    # t for each blocked cube
    blocked: list = field(default_factory=list)
    bidirectional: bool = False

    @property
    def n(self) -> int:
        return len(self.blocked)

    @property
    def selector(self) -> int:
        """The selector to assume false in shrink calls."""
        return self.selectors[-1]


def encode_negation(F: CnfFormula, partition: Optional[VariablePartition] = None,
                    bidirectional: bool = False) -> DualState:
    """Build P = F and N with N equivalent to not F once the selector is false."""
    if partition is None:
        partition = VariablePartition(relevant=set(range(1, F.num_vars + 1)))
    P = CnfFormula(F.num_vars)
    for c in F:
        P.add(c.lits, c.origin)
    N = CnfFormula(F.num_vars)
    ts = []
    for c in P:
        t = N.new_var()
        ts.append(t)
        for l in c.lits:
            N.add([-t, -l], Origin.NEGATION)
        N.add(list(c.lits) + [t], Origin.NEGATION)
    sigma = N.new_var()
    N.add(ts + [sigma], Origin.NEGATION)
    partition.negative_tseitin |= set(ts) | {sigma}
    return DualState(P, N, partition, [sigma], ts, bidirectional=bidirectional)


def block_model(ds: DualState, cube: Cube, update_negation: bool = True):
    """Exclude ``cube`` from P and add it to the disjunction in N.

    Returns the clause added to P and the list of clauses added to N.
    ``update_negation=False`` skips the N side, which breaks the duality on
    purpose (used to check that the invariant checks are not vacuous).
    """
    cube = tuple(cube)
    if not cube:
        raise ValueError("cannot block the empty cube")
    outside = [l for l in cube if var(l) not in ds.partition.relevant]
    if outside:
        raise ValueError("cube mentions non-relevant literals %s" % outside)
    p_clause = ds.P.add([-l for l in cube], Origin.BLOCKING)
    ds.blocked.append(cube)
    added = []
    if update_negation:
        t = ds.N.new_var()
        for l in cube:
            added.append(ds.N.add([-t, l], Origin.NEGATION))
        if ds.bidirectional:
            added.append(ds.N.add([t] + [-l for l in cube], Origin.NEGATION))
        sigma = ds.N.new_var()
        added.append(ds.N.add([-ds.selector, t, sigma], Origin.NEGATION))
        ds.block_vars.append(t)
        ds.selectors.append(sigma)
        ds.partition.negative_tseitin |= {t, sigma}
    return p_clause, added
