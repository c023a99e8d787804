from itertools import product

# a=1, b=2, c=3, d=4; FORCED forces a and b
A, B, C, D = 1, 2, 3, 4
FORCED = [[A, C], [A, -C], [B, D], [B, -D]]


def satisfies(clauses, assignment):
    true = set(assignment)
    return all(any(l in true for l in c) for c in clauses)


def extensions(cube, variables):
    """All total assignments over ``variables`` that contain ``cube``."""
    fixed = {abs(l): l for l in cube}
    free = [v for v in sorted(variables) if v not in fixed]
    for bits in product([True, False], repeat=len(free)):
        yield tuple(sorted(list(fixed.values()) + [v if b else -v for v, b in zip(free, bits)],
                           key=abs))
