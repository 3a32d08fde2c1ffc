"""Random term generators shared by the test modules."""

import random

from hypothesis import strategies as st

from lei.syntax import (
    BOT,
    CHECK,
    CHECK_BOT,
    HAT,
    HAT_TOP,
    TOP,
    App,
    Atom,
    Join,
    Leaf,
    Meet,
    SApp,
    Sequent,
    occurrences,
)

ATOMS = ("p", "q", "r")


def formulas(sig, depth=2, atoms=ATOMS):
    """Hypothesis strategy for operational formulas of bounded depth."""
    base = st.sampled_from([Atom(a) for a in atoms] + [TOP, BOT])
    ops = [c for c in sig.operational]

    def extend(children):
        options = [
            st.builds(Meet, children, children),
            st.builds(Join, children, children),
        ]
        for c in ops:
            options.append(st.tuples(*[children] * c.arity).map(lambda args, n=c.name: App(n, args)))
        return st.one_of(options)

    return st.recursive(base, extend, max_leaves=2 ** depth)


def random_formula(rng, sig, depth, atoms=ATOMS):
    if depth <= 0 or rng.random() < 0.3:
        return rng.choice([Atom(a) for a in atoms] + [TOP, BOT])
    ops = sig.operational
    k = rng.randrange(2 + len(ops))
    if k == 0:
        return Meet(random_formula(rng, sig, depth - 1, atoms), random_formula(rng, sig, depth - 1, atoms))
    if k == 1:
        return Join(random_formula(rng, sig, depth - 1, atoms), random_formula(rng, sig, depth - 1, atoms))
    c = ops[k - 2]
    return App(c.name, tuple(random_formula(rng, sig, depth - 1, atoms) for _ in range(c.arity)))


def random_structure(rng, sig, sort, depth, lstar=True):
    """A well-sorted structure of the given sort over the residual-closed signature."""
    conns = [c for c in sig.connectives.values() if c.kind == sort and (lstar or c.operational)]
    r = rng.random()
    if depth <= 0 or not conns or r < 0.3:
        if r < 0.05:
            return HAT_TOP if sort == "F" else CHECK_BOT
        return Leaf(random_formula(rng, sig, 1))
    c = rng.choice(conns)
    args = tuple(random_structure(rng, sig, c.coord_sort(i), depth - 1, lstar) for i in range(1, c.arity + 1))
    return SApp(c.name, HAT if sort == "F" else CHECK, args)


def random_sequent(rng, sig, depth=3):
    return Sequent(random_structure(rng, sig, "F", depth), random_structure(rng, sig, "G", depth))


def random_occurrence(rng, seq):
    return rng.choice(occurrences(seq))


def structures(sig, sort, depth=3):
    """Hypothesis wrapper around :func:`random_structure` driven by a drawn seed."""
    return st.integers(0, 2 ** 32 - 1).map(lambda s: random_structure(random.Random(s), sig, sort, depth))


def sequents(sig, depth=3):
    return st.integers(0, 2 ** 32 - 1).map(lambda s: random_sequent(random.Random(s), sig, depth))
