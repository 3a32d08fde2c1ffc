"""Brute-force interpolant search, independent of the extraction algorithm.

Candidates are enumerated polarity-aware, so every emitted formula already
satisfies the Lyndon variable condition; derivability of the two Maehara
sequents is then decided by the prover.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .calculus import RuleSet
from .interpolate import verify
from .prover import SearchConfig
from .signature import COV
from .syntax import (
    BOT,
    TOP,
    App,
    Atom,
    Join,
    Meet,
    Occurrence,
    Sequent,
    connectives_in,
    context_vars,
    formula_depth,
    show,
    signed_vars,
    subterm,
)

AND = "and"
OR = "or"


@dataclass(frozen=True)
class CandidateSpace:
    pos: frozenset
    neg: frozenset
    connectives: frozenset = field(default_factory=frozenset)  # may include "and"/"or"
    depth: int = 1

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth bound must be non-negative")


def _levels(space: CandidateSpace, sig) -> dict:
    """Formulas of depth <= d usable positively (True) or negatively (False)."""
    names = sorted(c for c in space.connectives if c not in (AND, OR))
    conns = [sig[n] for n in names]
    base = {
        True: [TOP, BOT] + [Atom(a) for a in sorted(space.pos)],
        False: [TOP, BOT] + [Atom(a) for a in sorted(space.neg)],
    }
    levels = [base]
    for _ in range(space.depth):
        prev = levels[-1]
        nxt = {}
        for sign in (True, False):
            out = list(prev[sign])
            seen = set(out)
            items = prev[sign]

            def push(f):
                if f not in seen:
                    seen.add(f)
                    out.append(f)

            if AND in space.connectives:
                for a in items:
                    for b in items:
                        push(Meet(a, b))
            if OR in space.connectives:
                for a in items:
                    for b in items:
                        push(Join(a, b))
            for c in conns:
                pools = [prev[sign if e is COV else not sign] for e in c.order_type]
                for args in _product(pools):
                    push(App(c.name, args))
            nxt[sign] = out
        levels.append(nxt)
    return levels[-1]


def _product(pools: list) -> Iterator[tuple]:
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for rest in _product(pools[1:]):
            yield (head,) + rest


def enumerate_space(space: CandidateSpace, sig) -> list:
    """All formulas of the space, syntactically deduplicated, in a fixed order."""
    return list(_levels(space, sig)[True])


def in_space(f, space: CandidateSpace, sig) -> bool:
    if formula_depth(f) > space.depth:
        return False
    used = set(connectives_in(f))
    if not used <= set(space.connectives):
        return False
    if _has(f, Meet) and AND not in space.connectives:
        return False
    if _has(f, Join) and OR not in space.connectives:
        return False
    sv = signed_vars(f, sig)
    return sv.pos <= space.pos and sv.neg <= space.neg


def _has(f, kind) -> bool:
    if isinstance(f, kind):
        return True
    if isinstance(f, (Meet, Join)):
        return _has(f.left, kind) or _has(f.right, kind)
    if isinstance(f, App):
        return any(_has(a, kind) for a in f.args)
    return False


def space_for(seq: Sequent, occ: Occurrence, depth: int, rules: RuleSet,
              connectives=None) -> CandidateSpace:
    """Shared signed variables of the occurrence and its context."""
    sig = rules.sig
    x = signed_vars(subterm(seq, occ), sig)
    ctx = context_vars(seq, occ, sig)
    if connectives is None:
        connectives = {c.name for c in sig.operational} | {AND, OR}
    return CandidateSpace(x.pos & ctx.pos, x.neg & ctx.neg, frozenset(connectives), depth)


def find_interpolants(seq: Sequent, occ: Occurrence, depth: int, rules: RuleSet,
                      cfg: SearchConfig = SearchConfig(), connectives=None) -> set:
    space = space_for(seq, occ, depth, rules, connectives)
    return {f for f in enumerate_space(space, rules.sig) if verify(seq, occ, f, rules, cfg).ok}


def admits(seq: Sequent, occ: Occurrence, gamma, depth: int, rules: RuleSet,
           cfg: SearchConfig = SearchConfig(), connectives=None) -> bool:
    """``gamma in find_interpolants(seq, occ, depth, ...)`` without enumerating the space."""
    space = space_for(seq, occ, depth, rules, connectives)
    return in_space(gamma, space, rules.sig) and verify(seq, occ, gamma, rules, cfg).ok


def sorted_text(formulas) -> list:
    return sorted(show(f) for f in formulas)
