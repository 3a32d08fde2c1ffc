"""Display postulates: neighbours, equivalence classes, canonical members,
isolation of a substructure and display-preserving substitution."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .calculus import RuleSchema, RuleSet, instantiate, match
from .signature import CON, COV, Polarity
from .syntax import (
    ANTE,
    SUCC,
    Leaf,
    Occurrence,
    Sequent,
    SortError,
    replace_at,
    show,
    structure_sort,
    subterm,
)


@dataclass(frozen=True)
class DisplayStep:
    """One application of a display postulate schema to a sequent."""

    rule: str  # schema name
    postulate: str
    direction: str  # "fwd" or "inv"
    occurrence: Occurrence  # root of the side whose head connective is rewritten

    def inverse(self, rules: RuleSet) -> "DisplayStep":
        inv = rules[rules[self.rule].inverse]
        side = _principal_side(inv)
        return DisplayStep(inv.name, inv.postulate, inv.direction, Occurrence(side))


@dataclass(frozen=True)
class DisplayedForm:
    sequent: Sequent
    epsilon: Polarity
    steps: tuple
    origin: Occurrence

    @property
    def target(self):
        return self.sequent.ante if self.epsilon is COV else self.sequent.succ


def _principal_side(schema: RuleSchema) -> str:
    from .calculus import MetaVar

    return SUCC if isinstance(schema.premises[0].ante, MetaVar) else ANTE


def apply_step(schema: RuleSchema, seq: Sequent) -> Optional[tuple]:
    binding = match(schema.premises[0], seq, {})
    if binding is None:
        return None
    return binding, instantiate(schema.conclusion, binding)


def neighbors(seq: Sequent, rules: RuleSet) -> list:
    """Sequents one postulate application away, with the step taken."""
    out = []
    seen = set()
    for schema in rules.display:
        r = apply_step(schema, seq)
        if r is None:
            continue
        t = r[1]
        if t == seq or t in seen:
            continue
        seen.add(t)
        out.append((t, DisplayStep(schema.name, schema.postulate, schema.direction,
                                   Occurrence(_principal_side(schema)))))
    return out


def explore(seq: Sequent, rules: RuleSet) -> dict:
    """Breadth-first display class of ``seq``: member -> step tuple from ``seq``."""
    cache = rules._closure_cache
    hit = cache.get(seq)
    if hit is not None:
        return hit
    paths = {seq: ()}
    queue = deque([seq])
    while queue:
        s = queue.popleft()
        base = paths[s]
        for t, step in neighbors(s, rules):
            if t not in paths:
                paths[t] = base + (step,)
                queue.append(t)
    if len(cache) > 200_000:
        cache.clear()
    cache[seq] = paths
    return paths


def closure(seq: Sequent, rules: RuleSet) -> set:
    return set(explore(seq, rules))


def canonical(seq: Sequent, rules: RuleSet) -> Sequent:
    """The member of the display class with the least printed form."""
    return min(explore(seq, rules), key=show)


def canonical_key(seq: Sequent, rules: RuleSet) -> str:
    return min(show(s) for s in explore(seq, rules))


def _track(schema: RuleSchema, binding: dict, occ: Occurrence) -> Optional[Occurrence]:
    """Follow an occurrence from the premise of a display step to its conclusion."""
    corr = schema.correspondence
    for name, prem_positions in corr.premises.items():
        for pos in prem_positions:
            if pos.side == occ.side and occ.path[: len(pos.path)] == pos.path:
                rest = occ.path[len(pos.path):]
                target = corr.conclusion[name][0]
                return Occurrence(target.side, target.path + rest)
    return None


def isolate(seq: Sequent, occ: Occurrence, rules: RuleSet) -> DisplayedForm:
    """Display the occurrence as the whole antecedent (ε=1) or succedent (ε=∂)."""
    subterm(seq, occ)
    start = (seq, occ)
    prev = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        s, o = state
        if not o.path:
            steps = []
            cur = state
            while prev[cur] is not None:
                before, step = prev[cur]
                steps.append(step)
                cur = before
            steps.reverse()
            eps = COV if o.side == ANTE else CON
            return DisplayedForm(s, eps, tuple(steps), occ)
        for schema in rules.display:
            r = apply_step(schema, s)
            if r is None:
                continue
            binding, t = r
            o2 = _track(schema, binding, o)
            if o2 is None:
                continue
            nxt = (t, o2)
            if nxt in prev:
                continue
            prev[nxt] = (state, DisplayStep(schema.name, schema.postulate, schema.direction,
                                            Occurrence(_principal_side(schema))))
            queue.append(nxt)
    raise ValueError(f"occurrence {occ} cannot be displayed in {show(seq)}")


def replay(seq: Sequent, steps, rules: RuleSet) -> Sequent:
    for step in steps:
        r = apply_step(rules[step.rule], seq)
        if r is None:
            raise ValueError(f"display step {step.rule} does not apply to {show(seq)}")
        seq = r[1]
    return seq


def inverse_steps(steps, rules: RuleSet) -> list:
    return [s.inverse(rules) for s in reversed(steps)]


def plug(df: DisplayedForm, replacement, rules: RuleSet) -> Sequent:
    """Put ``replacement`` at the displayed position and undo the display steps."""
    want = "F" if df.epsilon is COV else "G"
    got = structure_sort(replacement)
    if got is not None and got != want:
        raise SortError(f"replacement {show(replacement)} has sort {got}, expected {want}")
    side = Occurrence(ANTE if df.epsilon is COV else SUCC)
    seq = replace_at(df.sequent, side, replacement)
    return replay(seq, inverse_steps(df.steps, rules), rules)


def leaf(f) -> Leaf:
    return Leaf(f)
