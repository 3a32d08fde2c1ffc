"""Randomised forward derivations, used to build test corpora of derivable sequents."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .calculus import AtomVar, FormulaVar, MetaVar, RuleSet, instantiate, match, metavars
from .prover import Derivation
from .syntax import (
    BOT,
    TOP,
    App,
    Atom,
    Join,
    Leaf,
    Meet,
    Sequent,
    check_sequent,
    iter_subformulas,
    structure_to_formula,
    weight,
)


@dataclass(frozen=True)
class CorpusItem:
    sequent: Sequent
    derivation: Derivation


def random_formula(rng: random.Random, sig, atoms: list, depth: int):
    if depth <= 0 or rng.random() < 0.35:
        r = rng.random()
        if r < 0.08:
            return TOP
        if r < 0.16:
            return BOT
        return Atom(rng.choice(atoms))
    ops = [c for c in sig.operational]
    choice = rng.randrange(2 + len(ops))
    if choice == 0:
        return Meet(random_formula(rng, sig, atoms, depth - 1), random_formula(rng, sig, atoms, depth - 1))
    if choice == 1:
        return Join(random_formula(rng, sig, atoms, depth - 1), random_formula(rng, sig, atoms, depth - 1))
    c = ops[choice - 2]
    return App(c.name, tuple(random_formula(rng, sig, atoms, depth - 1) for _ in range(c.arity)))


def _formulas_of(seq: Sequent) -> list:
    out = []

    def walk(s):
        if isinstance(s, Leaf):
            out.extend(iter_subformulas(s.formula))
        elif hasattr(s, "args"):
            for a in s.args:
                walk(a)

    walk(seq.ante)
    walk(seq.succ)
    return out


# relative odds of picking a rule of each kind at a forward step
KIND_WEIGHTS = {"intro": 1.0, "principal": 1.5, "display": 2.0, "weakening": 0.3, "structural": 4.0}


class Generator:
    """Grows a pool of derivations by applying random rules forwards."""

    def __init__(self, rules: RuleSet, seed: int = 0, max_weight: int = 20,
                 atoms: Optional[list] = None, structural: bool = True):
        self.rules = rules
        self.sig = rules.sig
        self.rng = random.Random(seed)
        self.max_weight = max_weight
        self.atoms = list(atoms or sorted(self.sig.atoms) or ["p", "q", "r"])[:3]
        usable = [r for r in rules.rules if r.kind not in ("cut", "axiom")
                  and (structural or r.kind != "structural")]
        self.usable = usable
        self.weights = [KIND_WEIGHTS.get(r.kind, 1.0) for r in usable]
        self.pool: list = []
        self.seen: set = set()
        for a in self.atoms:
            self._add(Derivation.make(rules["Id"], {"p": Atom(a)}))
            self._add(Derivation.make(rules["top_ax"], {"p": Atom(a)}))
            self._add(Derivation.make(rules["bot_ax"], {"p": Atom(a)}))
        self._add(Derivation.make(rules["top_hat"], {}))
        self._add(Derivation.make(rules["bot_check"], {}))

    def _add(self, d: Derivation) -> bool:
        if d.root in self.seen or weight(d.root) > self.max_weight:
            return False
        self.seen.add(d.root)
        self.pool.append(d)
        return True

    def _fresh(self, var, prem_roots: list):
        """Value for a conclusion-only metavariable."""
        rng = self.rng
        nearby = [f for s in prem_roots for f in _formulas_of(s)]
        if isinstance(var, MetaVar) or isinstance(var, FormulaVar):
            if nearby and rng.random() < 0.6:
                f = rng.choice(nearby)
            else:
                f = random_formula(rng, self.sig, self.atoms, 1)
            return Leaf(f) if isinstance(var, MetaVar) else f
        if isinstance(var, AtomVar):
            return Atom(rng.choice(self.atoms))
        raise TypeError(var)

    def _find(self, pat, binding: dict, tries: int = 40):
        rng = self.rng
        for _ in range(tries):
            cand = rng.choice(self.pool)
            b = match(pat, cand.root, dict(binding))
            if b is not None:
                return cand, b
        return None

    def step(self) -> Optional[Derivation]:
        rng = self.rng
        schema = rng.choices(self.usable, self.weights)[0]
        binding: dict = {}
        kids = []
        for pat in schema.premises:
            hit = self._find(pat, binding)
            if hit is None:
                return None
            kids.append(hit[0])
            binding = hit[1]
        for v in metavars(schema.conclusion):
            if v.name not in binding:
                binding[v.name] = self._fresh(v, [k.root for k in kids])
        try:
            d = Derivation.make(schema, binding, kids)
            check_sequent(d.root, self.sig, lstar=True)
        except ValueError:
            return None
        return d if self._add(d) else None

    def seed_user_premises(self, tries: int = 80, depth: int = 10) -> None:
        """Prove random instances of user-rule premises so those rules can fire."""
        from .prover import Proved, SearchConfig, prove

        rng = self.rng
        cfg = SearchConfig(depth=depth, structural=frozenset())
        for schema in self.rules.user:
            for attempt in range(tries):
                binding = {}
                if attempt % 2:
                    self._mirror(schema, binding)
                for v in metavars(schema.conclusion):
                    if isinstance(v, MetaVar) and v.name not in binding:
                        binding[v.name] = Leaf(random_formula(rng, self.sig, self.atoms, 2))
                for p in schema.premises:
                    try:
                        goal = instantiate(p, binding)
                        check_sequent(goal, self.sig)
                    except ValueError:
                        continue
                    r = prove(goal, self.rules, cfg)
                    if isinstance(r, Proved):
                        self._add(r.derivation)


    def _mirror(self, schema, binding: dict) -> None:
        """Bind a bare-metavariable premise side to the formula of the other side.

        Random premise instances are rarely derivable; mirrored ones are, up to
        the weakening by a random conjunct or disjunct.
        """
        rng = self.rng
        for p in schema.premises:
            for bare, other in ((p.ante, p.succ), (p.succ, p.ante)):
                if not isinstance(bare, MetaVar) or bare.name in binding:
                    continue
                for v in metavars(other):
                    if isinstance(v, MetaVar) and v.name not in binding:
                        binding[v.name] = Leaf(random_formula(rng, self.sig, self.atoms, 1))
                try:
                    f = structure_to_formula(instantiate(other, binding), self.sig)
                except ValueError:
                    return
                if rng.random() < 0.5:
                    extra = random_formula(rng, self.sig, self.atoms, 1)
                    f = Meet(f, extra) if bare is p.ante else Join(f, extra)
                binding[bare.name] = Leaf(f)
                return


def is_formula_sequent(seq: Sequent) -> bool:
    return isinstance(seq.ante, Leaf) and isinstance(seq.succ, Leaf)


def generate(rules: RuleSet, count: int, seed: int = 0, max_weight: int = 20,
             structural: bool = True, max_steps: int = 400_000) -> list:
    """``count`` distinct derivable formula sequents, each with its derivation."""
    gen = Generator(rules, seed, max_weight, structural=structural)
    if structural and rules.user:
        gen.seed_user_premises()
    out = [CorpusItem(d.root, d) for d in gen.pool if is_formula_sequent(d.root)]
    for _ in range(max_steps):
        if len(out) >= count:
            break
        d = gen.step()
        if d is not None and is_formula_sequent(d.root):
            out.append(CorpusItem(d.root, d))
    return out[:count]
