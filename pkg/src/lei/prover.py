"""Cut-free backward proof search with display normalisation, derivation
objects, JSON serialisation and an independent derivation checker."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .calculus import (
    AtomVar,
    Correspondence,
    FormulaVar,
    MetaVar,
    RuleError,
    RuleSchema,
    RuleSet,
    _head,
    _head_ok,
    instantiate,
    match_backward,
    metavars,
)
from .display import explore, inverse_steps, apply_step
from .syntax import (
    Atom,
    Leaf,
    Sequent,
    SortError,
    check_formula,
    check_sequent,
    check_structure,
    parse_formula,
    parse_sequent,
    parse_structure,
    show,
    structure_sort,
)


@dataclass(frozen=True, eq=False)
class Derivation:
    root: Sequent
    rule: str
    instantiation: dict
    children: tuple = ()
    correspondence: Optional[Correspondence] = field(default=None, repr=False)

    @classmethod
    def make(cls, schema: RuleSchema, inst: dict, children=()) -> "Derivation":
        root = instantiate(schema.conclusion, inst)
        return cls(root, schema.name, dict(inst), tuple(children), schema.correspondence)

    def nodes(self):
        stack = [self]
        while stack:
            d = stack.pop()
            yield d
            stack.extend(reversed(d.children))

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)

    def rules_used(self) -> set:
        return {d.rule for d in self.nodes()}

    def to_json(self) -> dict:
        return {
            "sequent": show(self.root),
            "rule": self.rule,
            "instantiation": {k: show(self.instantiation[k]) for k in sorted(self.instantiation)},
            "children": [c.to_json() for c in self.children],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)


def derivation_from_json(doc: dict, rules: RuleSet) -> Derivation:
    """Rebuild a derivation; instantiation texts are parsed by metavariable type."""
    schema = rules[doc["rule"]]
    kinds = {v.name: v for p in (schema.conclusion,) + tuple(schema.premises) for v in metavars(p)}
    inst = {}
    for name, text in doc["instantiation"].items():
        v = kinds.get(name)
        if isinstance(v, MetaVar):
            inst[name] = parse_structure(text, rules.sig, v.sort, lstar=True)
        elif isinstance(v, (FormulaVar, AtomVar)):
            inst[name] = parse_formula(text, rules.sig, lstar=True)
        else:
            raise RuleError(f"rule {schema.name} has no metavariable {name}")
    children = tuple(derivation_from_json(c, rules) for c in doc["children"])
    root = parse_sequent(doc["sequent"], rules.sig, lstar=True)
    return Derivation(root, schema.name, inst, children, schema.correspondence)


# --- checking ---------------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    message: str = "valid"
    path: tuple = ()  # child indices from the root to the offending node

    def __bool__(self) -> bool:
        return self.ok


def _check_inst(schema: RuleSchema, inst: dict, rules: RuleSet) -> Optional[str]:
    needed = {v.name: v for p in (schema.conclusion,) + tuple(schema.premises) for v in metavars(p)}
    missing = sorted(set(needed) - set(inst))
    if missing:
        return f"instantiation misses {', '.join(missing)}"
    extra = sorted(set(inst) - set(needed))
    if extra:
        return f"instantiation names unknown metavariables {', '.join(extra)}"
    for name, v in needed.items():
        val = inst[name]
        try:
            if isinstance(v, MetaVar):
                s = structure_sort(val)
                if s is not None and s != v.sort:
                    return f"{name} is sort {v.sort} but instantiated with {show(val)}"
                check_structure(val, v.sort, rules.sig, lstar=True)
            elif isinstance(v, AtomVar):
                if not isinstance(val, Atom):
                    return f"{name} must be an atom, got {show(val)}"
            else:
                if isinstance(val, Leaf):
                    return f"{name} must be a formula"
                check_formula(val, rules.sig, lstar=rules.lstar)
        except SortError as exc:
            return f"{name}: {exc}"
    return None


def check(d: Derivation, rules: RuleSet) -> CheckReport:
    """Validate every node as an instance of its rule (Cut is admitted here)."""
    stack = [(d, ())]
    while stack:
        node, path = stack.pop()
        schema = rules.by_name.get(node.rule)
        if schema is None:
            return CheckReport(False, f"unknown rule {node.rule}", path)
        problem = _check_inst(schema, node.instantiation, rules)
        if problem:
            return CheckReport(False, f"{node.rule}: {problem}", path)
        try:
            conc = instantiate(schema.conclusion, node.instantiation)
            prems = [instantiate(p, node.instantiation) for p in schema.premises]
        except RuleError as exc:
            return CheckReport(False, f"{node.rule}: {exc}", path)
        if conc != node.root:
            return CheckReport(False, f"{node.rule}: conclusion {show(conc)} differs from {show(node.root)}", path)
        if len(prems) != len(node.children):
            return CheckReport(False, f"{node.rule}: expected {len(prems)} premises, got {len(node.children)}", path)
        for i, (p, c) in enumerate(zip(prems, node.children)):
            if p != c.root:
                return CheckReport(False, f"{node.rule}: premise {i + 1} should be {show(p)}, found {show(c.root)}", path)
        try:
            check_sequent(node.root, rules.sig, lstar=True)
        except SortError as exc:
            return CheckReport(False, f"ill-sorted sequent: {exc}", path)
        for i, c in enumerate(node.children):
            stack.append((c, path + (i,)))
    return CheckReport(True)


# --- search -----------------------------------------------------------------


@dataclass(frozen=True)
class SearchConfig:
    depth: int = 64
    structural: Optional[frozenset] = None  # enabled user rules; None means all
    weakening: bool = True
    memo: bool = True

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth limit must be at least 1")


@dataclass(frozen=True)
class Proved:
    derivation: Derivation
    status: str = "Proved"


@dataclass(frozen=True)
class NotProved:
    status: str = "NotProved"


@dataclass(frozen=True)
class DepthExceeded:
    status: str = "DepthExceeded"


SearchResult = object  # Proved | NotProved | DepthExceeded


def transport(d: Derivation, paths: dict, rules: RuleSet) -> Derivation:
    """Extend a derivation of a class member to the goal that produced ``paths``."""
    steps = paths[d.root]
    for step in inverse_steps(steps, rules):
        schema = rules[step.rule]
        binding, _ = apply_step(schema, d.root)
        d = Derivation.make(schema, binding, (d,))
    return d


def display_derivation(d: Derivation, steps, rules: RuleSet) -> Derivation:
    """Apply display steps below ``d``."""
    for step in steps:
        schema = rules[step.rule]
        r = apply_step(schema, d.root)
        if r is None:
            raise ValueError(f"display step {step.rule} does not apply to {show(d.root)}")
        d = Derivation.make(schema, r[0], (d,))
    return d


class _Search:
    def __init__(self, rules: RuleSet, cfg: SearchConfig):
        self.rules = rules
        self.cfg = cfg
        logical = [r for r in rules.rules if r.kind in ("intro", "principal")]
        weak = [r for r in rules.rules if r.kind == "weakening"] if cfg.weakening else []
        user = [r for r in rules.rules if r.kind == "structural"
                and (cfg.structural is None or r.name in cfg.structural)]
        self.groups = [
            [r for r in rules.rules if r.kind == "axiom"],
            logical,
            weak,
            user,
        ]
        self.index: dict = {}
        self.proved: dict = {}
        self.failed: dict = {}
        self.cut = False
        self.loop = False

    def candidates(self, member: Sequent) -> list:
        """Per-group rules whose conclusion heads fit ``member``."""
        key = (_head(member.ante), _head(member.succ))
        hit = self.index.get(key)
        if hit is None:
            hit = [[r for r in g if _head_ok(r.heads[0], key[0]) and _head_ok(r.heads[1], key[1])]
                   for g in self.groups]
            self.index[key] = hit
        return hit

    def solve(self, goal: Sequent, budget: int, ancestors: frozenset) -> Optional[Derivation]:
        rules = self.rules
        paths = explore(goal, rules)
        key = min(show(m) for m in paths)
        memo = self.cfg.memo
        if memo:
            hit = self.proved.get(key)
            if hit is not None:
                return transport(hit, paths, rules)
            known = self.failed.get(key, -1)
            if known >= budget:
                # a depth-limited failure still counts as a cut for the caller
                if known != math.inf:
                    self.cut = True
                return None
        if budget <= 0:
            self.cut = True
            return None
        if key in ancestors:
            self.loop = True
            return None
        anc = ancestors | {key}
        outer_cut, outer_loop = self.cut, self.loop
        self.cut = self.loop = False
        result = None
        cands = [(member, self.candidates(member)) for member in paths]
        for gi in range(len(self.groups)):
            for member, per_group in cands:
                for rule in per_group[gi]:
                    for m in match_backward(rule, member):
                        if rule.kind == "weakening" and m.premises[0] == member:
                            continue
                        children = []
                        for p in m.premises:
                            c = self.solve(p, budget - 1, anc)
                            if c is None:
                                break
                            children.append(c)
                        else:
                            d = Derivation.make(rule, m.instantiation, children)
                            result = transport(d, paths, rules)
                        if result is not None:
                            break
                    if result is not None:
                        break
                if result is not None:
                    break
            if result is not None:
                break
        sub_cut, sub_loop = self.cut, self.loop
        self.cut = outer_cut or sub_cut
        self.loop = outer_loop or sub_loop
        if result is not None:
            if memo:
                self.proved[key] = result
            return result
        if memo and not sub_loop:
            self.failed[key] = budget if sub_cut else math.inf
        return None


def _schedule(depth: int) -> list:
    out = []
    b = 4
    while b < depth:
        out.append(b)
        b *= 2
    out.append(depth)
    return out


def prove(goal: Sequent, rules: RuleSet, cfg: SearchConfig = SearchConfig()):
    """Iterative-deepening backward search; depth counts non-display rule applications."""
    check_sequent(goal, rules.sig, lstar=True)
    search = _Search(rules, cfg)
    for bound in _schedule(cfg.depth):
        search.cut = search.loop = False
        d = search.solve(goal, bound, frozenset())
        if d is not None:
            return Proved(d)
        if not search.cut:
            return NotProved()
    return DepthExceeded()


def is_derivable(goal: Sequent, rules: RuleSet, cfg: SearchConfig = SearchConfig()) -> bool:
    return isinstance(prove(goal, rules, cfg), Proved)
