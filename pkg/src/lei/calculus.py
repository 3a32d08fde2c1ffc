"""Rule schemas over metastructures: the built-in calculus, matching, rule files
and the analytic / special / interpolation-safe classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .signature import CON, COV, Connective, Signature
from .syntax import (
    ANTE,
    BOT,
    CHECK,
    CHECK_BOT,
    HAT,
    HAT_TOP,
    SUCC,
    TOP,
    App,
    Atom,
    CheckBot,
    HatTop,
    Join,
    Leaf,
    Meet,
    Occurrence,
    ParseError,
    SApp,
    Sequent,
    _Parser,
    show,
    side_root,
)


class RuleError(ValueError):
    pass


# --- metavariables ----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class MetaVar:
    """Structural metavariable of sort F or G."""

    name: str
    sort: str

    @property
    def text(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class FormulaVar:
    """Formula metavariable (logical rules only)."""

    name: str

    @property
    def text(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class AtomVar:
    """Metavariable ranging over atoms only (identity and atomic axioms)."""

    name: str

    @property
    def text(self) -> str:
        return self.name


# A metastructure is a Structure whose leaves may be MetaVar, and whose formula
# leaves may contain FormulaVar / AtomVar.


def _free(p, acc: list) -> None:
    if isinstance(p, (MetaVar, FormulaVar, AtomVar)):
        acc.append(p)
    elif isinstance(p, (SApp, App)):
        for a in p.args:
            _free(a, acc)
    elif isinstance(p, (Meet, Join)):
        _free(p.left, acc)
        _free(p.right, acc)
    elif isinstance(p, Leaf):
        _free(p.formula, acc)
    elif isinstance(p, Sequent):
        _free(p.ante, acc)
        _free(p.succ, acc)


def metavars(p) -> list:
    """Metavariables of a pattern in pre-order, with repetitions."""
    acc: list = []
    _free(p, acc)
    return acc


def has_formula(p) -> bool:
    if isinstance(p, Leaf):
        return True
    if isinstance(p, SApp):
        return any(has_formula(a) for a in p.args)
    if isinstance(p, Sequent):
        return has_formula(p.ante) or has_formula(p.succ)
    return False


# --- matching and instantiation ---------------------------------------------


def match(pat, target, binding: dict) -> Optional[dict]:
    """Syntactic first-order matching; extends ``binding`` in place on success."""
    t = type(pat)
    if t is MetaVar:
        bound = binding.get(pat.name)
        if bound is None:
            if isinstance(target, Leaf) or _sort(target) == pat.sort:
                binding[pat.name] = target
                return binding
            return None
        return binding if bound == target else None
    if t is FormulaVar:
        bound = binding.get(pat.name)
        if bound is None:
            binding[pat.name] = target
            return binding
        return binding if bound == target else None
    if t is AtomVar:
        if type(target) is not Atom:
            return None
        bound = binding.get(pat.name)
        if bound is None:
            binding[pat.name] = target
            return binding
        return binding if bound == target else None
    if t is not type(target):
        return None
    if t is SApp:
        if pat.name != target.name or pat.flavor != target.flavor or len(pat.args) != len(target.args):
            return None
        for a, b in zip(pat.args, target.args):
            if match(a, b, binding) is None:
                return None
        return binding
    if t is Leaf:
        return match(pat.formula, target.formula, binding)
    if t is App:
        if pat.name != target.name or len(pat.args) != len(target.args):
            return None
        for a, b in zip(pat.args, target.args):
            if match(a, b, binding) is None:
                return None
        return binding
    if t is Meet or t is Join:
        if match(pat.left, target.left, binding) is None:
            return None
        return match(pat.right, target.right, binding)
    if t is Sequent:
        if match(pat.ante, target.ante, binding) is None:
            return None
        return match(pat.succ, target.succ, binding)
    # HatTop, CheckBot, Top, Bot, Atom
    return binding if pat == target else None


def _sort(s) -> Optional[str]:
    if isinstance(s, HatTop):
        return "F"
    if isinstance(s, CheckBot):
        return "G"
    if isinstance(s, SApp):
        return "F" if s.flavor == HAT else "G"
    return None


def instantiate(pat, binding: dict):
    t = type(pat)
    if t is MetaVar or t is FormulaVar or t is AtomVar:
        try:
            return binding[pat.name]
        except KeyError:
            raise RuleError(f"metavariable {pat.name} is not instantiated") from None
    if t is SApp:
        return SApp(pat.name, pat.flavor, tuple(instantiate(a, binding) for a in pat.args))
    if t is Leaf:
        f = instantiate(pat.formula, binding)
        if isinstance(f, Leaf):
            return f
        return Leaf(f)
    if t is App:
        return App(pat.name, tuple(instantiate(a, binding) for a in pat.args))
    if t is Meet:
        return Meet(instantiate(pat.left, binding), instantiate(pat.right, binding))
    if t is Join:
        return Join(instantiate(pat.left, binding), instantiate(pat.right, binding))
    if t is Sequent:
        return Sequent(instantiate(pat.ante, binding), instantiate(pat.succ, binding))
    return pat


def _head(s):
    """Shape key of a structure root, used to pre-filter rules."""
    t = type(s)
    if t is Leaf:
        f = s.formula
        ft = type(f)
        if ft is FormulaVar:
            return "leaf"
        if ft is AtomVar or ft is Atom:
            return "atom"
        if ft is App:
            return "app:" + f.name
        return ft.__name__
    if t is SApp:
        return s.flavor + ":" + s.name
    if t is MetaVar:
        return None
    return t.__name__


def _head_ok(ph, th) -> bool:
    if ph is None:
        return True
    if ph == "leaf":
        return th == "atom" or th in ("Top", "Bot", "Meet", "Join") or (th or "").startswith("app:")
    return ph == th


# --- rule schemas -----------------------------------------------------------


@dataclass(frozen=True)
class Position:
    """Where a metavariable sits: premise index (-1 for the conclusion), side, path."""

    premise: int
    side: str
    path: tuple


def _positions(p, side: str, path: tuple, premise: int, out: dict) -> None:
    if isinstance(p, MetaVar):
        out.setdefault(p.name, []).append(Position(premise, side, path))
    elif isinstance(p, SApp):
        for i, a in enumerate(p.args, 1):
            _positions(a, side, path + (i,), premise, out)


@dataclass(frozen=True)
class Correspondence:
    """Conclusion and premise positions of every structural metavariable."""

    conclusion: dict
    premises: dict

    def premise_positions(self, name: str) -> list:
        return self.premises.get(name, [])


@dataclass(frozen=True, eq=False)
class RuleSchema:
    name: str
    premises: tuple
    conclusion: Sequent
    origin: str = "builtin"
    # axiom | cut | display | intro | principal | weakening | structural
    kind: str = "structural"
    principal: tuple = ()
    connective: Optional[str] = None
    postulate: Optional[str] = None
    direction: Optional[str] = None
    inverse: Optional[str] = None
    meta_sorts: dict = field(default_factory=dict)
    correspondence: Correspondence = field(init=False)
    heads: tuple = field(init=False)

    def __post_init__(self):
        conc: dict = {}
        _positions(self.conclusion.ante, ANTE, (), -1, conc)
        _positions(self.conclusion.succ, SUCC, (), -1, conc)
        prem: dict = {}
        for j, p in enumerate(self.premises):
            _positions(p.ante, ANTE, (), j, prem)
            _positions(p.succ, SUCC, (), j, prem)
        object.__setattr__(self, "correspondence", Correspondence(conc, prem))
        object.__setattr__(self, "heads", (_head(self.conclusion.ante), _head(self.conclusion.succ)))
        if not self.principal:
            object.__setattr__(self, "principal", tuple(_principal(self.conclusion)))

    @property
    def is_cut(self) -> bool:
        return self.kind == "cut"

    def text(self) -> str:
        lines = [f"rule {self.name}"]
        lines += [show(p) for p in self.premises]
        lines.append("----")
        lines.append(show(self.conclusion))
        return "\n".join(lines)

    def could_match(self, seq: Sequent) -> bool:
        return _head_ok(self.heads[0], _head(seq.ante)) and _head_ok(self.heads[1], _head(seq.succ))


def _principal(conc: Sequent) -> list:
    """Occurrences of the conclusion not inside a metavariable image."""
    out = []

    def walk(p, occ):
        if isinstance(p, MetaVar):
            return
        out.append(occ)
        if isinstance(p, SApp):
            for i, a in enumerate(p.args, 1):
                walk(a, occ.child(i))

    walk(conc.ante, Occurrence(ANTE))
    walk(conc.succ, Occurrence(SUCC))
    return out


@dataclass(frozen=True)
class Match:
    instantiation: dict
    premises: tuple
    correspondence: Correspondence


def match_backward(schema: RuleSchema, goal: Sequent) -> list:
    """All instantiations of ``schema`` whose conclusion is ``goal``.

    Syntactic matching of a first-order pattern has at most one solution, so the
    list is empty or a singleton.  Premise-only metavariables (Cut) cannot be
    chosen backwards and yield no match.
    """
    if not schema.could_match(goal):
        return []
    binding = match(schema.conclusion, goal, {})
    if binding is None:
        return []
    try:
        prems = tuple(instantiate(p, binding) for p in schema.premises)
    except RuleError:
        return []
    return [Match(binding, prems, schema.correspondence)]


def apply_forward(schema: RuleSchema, premises: list, extra: Optional[dict] = None) -> Optional[tuple]:
    """Match premise patterns against concrete sequents; return (binding, conclusion)."""
    if len(premises) != len(schema.premises):
        return None
    binding = dict(extra or {})
    for pat, s in zip(schema.premises, premises):
        if match(pat, s, binding) is None:
            return None
    try:
        return binding, instantiate(schema.conclusion, binding)
    except RuleError:
        return None


# --- built-in rules ---------------------------------------------------------


def _seq(a, s):
    return Sequent(a, s)


def _lf(f):
    return Leaf(f)


X = MetaVar("X", "F")
Y = MetaVar("Y", "G")
A = FormulaVar("A")
B = FormulaVar("B")
P = AtomVar("p")


def _arg_vars(c: Connective, prefix: str) -> list:
    return [MetaVar(f"{prefix}{i}", c.coord_sort(i)) for i in range(1, c.arity + 1)]


def _intro_rules(c: Connective) -> list:
    fs = [FormulaVar(f"A{i}") for i in range(1, c.arity + 1)]
    formula = App(c.name, tuple(fs))
    xis = [MetaVar(f"W{i}", c.coord_sort(i)) for i in range(1, c.arity + 1)]
    leaves = tuple(_lf(a) for a in fs)
    out = []
    if c.kind == "F":
        out.append(RuleSchema(
            f"{c.name}_L", (_seq(SApp(c.name, HAT, leaves), Y),), _seq(_lf(formula), Y),
            kind="intro", connective=c.name,
        ))
        prems = tuple(
            _seq(w, _lf(a)) if e is COV else _seq(_lf(a), w)
            for w, a, e in zip(xis, fs, c.order_type)
        )
        out.append(RuleSchema(
            f"{c.name}_R", prems, _seq(SApp(c.name, HAT, tuple(xis)), _lf(formula)),
            kind="principal", connective=c.name,
        ))
    else:
        prems = tuple(
            _seq(_lf(a), w) if e is COV else _seq(w, _lf(a))
            for w, a, e in zip(xis, fs, c.order_type)
        )
        out.append(RuleSchema(
            f"{c.name}_L", prems, _seq(_lf(formula), SApp(c.name, CHECK, tuple(xis))),
            kind="principal", connective=c.name,
        ))
        out.append(RuleSchema(
            f"{c.name}_R", (_seq(X, SApp(c.name, CHECK, leaves)),), _seq(X, _lf(formula)),
            kind="intro", connective=c.name,
        ))
    return out


def display_postulates(sig: Signature) -> list:
    """Forward and inverse schemas of every display postulate."""
    out = []
    for c in sig.primitives:
        for k in range(1, c.arity + 1):
            r = sig.residual(c.name, k)
            if r is None:
                raise RuleError(f"signature is not residual-closed: {c.name} has no residual at {k}")
            zs = _arg_vars(c, "Z")
            ek = c.order_type[k - 1]
            if c.kind == "F":
                left = _seq(SApp(c.name, HAT, tuple(zs)), Y)
                rargs = tuple(Y if j == k - 1 else z for j, z in enumerate(zs))
                if ek is COV:
                    right = _seq(zs[k - 1], SApp(r.name, CHECK, rargs))
                else:
                    right = _seq(SApp(r.name, HAT, rargs), zs[k - 1])
            else:
                left = _seq(X, SApp(c.name, CHECK, tuple(zs)))
                rargs = tuple(X if j == k - 1 else z for j, z in enumerate(zs))
                if ek is COV:
                    right = _seq(SApp(r.name, HAT, rargs), zs[k - 1])
                else:
                    right = _seq(zs[k - 1], SApp(r.name, CHECK, rargs))
            post = f"{c.name}.{k}"
            fwd = f"disp.{post}"
            inv = f"disp.{post}.inv"
            out.append(RuleSchema(fwd, (left,), right, kind="display", postulate=post,
                                  direction="fwd", inverse=inv))
            out.append(RuleSchema(inv, (right,), left, kind="display", postulate=post,
                                  direction="inv", inverse=fwd))
    return out


CUT = RuleSchema("Cut", (_seq(X, _lf(A)), _seq(_lf(A), Y)), _seq(X, Y), kind="cut")


def builtin_rules(sig: Signature, lstar: bool = False) -> list:
    """The built-in calculus for ``sig`` in a fixed order.

    With ``lstar`` the introduction rules are generated for every connective of
    the residual-closed signature, not only the operational ones.
    """
    rules = [
        RuleSchema("Id", (), _seq(_lf(P), _lf(P)), kind="axiom"),
        RuleSchema("top_ax", (), _seq(_lf(P), _lf(TOP)), kind="axiom"),
        RuleSchema("bot_ax", (), _seq(_lf(BOT), _lf(P)), kind="axiom"),
        RuleSchema("top_hat", (), _seq(HAT_TOP, _lf(TOP)), kind="axiom"),
        RuleSchema("bot_check", (), _seq(_lf(BOT), CHECK_BOT), kind="axiom"),
        RuleSchema("top_L", (_seq(HAT_TOP, Y),), _seq(_lf(TOP), Y), kind="intro"),
        RuleSchema("bot_R", (_seq(X, CHECK_BOT),), _seq(X, _lf(BOT)), kind="intro"),
        RuleSchema("and_L1", (_seq(_lf(A), Y),), _seq(_lf(Meet(A, B)), Y), kind="intro"),
        RuleSchema("and_L2", (_seq(_lf(B), Y),), _seq(_lf(Meet(A, B)), Y), kind="intro"),
        RuleSchema("and_R", (_seq(X, _lf(A)), _seq(X, _lf(B))), _seq(X, _lf(Meet(A, B))), kind="intro"),
        RuleSchema("or_L", (_seq(_lf(A), Y), _seq(_lf(B), Y)), _seq(_lf(Join(A, B)), Y), kind="intro"),
        RuleSchema("or_R1", (_seq(X, _lf(A)),), _seq(X, _lf(Join(A, B))), kind="intro"),
        RuleSchema("or_R2", (_seq(X, _lf(B)),), _seq(X, _lf(Join(A, B))), kind="intro"),
    ]
    for c in sig.connectives.values():
        if c.operational or lstar:
            rules.extend(_intro_rules(c))
    rules.append(RuleSchema("top_W", (_seq(HAT_TOP, Y),), _seq(X, Y), kind="weakening"))
    rules.append(RuleSchema("bot_W", (_seq(X, CHECK_BOT),), _seq(X, Y), kind="weakening"))
    rules.extend(display_postulates(sig))
    rules.append(CUT)
    return rules


class RuleSet:
    """Built-in rules for a signature plus user structural rules."""

    def __init__(self, sig: Signature, user: tuple = (), include_cut: bool = False, lstar: bool = False):
        self.sig = sig
        self.lstar = lstar
        self.include_cut = include_cut
        rules = builtin_rules(sig, lstar) + list(user)
        names = [r.name for r in rules]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise RuleError(f"duplicate rule names: {sorted(dup)}")
        self.rules = tuple(rules)
        self.by_name = {r.name: r for r in rules}
        self.user = tuple(user)
        self.display = tuple(r for r in rules if r.kind == "display")
        self._closure_cache: dict = {}

    def __getitem__(self, name: str) -> RuleSchema:
        return self.by_name[name]

    def __contains__(self, name: str) -> bool:
        return name in self.by_name

    def __iter__(self) -> Iterator[RuleSchema]:
        return iter(self.rules)

    def search_rules(self) -> list:
        return [r for r in self.rules if r.kind != "cut" and r.kind != "display"]

    def extended(self, user: tuple) -> "RuleSet":
        return RuleSet(self.sig, self.user + tuple(user), self.include_cut, self.lstar)

    def with_lstar(self) -> "RuleSet":
        return RuleSet(self.sig, self.user, self.include_cut, True)


# --- rule files -------------------------------------------------------------


class _MetaParser(_Parser):
    """Structure parser that accepts uppercase metavariables ``X`` or ``X:F``."""

    def meta_structure(self, sort: str):
        kind, name, pos = self.advance()
        if self.peek()[1] == ":":
            self.advance()
            skind, given, spos = self.advance()
            if given not in ("F", "G"):
                raise ParseError(f"metavariable sort must be F or G, got {given!r}", spos)
            if given != sort:
                raise ParseError(f"metavariable {name} declared {given} in a {sort} position", spos)
        prev = self.meta_sorts.get(name)
        if prev is not None and prev != sort:
            raise ParseError(f"metavariable {name} used with sorts {prev} and {sort}", pos)
        self.meta_sorts[name] = sort
        return MetaVar(name, sort)

    def meta_formula(self, value: str, pos: int):
        raise ParseError(f"structural rules cannot mention formula metavariable {value!r}", pos)


def parse_metasequent(text: str, sig: Signature, sorts: Optional[dict] = None) -> Sequent:
    p = _MetaParser(text, sig, allow_meta=True, lstar=True)
    if sorts is not None:
        p.meta_sorts = sorts
    s = p.sequent()
    p.at_end()
    return s


def _is_comment(line: str) -> bool:
    s = line.strip()
    return not s or s.startswith("%") or s == "#" or (s.startswith("#") and s[1:2].isspace())


def parse_rules(text: str, sig: Signature) -> list:
    """Parse a ``.lrul`` file: ``rule <name>``, premises, ``----``, conclusion."""
    rules = []
    block: Optional[list] = None
    name = None
    start = 0

    def finish():
        if name is None:
            return
        if "----" not in [b[1] for b in block]:
            raise RuleError(f"rule {name} (line {start}): missing '----' separator")
        idx = [b[1] for b in block].index("----")
        prem_lines, conc_lines = block[:idx], block[idx + 1:]
        if len(conc_lines) != 1:
            raise RuleError(f"rule {name} (line {start}): expected exactly one conclusion line")
        sorts: dict = {}
        try:
            prems = tuple(parse_metasequent(t, sig, sorts) for _, t in prem_lines)
            conc = parse_metasequent(conc_lines[0][1], sig, sorts)
        except ParseError as exc:
            raise RuleError(f"rule {name} (line {start}): {exc}") from None
        rules.append(RuleSchema(name, prems, conc, origin="user", kind="structural",
                                meta_sorts=dict(sorts)))

    for lineno, raw in enumerate(text.splitlines(), 1):
        if _is_comment(raw):
            continue
        line = raw.strip()
        if line.startswith("rule "):
            finish()
            name = line[5:].strip()
            if not name:
                raise RuleError(f"line {lineno}: rule needs a name")
            block = []
            start = lineno
            continue
        if block is None:
            raise RuleError(f"line {lineno}: expected 'rule <name>'")
        block.append((lineno, "----" if set(line) == {"-"} and len(line) >= 3 else line))
    finish()
    names = [r.name for r in rules]
    if len(set(names)) != len(names):
        raise RuleError("duplicate rule names in rule file")
    return rules


# --- classification ---------------------------------------------------------


def validate_analytic(schema: RuleSchema) -> list:
    """Violations of analyticity; raises RuleError if the schema mentions formulas."""
    if any(has_formula(p) for p in schema.premises) or has_formula(schema.conclusion):
        raise RuleError(f"rule {schema.name} mentions formulas; structural rules must not")
    out = []
    conc = [v.name for v in metavars(schema.conclusion)]
    for v in sorted(set(conc)):
        n = conc.count(v)
        if n != 1:
            out.append(f"metavariable {v} occurs {n} times in the conclusion")
    prem = {v.name for p in schema.premises for v in metavars(p)}
    for v in sorted(prem - set(conc)):
        out.append(f"metavariable {v} occurs in a premise but not in the conclusion")
    return out


NOT_SPECIAL = "not-special"
SPECIAL = "special"
SAFE = "interpolation-safe"


def special_form(schema: RuleSchema) -> Optional[str]:
    """``ante`` if every sequent shares an isolated antecedent metavariable,
    ``succ`` for the dual form, otherwise ``None``."""
    seqs = (schema.conclusion,) + tuple(schema.premises)
    for side, other in ((ANTE, SUCC), (SUCC, ANTE)):
        root = side_root(schema.conclusion, side)
        if not isinstance(root, MetaVar):
            continue
        if any(side_root(s, side) != root for s in seqs):
            continue
        if any(root.name in {v.name for v in metavars(side_root(s, other))} for s in seqs):
            continue
        return side
    return None


def classify_safety(schema: RuleSchema) -> str:
    try:
        if validate_analytic(schema):
            return NOT_SPECIAL
    except RuleError:
        return NOT_SPECIAL
    side = special_form(schema)
    if side is None:
        return NOT_SPECIAL
    other = SUCC if side == ANTE else ANTE
    for p in schema.premises:
        if len(metavars(side_root(p, other))) > 1:
            return SPECIAL
    return SAFE


def negation_shape(schema: RuleSchema, sig: Signature) -> Optional[str]:
    """Name of the self-Galois connective if the rule reads ``X |- #n(X) / X |- Y``."""
    if len(schema.premises) != 1:
        return None
    prem, conc = schema.premises[0], schema.conclusion
    if not (isinstance(conc.ante, MetaVar) and isinstance(conc.succ, MetaVar)):
        return None
    if prem.ante != conc.ante or not isinstance(prem.succ, SApp):
        return None
    n = prem.succ
    c = sig.get(n.name)
    if c is None or c.arity != 1 or c.order_type != (CON,) or c.self_residual != 1:
        return None
    if n.flavor != CHECK or n.args[0] != conc.ante:
        return None
    return n.name
