"""Formulas, two-sorted structures, sequents, occurrences and signed variables.

Concrete grammar (ASCII)::

    formula   := disj
    disj      := conj ('\\/' conj)*
    conj      := unary ('/\\' unary)*
    unary     := 'top' | 'bot' | name '(' formula, ... ')' | atom | '(' formula ')'
    structure := '@top' | '#bot' | '@' name '(' structure, ... ')'
               | '#' name '(' structure, ... ')' | formula
    sequent   := structure '|-' structure

``@`` marks the F-flavoured (antecedent-like) structural counterpart of a
connective and ``#`` the G-flavoured one.  Binary lattice formulas are always
printed inside parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional, Union

from .signature import CON, COV, Polarity, Signature, other_sort


class ParseError(ValueError):
    """Lexical, grammatical, arity or sort error, with a 0-based column."""

    def __init__(self, message: str, pos: Optional[int] = None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} (at column {pos})")


class SortError(ValueError):
    pass


# --- formulas ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Atom:
    name: str


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Bot:
    pass


@dataclass(frozen=True, slots=True)
class Meet:
    left: "Formula"
    right: "Formula"
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("meet", self.left, self.right)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, slots=True)
class Join:
    left: "Formula"
    right: "Formula"
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("join", self.left, self.right)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, slots=True)
class App:
    name: str
    args: tuple
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("app", self.name, self.args)))

    def __hash__(self):
        return self._hash


Formula = Union[Atom, Top, Bot, Meet, Join, App]

TOP = Top()
BOT = Bot()


# --- structures -------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Leaf:
    formula: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("leaf", self.formula)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, slots=True)
class HatTop:
    pass


@dataclass(frozen=True, slots=True)
class CheckBot:
    pass


HAT = "hat"
CHECK = "check"


@dataclass(frozen=True, slots=True)
class SApp:
    name: str
    flavor: str  # HAT or CHECK
    args: tuple
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("sapp", self.name, self.flavor, self.args)))

    def __hash__(self):
        return self._hash


Structure = Union[Leaf, HatTop, CheckBot, SApp]

HAT_TOP = HatTop()
CHECK_BOT = CheckBot()


@dataclass(frozen=True, slots=True)
class Sequent:
    ante: Structure
    succ: Structure
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("seq", self.ante, self.succ)))

    def __hash__(self):
        return self._hash

    def __str__(self) -> str:
        return show(self)


ANTE = "ante"
SUCC = "succ"


@dataclass(frozen=True, slots=True)
class Occurrence:
    side: str
    path: tuple = ()

    def __str__(self) -> str:
        return ".".join([self.side, *map(str, self.path)])

    @classmethod
    def parse(cls, text: str) -> "Occurrence":
        parts = text.strip().split(".")
        if parts[0] not in (ANTE, SUCC):
            raise ParseError(f"occurrence must start with 'ante' or 'succ': {text!r}")
        try:
            path = tuple(int(p) for p in parts[1:])
        except ValueError:
            raise ParseError(f"bad occurrence path {text!r}") from None
        if any(i < 1 for i in path):
            raise ParseError(f"occurrence indices are 1-based: {text!r}")
        return cls(parts[0], path)

    def child(self, i: int) -> "Occurrence":
        return Occurrence(self.side, self.path + (i,))


ANTE_ROOT = Occurrence(ANTE)
SUCC_ROOT = Occurrence(SUCC)


@dataclass(frozen=True)
class SignedVars:
    pos: frozenset = frozenset()
    neg: frozenset = frozenset()

    def __or__(self, other: "SignedVars") -> "SignedVars":
        return SignedVars(self.pos | other.pos, self.neg | other.neg)

    def __and__(self, other: "SignedVars") -> "SignedVars":
        return SignedVars(self.pos & other.pos, self.neg & other.neg)

    def flipped(self) -> "SignedVars":
        return SignedVars(self.neg, self.pos)

    def issubset(self, other: "SignedVars") -> bool:
        return self.pos <= other.pos and self.neg <= other.neg

    def as_dict(self) -> dict:
        return {"pos": sorted(self.pos), "neg": sorted(self.neg)}


EMPTY_VARS = SignedVars()


# --- printing ---------------------------------------------------------------


@lru_cache(maxsize=1 << 18)
def show(x) -> str:
    """Canonical text of a formula, structure or sequent."""
    if isinstance(x, Atom):
        return x.name
    if isinstance(x, Top):
        return "top"
    if isinstance(x, Bot):
        return "bot"
    if isinstance(x, Meet):
        return f"({show(x.left)} /\\ {show(x.right)})"
    if isinstance(x, Join):
        return f"({show(x.left)} \\/ {show(x.right)})"
    if isinstance(x, App):
        return f"{x.name}({', '.join(show(a) for a in x.args)})"
    if isinstance(x, Leaf):
        return show(x.formula)
    if isinstance(x, HatTop):
        return "@top"
    if isinstance(x, CheckBot):
        return "#bot"
    if isinstance(x, SApp):
        mark = "@" if x.flavor == HAT else "#"
        return f"{mark}{x.name}({', '.join(show(a) for a in x.args)})"
    if isinstance(x, Sequent):
        return f"{show(x.ante)} |- {show(x.succ)}"
    return _show_extra(x)


def _show_extra(x) -> str:
    # metavariables live in the calculus module; they expose their own text
    text = getattr(x, "text", None)
    if text is None:
        raise TypeError(f"cannot print {x!r}")
    return text


# --- lexing and parsing -----------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<turn>\|-)|(?P<meet>/\\)|(?P<join>\\/)|(?P<punct>[(),@#:])"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_.']*))"
)


def tokenize(text: str) -> list:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group(kind)
        out.append((kind, value, m.start(kind)))
        pos = m.end()
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str, sig: Signature, allow_meta: bool, lstar: bool):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.sig = sig
        self.allow_meta = allow_meta
        self.lstar = lstar
        self.meta_sorts: dict = {}

    # token helpers
    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        tok = self.advance()
        if tok[1] != value:
            what = tok[1] or "end of input"
            raise ParseError(f"expected {value!r}, found {what!r}", tok[2])
        return tok

    def at_end(self):
        if self.peek()[0] != "end":
            tok = self.peek()
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])

    # formulas
    def formula(self) -> Formula:
        left = self.conj()
        while self.peek()[0] == "join":
            self.advance()
            left = Join(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek()[0] == "meet":
            self.advance()
            left = Meet(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, value, pos = self.advance()
        if value == "(" and kind == "punct":
            f = self.formula()
            self.expect(")")
            return f
        if kind != "name":
            raise ParseError(f"expected a formula, found {value or 'end of input'!r}", pos)
        if value == "top":
            return TOP
        if value == "bot":
            return BOT
        if value[0].isupper():
            return self.meta_formula(value, pos)
        conn = self.sig.get(value)
        if conn is None:
            if self.peek()[1] == "(":
                raise ParseError(f"unknown connective {value!r}", pos)
            return Atom(value)
        if not conn.operational and not self.lstar:
            raise ParseError(f"{value} is structural-only and cannot appear in a formula", pos)
        args: list = []
        if self.peek()[1] == "(":
            self.advance()
            if self.peek()[1] != ")":
                args.append(self.formula())
                while self.peek()[1] == ",":
                    self.advance()
                    args.append(self.formula())
            self.expect(")")
        if len(args) != conn.arity:
            raise ParseError(f"{value} expects {conn.arity} argument(s), got {len(args)}", pos)
        return App(value, tuple(args))

    def meta_formula(self, value: str, pos: int):
        raise ParseError(f"metavariable {value!r} not allowed in a formula", pos)

    # structures
    def structure(self, sort: str):
        kind, value, pos = self.peek()
        if kind == "punct" and value in "@#":
            self.advance()
            flavor = HAT if value == "@" else CHECK
            want = "F" if flavor == HAT else "G"
            nkind, name, npos = self.advance()
            if nkind != "name":
                raise ParseError(f"expected a connective name after {value!r}", npos)
            if want != sort:
                raise ParseError(
                    f"sort violation: {value}{name} builds a {want}-structure where a {sort}-structure is required",
                    pos,
                )
            if name == "top" and flavor == HAT:
                return HAT_TOP
            if name == "bot" and flavor == CHECK:
                return CHECK_BOT
            conn = self.sig.get(name)
            if conn is None:
                raise ParseError(f"unknown connective {name!r}", npos)
            if conn.kind != want:
                raise ParseError(
                    f"sort violation: {name} is a {conn.kind}-connective, {value} flavour is illegal", pos
                )
            args = []
            self.expect("(")
            for i in range(1, conn.arity + 1):
                if i > 1:
                    self.expect(",")
                args.append(self.structure(conn.coord_sort(i)))
            self.expect(")")
            return SApp(name, flavor, tuple(args))
        if kind == "name" and value[0].isupper() and self.allow_meta:
            return self.meta_structure(sort)
        return Leaf(self.formula())

    def meta_structure(self, sort: str):
        raise ParseError("metavariables are not allowed here", self.peek()[2])

    def sequent(self) -> Sequent:
        ante = self.structure("F")
        self.expect("|-")
        succ = self.structure("G")
        return Sequent(ante, succ)


def parse_formula(text: str, sig: Signature, lstar: bool = False) -> Formula:
    p = _Parser(text, sig, allow_meta=False, lstar=lstar)
    f = p.formula()
    p.at_end()
    return f


def parse_structure(text: str, sig: Signature, sort: str, lstar: bool = True) -> Structure:
    p = _Parser(text, sig, allow_meta=False, lstar=lstar)
    s = p.structure(sort)
    p.at_end()
    return s


def parse_sequent(text: str, sig: Signature, lstar: bool = False) -> Sequent:
    p = _Parser(text, sig, allow_meta=False, lstar=lstar)
    s = p.sequent()
    p.at_end()
    return s


# --- sorts and well-formedness ----------------------------------------------


def structure_sort(s: Structure) -> Optional[str]:
    """Intrinsic sort of a structure; ``None`` for formula leaves (either sort)."""
    if isinstance(s, Leaf):
        return None
    if isinstance(s, HatTop):
        return "F"
    if isinstance(s, CheckBot):
        return "G"
    if isinstance(s, SApp):
        return "F" if s.flavor == HAT else "G"
    return getattr(s, "sort", None)


def check_formula(f: Formula, sig: Signature, lstar: bool = False) -> None:
    if isinstance(f, (Meet, Join)):
        check_formula(f.left, sig, lstar)
        check_formula(f.right, sig, lstar)
    elif isinstance(f, App):
        c = sig.get(f.name)
        if c is None:
            raise SortError(f"unknown connective {f.name}")
        if not c.operational and not lstar:
            raise SortError(f"{f.name} is structural-only")
        if len(f.args) != c.arity:
            raise SortError(f"{f.name} expects {c.arity} arguments")
        for a in f.args:
            check_formula(a, sig, lstar)
    elif isinstance(f, Atom):
        if f.name in sig:
            raise SortError(f"atom {f.name} collides with a connective")


def check_structure(s: Structure, sort: str, sig: Signature, lstar: bool = False) -> None:
    """Raise SortError unless ``s`` is a well-sorted structure of ``sort``."""
    if isinstance(s, Leaf):
        check_formula(s.formula, sig, lstar)
        return
    got = structure_sort(s)
    if got != sort:
        raise SortError(f"{show(s)} is a {got}-structure where a {sort}-structure is required")
    if isinstance(s, SApp):
        c = sig.get(s.name)
        if c is None:
            raise SortError(f"unknown connective {s.name}")
        if c.kind != sort:
            raise SortError(f"{s.name} is a {c.kind}-connective")
        if len(s.args) != c.arity:
            raise SortError(f"{s.name} expects {c.arity} arguments")
        for i, a in enumerate(s.args, 1):
            check_structure(a, c.coord_sort(i), sig, lstar)


def check_sequent(seq: Sequent, sig: Signature, lstar: bool = False) -> None:
    check_structure(seq.ante, "F", sig, lstar)
    check_structure(seq.succ, "G", sig, lstar)


# --- occurrences ------------------------------------------------------------


def side_root(seq: Sequent, side: str) -> Structure:
    return seq.ante if side == ANTE else seq.succ


def subterm(seq: Sequent, occ: Occurrence) -> Structure:
    node = side_root(seq, occ.side)
    for i in occ.path:
        if not isinstance(node, SApp) or not 1 <= i <= len(node.args):
            raise ValueError(f"occurrence {occ} does not resolve in {show(seq)}")
        node = node.args[i - 1]
    return node


def _replace(node: Structure, path: tuple, new: Structure) -> Structure:
    if not path:
        return new
    if not isinstance(node, SApp) or not 1 <= path[0] <= len(node.args):
        raise ValueError("occurrence path does not resolve")
    i = path[0] - 1
    args = node.args[:i] + (_replace(node.args[i], path[1:], new),) + node.args[i + 1:]
    return SApp(node.name, node.flavor, args)


def replace_at(seq: Sequent, occ: Occurrence, new: Structure) -> Sequent:
    """Path-based substitution (Π ⊢ Σ)[new/occ]."""
    if occ.side == ANTE:
        return Sequent(_replace(seq.ante, occ.path, new), seq.succ)
    return Sequent(seq.ante, _replace(seq.succ, occ.path, new))


def replace_in(node: Structure, path: tuple, new: Structure) -> Structure:
    return _replace(node, path, new)


def sort_at(seq: Sequent, occ: Occurrence, sig: Signature) -> str:
    sort = "F" if occ.side == ANTE else "G"
    node = side_root(seq, occ.side)
    for i in occ.path:
        if not isinstance(node, SApp) or not 1 <= i <= len(node.args):
            raise ValueError(f"occurrence {occ} does not resolve in {show(seq)}")
        sort = sig[node.name].coord_sort(i)
        node = node.args[i - 1]
    return sort


def epsilon_of(seq: Sequent, occ: Occurrence, sig: Signature) -> Polarity:
    """1 if the occurrence displays as an antecedent, ∂ if as a succedent."""
    return COV if sort_at(seq, occ, sig) == "F" else CON


def occurrences(seq: Sequent) -> list:
    """All structure occurrences of a sequent, pre-order, antecedent first."""
    out = []

    def walk(node, occ):
        out.append(occ)
        if isinstance(node, SApp):
            for i, a in enumerate(node.args, 1):
                walk(a, occ.child(i))

    walk(seq.ante, ANTE_ROOT)
    walk(seq.succ, SUCC_ROOT)
    return out


# --- conversion -------------------------------------------------------------


def structure_to_formula(s: Structure, sig: Signature, lonly: bool = True) -> Formula:
    """Replace structural connectives by their logical counterparts."""
    if isinstance(s, Leaf):
        return s.formula
    if isinstance(s, HatTop):
        return TOP
    if isinstance(s, CheckBot):
        return BOT
    if isinstance(s, SApp):
        c = sig[s.name]
        if lonly and not c.operational:
            raise SortError(f"{s.name} has no operational counterpart")
        return App(s.name, tuple(structure_to_formula(a, sig, lonly) for a in s.args))
    raise SortError(f"not a concrete structure: {s!r}")


def connectives_in(f: Formula) -> set:
    if isinstance(f, (Meet, Join)):
        return connectives_in(f.left) | connectives_in(f.right)
    if isinstance(f, App):
        out = {f.name}
        for a in f.args:
            out |= connectives_in(a)
        return out
    return set()


def formula_depth(f: Formula) -> int:
    if isinstance(f, (Meet, Join)):
        return 1 + max(formula_depth(f.left), formula_depth(f.right))
    if isinstance(f, App):
        return 1 + max((formula_depth(a) for a in f.args), default=0)
    return 0


def formula_size(f: Formula) -> int:
    if isinstance(f, (Meet, Join)):
        return 1 + formula_size(f.left) + formula_size(f.right)
    if isinstance(f, App):
        return 1 + sum(formula_size(a) for a in f.args)
    return 1


def weight(x) -> int:
    """Number of formula symbols in a structure or sequent."""
    if isinstance(x, Sequent):
        return weight(x.ante) + weight(x.succ)
    if isinstance(x, Leaf):
        return formula_size(x.formula)
    if isinstance(x, SApp):
        return sum(weight(a) for a in x.args)
    return 0


def atoms_of(x) -> set:
    if isinstance(x, Atom):
        return {x.name}
    if isinstance(x, (Meet, Join)):
        return atoms_of(x.left) | atoms_of(x.right)
    if isinstance(x, (App, SApp)):
        out: set = set()
        for a in x.args:
            out |= atoms_of(a)
        return out
    if isinstance(x, Leaf):
        return atoms_of(x.formula)
    if isinstance(x, Sequent):
        return atoms_of(x.ante) | atoms_of(x.succ)
    return set()


# --- polarity ---------------------------------------------------------------


def _signed(x, sig: Signature, positive: bool, pos: set, neg: set) -> None:
    if isinstance(x, Atom):
        (pos if positive else neg).add(x.name)
    elif isinstance(x, (Meet, Join)):
        _signed(x.left, sig, positive, pos, neg)
        _signed(x.right, sig, positive, pos, neg)
    elif isinstance(x, (App, SApp)):
        ot = sig[x.name].order_type
        for e, a in zip(ot, x.args):
            _signed(a, sig, positive if e is COV else not positive, pos, neg)
    elif isinstance(x, Leaf):
        _signed(x.formula, sig, positive, pos, neg)


def signed_vars(x, sig: Signature) -> SignedVars:
    """Atoms occurring positively/negatively, relative to the root of ``x``."""
    pos: set = set()
    neg: set = set()
    _signed(x, sig, True, pos, neg)
    return SignedVars(frozenset(pos), frozenset(neg))


def _context_walk(node, sig, path, positive, pos, neg):
    """Signed atoms of ``node`` outside the subtree at ``path``."""
    if not path:
        return
    c = sig[node.name]
    k = path[0]
    for i, (e, a) in enumerate(zip(c.order_type, node.args), 1):
        p = positive if e is COV else not positive
        if i == k:
            _context_walk(a, sig, path[1:], p, pos, neg)
        else:
            _signed(a, sig, p, pos, neg)


def context_vars(seq: Sequent, occ: Occurrence, sig: Signature) -> SignedVars:
    """Signed atoms of the sequent with the occurrence deleted.

    Polarities are taken relative to the hole, i.e. as they read in the
    display-equivalent sequent where the occurrence is the whole antecedent
    (sort F) or the whole succedent (sort G).  For root occurrences this is the
    signed-variable set of the opposite side.
    """
    subterm(seq, occ)  # validates the path
    # "right" collects atoms that read positively on the succedent side
    right: set = set()
    left: set = set()
    if occ.side == ANTE:
        _context_walk(seq.ante, sig, occ.path, True, left, right)
        _signed(seq.succ, sig, True, right, left)
    else:
        _signed(seq.ante, sig, True, left, right)
        _context_walk(seq.succ, sig, occ.path, True, right, left)
    if sort_at(seq, occ, sig) == "F":
        return SignedVars(frozenset(right), frozenset(left))
    return SignedVars(frozenset(left), frozenset(right))


def iter_subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, (Meet, Join)):
        yield from iter_subformulas(f.left)
        yield from iter_subformulas(f.right)
    elif isinstance(f, App):
        for a in f.args:
            yield from iter_subformulas(a)


def host_sort(side: str) -> str:
    return "F" if side == ANTE else "G"


def flip_sort(sort: str) -> str:
    return other_sort(sort)
