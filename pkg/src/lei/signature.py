"""LE-signatures: connective declarations, order-type arithmetic and residual closure."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional


class SignatureError(ValueError):
    """Raised for malformed signature files or inconsistent declarations."""


class Polarity(enum.Enum):
    COV = "1"
    CON = "∂"

    @property
    def dual(self) -> "Polarity":
        return Polarity.CON if self is Polarity.COV else Polarity.COV

    def times(self, other: "Polarity") -> "Polarity":
        """Compose polarities: covariant is the unit, two flips cancel."""
        return self if other is Polarity.COV else self.dual

    @classmethod
    def from_sign(cls, ch: str) -> "Polarity":
        if ch == "+":
            return cls.COV
        if ch == "-":
            return cls.CON
        raise SignatureError(f"order-type symbol must be '+' or '-', got {ch!r}")

    @property
    def sign(self) -> str:
        return "+" if self is Polarity.COV else "-"

    def __str__(self) -> str:
        return self.value


COV = Polarity.COV
CON = Polarity.CON

OrderType = tuple  # tuple[Polarity, ...]


def order_type(text: str) -> OrderType:
    """Parse an order type written with one ``+``/``-`` per coordinate."""
    return tuple(Polarity.from_sign(ch) for ch in text)


def show_order_type(ot: OrderType) -> str:
    return "(" + ",".join(p.value for p in ot) + ")"


def dual(ot: OrderType) -> OrderType:
    return tuple(p.dual for p in ot)


@dataclass(frozen=True)
class ResidualLink:
    parent: str
    coord: int
    galois: bool


@dataclass(frozen=True)
class Connective:
    name: str
    kind: str  # "F" or "G"
    arity: int
    order_type: OrderType
    operational: bool = True
    residual_link: Optional[ResidualLink] = None
    self_residual: Optional[int] = None

    @property
    def primitive(self) -> bool:
        return self.residual_link is None

    def coord_sort(self, i: int) -> str:
        """Sort of argument ``i`` (1-based) of the structural counterpart."""
        if self.order_type[i - 1] is COV:
            return self.kind
        return other_sort(self.kind)


def other_sort(sort: str) -> str:
    return "G" if sort == "F" else "F"


def residual_order_type(c: Connective, i: int) -> tuple:
    """Kind and order type of the residual of ``c`` in coordinate ``i``."""
    if not 1 <= i <= c.arity:
        raise SignatureError(f"coordinate {i} out of range for {c.name}/{c.arity}")
    ei = c.order_type[i - 1]
    kind = c.kind if ei is CON else other_sort(c.kind)
    # j != i is raised to the dual of e_i: unchanged when e_i is contravariant
    coords = tuple(ej if j == i - 1 else ej.times(ei.dual) for j, ej in enumerate(c.order_type))
    return kind, coords


def residual_name(parent: Connective, i: int) -> str:
    tag = "sharp" if parent.kind == "F" else "flat"
    return f"{parent.name}.{tag}.{i}"


@dataclass(frozen=True)
class Signature:
    connectives: dict = field(default_factory=dict)
    atoms: tuple = ()
    name: Optional[str] = None

    def __hash__(self) -> int:
        return hash((self.name, self.atoms, tuple(self.connectives.values())))

    def __contains__(self, name: str) -> bool:
        return name in self.connectives

    def __getitem__(self, name: str) -> Connective:
        return self.connectives[name]

    def get(self, name: str) -> Optional[Connective]:
        return self.connectives.get(name)

    @property
    def primitives(self) -> list:
        return [c for c in self.connectives.values() if c.primitive]

    @property
    def operational(self) -> list:
        return [c for c in self.connectives.values() if c.operational]

    def residual(self, name: str, i: int) -> Optional[Connective]:
        """The connective acting as residual of ``name`` in coordinate ``i``, if declared."""
        c = self.connectives[name]
        if c.self_residual == i:
            return c
        for d in self.connectives.values():
            link = d.residual_link
            if link is not None and link.parent == name and link.coord == i:
                return d
        return None

    def with_connective(self, c: Connective) -> "Signature":
        conns = dict(self.connectives)
        conns[c.name] = c
        return replace(self, connectives=conns)

    def all_unary(self) -> bool:
        return all(c.arity <= 1 for c in self.connectives.values())


def validate(sig: Signature) -> list:
    """Return a list of violation strings; empty means the signature is valid."""
    out = []
    seen_links = {}
    for c in sig.connectives.values():
        if c.kind not in ("F", "G"):
            out.append(f"kind: {c.name} has kind {c.kind!r}, expected F or G")
        if len(c.order_type) != c.arity:
            out.append(
                f"order-type length: {c.name} has arity {c.arity} but {len(c.order_type)} coordinates"
            )
            continue
        if c.self_residual is not None:
            i = c.self_residual
            if not 1 <= i <= c.arity:
                out.append(f"self residual: coordinate {i} out of range for {c.name}")
            elif residual_order_type(c, i) != (c.kind, c.order_type):
                out.append(f"self residual: {c.name} cannot be its own residual in coordinate {i}")
        link = c.residual_link
        if link is None:
            continue
        parent = sig.get(link.parent)
        if parent is None:
            out.append(f"unresolved residual: {c.name} names unknown parent {link.parent}")
            continue
        if not parent.primitive:
            out.append(f"unresolved residual: parent {link.parent} of {c.name} is itself a residual")
            continue
        if not 1 <= link.coord <= parent.arity:
            out.append(f"unresolved residual: coordinate {link.coord} out of range for {link.parent}")
            continue
        if len(parent.order_type) != parent.arity:
            continue
        if c.arity != parent.arity or residual_order_type(parent, link.coord) != (c.kind, c.order_type):
            out.append(f"residual order type: {c.name} does not match residual of {link.parent} at {link.coord}")
        key = (link.parent, link.coord)
        if key in seen_links:
            out.append(f"conflicting residual: {seen_links[key]} and {c.name} both claim {key}")
        seen_links[key] = c.name
    return out


def residual_closure(sig: Signature) -> Signature:
    """Add one generation of residuals: every primitive gets a residual per coordinate."""
    problems = [v for v in validate(sig) if v.startswith("conflicting")]
    if problems:
        raise SignatureError(problems[0])
    conns = dict(sig.connectives)
    for c in list(sig.connectives.values()):
        if not c.primitive:
            continue
        for i in range(1, c.arity + 1):
            if sig.residual(c.name, i) is not None:
                continue
            kind, ot = residual_order_type(c, i)
            name = residual_name(c, i)
            if name in conns:
                raise SignatureError(f"derived residual name {name} already in use")
            conns[name] = Connective(
                name, kind, c.arity, ot, operational=False,
                residual_link=ResidualLink(c.name, i, c.order_type[i - 1] is CON),
            )
    return replace(sig, connectives=conns)


def parse_signature(text: str, name: Optional[str] = None) -> Signature:
    """Parse the line-oriented ``.lsig`` format."""
    atoms: list = []
    conns: dict = {}
    residual_decls: list = []
    selfgalois: list = []
    operational: set = set()
    logic_name = name
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head, rest = words[0], words[1:]
        try:
            if head == "atoms":
                atoms.extend(rest)
            elif head == "name":
                logic_name = " ".join(rest)
            elif head == "conn":
                if len(rest) not in (3, 4):
                    raise SignatureError("expected: conn F|G <name> <arity> [<order type>]")
                kind, cname, arity = rest[0], rest[1], int(rest[2])
                if kind not in ("F", "G"):
                    raise SignatureError(f"kind must be F or G, got {kind!r}")
                ot = order_type(rest[3]) if len(rest) == 4 else ()
                if cname in conns:
                    raise SignatureError(f"duplicate connective {cname}")
                conns[cname] = Connective(cname, kind, arity, ot)
            elif head == "residual":
                if len(rest) != 4 or rest[0] not in ("sharp", "flat"):
                    raise SignatureError("expected: residual sharp|flat <parent> <coord> <name>")
                residual_decls.append((rest[0], rest[1], int(rest[2]), rest[3]))
            elif head == "selfgalois":
                if len(rest) != 2:
                    raise SignatureError("expected: selfgalois <name> <coord>")
                selfgalois.append((rest[0], int(rest[1])))
            elif head == "operational":
                operational.update(rest)
            else:
                raise SignatureError(f"unknown directive {head!r}")
        except (SignatureError, ValueError) as exc:
            raise SignatureError(f"line {lineno}: {exc}") from None

    for cname, i in selfgalois:
        if cname not in conns:
            raise SignatureError(f"selfgalois: unknown connective {cname}")
        conns[cname] = replace(conns[cname], self_residual=i)
    for tag, parent, i, rname in residual_decls:
        p = conns.get(parent)
        if p is None:
            # keep the dangling link so validate() can report it
            conns.setdefault(rname, Connective(rname, "F", 0, (), False, ResidualLink(parent, i, False)))
            continue
        want = "sharp" if p.kind == "F" else "flat"
        if tag != want:
            raise SignatureError(f"residual of {parent} ({p.kind}) must be declared {want}")
        if len(p.order_type) != p.arity or not 1 <= i <= p.arity:
            conns.setdefault(rname, Connective(rname, "F", 0, (), False, ResidualLink(parent, i, False)))
            continue
        kind, ot = residual_order_type(p, i)
        link = ResidualLink(parent, i, p.order_type[i - 1] is CON)
        if rname in conns:
            existing = conns[rname]
            if existing.residual_link is not None and existing.residual_link != link:
                raise SignatureError(f"{rname} declared as residual twice")
            conns[rname] = replace(existing, residual_link=link)
        else:
            conns[rname] = Connective(rname, kind, p.arity, ot, operational=False, residual_link=link)
    for cname in operational:
        if cname not in conns:
            raise SignatureError(f"operational: unknown connective {cname}")
    conns = {
        k: (replace(c, operational=True) if k in operational else c)
        if c.residual_link is not None else c
        for k, c in conns.items()
    }
    for a in atoms:
        if a in conns:
            raise SignatureError(f"atom {a} collides with a connective name")
    return Signature(conns, tuple(atoms), logic_name)


def format_signature(sig: Signature) -> str:
    """Print a signature back in ``.lsig`` form (derived residuals omitted)."""
    lines = []
    if sig.name:
        lines.append(f"name {sig.name}")
    if sig.atoms:
        lines.append("atoms " + " ".join(sig.atoms))
    for c in sig.connectives.values():
        if c.primitive:
            ot = "".join(p.sign for p in c.order_type)
            lines.append(f"conn {c.kind} {c.name} {c.arity} {ot}".rstrip())
    for c in sig.connectives.values():
        if c.self_residual is not None:
            lines.append(f"selfgalois {c.name} {c.self_residual}")
    for c in sig.connectives.values():
        link = c.residual_link
        if link is not None and c.name != residual_name(sig[link.parent], link.coord):
            tag = "sharp" if sig[link.parent].kind == "F" else "flat"
            lines.append(f"residual {tag} {link.parent} {link.coord} {c.name}")
    ops = [c.name for c in sig.connectives.values() if c.residual_link is not None and c.operational]
    if ops:
        lines.append("operational " + " ".join(ops))
    return "\n".join(lines) + "\n"


def connectives_of_kind(sig: Signature, kind: str) -> Iterable[Connective]:
    return (c for c in sig.connectives.values() if c.kind == kind)
