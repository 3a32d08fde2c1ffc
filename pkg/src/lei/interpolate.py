"""Maehara/Lyndon interpolant extraction from cut-free derivations.

Extraction recurses on the last rule of a derivation.  Every result is a triple
(gamma, side, ctx): ``side`` derives ``X |- gamma`` (or ``gamma |- X`` when the
occurrence has sort G) and ``ctx`` derives the root with ``gamma`` in place of
the occurrence.  Both witnesses are assembled from rule instances only, so they
can be replayed by :func:`lei.prover.check`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .calculus import (
    SAFE,
    MetaVar,
    RuleSchema,
    RuleSet,
    classify_safety,
    instantiate,
    metavars,
    negation_shape,
)
from .display import inverse_steps, isolate
from .prover import Derivation, SearchConfig, display_derivation, prove, Proved
from .signature import COV, CON, Polarity
from .syntax import (
    ANTE,
    ANTE_ROOT,
    BOT,
    CHECK,
    CHECK_BOT,
    SUCC,
    TOP,
    App,
    Atom,
    Bot,
    CheckBot,
    Formula,
    HatTop,
    Join,
    Leaf,
    Meet,
    Occurrence,
    SApp,
    Sequent,
    SignedVars,
    Top,
    connectives_in,
    context_vars,
    replace_at,
    replace_in,
    show,
    side_root,
    signed_vars,
    sort_at,
    structure_to_formula,
    subterm,
)


class ExtractionError(ValueError):
    pass


METAVARIABLE = "metavariable-combination"
PRINCIPAL = "principal-case"
SAFE_STRUCTURAL = "safe-structural"
NEGATION = "fundamental-negation"


@dataclass(frozen=True)
class RuleInterpolationHandler:
    rule: str
    kind: str


def handler_for(schema: RuleSchema, sig) -> Optional[RuleInterpolationHandler]:
    if schema.kind == "cut":
        return None
    if schema.kind in ("axiom", "principal"):
        return RuleInterpolationHandler(schema.name, PRINCIPAL)
    if schema.kind in ("intro", "display", "weakening"):
        return RuleInterpolationHandler(schema.name, METAVARIABLE)
    if negation_shape(schema, sig) is not None:
        # only sound when the displayed context cannot carry other atoms
        if sig.all_unary():
            return RuleInterpolationHandler(schema.name, NEGATION)
        return None
    if classify_safety(schema) == SAFE:
        return RuleInterpolationHandler(schema.name, SAFE_STRUCTURAL)
    return None


def handlers(rules: RuleSet) -> list:
    """One handler per non-Cut rule; raises naming the rules that have none."""
    out, missing = [], []
    for r in rules.rules:
        if r.kind == "cut":
            continue
        h = handler_for(r, rules.sig)
        if h is None:
            missing.append(r.name)
        else:
            out.append(h)
    if missing:
        raise ExtractionError(f"no interpolation handler for rule(s): {', '.join(missing)}")
    return out


@dataclass(frozen=True)
class PolarityReport:
    gamma: SignedVars
    structure: SignedVars
    context: SignedVars

    @property
    def allowed(self) -> SignedVars:
        return self.structure & self.context

    @property
    def pos_ok(self) -> bool:
        return self.gamma.pos <= self.allowed.pos

    @property
    def neg_ok(self) -> bool:
        return self.gamma.neg <= self.allowed.neg

    @property
    def ok(self) -> bool:
        return self.pos_ok and self.neg_ok

    def to_json(self) -> dict:
        allowed = self.allowed
        return {
            "gamma_pos": sorted(self.gamma.pos),
            "gamma_neg": sorted(self.gamma.neg),
            "allowed_pos": sorted(allowed.pos),
            "allowed_neg": sorted(allowed.neg),
            "pos_ok": self.pos_ok,
            "neg_ok": self.neg_ok,
        }


def polarity_report(seq: Sequent, occ: Occurrence, gamma: Formula, sig) -> PolarityReport:
    return PolarityReport(
        signed_vars(gamma, sig),
        signed_vars(subterm(seq, occ), sig),
        context_vars(seq, occ, sig),
    )


@dataclass(frozen=True)
class InterpolationResult:
    gamma: Formula
    epsilon: Polarity
    side_derivation: Derivation
    ctx_derivation: Derivation
    polarity: PolarityReport
    sequent: Sequent
    occurrence: Occurrence
    lstar: bool = False  # gamma uses connectives outside the operational language
    warnings: tuple = ()

    def to_json(self) -> dict:
        return {
            "gamma": show(self.gamma),
            "epsilon": self.epsilon.value,
            "left_proof": self.side_derivation.to_json(),
            "ctx_proof": self.ctx_derivation.to_json(),
            "polarity": self.polarity.to_json(),
        }


# --- formula helpers --------------------------------------------------------


def _unit(eps: Polarity) -> Formula:
    return TOP if eps is COV else BOT


def fold(parts: list, eps: Polarity) -> Formula:
    """Right-nested meet (ε=1) or join (ε=∂); the empty fold is ⊤ or ⊥."""
    if not parts:
        return _unit(eps)
    op = Meet if eps is COV else Join
    out = parts[-1]
    for f in reversed(parts[:-1]):
        out = op(f, out)
    return out


def _eps(sort: str) -> Polarity:
    return COV if sort == "F" else CON


def simplify(f: Formula, sig) -> Formula:
    """Provable-equivalence-preserving cleanup: units, zeros, idempotence,
    absorption and normality of the modal connectives."""
    if isinstance(f, Meet):
        a, b = simplify(f.left, sig), simplify(f.right, sig)
        if isinstance(a, Top):
            return b
        if isinstance(b, Top) or a == b:
            return a
        if isinstance(a, Bot) or isinstance(b, Bot):
            return BOT
        if isinstance(b, Join) and a in (b.left, b.right):
            return a
        if isinstance(a, Join) and b in (a.left, a.right):
            return b
        return Meet(a, b)
    if isinstance(f, Join):
        a, b = simplify(f.left, sig), simplify(f.right, sig)
        if isinstance(a, Bot):
            return b
        if isinstance(b, Bot) or a == b:
            return a
        if isinstance(a, Top) or isinstance(b, Top):
            return TOP
        if isinstance(b, Meet) and a in (b.left, b.right):
            return a
        if isinstance(a, Meet) and b in (a.left, a.right):
            return b
        return Join(a, b)
    if isinstance(f, App):
        args = tuple(simplify(a, sig) for a in f.args)
        c = sig[f.name]
        for e, a in zip(c.order_type, args):
            if c.kind == "F" and a == (BOT if e is COV else TOP):
                return BOT
            if c.kind == "G" and a == (TOP if e is COV else BOT):
                return TOP
        return App(f.name, args)
    return f


# --- the extractor ----------------------------------------------------------


def _lstar_rules(rules: RuleSet) -> RuleSet:
    if rules.lstar:
        return rules
    cached = getattr(rules, "_lstar_twin", None)
    if cached is None:
        cached = rules.with_lstar()
        rules._lstar_twin = cached
    return cached


class _Extractor:
    def __init__(self, rules: RuleSet):
        self.rules = rules
        self.ext = _lstar_rules(rules)
        self.sig = rules.sig
        self.memo: dict = {}

    # small derivation builders

    def node(self, name: str, inst: dict, children=()) -> Derivation:
        return Derivation.make(self.ext[name], inst, children)

    def top_hat(self) -> Derivation:
        return self.node("top_hat", {})

    def bot_check(self) -> Derivation:
        return self.node("bot_check", {})

    def identity(self, f: Formula) -> Derivation:
        """Derivation of ``f |- f``."""
        if isinstance(f, Atom):
            return self.node("Id", {"p": f})
        if isinstance(f, Top):
            return self.node("top_L", {"Y": Leaf(TOP)}, (self.top_hat(),))
        if isinstance(f, Bot):
            return self.node("bot_R", {"X": Leaf(BOT)}, (self.bot_check(),))
        if isinstance(f, Meet):
            l = self.node("and_L1", {"A": f.left, "B": f.right, "Y": Leaf(f.left)}, (self.identity(f.left),))
            r = self.node("and_L2", {"A": f.left, "B": f.right, "Y": Leaf(f.right)}, (self.identity(f.right),))
            return self.node("and_R", {"X": Leaf(f), "A": f.left, "B": f.right}, (l, r))
        if isinstance(f, Join):
            l = self.node("or_R1", {"A": f.left, "B": f.right, "X": Leaf(f.left)}, (self.identity(f.left),))
            r = self.node("or_R2", {"A": f.left, "B": f.right, "X": Leaf(f.right)}, (self.identity(f.right),))
            return self.node("or_L", {"Y": Leaf(f), "A": f.left, "B": f.right}, (l, r))
        if isinstance(f, App):
            c = self.sig[f.name]
            inst = {f"A{i}": a for i, a in enumerate(f.args, 1)}
            ws = {f"W{i}": Leaf(a) for i, a in enumerate(f.args, 1)}
            kids = tuple(self.identity(a) for a in f.args)
            inner = self.node(f"{f.name}_R" if c.kind == "F" else f"{f.name}_L", {**inst, **ws}, kids)
            if c.kind == "F":
                return self.node(f"{f.name}_L", {**inst, "Y": Leaf(f)}, (inner,))
            return self.node(f"{f.name}_R", {**inst, "X": Leaf(f)}, (inner,))
        raise ExtractionError(f"cannot expand identity for {f!r}")

    def identity_structure(self, s) -> Derivation:
        """``s |- formula(s)`` for F-structures, ``formula(s) |- s`` for G-structures."""
        if isinstance(s, Leaf):
            return self.identity(s.formula)
        if isinstance(s, HatTop):
            return self.top_hat()
        if isinstance(s, CheckBot):
            return self.bot_check()
        c = self.sig[s.name]
        inst = {f"A{i}": structure_to_formula(a, self.sig, lonly=False) for i, a in enumerate(s.args, 1)}
        ws = {f"W{i}": a for i, a in enumerate(s.args, 1)}
        kids = tuple(self.identity_structure(a) for a in s.args)
        name = f"{s.name}_R" if c.kind == "F" else f"{s.name}_L"
        return self.node(name, {**inst, **ws}, kids)

    def combine_side(self, z, sides: list, parts: list, eps: Polarity) -> Derivation:
        """From ``z |- g_i`` (or ``g_i |- z``) derive the same for the fold of the g_i."""
        if not parts:
            if eps is COV:
                return self.node("top_W", {"X": z, "Y": Leaf(TOP)}, (self.top_hat(),))
            return self.node("bot_W", {"X": Leaf(BOT), "Y": z}, (self.bot_check(),))
        if len(parts) == 1:
            return sides[0]
        rest = self.combine_side(z, sides[1:], parts[1:], eps)
        inst = {"A": parts[0], "B": fold(parts[1:], eps)}
        if eps is COV:
            return self.node("and_R", {**inst, "X": z}, (sides[0], rest))
        return self.node("or_L", {**inst, "Y": z}, (sides[0], rest))

    def weaken(self, d: Derivation, occ: Occurrence, parts: list, idx: int, eps: Polarity) -> Derivation:
        """Turn a derivation with ``parts[idx]`` at ``occ`` into one with their fold there."""
        if len(parts) == 1:
            return d
        df = isolate(d.root, occ, self.rules)
        cur = display_derivation(d, df.steps, self.ext)
        other = df.sequent.succ if eps is COV else df.sequent.ante
        key = "Y" if eps is COV else "X"
        first, second = ("and_L1", "and_L2") if eps is COV else ("or_R1", "or_R2")
        if idx < len(parts) - 1:
            cur = self.node(first, {"A": parts[idx], "B": fold(parts[idx + 1:], eps), key: other}, (cur,))
        for k in range(idx - 1, -1, -1):
            cur = self.node(second, {"A": parts[k], "B": fold(parts[k + 1:], eps), key: other}, (cur,))
        return display_derivation(cur, inverse_steps(df.steps, self.rules), self.ext)

    def formularize(self, d: Derivation, occ: Occurrence) -> Derivation:
        """Replace the structure at ``occ`` by its formula counterpart, bottom-up."""
        node = subterm(d.root, occ)
        paths = []

        def walk(s, path):
            if isinstance(s, SApp):
                for i, a in enumerate(s.args, 1):
                    walk(a, path + (i,))
            if not isinstance(s, Leaf):
                paths.append(path)

        walk(node, ())
        for p in paths:
            target = Occurrence(occ.side, occ.path + p)
            df = isolate(d.root, target, self.rules)
            cur = display_derivation(d, df.steps, self.ext)
            seq = df.sequent
            t = df.target
            if isinstance(t, HatTop):
                cur = self.node("top_L", {"Y": seq.succ}, (cur,))
            elif isinstance(t, CheckBot):
                cur = self.node("bot_R", {"X": seq.ante}, (cur,))
            else:
                inst = {f"A{i}": a.formula for i, a in enumerate(t.args, 1)}
                if t.flavor == CHECK:
                    cur = self.node(f"{t.name}_R", {**inst, "X": seq.ante}, (cur,))
                else:
                    cur = self.node(f"{t.name}_L", {**inst, "Y": seq.succ}, (cur,))
            d = display_derivation(cur, inverse_steps(df.steps, self.rules), self.ext)
        return d

    # extraction proper

    def run(self, d: Derivation, occ: Occurrence) -> tuple:
        key = (id(d), occ)
        hit = self.memo.get(key)
        if hit is None:
            hit = self._extract(d, occ)
            self.memo[key] = hit
        return hit

    def _extract(self, d: Derivation, occ: Occurrence) -> tuple:
        schema = self.ext.by_name.get(d.rule)
        if schema is None:
            raise ExtractionError(f"unknown rule {d.rule}")
        if schema.kind == "cut":
            raise ExtractionError("derivation contains Cut; extraction needs a cut-free derivation")
        handler = handler_for(schema, self.sig)
        if handler is None:
            if negation_shape(schema, self.sig) is not None:
                raise ExtractionError(
                    f"rule {schema.name}: negation rule needs every connective to be unary "
                    "apart from conjunction and disjunction")
            raise ExtractionError(f"no interpolation handler for rule {schema.name} "
                                  f"({classify_safety(schema) if schema.kind == 'structural' else schema.kind})")
        pat = side_root(schema.conclusion, occ.side)
        for depth, k in enumerate(occ.path):
            if isinstance(pat, MetaVar):
                break
            pat = pat.args[k - 1]
        else:
            depth = len(occ.path)
        if isinstance(pat, MetaVar):
            rest = occ.path[depth:]
            if handler.kind == NEGATION and pat == schema.conclusion.ante:
                return self.negation(d, schema, occ, rest)
            return self.metavariable(d, schema, occ, pat, rest)
        if handler.kind == PRINCIPAL:
            return self.principal(d, schema, occ)
        opposite = schema.conclusion.succ if occ.side == ANTE else schema.conclusion.ante
        if not occ.path and isinstance(opposite, MetaVar):
            g, side, ctx = self.run(d, Occurrence(SUCC if occ.side == ANTE else ANTE))
            return g, ctx, side
        if handler.kind == SAFE_STRUCTURAL:
            return self.safe(d, schema, occ)
        raise ExtractionError(f"rule {schema.name} has no handler for occurrence {occ}")

    def metavariable(self, d, schema, occ, var, rest) -> tuple:
        eps = _eps(sort_at(d.root, occ, self.sig))
        z = subterm(d.root, occ)
        found = []
        for pos in schema.correspondence.premise_positions(var.name):
            found.append(pos)
        by_premise = {}
        for pos in found:
            if pos.premise in by_premise:
                raise ExtractionError(
                    f"rule {schema.name}: metavariable {var.name} occurs twice in premise {pos.premise + 1}")
            by_premise[pos.premise] = pos
        parts, sides, ctxs = [], [], []
        for j in sorted(by_premise):
            pos = by_premise[j]
            o = Occurrence(pos.side, pos.path + rest)
            g, side, ctx = self.run(d.children[j], o)
            parts.append(g)
            sides.append(side)
            ctxs.append((j, o, ctx))
        gamma = fold(parts, eps)
        side = self.combine_side(z, sides, parts, eps)
        children = list(d.children)
        for idx, (j, o, ctx) in enumerate(ctxs):
            children[j] = self.weaken(ctx, o, parts, idx, eps)
        inst = dict(d.instantiation)
        inst[var.name] = replace_in(inst[var.name], rest, Leaf(gamma))
        ctx = Derivation.make(schema, inst, children)
        return gamma, side, ctx

    def _triple(self, d, schema) -> tuple:
        """Interpolant with derivations of ``ante |- gamma`` and ``gamma |- succ``."""
        inst = d.instantiation
        name = schema.name
        if name == "Id":
            return inst["p"], d, d
        if name == "top_ax":
            return TOP, d, self.identity(TOP)
        if name == "bot_ax":
            return BOT, self.identity(BOT), d
        if name == "top_hat":
            return TOP, d, self.node("top_L", {"Y": Leaf(TOP)}, (d,))
        if name == "bot_check":
            return BOT, self.node("bot_R", {"X": Leaf(BOT)}, (d,)), d
        if schema.kind != "principal":
            raise ExtractionError(f"no principal handler for {name}")
        c = self.sig[schema.connective]
        sigmas, sides, ctxs = [], [], []
        for i in range(1, c.arity + 1):
            pos = schema.correspondence.premise_positions(f"W{i}")[0]
            g, side, ctx = self.run(d.children[pos.premise], Occurrence(pos.side, pos.path))
            sigmas.append(g)
            sides.append(side)
            ctxs.append(ctx)
        gamma = App(c.name, tuple(sigmas))
        a_sigma = {f"A{i}": g for i, g in enumerate(sigmas, 1)}
        w_sigma = {f"W{i}": Leaf(g) for i, g in enumerate(sigmas, 1)}
        a_orig = {k: v for k, v in inst.items() if k.startswith("A")}
        w_orig = {k: v for k, v in inst.items() if k.startswith("W")}
        if c.kind == "F":
            left = self.node(f"{c.name}_R", {**a_sigma, **w_orig}, sides)
            inner = self.node(f"{c.name}_R", {**a_orig, **w_sigma}, ctxs)
            right = self.node(f"{c.name}_L", {**a_sigma, "Y": d.root.succ}, (inner,))
        else:
            right = self.node(f"{c.name}_L", {**a_sigma, **w_orig}, sides)
            inner = self.node(f"{c.name}_L", {**a_orig, **w_sigma}, ctxs)
            left = self.node(f"{c.name}_R", {**a_sigma, "X": d.root.ante}, (inner,))
        return gamma, left, right

    def principal(self, d, schema, occ) -> tuple:
        if occ.path:
            raise ExtractionError(f"rule {schema.name}: unexpected inner principal occurrence {occ}")
        gamma, left, right = self._triple(d, schema)
        if occ.side == ANTE:
            return gamma, left, right
        return gamma, right, left

    def safe(self, d, schema, occ) -> tuple:
        sig = self.sig
        u_pat = side_root(schema.conclusion, occ.side)
        for k in occ.path:
            u_pat = u_pat.args[k - 1]
        u_vars = [v for v in metavars(u_pat) if isinstance(v, MetaVar)]
        groups = {v.name: [] for v in u_vars}
        for v in u_vars:
            for pos in schema.correspondence.premise_positions(v.name):
                o = Occurrence(pos.side, pos.path)
                g, side, ctx = self.run(d.children[pos.premise], o)
                groups[v.name].append((pos.premise, o, g, side, ctx))
        taus, combined = {}, {}
        children = list(d.children)
        for v in u_vars:
            eps = _eps(v.sort)
            parts = [g for (_, _, g, _, _) in groups[v.name]]
            taus[v.name] = fold(parts, eps)
            combined[v.name] = self.combine_side(
                d.instantiation[v.name], [s for (_, _, _, s, _) in groups[v.name]], parts, eps)
            for idx, (j, o, _, _, ctx) in enumerate(groups[v.name]):
                children[j] = self.weaken(ctx, o, parts, idx, eps)
        u_tau = instantiate(u_pat, {k: Leaf(t) for k, t in taus.items()})
        gamma = structure_to_formula(u_tau, sig, lonly=False)

        def mono(p) -> Derivation:
            if isinstance(p, MetaVar):
                return combined[p.name]
            if isinstance(p, HatTop):
                return self.top_hat()
            if isinstance(p, CheckBot):
                return self.bot_check()
            inst = {}
            for i, a in enumerate(p.args, 1):
                inst[f"A{i}"] = structure_to_formula(instantiate(a, {k: Leaf(t) for k, t in taus.items()}), sig, lonly=False)
                inst[f"W{i}"] = instantiate(a, d.instantiation)
            kids = tuple(mono(a) for a in p.args)
            name = f"{p.name}_R" if p.flavor != CHECK else f"{p.name}_L"
            return self.node(name, inst, kids)

        side = mono(u_pat)
        inst = dict(d.instantiation)
        for k, t in taus.items():
            inst[k] = Leaf(t)
        ctx = self.formularize(Derivation.make(schema, inst, children), occ)
        return gamma, side, ctx

    def negation(self, d, schema, occ, rest) -> tuple:
        """Negation rule ``X |- #n(X) / X |- Y`` with the occurrence inside X."""
        xname = schema.conclusion.ante.name
        yname = schema.conclusion.succ.name
        inst_bot = dict(d.instantiation)
        inst_bot[yname] = CHECK_BOT
        d_bot = Derivation.make(schema, inst_bot, d.children)
        df = isolate(d_bot.root, occ, self.rules)
        shown = display_derivation(d_bot, df.steps, self.ext)
        if df.epsilon is COV:
            s_side, s = SUCC, df.sequent.succ
        else:
            s_side, s = ANTE, df.sequent.ante
        gamma = structure_to_formula(s, self.sig, lonly=False)
        side = self.formularize(shown, Occurrence(s_side))
        ident = self.identity_structure(s)
        back = display_derivation(ident, inverse_steps(df.steps, self.rules), self.ext)
        x_gamma = replace_in(d.instantiation[xname], rest, Leaf(gamma))
        ctx = self.node("bot_W", {"X": x_gamma, "Y": d.instantiation[yname]}, (back,))
        return gamma, side, ctx


def maehara(d: Derivation, occ: Occurrence, rules: RuleSet) -> InterpolationResult:
    """Interpolant for the occurrence ``occ`` of the root of a cut-free ``d``."""
    seq = d.root
    sort = sort_at(seq, occ, rules.sig)
    for node in d.nodes():
        if rules.by_name.get(node.rule) is not None and rules[node.rule].kind == "cut":
            raise ExtractionError("derivation contains Cut; extraction needs a cut-free derivation")
    ex = _Extractor(rules)
    gamma, side, ctx = ex.run(d, occ)
    nonop = sorted(n for n in connectives_in(gamma) if not rules.sig[n].operational)
    warnings = ()
    if nonop:
        warnings = (f"interpolant uses non-operational connectives: {', '.join(nonop)}",)
    return InterpolationResult(
        gamma,
        _eps(sort),
        side,
        ctx,
        polarity_report(seq, occ, gamma, rules.sig),
        seq,
        occ,
        bool(nonop),
        warnings,
    )


def lyndon(d: Derivation, rules: RuleSet) -> InterpolationResult:
    root = d.root
    if not (isinstance(root.ante, Leaf) and isinstance(root.succ, Leaf)):
        raise ExtractionError(f"Lyndon extraction needs a formula sequent, got {show(root)}")
    return maehara(d, ANTE_ROOT, rules)


# --- verification -----------------------------------------------------------


@dataclass(frozen=True)
class VerifyReport:
    side: str  # prover status of the side sequent
    ctx: str
    polarity: PolarityReport
    side_sequent: Sequent
    ctx_sequent: Sequent
    failures: tuple = field(default=())

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "pass"
        return "fail: " + "; ".join(self.failures)

    def to_json(self) -> dict:
        return {
            "verdict": "pass" if self.ok else "fail",
            "side_sequent": show(self.side_sequent),
            "side": self.side,
            "ctx_sequent": show(self.ctx_sequent),
            "ctx": self.ctx,
            "polarity": self.polarity.to_json(),
            "failures": list(self.failures),
        }


def side_sequent(seq: Sequent, occ: Occurrence, gamma: Formula, sig) -> Sequent:
    x = subterm(seq, occ)
    if sort_at(seq, occ, sig) == "F":
        return Sequent(x, Leaf(gamma))
    return Sequent(Leaf(gamma), x)


def verify(seq: Sequent, occ: Occurrence, gamma: Formula, rules: RuleSet,
           cfg: SearchConfig = SearchConfig()) -> VerifyReport:
    """Re-prove both Maehara conditions and re-check the polarity inclusions."""
    sig = rules.sig
    if any(not sig[n].operational for n in connectives_in(gamma)):
        rules = _lstar_rules(rules)
    s1 = side_sequent(seq, occ, gamma, sig)
    s2 = replace_at(seq, occ, Leaf(gamma))
    r1 = prove(s1, rules, cfg)
    r2 = prove(s2, rules, cfg)
    pol = polarity_report(seq, occ, gamma, sig)
    failures = []
    if not isinstance(r1, Proved):
        failures.append(f"side sequent {show(s1)} not derivable ({r1.status})")
    if not isinstance(r2, Proved):
        failures.append(f"context sequent {show(s2)} not derivable ({r2.status})")
    if not pol.pos_ok:
        extra = sorted(pol.gamma.pos - pol.allowed.pos)
        failures.append(f"polarity inclusion: positive {', '.join(extra)} not allowed")
    if not pol.neg_ok:
        extra = sorted(pol.gamma.neg - pol.allowed.neg)
        failures.append(f"polarity inclusion: negative {', '.join(extra)} not allowed")
    return VerifyReport(r1.status, r2.status, pol, s1, s2, tuple(failures))
