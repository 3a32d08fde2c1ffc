"""Worked examples per preset, printed as pass/fail lines by ``lei demo``."""

from __future__ import annotations

from .calculus import classify_safety, parse_rules, validate_analytic
from .display import closure, isolate, plug
from .interpolate import lyndon, maehara, simplify, verify
from .oracle import find_interpolants, sorted_text
from .presets import load_preset, load_rule_text
from .prover import Proved, SearchConfig, check, prove
from .signature import CON, COV, Connective, residual_order_type, show_order_type
from .syntax import ANTE_ROOT, Atom, Leaf, Occurrence, parse_sequent, show, signed_vars

CFG = SearchConfig(depth=16)


def _prove(rules, text, expect):
    seq = parse_sequent(text, rules.sig)
    r = prove(seq, rules, CFG)
    ok = r.status == expect
    if isinstance(r, Proved):
        ok = ok and check(r.derivation, rules).ok
    return ok, f"prove {text} -> {r.status}"


def _extract(rules, text, occ=ANTE_ROOT, expect=None):
    seq = parse_sequent(text, rules.sig)
    r = prove(seq, rules, CFG)
    if not isinstance(r, Proved):
        return False, f"interpolate {text}: {r.status}"
    res = maehara(r.derivation, occ, rules)
    v = verify(seq, occ, res.gamma, rules, CFG)
    simple = simplify(res.gamma, rules.sig)
    vs = verify(seq, occ, simple, rules, CFG)
    ok = v.ok and vs.ok and (expect is None or show(simple) == expect)
    return ok, (f"interpolate {text} at {occ}: gamma = {show(res.gamma)}, "
                f"simplified {show(simple)}, verify {v.describe()}")


def _verify_fails(rules, text, gamma, reason):
    from .syntax import parse_formula

    seq = parse_sequent(text, rules.sig)
    v = verify(seq, ANTE_ROOT, parse_formula(gamma, rules.sig), rules, CFG)
    ok = (not v.ok) and any(reason in f for f in v.failures)
    return ok, f"verify {text} with {gamma} -> {v.describe()}"


def _oracle(rules, text, depth, expect):
    seq = parse_sequent(text, rules.sig)
    found = sorted_text(find_interpolants(seq, ANTE_ROOT, depth, rules, CFG))
    return found == expect, f"oracle {text} depth {depth} -> {{{', '.join(found)}}}"


def _display(rules, text, occ, expect):
    seq = parse_sequent(text, rules.sig)
    df = isolate(seq, Occurrence.parse(occ), rules)
    back = plug(df, Leaf(Atom("r")), rules)
    cls = sorted(show(s) for s in closure(seq, rules))
    ok = show(df.sequent) == expect
    return ok, (f"isolate {occ} in {text} -> {show(df.sequent)} (eps={df.epsilon.value}); "
                f"plug r -> {show(back)}; class size {len(cls)}")


def _classify(sig, rule_text, expect):
    rules = parse_rules(rule_text, sig)
    got = {r.name: classify_safety(r) for r in rules}
    ok = got == expect and all(not validate_analytic(r) for r in rules)
    return ok, "classify " + ", ".join(f"{k}: {v}" for k, v in got.items())


def _residuals():
    f = Connective("f", "F", 2, (COV, CON))
    g = Connective("g", "G", 2, (CON, COV))
    got = [show_order_type(residual_order_type(c, i)[1]) for c in (f, g) for i in (1, 2)]
    want = ["(1,1)", "(1,∂)", "(∂,1)", "(1,1)"]
    return got == want, "residual order types of f=(1,∂), g=(∂,1): " + " ".join(got)


def examples(name: str) -> list:
    """(ok, line) pairs for the preset ``name``; evaluated lazily."""
    preset = load_preset(name)
    rules = preset.ruleset()
    sig = preset.signature
    out = []
    if name == "lattice":
        out.append(lambda: _prove(rules, "p |- p", "Proved"))
        out.append(lambda: _prove(rules, "p |- q", "NotProved"))
        out.append(lambda: _prove(rules, r"(p /\ (q \/ r)) |- ((p /\ q) \/ (p /\ r))", "NotProved"))
        out.append(lambda: _extract(rules, r"(p /\ q) |- (p \/ r)", expect="p"))
        out.append(lambda: _verify_fails(rules, "p |- p", "q", "polarity"))
        out.append(lambda: _verify_fails(rules, "p |- q", "top", "not derivable"))
        out.append(lambda: _oracle(rules, r"(p /\ q) |- (p \/ r)", 0, ["p"]))
    elif name == "k-tense":
        geach = preset.ruleset(extra=tuple(parse_rules(load_rule_text("geach"), sig)))
        out.append(_residuals)
        out.append(lambda: _display(rules, "@dia(p) |- q", "ante.1", "p |- #blacksquare(q)"))
        out.append(lambda: _prove(rules, "dia(box(p)) |- box(dia(p))", "NotProved"))
        out.append(lambda: _prove(geach, "dia(box(p)) |- box(dia(p))", "Proved"))
        out.append(lambda: _extract(geach, "dia(box(p)) |- box(dia(p))"))
        out.append(lambda: _extract(rules, r"dia((p /\ q)) |- dia(p)", expect="dia(p)"))
        out.append(lambda: _classify(sig, load_rule_text("geach"), {"dia_box": "interpolation-safe"}))
    elif name in ("fundamental", "tense-fundamental"):
        out.append(lambda: _classify(sig, preset.rules_text, {
            "neg_contradiction": "not-special", "dia_neg": "interpolation-safe"}))
        out.append(lambda: _display(rules, "p |- #neg(q)", "succ.1", "q |- #neg(p)"))
        out.append(lambda: _prove(rules, r"(p /\ neg(p)) |- q", "Proved"))
        out.append(lambda: _extract(rules, r"(p /\ neg(p)) |- q", expect="bot"))
        out.append(lambda: _oracle(rules, r"(p /\ neg(p)) |- q", 0, ["bot"]))
        out.append(lambda: _showcase(rules))
    elif name == "lambek":
        out.append(lambda: _lambek_types(sig))
        out.append(lambda: _prove(rules, "fuse(p, under(p, q)) |- q", "Proved"))
        out.append(lambda: _prove(rules, "fuse(p, q) |- fuse(q, p)", "NotProved"))
        out.append(lambda: _extract(rules, "fuse(p, under(p, q)) |- q", expect="q"))
    return out


def _showcase(rules):
    text = "dia(neg(p)) |- neg(box(p))"
    seq = parse_sequent(text, rules.sig)
    r = prove(seq, rules, CFG)
    if not isinstance(r, Proved):
        return False, f"interpolate {text}: {r.status}"
    res = lyndon(r.derivation, rules)
    sv = signed_vars(res.gamma, rules.sig)
    v = verify(seq, ANTE_ROOT, res.gamma, rules, CFG)
    ok = v.ok and sv.neg <= {"p"} and not sv.pos
    return ok, (f"lyndon {text}: gamma = {show(res.gamma)}, Var+ = {{{', '.join(sorted(sv.pos))}}}, "
                f"Var- = {{{', '.join(sorted(sv.neg))}}}, verify {v.describe()}")


def _lambek_types(sig):
    got = {n: show_order_type(sig[n].order_type) + " " + sig[n].kind for n in ("over", "under")}
    ok = got == {"over": "(1,∂) G", "under": "(∂,1) G"}
    return ok, "fuse residuals: " + ", ".join(f"{k} {v}" for k, v in got.items())


def run(name: str, write) -> bool:
    ok_all = True
    write(f"demo {name}")
    for ex in examples(name):
        try:
            ok, line = ex()
        except Exception as exc:  # report and keep going; a demo line is a test
            ok, line = False, f"error: {exc}"
        ok_all = ok_all and ok
        write(f"{'pass' if ok else 'FAIL'}  {line}")
    write("all passed" if ok_all else "some examples failed")
    return ok_all
