import pytest
from hypothesis import given, settings, strategies as st

from lei.calculus import CUT, RuleSet, parse_rules
from lei.corpus import generate
from lei.interpolate import (
    METAVARIABLE,
    NEGATION,
    PRINCIPAL,
    SAFE_STRUCTURAL,
    ExtractionError,
    fold,
    handler_for,
    handlers,
    lyndon,
    maehara,
    side_sequent,
    simplify,
    verify,
)
from lei.oracle import find_interpolants, sorted_text
from lei.prover import Derivation, Proved, SearchConfig, check, prove
from lei.signature import CON, COV, parse_signature, residual_closure
from lei.syntax import (
    ANTE_ROOT,
    BOT,
    TOP,
    Atom,
    Join,
    Leaf,
    Meet,
    connectives_in,
    occurrences,
    parse_sequent,
    replace_at,
    show,
    signed_vars,
)

from cut_suite import cut_derivation
from helpers import formulas

CFG = SearchConfig(depth=16)


def extract(rules, text, occ=ANTE_ROOT):
    seq = parse_sequent(text, rules.sig)
    r = prove(seq, rules, CFG)
    assert isinstance(r, Proved)
    return maehara(r.derivation, occ, rules)


def test_identity_interpolant(rulesets):
    res = extract(rulesets["lattice"], "p |- p")
    assert res.gamma == Atom("p") and res.epsilon is COV


def test_meet_join_example(rulesets):
    rules = rulesets["lattice"]
    res = extract(rules, r"(p /\ q) |- (p \/ r)")
    assert show(simplify(res.gamma, rules.sig)) == "p"
    seq = parse_sequent(r"(p /\ q) |- (p \/ r)", rules.sig)
    assert "p" in sorted_text(find_interpolants(seq, ANTE_ROOT, 1, rules, CFG))


def test_contradiction_gives_bot(rulesets):
    rules = rulesets["fundamental"]
    res = extract(rules, r"(p /\ neg(p)) |- q")
    assert simplify(res.gamma, rules.sig) == BOT
    assert verify(res.sequent, ANTE_ROOT, res.gamma, rules, CFG).ok


def test_bot_antecedent(rulesets):
    rules = rulesets["lattice"]
    res = extract(rules, "bot |- p")
    assert simplify(res.gamma, rules.sig) == BOT


@pytest.mark.parametrize("preset", ["fundamental", "tense-fundamental"])
def test_showcase_lyndon(rulesets, preset):
    rules = rulesets[preset]
    seq = parse_sequent("dia(neg(p)) |- neg(box(p))", rules.sig)
    res = lyndon(prove(seq, rules, CFG).derivation, rules)
    sv = signed_vars(res.gamma, rules.sig)
    assert not sv.pos and sv.neg <= {"p"}
    assert verify(seq, ANTE_ROOT, res.gamma, rules, CFG).ok


def test_lyndon_needs_formula_sequent(rulesets):
    rules = rulesets["k-tense"]
    seq = parse_sequent("@dia(p) |- q", rules.sig, lstar=True)
    d = prove(parse_sequent("dia(p) |- dia(p)", rules.sig), rules, CFG).derivation
    with pytest.raises(ExtractionError):
        lyndon(Derivation(seq, d.rule, d.instantiation, d.children, d.correspondence), rules)


def test_verify_examples(rulesets):
    rules = rulesets["lattice"]
    sig = rules.sig
    ok = verify(parse_sequent(r"(p /\ q) |- (p \/ r)", sig), ANTE_ROOT, Atom("p"), rules, CFG)
    assert ok.ok and ok.describe() == "pass"
    bad_pol = verify(parse_sequent("p |- p", sig), ANTE_ROOT, Atom("q"), rules, CFG)
    assert not bad_pol.ok
    assert any("polarity" in f for f in bad_pol.failures)
    assert not bad_pol.polarity.pos_ok
    bad_ctx = verify(parse_sequent("p |- q", sig), ANTE_ROOT, TOP, rules, CFG)
    assert not bad_ctx.ok
    assert bad_ctx.side == "Proved" and bad_ctx.ctx == "NotProved"
    assert any("context sequent" in f for f in bad_ctx.failures)


def test_cut_is_rejected(rulesets):
    rules = rulesets["lattice"]
    d = cut_derivation(rules, r"(p /\ q)", "q", r"(q \/ r)")
    with pytest.raises(ExtractionError, match="Cut"):
        maehara(d, ANTE_ROOT, rules)


def test_handlers_cover_presets(rulesets, geach_rules):
    for rules in list(rulesets.values()) + [geach_rules]:
        hs = handlers(rules)
        assert len(hs) == len([r for r in rules.rules if r.kind != "cut"])
    kinds = {h.rule: h.kind for h in handlers(rulesets["fundamental"])}
    assert kinds["neg_contradiction"] == NEGATION
    assert kinds["dia_neg"] == SAFE_STRUCTURAL
    assert kinds["Id"] == PRINCIPAL
    assert kinds["and_L1"] == METAVARIABLE
    assert handler_for(CUT, rulesets["lattice"].sig) is None


NONUNARY_SIG = """name binary-neg
atoms p q
conn G neg 1 -
conn F fuse 2 ++
selfgalois neg 1
"""


def test_negation_rule_needs_unary_signature():
    sig = residual_closure(parse_signature(NONUNARY_SIG, "binary-neg"))
    text = "rule neg_contradiction\nX:F |- #neg(X:F)\n----\nX:F |- Y:G\n"
    rules = RuleSet(sig, tuple(parse_rules(text, sig)))
    with pytest.raises(ExtractionError, match="neg_contradiction"):
        handlers(rules)


def test_unsafe_rule_has_no_handler(presets):
    sig = presets["lambek"].signature
    # exchange: two metavariables share the non-special side
    text = "rule exch\n@fuse(X:F, Y:F) |- Z:G\n----\n@fuse(Y:F, X:F) |- Z:G\n"
    rules = RuleSet(sig, tuple(parse_rules(text, sig)))
    with pytest.raises(ExtractionError, match="exch"):
        handlers(rules)


def test_fold_algebra():
    p, q, r = Atom("p"), Atom("q"), Atom("r")
    assert fold([], COV) == TOP and fold([], CON) == BOT
    assert fold([p], COV) == p
    assert fold([p, q, r], COV) == Meet(p, Meet(q, r))
    assert fold([p, q, r], CON) == Join(p, Join(q, r))


def test_extraction_is_deterministic(rulesets):
    rules = rulesets["fundamental"]
    a = extract(rules, "dia(neg(p)) |- neg(box(p))").to_json()
    b = extract(rules, "dia(neg(p)) |- neg(box(p))").to_json()
    assert a == b
    assert list(a) == ["gamma", "epsilon", "left_proof", "ctx_proof", "polarity"]


def _local_property(d, occ, rules):
    res = maehara(d, occ, rules)
    ext = rules.with_lstar()
    assert res.side_derivation.root == side_sequent(d.root, occ, res.gamma, rules.sig)
    assert res.ctx_derivation.root == replace_at(d.root, occ, Leaf(res.gamma))
    assert check(res.side_derivation, ext).ok
    assert check(res.ctx_derivation, ext).ok
    assert res.polarity.ok
    return res


@pytest.mark.parametrize("preset", ["lattice", "k-tense", "fundamental", "tense-fundamental", "lambek"])
def test_local_property_on_display_class(rulesets, preset):
    """Every occurrence of every display-equivalent form of corpus sequents."""
    from lei.corpus import Generator
    from lei.display import explore
    from lei.prover import display_derivation

    rules = rulesets[preset]
    gen = Generator(rules, seed=3)
    while len(gen.pool) < 60:
        gen.step()
    checked = 0
    for base in gen.pool[-25:]:
        for member, steps in list(explore(base.root, rules).items())[:6]:
            d = display_derivation(base, steps, rules)
            assert d.root == member
            for occ in occurrences(member):
                _local_property(d, occ, rules)
                checked += 1
    assert checked >= 50


def test_language_restriction(rulesets):
    """Interpolants use only connectives of the sequent, plus lattice ones."""
    for preset in ["k-tense", "fundamental", "lambek"]:
        rules = rulesets[preset]
        for item in generate(rules, 80, seed=5):
            res = lyndon(item.derivation, rules)
            used = connectives_in(res.gamma)
            present = connectives_in(item.sequent.ante.formula) | connectives_in(item.sequent.succ.formula)
            if not res.lstar:
                assert used <= present, (show(item.sequent), show(res.gamma))


def test_simplify_preserves_interpolation(rulesets):
    for preset in ["lattice", "fundamental", "k-tense"]:
        rules = rulesets[preset]
        for item in generate(rules, 60, seed=9):
            res = lyndon(item.derivation, rules)
            s = simplify(res.gamma, rules.sig)
            assert verify(item.sequent, ANTE_ROOT, res.gamma, rules, CFG).ok
            assert verify(item.sequent, ANTE_ROOT, s, rules, CFG).ok


@settings(max_examples=40)
@given(st.data())
def test_simplify_is_an_equivalence(rulesets, data):
    rules = rulesets["k-tense"]
    f = data.draw(formulas(rules.sig, 3))
    s = simplify(f, rules.sig)
    assert prove(parse_sequent(f"{show(f)} |- {show(s)}", rules.sig), rules, CFG).status == "Proved"
    assert prove(parse_sequent(f"{show(s)} |- {show(f)}", rules.sig), rules, CFG).status == "Proved"
    assert signed_vars(s, rules.sig).pos <= signed_vars(f, rules.sig).pos
