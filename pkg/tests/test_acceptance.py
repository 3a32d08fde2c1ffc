"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line with the measured value and the
tolerance; conftest prints them together at the end of the run.
"""

import json
import random
import time
from functools import lru_cache
from pathlib import Path

from lei.calculus import classify_safety, parse_rules
from lei.corpus import generate
from lei.display import closure, isolate, plug
from lei.interpolate import lyndon, simplify, verify
from lei.oracle import admits
from lei.presets import load_preset, load_rule_text
from lei.prover import DepthExceeded, Proved, SearchConfig, prove
from lei.signature import CON, COV, Connective, residual_order_type, show_order_type
from lei.syntax import (
    ANTE_ROOT,
    BOT,
    Atom,
    Join,
    Leaf,
    Meet,
    Sequent,
    connectives_in,
    parse_sequent,
    replace_at,
    show,
    signed_vars,
    structure_sort,
    sort_at,
    weight,
)

from cut_suite import CUT_CASES, cut_derivation
from fundamental_cases import FUNDAMENTAL_CASES
from helpers import random_occurrence, random_sequent, random_structure

GOLDEN = Path(__file__).parent / "golden"
CFG = SearchConfig(depth=16)
RESULTS: list = []


def record(n: int, ok: bool, what: str, measured: str, tolerance: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {what} | measured {measured} | tolerance {tolerance}"
    RESULTS.append(line)
    print(line)


@lru_cache(maxsize=None)
def corpus(name: str, extra: str = ""):
    preset = load_preset(name)
    more = tuple(parse_rules(load_rule_text(extra), preset.signature)) if extra else ()
    rules = preset.ruleset(extra=more)
    return rules, generate(rules, 500, seed=2024, max_weight=20)


def test_criterion_1_residual_arithmetic():
    t = time.perf_counter()
    f = Connective("f", "F", 2, (COV, CON))
    g = Connective("g", "G", 2, (CON, COV))
    got = [show_order_type(residual_order_type(c, i)[1]) for c in (f, g) for i in (1, 2)]
    want = ["(1,1)", "(1,∂)", "(∂,1)", "(1,1)"]
    dt = time.perf_counter() - t
    ok = got == want and dt < 1
    record(1, ok, "residual order types", f"{' '.join(got)} in {dt:.3f}s", f"exact {' '.join(want)}, < 1 s")
    assert ok


def test_criterion_2_rule_classification():
    t = time.perf_counter()
    ktense = load_preset("k-tense").signature
    fund = load_preset("fundamental")
    got = {r.name: classify_safety(r) for r in parse_rules(load_rule_text("geach"), ktense)}
    got.update({r.name: classify_safety(r) for r in fund.user_rules()})
    want = {"dia_box": "interpolation-safe", "dia_neg": "interpolation-safe",
            "neg_contradiction": "not-special"}
    dt = time.perf_counter() - t
    ok = got == want and dt < 1
    record(2, ok, "rule classification", f"{got} in {dt:.3f}s", "exact, < 1 s")
    assert ok


def test_criterion_3_soundness_corpus():
    t = time.perf_counter()
    counts, failures = {}, []
    for name in ["fundamental", "tense-fundamental", "k-tense", "lattice"]:
        rules, items = corpus(name)
        counts[name] = len(items)
        for item in items:
            res = lyndon(item.derivation, rules)
            v = verify(item.sequent, ANTE_ROOT, res.gamma, rules, CFG)
            if not v.ok:
                failures.append(f"{name}: {show(item.sequent)}: {v.describe()}")
    dt = time.perf_counter() - t
    total = sum(counts.values())
    ok = not failures and min(counts.values()) >= 500 and dt < 120
    record(3, ok, "lyndon + verify on random corpora",
           f"{total - len(failures)}/{total} verified {counts} in {dt:.1f}s",
           ">= 500 per preset, 100%, < 120 s")
    assert ok, failures[:5]


def _lattice_formulas():
    level = [Atom("p"), Atom("q")]
    for _ in range(2):
        nxt, seen = list(level), set(level)
        for a in level:
            for b in level:
                for f in (Meet(a, b), Join(a, b)):
                    if f not in seen:
                        seen.add(f)
                        nxt.append(f)
        level = nxt
    return level


def test_criterion_4_oracle_cross_check():
    t = time.perf_counter()
    misses = []
    checked = 0
    lattice = load_preset("lattice").ruleset()
    fs = _lattice_formulas()
    for a in fs:
        for b in fs:
            seq = Sequent(Leaf(a), Leaf(b))
            r = prove(seq, lattice, CFG)
            if not isinstance(r, Proved):
                continue
            checked += 1
            gamma = simplify(lyndon(r.derivation, lattice).gamma, lattice.sig)
            if not admits(seq, ANTE_ROOT, gamma, 3, lattice, CFG):
                misses.append(f"lattice {show(seq)}: {show(gamma)}")
    fund = load_preset("fundamental").ruleset()
    for text in FUNDAMENTAL_CASES:
        seq = parse_sequent(text, fund.sig)
        r = prove(seq, fund, CFG)
        if not isinstance(r, Proved):
            misses.append(f"fundamental {text}: {r.status}")
            continue
        checked += 1
        gamma = simplify(lyndon(r.derivation, fund).gamma, fund.sig)
        if not admits(seq, ANTE_ROOT, gamma, 3, fund, CFG):
            misses.append(f"fundamental {text}: {show(gamma)}")
    dt = time.perf_counter() - t
    ok = not misses and dt < 300
    record(4, ok, "simplified interpolant inside the depth-3 oracle set",
           f"{checked - len(misses)}/{checked} ({len(fs)} lattice formulas, "
           f"{len(FUNDAMENTAL_CASES)} fundamental cases) in {dt:.1f}s", "100%, < 300 s")
    assert ok, misses[:5]


def test_criterion_5_language_restriction():
    t = time.perf_counter()
    bad, checked = [], 0
    fired = sum("dia_box" in i.derivation.rules_used() for i in corpus("k-tense", "geach")[1])
    for extra in ("", "geach"):
        rules, items = corpus("k-tense", extra)
        for item in items:
            res = lyndon(item.derivation, rules)
            nonop = {n for n in connectives_in(res.gamma) if not rules.sig[n].operational}
            checked += 1
            if nonop:
                bad.append(f"{show(item.sequent)}: {show(res.gamma)}")
    dt = time.perf_counter() - t
    ok = not bad and fired > 0
    record(5, ok, "interpolants on k-tense (+ safe geach rule) use operational connectives only",
           f"{checked - len(bad)}/{checked}, geach rule in {fired} derivations, in {dt:.1f}s", "100%")
    assert ok, bad[:5]


def test_criterion_6_display_property():
    t = time.perf_counter()
    rng = random.Random(6)
    bad, pairs, sym = [], 0, 0
    for name in ["lattice", "k-tense", "fundamental", "tense-fundamental", "lambek"]:
        rules = load_preset(name).ruleset()
        sig = rules.sig
        for _ in range(1000):
            seq = random_sequent(rng, sig, 3)
            occ = random_occurrence(rng, seq)
            new = random_structure(rng, sig, sort_at(seq, occ, sig), 2)
            assert structure_sort(new) in (None, sort_at(seq, occ, sig))
            got = plug(isolate(seq, occ, rules), new, rules)
            pairs += 1
            if got != replace_at(seq, occ, new):
                bad.append(f"{name}: {show(seq)} at {occ}")
        for _ in range(200):
            seq = random_sequent(rng, sig, 3)
            other = rng.choice(sorted(closure(seq, rules), key=show))
            sym += 1
            if seq not in closure(other, rules):
                bad.append(f"{name}: symmetry {show(seq)} / {show(other)}")
    dt = time.perf_counter() - t
    ok = not bad and dt < 30
    record(6, ok, "plug(isolate) = substitution; closure symmetry",
           f"{pairs} plug pairs, {sym} symmetry pairs, {len(bad)} failures in {dt:.1f}s",
           "100%, < 30 s")
    assert ok, bad[:5]


def _goals(rng, rules, n):
    from lei.corpus import random_formula

    out = []
    while len(out) < n:
        g = Sequent(Leaf(random_formula(rng, rules.sig, ["p", "q", "r"], 4)),
                    Leaf(random_formula(rng, rules.sig, ["p", "q", "r"], 4)))
        if 8 <= weight(g) <= 20:
            out.append(g)
    return out


def test_criterion_7_termination_and_cut_admissibility():
    t = time.perf_counter()
    rng = random.Random(7)
    no_user = SearchConfig(depth=64, structural=frozenset())
    exceeded, statuses = [], {}
    for name in ["lattice", "k-tense"]:
        rules = load_preset(name).ruleset()
        for goal in _goals(rng, rules, 500):
            r = prove(goal, rules, no_user)
            statuses[r.status] = statuses.get(r.status, 0) + 1
            if isinstance(r, DepthExceeded):
                exceeded.append(show(goal))
    cut_ok = 0
    for preset, ante, cut, succ in CUT_CASES:
        rules = load_preset(preset).ruleset()
        d = cut_derivation(rules, ante, cut, succ)
        r = prove(d.root, rules, CFG)
        if isinstance(r, Proved) and "Cut" not in r.derivation.rules_used():
            cut_ok += 1
    dt = time.perf_counter() - t
    ok = not exceeded and cut_ok == len(CUT_CASES) and dt < 60
    record(7, ok, "termination without structural rules; cut-free reproof",
           f"1000 goals {statuses}, cut suite {cut_ok}/{len(CUT_CASES)} in {dt:.1f}s",
           "no DepthExceeded, 10/10, < 60 s")
    assert ok, exceeded[:5]


def test_criterion_8_fundamental_showcase():
    from lei import cli

    t = time.perf_counter()
    rules = load_preset("fundamental").ruleset()
    checks = []
    contra = parse_sequent(r"(p /\ neg(p)) |- q", rules.sig)
    res = lyndon(prove(contra, rules, CFG).derivation, rules)
    checks.append(simplify(res.gamma, rules.sig) == BOT)
    show_seq = parse_sequent("dia(neg(p)) |- neg(box(p))", rules.sig)
    res2 = lyndon(prove(show_seq, rules, CFG).derivation, rules)
    sv = signed_vars(res2.gamma, rules.sig)
    checks.append(verify(show_seq, ANTE_ROOT, res2.gamma, rules, CFG).ok)
    checks.append(sv.neg <= {"p"} and not sv.pos)
    for name, text in [("fundamental_contradiction", r"(p /\ neg(p)) |- q"),
                       ("fundamental_dia_neg", "dia(neg(p)) |- neg(box(p))")]:
        lines = []
        cli.run(["interpolate", "--sig", "fundamental", text], out=lines.append)
        golden = (GOLDEN / f"{name}.json").read_text(encoding="utf-8")
        checks.append("\n".join(lines) + "\n" == golden)
        json.loads(golden)
    dt = time.perf_counter() - t
    ok = all(checks) and dt < 5
    record(8, ok, "fundamental showcase",
           f"gamma {show(res.gamma)}; gamma {show(res2.gamma)} with Var+ {sorted(sv.pos)}, "
           f"Var- {sorted(sv.neg)}; goldens {checks[-2:]} in {dt:.2f}s",
           "gamma = bot, verified, Var- in {p}, Var+ empty, golden exact, < 5 s")
    assert ok
