"""``lei`` command-line front end.

Exit codes: 0 success / Proved / pass, 1 NotProved / fail, 2 usage or format
errors, 3 DepthExceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import demo
from .calculus import RuleError, RuleSet, classify_safety, parse_rules, validate_analytic
from .interpolate import ExtractionError, maehara, simplify, verify
from .oracle import find_interpolants, sorted_text
from .presets import PRESETS, EXTRA_RULES, load_preset, load_rule_text, load_signature
from .prover import DepthExceeded, Proved, SearchConfig, prove
from .signature import SignatureError, parse_signature, residual_closure, show_order_type, validate
from .syntax import ANTE_ROOT, Occurrence, ParseError, SortError, parse_formula, parse_sequent, show

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DEPTH = 0, 1, 2, 3


class UsageError(Exception):
    pass


def default_depth() -> int:
    raw = os.environ.get("LEI_DEPTH_DEFAULT", "64")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"LEI_DEPTH_DEFAULT must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError("LEI_DEPTH_DEFAULT must be at least 1")
    return value


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


def _ruleset(args) -> RuleSet:
    sig = load_signature(args.sig)
    user = []
    if args.sig in PRESETS:
        user.extend(load_preset(args.sig).user_rules())
    for spec in args.rules or ():
        user.extend(parse_rules(load_rule_text(spec), sig))
    return RuleSet(sig, tuple(user))


def _config(args) -> SearchConfig:
    depth = args.depth if args.depth is not None else default_depth()
    if depth < 1:
        raise UsageError("--depth must be at least 1")
    return SearchConfig(depth=depth)


def _occ(args) -> Occurrence:
    return Occurrence.parse(args.occ) if args.occ else ANTE_ROOT


def cmd_sig_check(args, out) -> int:
    text = Path(args.file).read_text(encoding="utf-8") if args.file not in PRESETS else None
    if text is None:
        sig = load_signature(args.file)
    else:
        raw = parse_signature(text, Path(args.file).stem)
        problems = [p for p in validate(raw) if not p.startswith("unresolved residual")]
        if problems:
            for p in problems:
                print(p, file=sys.stderr)
            return EXIT_USAGE
        sig = residual_closure(raw)
    for c in sig.connectives.values():
        tags = []
        if c.residual_link is not None:
            tags.append(f"residual of {c.residual_link.parent} at {c.residual_link.coord}")
        if c.self_residual is not None:
            tags.append(f"self-residual at {c.self_residual}")
        if not c.operational:
            tags.append("non-operational")
        extra = f" ({'; '.join(tags)})" if tags else ""
        out(f"{c.name}: {c.kind} {c.arity} {show_order_type(c.order_type)}{extra}")
    out("ok")
    return EXIT_OK


def _guess_sig(path: str) -> str:
    name = Path(path).name
    for preset, (_, rule_file) in PRESETS.items():
        if rule_file == name or path == preset:
            return preset
    if Path(name).stem in EXTRA_RULES or path in EXTRA_RULES:
        return "k-tense"
    raise UsageError(f"cannot infer a signature for {path}; pass --sig")


def cmd_rules_classify(args, out) -> int:
    sig = load_signature(args.sig or _guess_sig(args.file))
    rules = parse_rules(load_rule_text(args.file), sig)
    for r in rules:
        try:
            problems = validate_analytic(r)
        except RuleError as exc:
            problems = [str(exc)]
        analytic = "analytic" if not problems else "not analytic (" + "; ".join(problems) + ")"
        out(f"{r.name}: {analytic}, {classify_safety(r)}")
    return EXIT_OK


def cmd_prove(args, out) -> int:
    rules = _ruleset(args)
    cfg = _config(args)
    seq = parse_sequent(args.sequent, rules.sig)
    result = prove(seq, rules, cfg)
    out(result.status)
    if isinstance(result, Proved):
        if args.emit:
            Path(args.emit).write_text(result.derivation.dumps() + "\n", encoding="utf-8")
        return EXIT_OK
    return EXIT_DEPTH if isinstance(result, DepthExceeded) else EXIT_FAIL


def cmd_interpolate(args, out) -> int:
    rules = _ruleset(args)
    cfg = _config(args)
    seq = parse_sequent(args.sequent, rules.sig)
    result = prove(seq, rules, cfg)
    if not isinstance(result, Proved):
        print(f"sequent not proved: {result.status}", file=sys.stderr)
        return EXIT_DEPTH if isinstance(result, DepthExceeded) else EXIT_FAIL
    res = maehara(result.derivation, _occ(args), rules)
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    doc = res.to_json()
    doc["simplified"] = show(simplify(res.gamma, rules.sig))
    out(_dump(doc))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    rules = _ruleset(args)
    seq = parse_sequent(args.sequent, rules.sig)
    gamma = parse_formula(args.gamma, rules.sig, lstar=True)
    report = verify(seq, _occ(args), gamma, rules, _config(args))
    out(_dump(report.to_json()))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_oracle(args, out) -> int:
    rules = _ruleset(args)
    seq = parse_sequent(args.sequent, rules.sig)
    found = find_interpolants(seq, _occ(args), args.oracle_depth, rules, _config(args))
    for line in sorted_text(found):
        out(line)
    return EXIT_OK


def cmd_demo(args, out) -> int:
    if args.preset not in PRESETS:
        raise UsageError(f"unknown preset {args.preset!r}; choose from {', '.join(PRESETS)}")
    return EXIT_OK if demo.run(args.preset, out) else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lei", description="Display calculi for LE-logics with interpolant extraction.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sig = sub.add_parser("sig", help="signature tools")
    sig_sub = sig.add_subparsers(dest="action", required=True, parser_class=_Parser)
    chk = sig_sub.add_parser("check", help="validate a .lsig file")
    chk.add_argument("file")
    chk.set_defaults(func=cmd_sig_check)

    rules = sub.add_parser("rules", help="structural rule tools")
    rules_sub = rules.add_subparsers(dest="action", required=True, parser_class=_Parser)
    cls = rules_sub.add_parser("classify", help="classify the rules of a .lrul file")
    cls.add_argument("file")
    cls.add_argument("--sig")
    cls.set_defaults(func=cmd_rules_classify)

    def common(sp, depth=True):
        sp.add_argument("--sig", required=True, help="preset name or .lsig path")
        sp.add_argument("--rules", action="append", help="extra .lrul file or bundled rule set")
        if depth:
            sp.add_argument("--depth", type=int, default=None)
        sp.add_argument("sequent")

    pr = sub.add_parser("prove")
    common(pr)
    pr.add_argument("--emit", help="write the derivation as JSON")
    pr.set_defaults(func=cmd_prove)

    it = sub.add_parser("interpolate")
    common(it)
    it.add_argument("--occ", help="occurrence path such as ante.1.2")
    it.set_defaults(func=cmd_interpolate)

    vf = sub.add_parser("verify")
    common(vf)
    vf.add_argument("--gamma", required=True)
    vf.add_argument("--occ")
    vf.set_defaults(func=cmd_verify)

    orc = sub.add_parser("oracle")
    orc.add_argument("--sig", required=True)
    orc.add_argument("--rules", action="append")
    orc.add_argument("--depth", dest="oracle_depth", type=int, required=True, help="candidate depth bound")
    orc.add_argument("--search-depth", dest="depth", type=int, default=None)
    orc.add_argument("--occ")
    orc.add_argument("sequent")
    orc.set_defaults(func=cmd_oracle)

    dm = sub.add_parser("demo")
    dm.add_argument("preset")
    dm.set_defaults(func=cmd_demo)
    return p


def run(argv, out=print) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, SortError, SignatureError, RuleError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except ExtractionError as exc:
        print(f"extraction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    code = run(sys.argv[1:] if argv is None else argv)
    sys.exit(code)


if __name__ == "__main__":
    main()
