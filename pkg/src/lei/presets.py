"""Bundled logics: signature plus structural rule files."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .calculus import RuleSet, parse_rules
from .signature import Signature, parse_signature, residual_closure

PRESETS = {
    "lattice": ("lattice.lsig", None),
    "k-tense": ("k_tense.lsig", None),
    "fundamental": ("fundamental.lsig", "fundamental.lrul"),
    "tense-fundamental": ("tense_fundamental.lsig", "tense_fundamental.lrul"),
    "lambek": ("lambek.lsig", None),
}

# optional rule files shipped alongside the presets
EXTRA_RULES = {"geach": "geach.lrul"}


def data_text(filename: str) -> str:
    return resources.files("lei").joinpath("presets", filename).read_text(encoding="utf-8")


@dataclass(frozen=True)
class Preset:
    name: str
    signature: Signature
    rules_text: Optional[str]

    def user_rules(self) -> list:
        if self.rules_text is None:
            return []
        return parse_rules(self.rules_text, self.signature)

    def ruleset(self, include_cut: bool = False, extra: tuple = ()) -> RuleSet:
        return RuleSet(self.signature, tuple(self.user_rules()) + tuple(extra), include_cut)


def load_preset(name: str) -> Preset:
    try:
        sig_file, rule_file = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    sig = residual_closure(parse_signature(data_text(sig_file), name))
    rules = data_text(rule_file) if rule_file else None
    return Preset(name, sig, rules)


def load_signature(spec: str) -> Signature:
    """A preset name or a path to a ``.lsig`` file, residual-closed."""
    if spec in PRESETS:
        return load_preset(spec).signature
    path = Path(spec)
    return residual_closure(parse_signature(path.read_text(encoding="utf-8"), path.stem))


def load_rule_text(spec: str) -> str:
    if spec in EXTRA_RULES:
        return data_text(EXTRA_RULES[spec])
    if spec in PRESETS and PRESETS[spec][1]:
        return data_text(PRESETS[spec][1])
    return Path(spec).read_text(encoding="utf-8")
