import pytest
from hypothesis import HealthCheck, settings

from lei.calculus import parse_rules
from lei.presets import PRESETS, load_preset, load_rule_text

settings.register_profile(
    "repo", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def presets():
    return {name: load_preset(name) for name in PRESETS}


@pytest.fixture(scope="session")
def rulesets(presets):
    return {name: p.ruleset() for name, p in presets.items()}


@pytest.fixture(scope="session")
def geach_rules(presets):
    p = presets["k-tense"]
    return p.ruleset(extra=tuple(parse_rules(load_rule_text("geach"), p.signature)))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
