import itertools

import pytest
from hypothesis import given, strategies as st

from lei.signature import (
    CON,
    COV,
    Connective,
    ResidualLink,
    Signature,
    SignatureError,
    dual,
    format_signature,
    order_type,
    parse_signature,
    residual_closure,
    residual_order_type,
    show_order_type,
    validate,
)


def conn(name, kind, ot, **kw):
    ot = order_type(ot)
    return Connective(name, kind, len(ot), ot, **kw)


def sig_of(*cs):
    return Signature({c.name: c for c in cs})


def test_dual_examples():
    assert dual(order_type("+")) == order_type("-")
    assert dual(order_type("+-")) == order_type("-+")
    x = order_type("--+")
    assert dual(dual(x)) == x


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_dual_is_involution_exhaustive(n):
    for ot in itertools.product([COV, CON], repeat=n):
        assert dual(dual(ot)) == ot
        assert all(a is not b for a, b in zip(ot, dual(ot)))


def test_residual_order_types_worked_example():
    f = conn("f", "F", "+-")
    g = conn("g", "G", "-+")
    assert residual_order_type(f, 1) == ("G", order_type("++"))
    assert residual_order_type(f, 2) == ("F", order_type("+-"))
    assert residual_order_type(g, 1) == ("G", order_type("-+"))
    assert residual_order_type(g, 2) == ("F", order_type("++"))


def test_residual_of_antitone_g_stays_in_g():
    # an antitone coordinate gives a Galois residual of the same family
    g = conn("g", "G", "--")
    assert residual_order_type(g, 2) == ("G", order_type("--"))
    neg = conn("neg", "G", "-")
    assert residual_order_type(neg, 1) == ("G", order_type("-"))


def test_residual_coordinate_out_of_range():
    with pytest.raises(SignatureError):
        residual_order_type(conn("f", "F", "+"), 2)


order_types = st.lists(st.sampled_from([COV, CON]), min_size=1, max_size=3).map(tuple)


@given(order_types, st.sampled_from(["F", "G"]), st.data())
def test_residuation_is_an_involution_per_coordinate(ot, kind, data):
    i = data.draw(st.integers(1, len(ot)))
    c = Connective("c", kind, len(ot), ot)
    k1, ot1 = residual_order_type(c, i)
    back = residual_order_type(Connective("r", k1, len(ot1), ot1), i)
    assert back == (kind, ot)
    assert ot1[i - 1] is ot[i - 1]


FUNDAMENTAL = """
atoms p q
conn F dia 1 +
conn G neg 1 -
conn G box 1 +
residual sharp dia 1 blacksquare
residual flat box 1 blackdia
selfgalois neg 1
"""


def test_fundamental_closure_adds_nothing():
    sig = parse_signature(FUNDAMENTAL)
    closed = residual_closure(sig)
    assert set(closed.connectives) == {"dia", "neg", "box", "blacksquare", "blackdia"}
    assert {c.name for c in closed.connectives.values() if c.kind == "F"} == {"dia", "blackdia"}
    assert {c.name for c in closed.connectives.values() if c.kind == "G"} == {"neg", "box", "blacksquare"}
    assert not closed["blacksquare"].operational
    assert validate(closed) == []


def test_bare_diamond_gets_derived_residual():
    closed = residual_closure(sig_of(conn("dia", "F", "+")))
    r = closed["dia.sharp.1"]
    assert (r.kind, r.order_type, r.operational) == ("G", order_type("+"), False)
    assert r.residual_link == ResidualLink("dia", 1, False)


def test_lambek_residuals():
    closed = residual_closure(sig_of(conn("fuse", "F", "++")))
    a, b = closed["fuse.sharp.1"], closed["fuse.sharp.2"]
    assert (a.kind, show_order_type(a.order_type)) == ("G", "(1,∂)")
    assert (b.kind, show_order_type(b.order_type)) == ("G", "(∂,1)")


def test_closure_is_idempotent(presets):
    for p in presets.values():
        sig = p.signature
        assert residual_closure(sig) == sig


def test_residuals_keep_their_own_coordinate(presets):
    for p in presets.values():
        sig = p.signature
        for c in sig.primitives:
            for i in range(1, c.arity + 1):
                assert sig.residual(c.name, i).order_type[i - 1] is c.order_type[i - 1]


def test_validate_reports():
    assert validate(residual_closure(parse_signature(FUNDAMENTAL))) == []
    bad = Connective("f", "F", 2, order_type("+"))
    assert any(v.startswith("order-type length") for v in validate(sig_of(bad)))
    orphan = conn("r", "G", "+", residual_link=ResidualLink("ghost", 1, False))
    assert any(v.startswith("unresolved residual") for v in validate(sig_of(orphan)))


def test_conflicting_residuals_rejected():
    text = FUNDAMENTAL + "conn G other 1 +\nresidual sharp dia 1 other\n"
    with pytest.raises(SignatureError):
        residual_closure(parse_signature(text))


def test_parse_errors():
    with pytest.raises(SignatureError):
        parse_signature("conn H f 1 +")
    with pytest.raises(SignatureError):
        parse_signature("frobnicate")
    with pytest.raises(SignatureError):
        parse_signature("conn F f 1 x")


def test_format_round_trip(presets):
    for p in presets.values():
        again = residual_closure(parse_signature(format_signature(p.signature), p.signature.name))
        assert again == p.signature
