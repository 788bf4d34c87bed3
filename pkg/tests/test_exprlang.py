from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfl import OMEGA, evaluate, make_cycle_rep, make_standard_rep, parse
from mfl.errors import ExprSyntaxError, InvalidGenerator
from mfl.exprlang import Identity, Product, QNode, Sum, to_text
from mfl.functor import functor_nm
from mfl.repcore import VectorSum

atoms = st.sampled_from(["s1", "s2", "r1", "t2", "I", "Q", "U", "R[0]", "R[2]", "f[1]", "f[3]"])
scalars = st.sampled_from(["", "2 ", "0.5 ", "i ", "3i ", "1.25 "])


def _expr(children):
    factor = st.one_of(atoms, children.map(lambda e: f"({e})"))
    factor = st.tuples(factor, st.sampled_from(["", "'", "^2", "''"])).map("".join)
    term = st.tuples(scalars, st.lists(factor, min_size=1, max_size=3).map(" ".join)).map("".join)
    return st.tuples(st.sampled_from(["", "- "]), term,
                     st.lists(st.tuples(st.sampled_from([" + ", " - "]), term).map("".join), max_size=2)
                     ).map(lambda t: t[0] + t[1] + "".join(t[2]))


texts = st.recursive(atoms, _expr, max_leaves=6)


@given(texts)
@settings(max_examples=150, deadline=None)
def test_parse_print_parse_is_stable(text):
    e = parse(text)
    assert parse(to_text(e)) == e


@given(texts)
@settings(max_examples=60, deadline=None)
def test_printed_text_evaluates_the_same(text):
    rep = make_cycle_rep(2, 2, -1)
    e = parse(text)
    again = parse(to_text(e))
    for x in rep.labels(2):
        assert evaluate(e, rep, x).close_to(evaluate(again, rep, x), 1e-9)


def test_parse_examples():
    e = parse("r2 r1' + r3 r1 r2'")
    assert isinstance(e, Sum) and len(e.terms) == 2 and all(isinstance(t, Product) for _, t in e.terms)
    assert parse("I - Q") == Sum(((1, Identity()), (-1, QNode())))


@pytest.mark.parametrize("text", ["s1 +", "(s1", "x2", "s-1", "R[", "s1 ) s2", ""])
def test_syntax_errors(text):
    with pytest.raises(ExprSyntaxError):
        parse(text)


def test_syntax_error_reports_position():
    with pytest.raises(ExprSyntaxError) as info:
        parse("s1 s2 x3")
    assert "6" in str(info.value)


def test_evaluation_examples():
    std2 = make_standard_rep(2)
    assert evaluate(parse("s1' s1"), std2, 7).coeffs == {7: 1}
    assert evaluate(parse("s1 s1' + s2 s2'"), std2, 7).coeffs == {7: 1}
    v = evaluate(parse("s2 (I - Q) + R[1]"), make_cycle_rep(2, 2, -1), OMEGA)
    assert v.coeffs == {OMEGA: -1}


def test_display_of_F_prime_matches_functor():
    for rep in (make_standard_rep(2), make_cycle_rep(2, 2, 1j), make_cycle_rep(2, 1, -1)):
        img = functor_nm(2, rep)
        for x in rep.labels(4):
            got = evaluate(parse("s2 (I - Q) + R[1]"), rep, x)
            assert got.close_to(VectorSum.from_term(img.apply(2, x)), 1e-9)


def test_linearity():
    rep = make_cycle_rep(3, 3, 1j)
    e = parse("s1 s3' + 2 Q - i R[1]'")
    v = VectorSum({(1,): 2.0, (2, 1): -1j})
    want = evaluate(e, rep, (1,)).scaled(2.0) + evaluate(e, rep, (2, 1)).scaled(-1j)
    assert evaluate(e, rep, v).close_to(want, 1e-12)


def test_signature_errors():
    with pytest.raises(InvalidGenerator):
        evaluate(parse("s3"), make_standard_rep(2), 0)
