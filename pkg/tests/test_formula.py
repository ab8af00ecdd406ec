import pytest
from hypothesis import given
from hypothesis import strategies as st

from ordsat import formula as fm
from ordsat.formula import (FormulaSyntaxError, closure, conj, expand_derived, neg, parse,
                            since, size, to_text, top, until, var)

from conftest import formulas

p, q = var("p"), var("q")
false = neg(top())


def test_parse_conjunction():
    assert parse("p & !p") is conj(p, neg(p))


def test_double_negation_collapses():
    assert parse("!!p") is p
    assert neg(neg(q)) is q


def test_globally_expansion():
    assert parse("G p") is conj(p, neg(until(top(), neg(p))))


def test_next_and_previous():
    assert expand_derived("X", p) is until(false, p)
    assert expand_derived("X-", p) is since(false, p)
    assert parse("X p") is until(false, p)
    assert parse("X- p") is since(false, p)
    assert parse("false") is false


def test_eventually():
    assert expand_derived("F", p) is neg(conj(neg(p), neg(until(top(), p))))
    assert expand_derived("F+", p) is until(top(), p)
    assert expand_derived("G+", p) is neg(until(top(), neg(p)))


def test_unknown_operator():
    with pytest.raises(FormulaSyntaxError):
        expand_derived("H", p)


@pytest.mark.parametrize("text,n", [("p", 2), ("p U q", 6), ("p & p", 4)])
def test_closure_sizes(text, n):
    f = parse(text)
    assert size(f) == n
    assert len(closure(f)) == n


def test_closure_order_is_documented_layout():
    cl = closure(parse("p U q"))
    assert [to_text(f) for f in cl] == ["p", "!p", "q", "!q", "(p U q)", "!(p U q)"]
    for k, f in enumerate(cl.positives()):
        assert cl.formulas[2 * k + 1] is neg(f)


def test_precedence_and_associativity():
    assert parse("p U q U p") is until(p, until(q, p))
    assert parse("p & q | p") is parse("(p & q) | p")
    assert parse("p | q U p") is until(fm.disj(p, q), p)
    assert parse("p S q") is since(p, q)
    assert parse("G+ p & F+ q") is conj(fm.G_plus(p), fm.F_plus(q))


@pytest.mark.parametrize("bad", ["p &", "(p", "p q", "U p", "p @ q", ""])
def test_syntax_errors(bad):
    with pytest.raises(FormulaSyntaxError):
        parse(bad)


def test_syntax_error_reports_position():
    with pytest.raises(FormulaSyntaxError) as e:
        parse("p & # q")
    assert e.value.position == 4


@given(formulas())
def test_print_parse_identity(f):
    assert parse(to_text(f)) is f


@given(formulas())
def test_closure_is_monotone(f):
    cl = closure(f)
    for g in cl:
        assert set(closure(g)) <= set(cl)


@given(formulas())
def test_closure_has_both_polarities_once(f):
    cl = list(closure(f))
    assert len(cl) == len(set(cl))
    for g in cl:
        assert neg(g) in cl


@given(st.sampled_from(sorted(fm.DERIVED)), st.integers(1, 30))
def test_derived_operators_grow_linearly(op, k):
    f = p
    for _ in range(k):
        f = expand_derived(op, f)
    # G adds at most four closure pairs per application, so 8 elements
    assert size(f) <= 2 + 8 * k


def test_interning_shares_structure():
    a = until(conj(p, q), neg(p))
    b = parse("(p & q) U !p")
    assert a is b
    assert hash(a) == hash(b)
    with pytest.raises(AttributeError):
        a.kind = "x"


@given(formulas())
def test_text_length_matches_text(f):
    assert fm.text_length(f) == len(fm.to_text(f))


@given(formulas(), formulas())
def test_conjunction_closure_order_is_post_order(f, g):
    h = fm.conj(f, g)
    assert fm._postorder_positives(h) == fm._postorder_dfs(h)
