import pytest
from hypothesis import given
from hypothesis import strategies as st

from ordsat import formula as fm
from ordsat.oracle import FiniteModel, LassoModel, enum_sat_finite, eval_finite, eval_lasso
from ordsat.ordinal import (OMEGA, Ordinal, OrdinalCode, code_of, def_formula, format_code,
                            format_ordinal, n_equivalent, ord_add, ord_cmp, ord_mul_omega,
                            ordinal_of_code, parse_code, parse_ordinal, theta, trunc)

W = Ordinal.omega_pow(1)


def w(k, c=1):
    return Ordinal.omega_pow(k, c)


ordinals = st.lists(st.tuples(st.integers(0, 5), st.integers(1, 4)), max_size=4).map(
    lambda ts: Ordinal(tuple(sorted(dict(ts).items(), reverse=True))))
positive = ordinals.filter(lambda a: not a.is_zero())


def test_parse_ordinal():
    assert parse_ordinal("w^2*3+w+2").terms == ((2, 3), (1, 1), (0, 2))
    assert parse_ordinal("0").terms == ()
    assert parse_ordinal("w") == W
    with pytest.raises(ValueError):
        parse_ordinal("w^2+w^2")
    with pytest.raises(ValueError):
        parse_ordinal("w*0")


def test_addition_absorbs_finite_left_summands():
    assert ord_add(W, 1) == W + 1
    assert format_ordinal(ord_add(W, 1)) == "w+1"
    assert ord_add(1, W) == W


def test_compare():
    assert ord_cmp(w(2), W * 5) > 0
    assert ord_cmp(W * 5, w(2)) < 0
    assert ord_cmp(W + 3, W + 3) == 0


def test_mul_omega_against_supremum_of_multiples():
    # a*w is the least ordinal above every a*n; a*n is n-fold addition
    for a in [W + 3, w(2) * 2 + W, Ordinal.of(7), w(3) + 1]:
        target = ord_mul_omega(a)
        multiples = []
        acc = Ordinal()
        for _ in range(12):
            acc = acc + a
            multiples.append(acc)
        assert all(m < target for m in multiples)
        k = a.degree()
        # every beta below w^(k+1) has leading term w^k*c with some c, beaten by a*(c+1)
        for c in range(1, 11):
            beta = w(k, c) + w(0, 5)
            assert any(beta < m for m in multiples)
    assert ord_mul_omega(W + 3) == w(2)


@pytest.mark.parametrize("alpha,expected", [(w(3), w(2)), (w(2) + W, w(2) + W), (w(2, 2), w(2))])
def test_truncation_examples(alpha, expected):
    assert trunc(2, alpha) == expected


def test_truncation_of_zero_fails():
    with pytest.raises(ValueError):
        trunc(2, Ordinal())


@given(st.integers(0, 6), positive)
def test_truncation_range_and_idempotence(n, a):
    t = trunc(n, a)
    assert Ordinal() < t < w(n, 2)
    assert trunc(n, t) == t


@given(st.integers(1, 5), positive, positive)
def test_n_equivalence_is_equality_of_truncations(n, a, b):
    assert n_equivalent(n, a, b) == (trunc(n, a) == trunc(n, b))
    if trunc(n, a) == trunc(n, b):
        assert n_equivalent(n, b, a)


def test_code_examples():
    assert code_of(parse_ordinal("w^2*3+w+2"), OMEGA) == OrdinalCode(OMEGA, -2, (3, 1, 2))
    assert code_of(5, OMEGA) == OrdinalCode(OMEGA, -2, (5,))
    assert code_of(w(3), 2) == OrdinalCode(2, -1, -3)


@given(ordinals, st.integers(1, 8))
def test_code_round_trip(a, extra):
    m = a.degree() + extra
    assert ordinal_of_code(code_of(a, m)) == a
    assert ordinal_of_code(code_of(a, OMEGA)) == a


@given(positive, st.integers(1, 6))
def test_code_truncation_matches_cnf(a, n):
    assert trunc(n, code_of(a, OMEGA)) == trunc(n, a)
    assert trunc(n, code_of(a, n + 2)) == trunc(n, a)


def test_code_text_round_trip():
    c = OrdinalCode(4, -1, (2, 0, 1))
    assert format_code(c) == "(-1, [2,0,1])"
    assert parse_code(format_code(c), 4) == c
    assert parse_code("(-2, -)", "w") == OrdinalCode(OMEGA, -2, -3)


def test_code_invariants():
    with pytest.raises(ValueError):
        OrdinalCode(2, -1, (1, 0, 0))  # remainder not below w^2
    with pytest.raises(ValueError):
        OrdinalCode(2, 0, -3)


def test_theta_instances():
    assert theta(0) is fm.top()
    assert theta(1) is fm.conj(fm.top(), fm.neg(fm.since(fm.neg(fm.top()), fm.top())))


def test_theta_one_marks_position_zero_only():
    th = theta(1)
    for n in range(1, 7):
        m = FiniteModel(tuple(frozenset() for _ in range(n)))
        assert [eval_finite(th, m, i) for i in range(n)] == [i == 0 for i in range(n)]
    lasso = LassoModel((), (frozenset(),))
    assert [eval_lasso(th, lasso, i) for i in range(2)] == [True, False]


def test_theta_size_linear():
    assert [fm.size(theta(i)) for i in range(5)] == [2 + 4 * i for i in range(5)]


def test_def_formula_clauses():
    f_plus_top = fm.F_plus(fm.top())
    assert def_formula(1) is fm.neg(f_plus_top)
    assert def_formula(W) is fm.conj(
        fm.conj(fm.G_plus(fm.X_prev(fm.top())), f_plus_top), fm.G_plus(fm.X(fm.top())))
    th = theta(1)
    assert def_formula(W * 2) is fm.until(fm.neg(th), fm.conj(th, def_formula(W)))
    assert def_formula(3) is fm.X(fm.X(def_formula(1)))
    th3 = theta(3)
    assert def_formula(w(3)) is fm.conj(fm.G_plus(fm.neg(th3)), fm.G(fm.F_plus(theta(2))))


def test_def_formula_rejects_zero():
    with pytest.raises(ValueError):
        def_formula(0)


@pytest.mark.parametrize("n", range(1, 6))
def test_def_finite_characterisation(n):
    assert [enum_sat_finite(def_formula(n), m, ()) for m in range(1, 8)] == [m == n for m in range(1, 8)]


def test_def_size_grows_with_weight():
    sizes = [fm.size(def_formula(w(2, c))) for c in range(1, 6)]
    steps = {b - a for a, b in zip(sizes, sizes[1:])}
    assert max(steps) <= 6
