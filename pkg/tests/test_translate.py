import random

import pytest
from hypothesis import given

from ordsat import formula as fm
from ordsat.automaton import OmegaPower, Word, is_accepting, validate_run
from ordsat.emptiness import finite_runs
from ordsat.oracle import (FiniteModel, enum_sat_finite, eval_finite, gen_formula,
                           small_corpus)
from ordsat.translate import (FormulaAutomaton, TranslationLimit, build_automaton,
                              build_lazy_view, project_model)

from conftest import formulas

p, q = fm.var("p"), fm.var("q")


def _consistent(cl, m):
    """Maximal Boolean consistency, checked directly on the closure list."""
    bit = {f: bool(m >> i & 1) for i, f in enumerate(cl.formulas)}
    for f, v in bit.items():
        if bit[fm.neg(f)] == v:
            return False
        if f.kind == fm.TRUE and not v:
            return False
        if f.kind == fm.AND and v != (bit[f.left] and bit[f.right]):
            return False
    return True


def test_single_variable_automaton():
    aut = build_automaton(p)
    view = aut.view
    assert len(aut.locations) == 2
    with_p = view.mask_of(["p"])
    assert aut.initial == {with_p}
    assert aut.final == aut.locations
    assert aut.next_rel == {(a, b) for a in aut.locations for b in aut.locations}
    assert all(aut.in_fcal(y) for y in range(4))


def test_until_next_condition():
    aut = build_automaton(fm.until(p, q))
    view = aut.view
    pu = fm.until(p, q)
    for a, b in aut.next_rel:
        if view.contains(a, pu):
            assert view.contains(b, q) or (view.contains(b, p) and view.contains(b, pu))
    # and every such successor is present
    for a in aut.locations:
        if view.contains(a, pu) and not view.contains(a, q):
            for b in aut.locations:
                ok = view.contains(b, q) or (view.contains(b, p) and view.contains(b, pu))
                assert ((a, b) in aut.next_rel) == ok


def test_since_next_condition():
    s = fm.since(p, q)
    aut = build_automaton(fm.conj(s, q))
    view = aut.view
    for a, b in aut.next_rel:
        if view.contains(b, s):
            assert view.contains(a, q) or (view.contains(a, p) and view.contains(a, s))
        else:
            assert not (view.contains(a, q) or (view.contains(a, p) and view.contains(a, s)))


def test_initial_and_final_structure():
    f = fm.parse("(p S q) U (!p & (q S p))")
    aut = build_automaton(f)
    view = aut.view
    for loc in aut.initial:
        assert view.contains(loc, f)
        assert not loc & view.smask
    for loc in aut.final:
        assert not loc & view.umask


def test_limit_condition_one():
    view = build_lazy_view(fm.until(p, q))
    y = view.mask_of(["p", "!q", "(p U q)"])
    bad = view.mask_of(["!p", "!q", "!(p U q)"])
    assert not view.lim_ok(y, bad)
    good = view.mask_of(["!p", "q", "!(p U q)"])
    assert view.lim_ok(y, good)


def test_fcal_excludes_unfulfilled_until():
    view = build_lazy_view(fm.until(p, q))
    assert not view.in_fcal(view.mask_of(["p", "!q", "(p U q)"]))
    assert view.in_fcal(view.mask_of(["p", "q", "(p U q)"]))


def test_explicit_cap():
    with pytest.raises(TranslationLimit):
        build_automaton(fm.parse("X X X X X X X X X X p"), max_closure=20)


def test_locations_are_exactly_consistent_sets():
    for f in [fm.parse("p U (q S !p)"), fm.parse("G (p & X- q)"), fm.parse("true U false")]:
        view = FormulaAutomaton(f)
        brute = [m for m in range(1 << view.basis_size) if _consistent(view.closure, m)]
        assert view.enumerate_locations() == brute
        assert all(view.is_location(m) == (m in set(brute)) for m in range(1 << view.basis_size))


@pytest.mark.parametrize("seed", range(12))
def test_lazy_and_explicit_agree(seed):
    f = gen_formula(seed, 5)
    aut = build_automaton(f)
    view = FormulaAutomaton(f)
    locs = view.enumerate_locations()
    assert set(locs) == aut.locations
    for a in locs:
        for b in locs:
            assert ((a, b) in aut.next_rel) == view.next_ok(a, b)
        assert sorted(view.successors(a)) == sorted(b for b in locs if view.next_ok(a, b))
    rng = random.Random(seed)
    for _ in range(1000):
        y = rng.randrange(1 << view.basis_size)
        targets = set(view.lim_targets(y))
        assert targets == {b for b in locs if view.lim_ok(y, b)}
    assert {x for x in locs if view.is_initial(x)} == set(view.initial_locations())


def _accepting_words(view, max_len):
    out = []
    stack = [[x] for x in view.initial_locations()]
    while stack:
        path = stack.pop()
        if view.is_final(path[-1]):
            out.append(path)
        if len(path) < max_len:
            stack.extend(path + [s] for s in view.successors(path[-1]))
    return out


def test_finite_accepting_runs_are_models():
    corpus = small_corpus(max_closure=6)
    checked = 0
    for f in corpus:
        view = FormulaAutomaton(f)
        for path in _accepting_words(view, 4):
            model = project_model(Word(path), view)
            assert eval_finite(f, FiniteModel(model.items))
            checked += 1
    assert checked > 1000


@pytest.mark.parametrize("seed", range(10))
def test_finite_accepting_runs_are_models_long(seed):
    f = gen_formula(seed, 5)
    view = FormulaAutomaton(f)
    for path in _accepting_words(view, 6)[:300]:
        assert eval_finite(f, FiniteModel(project_model(Word(path), view).items))


def test_finite_satisfiability_matches_runs():
    for f in small_corpus(max_closure=6):
        view = FormulaAutomaton(f)
        for n in range(1, 5):
            assert enum_sat_finite(f, n, ("p", "q")) == (finite_runs(view, n) is not None)


@given(formulas(max_leaves=5))
def test_found_runs_validate(f):
    view = FormulaAutomaton(f)
    for n in (1, 3):
        r = finite_runs(view, n)
        if r is not None:
            assert validate_run(view, r).valid and is_accepting(view, r)


def test_projection_keeps_shape():
    view = FormulaAutomaton(fm.conj(p, q))
    loc = view.complete(view.mask_of(["p", "q"]))
    r = OmegaPower(Word([loc]))
    m = project_model(r, view)
    assert isinstance(m, OmegaPower)
    assert m.body.items == (frozenset({"p", "q"}),)
    assert project_model(Word([loc]), view, ["p"]).items == (frozenset({"p"}),)
