import pytest
from hypothesis import given
from hypothesis import strategies as st

from ordsat.automaton import (OmegaPower, SimpleOrdinalAutomaton, Single, Word, abstraction,
                              is_accepting, validate_run)
from ordsat.emptiness import (Base, LimitClose, Limits, ResourceLimit, TopDown,
                              check_nonempty, check_nonempty_topdown, derivation_dump,
                              extract_witness, finite_runs, path_topdown, saturate, stage_cap)
from ordsat.oracle import gen_automaton, small_corpus
from ordsat.ordinal import Ordinal
from ordsat.translate import FormulaAutomaton

from conftest import A, AB, loop_variant

W = Ordinal.omega_pow(1)


def test_loop_fixpoint(loop_aut):
    t = saturate(loop_aut)
    assert t.triples() == [(A, A, A)]
    assert t.at_stage(0) == {(A, A, A)}
    assert isinstance(t.deriv[(A, A, A)], Base)


def test_two_cycle_composition():
    q1, q2 = 0b011, 0b101
    aut = SimpleOrdinalAutomaton(["a", "b", "c"], [q1, q2], [(q1, q2), (q2, q1)], [], [q1], [], [])
    t = saturate(aut)
    assert (q1, q1 & q2, q1) in t
    assert t.stage[(q1, q1 & q2, q1)] == 1


def test_limit_rule_fires(two_loc_aut):
    t = saturate(two_loc_aut)
    assert (AB, A, A) in t
    how = t.deriv[(AB, A, A)]
    assert isinstance(how, LimitClose)
    assert how.y == AB and how.target == A


def test_nonempty_single(loop_aut):
    v = check_nonempty(loop_aut)
    assert v.nonempty and v.condition == "A0"
    assert v.witness == Single(A)


def test_nonempty_by_loop():
    aut = loop_variant(final=())
    v = check_nonempty(aut)
    assert v.nonempty and v.condition == "B"
    assert v.goal == ("B", None, (A, A, A))
    assert v.witness.length == W
    assert is_accepting(aut, v.witness)
    assert is_accepting(aut, OmegaPower(Word([A, A])))


def test_empty():
    assert not check_nonempty(loop_variant(final=(), fcal=())).nonempty


def test_empty_prefix_loop_needs_no_prefix_triple():
    # the only accepting runs loop on the initial location from the start
    b = 0b10
    aut = SimpleOrdinalAutomaton(["a", "b"], [A, b], [(A, A), (b, A)], [], [A], [], [A])
    v = check_nonempty(aut)
    assert v.condition == "B" and v.goal[1] is None
    assert validate_run(aut, v.witness).valid


def test_base_witness(two_loc_aut):
    t = saturate(two_loc_aut)
    w = extract_witness(t, (AB, AB, AB))
    assert w == Word([AB, AB])
    assert w.length == Ordinal.of(2)


def test_stage_one_limit_witness(two_loc_aut):
    t = saturate(two_loc_aut)
    w = extract_witness(t, (AB, A, A))
    assert t.stage[(AB, A, A)] == 1
    assert w.length < Ordinal.omega_pow(2)
    assert validate_run(two_loc_aut, w).valid
    assert abstraction(w) == (AB, A, A)


def test_missing_derivation(loop_aut):
    t = saturate(loop_aut)
    with pytest.raises(KeyError):
        extract_witness(t, (A, 0, A))


def test_topdown_examples(loop_aut, two_loc_aut):
    assert path_topdown(loop_aut, (A, A, A), 0)
    assert not path_topdown(two_loc_aut, (AB, A, A), 0)
    assert path_topdown(two_loc_aut, (AB, A, A), 1)
    with pytest.raises(ValueError):
        path_topdown(loop_aut, (A, A, A), stage_cap(loop_aut) + 1)
    with pytest.raises(ValueError):
        path_topdown(loop_aut, (A, A, A), -1)


def _topdown_stage(aut, engine, n):
    return {(q, a, q2) for q in aut.all_locations() for a, q2 in engine.succ(n, q)}


@pytest.mark.parametrize("seed", range(40))
def test_every_triple_has_a_witness(seed):
    aut = gen_automaton(seed, 1 + seed % 5)
    t = saturate(aut)
    for trip in t.triples():
        w = extract_witness(t, trip)
        assert validate_run(aut, w).valid
        assert abstraction(w) == trip
        assert w.length < Ordinal.omega_pow(t.stage[trip] + 1)
        assert trip[1] & trip[0] & trip[2] == trip[1]


@pytest.mark.parametrize("seed", range(40))
def test_stages_are_monotone_and_match_topdown(seed):
    aut = gen_automaton(1000 + seed, 1 + seed % 4)
    t = saturate(aut)
    engine = TopDown(aut)
    prev = set()
    for n in range(0, min(stage_cap(aut), t.stages + 2) + 1):
        cur = t.at_stage(n)
        assert prev <= cur
        assert cur == _topdown_stage(aut, engine, n)
        prev = cur
    assert t.stages <= 2 ** (3 * aut.basis_size) + 1


@given(st.integers(0, 10**6), st.integers(1, 4))
def test_verdicts_agree_and_witnesses_accept(seed, nb):
    aut = gen_automaton(seed, nb)
    v = check_nonempty(aut)
    assert v.nonempty == check_nonempty_topdown(aut).nonempty
    assert v.nonempty == check_nonempty(aut, early=True).nonempty
    if v.nonempty:
        assert validate_run(aut, v.witness).valid
        assert is_accepting(aut, v.witness)


@given(st.integers(0, 10**6), st.integers(1, 8))
def test_finite_runs_are_accepting(seed, n):
    aut = gen_automaton(seed, 3)
    r = finite_runs(aut, n)
    if r is not None:
        assert r.length == Ordinal.of(n)
        assert validate_run(aut, r).valid and is_accepting(aut, r)


def test_finite_runs_rejects_zero(loop_aut):
    with pytest.raises(ValueError):
        finite_runs(loop_aut, 0)


def test_caps_fail_deterministically():
    aut = gen_automaton(7, 4, max_locations=8, density=0.9)
    with pytest.raises(ResourceLimit):
        saturate(aut, limits=Limits(max_triples=3))
    with pytest.raises(ResourceLimit):
        saturate(aut, limits=Limits(max_locations=1))


def test_derivation_dump(two_loc_aut):
    dump = derivation_dump(saturate(two_loc_aut))
    rules = {d["rule"] for d in dump}
    assert rules == {"base", "limit"}
    assert all(set(d) >= {"triple", "stage", "rule"} for d in dump)


def test_relevant_bit_projection_keeps_verdict():
    # the solver projects all-sets onto the bits limit transitions read
    for f in small_corpus(max_closure=6):
        view = FormulaAutomaton(f)
        full = check_nonempty(view)
        proj = check_nonempty(view, mask=view.relevant_mask)
        assert full.nonempty == proj.nonempty
        assert full.nonempty == check_nonempty(view, mask=view.relevant_mask, early=True).nonempty
        if proj.nonempty:
            assert validate_run(view, proj.witness).valid and is_accepting(view, proj.witness)
