import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ordsat import formula as fm
from ordsat.automaton import SimpleOrdinalAutomaton

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# one line per acceptance criterion, filled by test_acceptance
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


A = 0b1  # basis {a}
AB = 0b11  # basis {a, b}


@pytest.fixture
def loop_aut():
    """B={a}, Q={{a}}, one next self-loop and limit transition ({a},{a})."""
    return SimpleOrdinalAutomaton(["a"], [A], [(A, A)], [(A, A)], [A], [A], [A])


def loop_variant(final=(A,), fcal=(A,), lim=((A, A),)):
    return SimpleOrdinalAutomaton(["a"], [A], [(A, A)], list(lim), [A], list(final), list(fcal))


@pytest.fixture
def two_loc_aut():
    """Q={{a},{a,b}}, next ({a,b},{a,b}), limit ({a,b},{a})."""
    return SimpleOrdinalAutomaton(["a", "b"], [A, AB], [(AB, AB)], [(AB, A)], [AB], [A], [])


def formulas(names=("p", "q"), max_leaves=6, past=True):
    leaf = st.sampled_from([fm.var(n) for n in names] + [fm.top()])
    ops = [fm.conj, fm.until] + ([fm.since] if past else [])

    def extend(children):
        return st.one_of(
            children.map(fm.neg),
            st.tuples(st.sampled_from(ops), children, children).map(lambda t: t[0](t[1], t[2])),
        )

    return st.recursive(leaf, extend, max_leaves=max_leaves)
