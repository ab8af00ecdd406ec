"""Ground truth that does not go through automata.

Finite models are evaluated by literally scanning positions; satisfiability
at a finite length is decided by enumerating every model of that length.
Length-w models given as ``u v^w`` are evaluated exactly by representing
the truth value of each subformula as an ultimately periodic sequence.

Also home to the seeded generators for formulas and automata used by the
tests, and the exhaustive small-formula corpus.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import formula as fm
from .automaton import SimpleOrdinalAutomaton, StandardOrdinalAutomaton, limit_candidates

Letter = FrozenSet[str]

ENUM_CAP_BITS = 20  # n * |vars| for exhaustive enumeration


@dataclass(frozen=True)
class FiniteModel:
    letters: Tuple[Letter, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("models have positive length")
        object.__setattr__(self, "letters", tuple(frozenset(x) for x in self.letters))

    def __len__(self):
        return len(self.letters)

    def to_json(self) -> list:
        return [sorted(x) for x in self.letters]


@dataclass(frozen=True)
class LassoModel:
    """The w-model ``prefix . loop . loop . ...``."""

    prefix: Tuple[Letter, ...]
    loop: Tuple[Letter, ...]

    def __post_init__(self):
        if not self.loop:
            raise ValueError("loop must be nonempty")
        object.__setattr__(self, "prefix", tuple(frozenset(x) for x in self.prefix))
        object.__setattr__(self, "loop", tuple(frozenset(x) for x in self.loop))

    def letter(self, i: int) -> Letter:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.loop[(i - len(self.prefix)) % len(self.loop)]

    def to_json(self) -> dict:
        return {"u": [sorted(x) for x in self.prefix], "v": [sorted(x) for x in self.loop]}


# finite models ----------------------------------------------------------------------

def _finite_table(phi: fm.Formula, letters: Sequence[Letter]) -> Dict[fm.Formula, List[bool]]:
    n = len(letters)
    val: Dict[fm.Formula, List[bool]] = {}

    def go(f: fm.Formula) -> List[bool]:
        if f in val:
            return val[f]
        k = f.kind
        if k == fm.VAR:
            out = [f.name in x for x in letters]
        elif k == fm.TRUE:
            out = [True] * n
        elif k == fm.NOT:
            out = [not v for v in go(f.left)]
        elif k == fm.AND:
            a, b = go(f.left), go(f.right)
            out = [x and y for x, y in zip(a, b)]
        elif k == fm.UNTIL:
            a, b = go(f.left), go(f.right)
            # some g in (i, n) with b at g and a strictly between
            out = [any(b[g] and all(a[h] for h in range(i + 1, g)) for g in range(i + 1, n))
                   for i in range(n)]
        else:
            a, b = go(f.left), go(f.right)
            # some g in [0, i) with b at g and a strictly between
            out = [any(b[g] and all(a[h] for h in range(g + 1, i)) for g in range(i))
                   for i in range(n)]
        val[f] = out
        return out

    go(phi)
    return val


def eval_finite(phi: fm.Formula, model: FiniteModel, pos: int = 0) -> bool:
    if not 0 <= pos < len(model):
        raise IndexError(f"position {pos} outside a model of length {len(model)}")
    return _finite_table(phi, model.letters)[phi][pos]


class EnumerationCap(ValueError):
    pass


def _var_patterns(nbits: int) -> Tuple[int, List[int]]:
    """Bitsets over all 2^nbits models; pattern j has model m set iff bit j of m is."""
    count = 1 << nbits
    full = (1 << count) - 1
    pats = []
    for j in range(nbits):
        half = 1 << j
        unit = ((1 << half) - 1) << half
        period = half << 1
        pats.append(unit * (full // ((1 << period) - 1)))
    return full, pats


def _model_sets(phi: fm.Formula, n: int, names: Sequence[str]) -> List[int]:
    """For each position, the set of models (as a bitset) satisfying phi there."""
    k = len(names)
    full, pats = _var_patterns(n * k)
    col = {v: i for i, v in enumerate(names)}
    memo: Dict[fm.Formula, List[int]] = {}

    def go(f: fm.Formula) -> List[int]:
        hit = memo.get(f)
        if hit is not None:
            return hit
        kind = f.kind
        if kind == fm.VAR:
            j = col.get(f.name)
            out = [0] * n if j is None else [pats[i * k + j] for i in range(n)]
        elif kind == fm.TRUE:
            out = [full] * n
        elif kind == fm.NOT:
            out = [full & ~x for x in go(f.left)]
        elif kind == fm.AND:
            out = [x & y for x, y in zip(go(f.left), go(f.right))]
        elif kind == fm.UNTIL:
            a, b = go(f.left), go(f.right)
            out = []
            for i in range(n):
                acc, run = 0, full
                for g in range(i + 1, n):
                    acc |= b[g] & run
                    run &= a[g]
                out.append(acc)
        else:
            a, b = go(f.left), go(f.right)
            out = []
            for i in range(n):
                acc, run = 0, full
                for g in range(i - 1, -1, -1):
                    acc |= b[g] & run
                    run &= a[g]
                out.append(acc)
        memo[f] = out
        return out

    return go(phi)


def find_finite_model(phi: fm.Formula, n: int, names: Optional[Iterable[str]] = None) -> Optional[FiniteModel]:
    """Some model of length ``n`` over ``names`` satisfying phi at 0, or None."""
    if n < 1:
        raise ValueError("length must be positive")
    names = sorted(set(fm.variables(phi) if names is None else names))
    if n * len(names) > ENUM_CAP_BITS:
        raise EnumerationCap(f"{n} positions x {len(names)} variables exceeds {ENUM_CAP_BITS} bits")
    models = _model_sets(phi, n, names)[0]
    if not models:
        return None
    m = (models & -models).bit_length() - 1
    k = len(names)
    return FiniteModel(tuple(frozenset(v for j, v in enumerate(names) if m >> (i * k + j) & 1)
                             for i in range(n)))


def enum_sat_finite(phi: fm.Formula, n: int, names: Optional[Iterable[str]] = None) -> bool:
    return find_finite_model(phi, n, names) is not None


# lasso models -------------------------------------------------------------------------

class _Seq:
    """Ultimately periodic boolean sequence: ``head`` then ``cycle`` forever."""

    __slots__ = ("head", "cycle")

    def __init__(self, head: List[bool], cycle: List[bool]):
        self.head, self.cycle = head, cycle

    def at(self, i: int) -> bool:
        if i < len(self.head):
            return self.head[i]
        return self.cycle[(i - len(self.head)) % len(self.cycle)]

    def widen(self, p: int) -> "_Seq":
        return _Seq([self.at(i) for i in range(p)], [self.at(p + j) for j in range(len(self.cycle))])


def _lasso_table(phi: fm.Formula, m: LassoModel) -> Dict[fm.Formula, _Seq]:
    L = len(m.loop)
    val: Dict[fm.Formula, _Seq] = {}

    def align(a: _Seq, b: _Seq) -> Tuple[_Seq, _Seq]:
        p = max(len(a.head), len(b.head))
        return a.widen(p), b.widen(p)

    def go(f: fm.Formula) -> _Seq:
        if f in val:
            return val[f]
        k = f.kind
        if k == fm.VAR:
            out = _Seq([f.name in x for x in m.prefix], [f.name in x for x in m.loop])
        elif k == fm.TRUE:
            out = _Seq([], [True] * L)
        elif k == fm.NOT:
            s = go(f.left)
            out = _Seq([not v for v in s.head], [not v for v in s.cycle])
        elif k == fm.AND:
            a, b = align(go(f.left), go(f.right))
            out = _Seq([x and y for x, y in zip(a.head, b.head)], [x and y for x, y in zip(a.cycle, b.cycle)])
        elif k == fm.UNTIL:
            a, b = align(go(f.left), go(f.right))
            p = len(a.head)

            def holds(i: int) -> bool:
                # positions beyond p + L repeat, so one full cycle past i decides
                for g in range(i + 1, max(i, p) + L + 1):
                    if b.at(g):
                        return True
                    if not a.at(g):
                        return False
                return False

            out = _Seq([holds(i) for i in range(p)], [holds(p + j) for j in range(L)])
        else:
            a, b = align(go(f.left), go(f.right))
            p = len(a.head)
            # forward recurrence s(i+1) = b(i) or (a(i) and s(i)); the map over one
            # cycle is monotone, so the state is stable after one extra cycle
            states = [False]
            for i in range(p + 2 * L):
                s = states[-1]
                states.append(b.at(i) or (a.at(i) and s))
            out = _Seq(states[: p + L], states[p + L: p + 2 * L])
            assert all(out.at(i) == states[i] for i in range(p + 2 * L + 1))
        val[f] = out
        return out

    go(phi)
    return val


def eval_lasso(phi: fm.Formula, m: LassoModel, pos: int = 0) -> bool:
    """Truth of phi at ``pos`` in ``u v^w``; ``pos`` indexes into ``u v v``."""
    if not 0 <= pos < len(m.prefix) + 2 * len(m.loop):
        raise IndexError(pos)
    return _lasso_table(phi, m)[phi].at(pos)


def lasso_truth(phi: fm.Formula, m: LassoModel, upto: int) -> Dict[fm.Formula, List[bool]]:
    """Truth of every subformula at positions ``0 .. upto-1``."""
    table = _lasso_table(phi, m)
    return {f: [s.at(i) for i in range(upto)] for f, s in table.items()}


def lasso_settle(phi: fm.Formula, m: LassoModel) -> int:
    """A position from which every subformula is periodic with the loop length."""
    return max(len(s.head) for s in _lasso_table(phi, m).values())


# generators ---------------------------------------------------------------------------

def gen_formula(seed: int, size: int, names: Sequence[str] = ("p", "q"),
                temporal: bool = True, past: bool = True) -> fm.Formula:
    """Random formula with at most ``size`` distinct positive subformulas,
    so its closure has at most ``2 * size`` elements."""
    if size < 1:
        raise ValueError("size must be positive")
    rng = random.Random(seed)
    pool: List[fm.Formula] = []
    ops = [fm.conj]
    if temporal:
        ops.append(fm.until)
        if past:
            ops.append(fm.since)
    for step in range(size):
        if step == 0 or rng.random() < 0.2:
            leaf = fm.top() if rng.random() < 0.1 else fm.var(rng.choice(list(names)))
            if leaf not in pool:
                pool.append(leaf)
                continue
        a, b = rng.choice(pool), rng.choice(pool)
        if rng.random() < 0.4:
            a = fm.neg(a)
        if rng.random() < 0.4:
            b = fm.neg(b)
        f = rng.choice(ops)(a, b)
        if f not in pool:
            pool.append(f)
    root = pool[-1]
    return fm.neg(root) if rng.random() < 0.3 else root


def gen_automaton(seed: int, basis_size: int, max_locations: int = 8,
                  density: Optional[float] = None, letters: bool = False) -> SimpleOrdinalAutomaton:
    """Random simple ordinal automaton with explicit relations."""
    rng = random.Random(seed)
    full = (1 << basis_size) - 1
    space = list(range(full + 1))
    nq = rng.randint(1, min(len(space), max_locations))
    qs = sorted(rng.sample(space, nq))
    p = rng.uniform(0.15, 0.6) if density is None else density
    nxt = [(q, q2) for q in qs for q2 in qs if rng.random() < p]
    cands = limit_candidates(qs, full)
    lim = set()
    for _ in range(rng.randint(0, 2 * nq)):
        if rng.random() < 0.85:
            k = rng.randint(1, nq)
            y = full
            for q in rng.sample(qs, k):
                y &= q
        else:
            y = rng.randint(0, full)
        lim.add((y, rng.choice(qs)))
    initial = [q for q in qs if rng.random() < 0.4] or [rng.choice(qs)]
    final = [q for q in qs if rng.random() < 0.3]
    fcal = [y for y in cands if rng.random() < 0.3]
    lab = None
    if letters:
        lab = {e: frozenset(rng.sample(["a", "b"], rng.randint(1, 2))) for e in nxt}
    return SimpleOrdinalAutomaton([f"b{i}" for i in range(basis_size)], qs, nxt, lim,
                                  initial, final, fcal, letters=lab)


def gen_standard(seed: int, n_locations: int, alphabet: Sequence[str] = ("a", "b")) -> StandardOrdinalAutomaton:
    rng = random.Random(seed)
    qs = tuple(f"s{i}" for i in range(n_locations))
    nxt = frozenset((q, a, q2) for q in qs for q2 in qs for a in alphabet if rng.random() < 0.3)
    subsets = [frozenset(q for i, q in enumerate(qs) if m >> i & 1) for m in range(1, 1 << n_locations)]
    lim = frozenset((rng.choice(subsets), rng.choice(qs)) for _ in range(rng.randint(0, 2 * n_locations)))
    initial = frozenset(q for q in qs if rng.random() < 0.4) or frozenset({qs[0]})
    final = frozenset(q for q in qs if rng.random() < 0.3)
    fcal = frozenset(y for y in subsets if rng.random() < 0.3)
    return StandardOrdinalAutomaton(frozenset(alphabet), qs, nxt, lim, initial, final, fcal)


def gen_lasso(seed: int, names: Sequence[str] = ("p", "q"), max_prefix: int = 3,
              max_loop: int = 3) -> LassoModel:
    rng = random.Random(seed)

    def letter():
        return frozenset(v for v in names if rng.random() < 0.5)

    u = [letter() for _ in range(rng.randint(0, max_prefix))]
    v = [letter() for _ in range(rng.randint(1, max_loop))]
    return LassoModel(tuple(u), tuple(v))


def small_corpus(names: Sequence[str] = ("p", "q"), max_closure: int = 8,
                 with_top: bool = False, negated_roots: bool = True) -> List[fm.Formula]:
    """Every formula over ``names`` whose closure has at most ``max_closure``
    elements, in a deterministic order (by closure size, then text)."""
    limit = max_closure // 2
    atoms = [fm.var(v) for v in names] + ([fm.top()] if with_top else [])
    cl = {a: frozenset([a]) for a in atoms}
    levels: List[List[fm.Formula]] = [[], list(atoms)]
    everything = list(atoms)
    for k in range(2, limit + 1):
        new = {}
        for a in everything:
            for b in everything:
                u = cl[a] | cl[b]
                if len(u) + 1 != k:
                    continue
                for la in (a, fm.neg(a)):
                    for lb in (b, fm.neg(b)):
                        for mk in (fm.conj, fm.until, fm.since):
                            f = mk(la, lb)
                            if f not in cl and f not in new:
                                new[f] = u | {f}
        cl.update(new)
        level = sorted(new, key=fm.to_text)
        levels.append(level)
        everything.extend(level)
    out: List[fm.Formula] = []
    for level in levels:
        for f in level:
            out.append(f)
            if negated_roots:
                out.append(fm.neg(f))
    return out
