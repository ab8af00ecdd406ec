"""Nonemptiness of simple ordinal automata by saturation of abstraction triples.

A triple ``(q, A, q')`` abstracts a successor-length path: first location,
the set of basis elements present everywhere, last location. Stage 0 holds
the next edges; each later stage closes the previous one under composition
and then adds limit triples (prefix path, a loop repeated w times, one limit
step). Every triple carries the derivation that created it, from which a
finitely presented run is rebuilt.

The top-down engine evaluates the same stage relations by memoised
recursion on the stage number and serves as an independent cross-check.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from .automaton import OmegaPower, RunExpr, Single, Word, concat

Triple = Tuple[int, int, int]


class ResourceLimit(RuntimeError):
    """A configured cap (stages, triples, locations, wall clock) was hit."""


# derivations ------------------------------------------------------------------------

@dataclass(frozen=True)
class Base:
    src: int
    dst: int


@dataclass(frozen=True)
class Compose:
    parts: Tuple[Triple, ...]


@dataclass(frozen=True)
class LimitClose:
    prefix: Triple
    loop: Triple
    y: int
    target: int


@dataclass
class Limits:
    max_stages: Optional[int] = None
    max_triples: Optional[int] = None
    max_locations: Optional[int] = None
    timeout_ms: Optional[int] = None


@dataclass
class RelTable:
    """Saturated triple relation with stage labels and derivations.

    ``stage[t]`` is the first stage whose relation contains ``t``. For
    explicit automata the labels are exact; for lazily explored views,
    locations found late enter at the stage they are found, so labels are
    upper bounds.
    """

    aut: object
    mask: int
    stage: Dict[Triple, int] = field(default_factory=dict)
    deriv: Dict[Triple, object] = field(default_factory=dict)
    by_src: Dict[int, Dict[int, Set[int]]] = field(default_factory=dict)
    locations: Set[int] = field(default_factory=set)
    stages: int = 0
    exact: bool = True
    gens: Dict[int, Dict[int, List[Triple]]] = field(default_factory=dict)
    gen_set: Set[Triple] = field(default_factory=set)
    lim_seen: Set[Triple] = field(default_factory=set)

    def __contains__(self, t) -> bool:
        return t in self.stage

    def __len__(self):
        return len(self.stage)

    def triples(self) -> List[Triple]:
        return sorted(self.stage)

    def at_stage(self, i: int) -> Set[Triple]:
        """The relation R_i (clamped to the fixpoint beyond the last stage)."""
        return {t for t, s in self.stage.items() if s <= i}

    def loops(self, q: int) -> Set[int]:
        return self.by_src.get(q, {}).get(q, set())

    def by_dst(self) -> Dict[int, Dict[int, Set[int]]]:
        out: Dict[int, Dict[int, Set[int]]] = {}
        for q, row in self.by_src.items():
            for q2, sets in row.items():
                out.setdefault(q2, {})[q] = sets
        return out

    def _add(self, t: Triple, stage: int, how) -> bool:
        if t in self.stage:
            return False
        self.stage[t] = stage
        self.deriv[t] = how
        self.by_src.setdefault(t[0], {}).setdefault(t[2], set()).add(t[1])
        return True


class _Budget:
    def __init__(self, limits: Optional[Limits]):
        self.limits = limits or Limits()
        t = self.limits.timeout_ms
        self.deadline = None if t is None else time.monotonic() + t / 1000.0
        self.ticks = 0

    def tick(self):
        self.ticks += 1
        if self.deadline is not None and self.ticks & 0x3FF == 0:
            self.check_time()

    def check_time(self):
        if time.monotonic() > self.deadline:
            raise ResourceLimit(f"timeout of {self.limits.timeout_ms} ms exceeded")

    def triples(self, n: int):
        cap = self.limits.max_triples
        if cap is not None and n > cap:
            raise ResourceLimit(f"more than {cap} triples")

    def locations(self, n: int):
        cap = self.limits.max_locations
        if cap is not None and n > cap:
            raise ResourceLimit(f"more than {cap} locations")

    def stages(self, n: int):
        cap = self.limits.max_stages
        if cap is not None and n > cap:
            raise ResourceLimit(f"more than {cap} stages")


def _full(aut) -> int:
    return getattr(aut, "full", (1 << aut.basis_size) - 1)


def saturate(aut, mask: Optional[int] = None, limits: Optional[Limits] = None,
             until=None) -> RelTable:
    """Compute the fixpoint of the stage relations.

    ``mask`` projects every all-set onto the bits the automaton's limit
    transitions and limit acceptance actually read; the default keeps the
    whole basis. ``until(table)`` may stop the iteration early after any
    closure by returning true.
    """
    budget = _Budget(limits)
    if mask is None:
        mask = _full(aut)
    table = RelTable(aut, mask)
    explicit = aut.all_locations()
    table.exact = explicit is not None
    pending: List[int] = []

    def discover(q: int):
        if q not in table.locations:
            table.locations.add(q)
            pending.append(q)
            budget.locations(len(table.locations))

    for q in (explicit if explicit is not None else aut.initial_locations()):
        discover(q)

    work: List[Triple] = []
    i = 0
    while True:
        budget.stages(i)
        # next edges of newly found locations join the current stage
        while pending:
            q = pending.pop()
            for s in aut.successors(q):
                discover(s)
                t = (q, q & s & mask, s)
                if table._add(t, i, Base(q, s)):
                    work.append(t)
        grew = _close(table, work, i + 1, budget)
        if until is not None and until(table):
            table.stages = i + 1 if grew else i
            return table
        added = _limit_step(table, i + 1, budget, discover)
        if not added and not pending:
            table.stages = i + 1 if grew else i
            return table
        work = added
        i += 1


def _close(table: RelTable, work: List[Triple], stage: int, budget: _Budget) -> bool:
    """Close under composition.

    Every composite is a chain of generators (next edges and limit triples),
    so it suffices to extend table triples on the right by generators. A
    generator arriving late is additionally prefixed once by every table
    triple that ends at its source.
    """
    gens = table.gens
    stages, deriv, by_src = table.stage, table.deriv, table.by_src
    grew = False
    late = [g for g in work if g not in table.gen_set]
    into = table.by_dst() if late and len(stages) > len(late) else {}
    for g in late:
        table.gen_set.add(g)
        gens.setdefault(g[0], {}).setdefault(g[2], []).append(g)

    # delta sets waiting for right extension, per (source, target) pair
    pending: Dict[Tuple[int, int], Dict[int, Triple]] = {}
    keys: List[Tuple[int, int]] = []

    def slot_for(q, q3):
        slot = pending.get((q, q3))
        if slot is None:
            slot = pending[(q, q3)] = {}
            keys.append((q, q3))
        return slot

    for g in work:
        slot_for(g[0], g[2])[g[1]] = g
    for g in late:
        q, ga, q2 = g
        for q0, sets in into.get(q, {}).items():
            row = by_src[q0]
            cell = row.get(q2)
            if cell is None:
                cell = row[q2] = set()
            cand = {a0 & ga: a0 for a0 in sets}
            fresh = cand.keys() - cell
            if not fresh:
                continue
            grew = True
            cell |= fresh
            slot = slot_for(q0, q2)
            for na in sorted(fresh):
                u = (q0, na, q2)
                stages[u] = stage
                deriv[u] = Compose(((q0, cand[na], q), g))
                slot[na] = u

    check = budget.deadline is not None
    n = 0
    while keys:
        key = keys.pop()
        delta = pending.pop(key)
        q, q2 = key
        ext = gens.get(q2)
        if not ext:
            continue
        row = by_src[q]
        for q3, glist in ext.items():
            cell = row.get(q3)
            if cell is None:
                cell = row[q3] = set()
            if len(glist) == 1:
                g = glist[0]
                ga = g[1]
                cand = {a & ga: (a, g) for a in delta}
            else:
                cand = {a & g[1]: (a, g) for g in glist for a in delta}
            fresh = cand.keys() - cell
            if not fresh:
                continue
            grew = True
            cell |= fresh
            slot = slot_for(q, q3)
            for na in fresh:
                a, g = cand[na]
                u = (q, na, q3)
                stages[u] = stage
                deriv[u] = Compose((delta[a], g))
                slot[na] = u
        if check:
            n += len(ext) * len(delta)
            if n > 4096:
                n = 0
                budget.check_time()
    budget.triples(len(stages))
    return grew


def _limit_step(table: RelTable, stage: int, budget: _Budget, discover) -> List[Triple]:
    """Apply the limit rule to every prefix/loop pair with at least one member
    that is new since the previous limit step."""
    aut, mask = table.aut, table.mask
    into = table.by_dst()
    seen = table.lim_seen
    new = sorted(t for t in table.stage if t not in seen)
    seen.update(new)
    fresh: List[Tuple[Triple, object]] = []
    known = table.stage

    done: Set[Tuple[int, int, int]] = set()

    def emit(q, a1, mid, y, targets):
        # the outcome depends on (q, a1 & y, y) only
        ay = a1 & y & mask
        key = (q, ay, y)
        if key in done:
            return
        done.add(key)
        for tgt in targets:
            t = (q, ay & tgt, tgt)
            if t not in known:
                fresh.append((t, LimitClose((q, a1, mid), (mid, y, mid), y, tgt)))

    for q, a, q2 in new:
        budget.tick()
        if q == q2:
            # new loop: every prefix into it
            targets = aut.lim_targets(a)
            if targets:
                for src in sorted(into.get(q, {})):
                    for a1 in sorted(into[q][src]):
                        emit(src, a1, q, a, targets)
        # new prefix: every loop at its end
        for y in sorted(table.loops(q2)):
            targets = aut.lim_targets(y)
            if targets:
                emit(q, a, q2, y, targets)
    added = []
    for t, how in fresh:
        if table._add(t, stage, how):
            added.append(t)
            discover(t[2])
    budget.triples(len(table.stage))
    return added


# witnesses --------------------------------------------------------------------------

class MissingDerivation(KeyError):
    pass


def _prefix_runs(table: RelTable, goal: Triple) -> Dict[Triple, RunExpr]:
    """Path of each needed triple with its last location dropped."""
    memo: Dict[Triple, RunExpr] = {}
    stack = [goal]
    while stack:
        t = stack[-1]
        if t in memo:
            stack.pop()
            continue
        how = table.deriv.get(t)
        if how is None:
            raise MissingDerivation(t)
        if isinstance(how, Base):
            memo[t] = Single(how.src)
            stack.pop()
            continue
        deps = how.parts if isinstance(how, Compose) else (how.prefix, how.loop)
        missing = [d for d in deps if d not in memo]
        if missing:
            stack.extend(missing)
            continue
        if isinstance(how, Compose):
            memo[t] = concat(*(memo[d] for d in how.parts))
        else:
            memo[t] = concat(memo[how.prefix], OmegaPower(memo[how.loop]))
        stack.pop()
    return memo


def extract_witness(table: RelTable, goal) -> RunExpr:
    """Run for a triple, or for a ``("B", prefix_or_None, loop)`` goal."""
    if isinstance(goal, tuple) and len(goal) == 3 and goal[0] == "B":
        _, prefix, loop = goal
        body = _prefix_runs(table, loop)[loop]
        if prefix is None:
            return OmegaPower(body)
        return concat(_prefix_runs(table, prefix)[prefix], OmegaPower(body))
    return concat(_prefix_runs(table, goal)[goal], Single(goal[2]))


@dataclass
class Verdict:
    nonempty: bool
    condition: Optional[str] = None  # "A0", "A" or "B"
    goal: object = None
    witness: Optional[RunExpr] = None
    table: Optional[RelTable] = None

    def __bool__(self):
        return self.nonempty


def _find_goal(table: RelTable) -> Optional[Tuple[str, object]]:
    aut = table.aut
    initial = sorted(q for q in table.locations if aut.is_initial(q))
    for q0 in initial:
        if aut.is_final(q0):
            return ("A0", q0)
    best = None
    for q0 in initial:
        row = table.by_src.get(q0, {})
        for qf in sorted(row):
            if aut.is_final(qf):
                for a in sorted(row[qf]):
                    t = (q0, a, qf)
                    key = (table.stage[t], 0, t)
                    if best is None or key < best[0]:
                        best = (key, ("A", t))
        for q in [q0] + sorted(row):
            loops = [y for y in sorted(table.loops(q)) if aut.in_fcal(y)]
            if not loops:
                continue
            y = min(loops, key=lambda y: table.stage[(q, y, q)])
            loop = (q, y, q)
            if q == q0:
                prefix, s = None, table.stage[loop]
            else:
                a = min(row[q], key=lambda a: table.stage[(q0, a, q)])
                prefix = (q0, a, q)
                s = max(table.stage[prefix], table.stage[loop])
            key = (s, 1, loop)
            if best is None or key < best[0]:
                best = (key, ("B", ("B", prefix, loop)))
    return None if best is None else best[1]


def _has_goal(table: RelTable) -> bool:
    aut = table.aut
    for q0 in table.locations:
        if not aut.is_initial(q0):
            continue
        if aut.is_final(q0):
            return True
        row = table.by_src.get(q0)
        if not row:
            continue
        for q in row:
            if aut.is_final(q):
                return True
        for q in (q0, *row):
            for y in table.loops(q):
                if aut.in_fcal(y):
                    return True
    return False


def _finite_probe(aut, mask: int, budget: _Budget):
    """Breadth-first search for a successor-length accepting run.

    Returns ``(condition, goal, table)`` where the table holds only the
    edges of the path and their composite, or None.
    """
    initial = sorted(aut.initial_locations())
    for q0 in initial:
        if aut.is_final(q0):
            table = RelTable(aut, mask, locations={q0})
            return "A0", q0, table
    parent: Dict[int, Optional[int]] = {q: None for q in initial}
    budget.locations(len(parent))
    frontier = initial
    final, successors, tick = aut.is_final, aut.successors, budget.tick
    capped = budget.limits.max_locations is not None
    while frontier:
        nxt = []
        for q in frontier:
            tick()
            for s in successors(q):
                # a known location is never final: it would have ended the search
                if s in parent:
                    continue
                if final(s):
                    path = [s, q]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return ("A",) + _path_table(aut, mask, path)
                parent[s] = q
                nxt.append(s)
            if capped:
                budget.locations(len(parent))
        frontier = nxt
    return None


def _path_table(aut, mask: int, path: List[int]):
    table = RelTable(aut, mask, locations=set(path))
    edges = []
    for q, s in zip(path, path[1:]):
        t = (q, q & s & mask, s)
        table._add(t, 0, Base(q, s))
        edges.append(t)
    if len(edges) == 1:
        return edges[0], table
    a = mask
    for q in path:
        a &= q
    goal = (path[0], a, path[-1])
    table._add(goal, 1, Compose(tuple(edges)))
    table.stages = 1
    return goal, table


def check_nonempty(aut, mask: Optional[int] = None, limits: Optional[Limits] = None,
                   early: bool = False) -> Verdict:
    """Decide nonemptiness; on success return an accepting witness run.

    With ``early`` the saturation stops at the first stage that already
    satisfies an acceptance condition (every triple found is genuine, so the
    witness is valid either way).
    """
    if early:
        probe = _finite_probe(aut, _full(aut) if mask is None else mask, _Budget(limits))
        if probe is not None:
            cond, goal, table = probe
            wit = Single(goal) if cond == "A0" else extract_witness(table, goal)
            return Verdict(True, cond, goal, wit, table)
    stop = _has_goal if early else None
    table = saturate(aut, mask, limits, until=stop)
    found = _find_goal(table)
    if found is None:
        return Verdict(False, table=table)
    cond, goal = found
    if cond == "A0":
        return Verdict(True, cond, goal, Single(goal), table)
    return Verdict(True, cond, goal, extract_witness(table, goal), table)


# top-down evaluation ----------------------------------------------------------------

class TopDown:
    """Memoised evaluation of the stage relations R_n by recursion on n.

    ``succ(n, q)`` is the set of pairs ``(A, q')`` with ``(q, A, q') in R_n``;
    ``comp(n, q)`` the same for the composition closure R'_n. The guessed
    sequences of the nondeterministic procedure become closure computations,
    so no sequence-length counter is needed.
    """

    def __init__(self, aut, mask: Optional[int] = None):
        self.aut = aut
        self.mask = _full(aut) if mask is None else mask
        self._succ: Dict[Tuple[int, int], frozenset] = {}
        self._comp: Dict[Tuple[int, int], frozenset] = {}

    def succ(self, n: int, q: int) -> frozenset:
        key = (n, q)
        hit = self._succ.get(key)
        if hit is not None:
            return hit
        m = self.mask
        if n == 0:
            out = frozenset((q & s & m, s) for s in self.aut.successors(q))
        else:
            c = self.comp(n - 1, q)
            extra = set()
            for a1, mid in c:
                for y, back in self.comp(n - 1, mid):
                    if back != mid:
                        continue
                    for tgt in self.aut.lim_targets(y):
                        extra.add((a1 & y & tgt & m, tgt))
            out = c | extra
        self._succ[key] = out
        return out

    def comp(self, n: int, q: int) -> frozenset:
        key = (n, q)
        hit = self._comp.get(key)
        if hit is not None:
            return hit
        seen = set(self.succ(n, q))
        frontier = list(seen)
        while frontier:
            a, p = frontier.pop()
            for a2, p2 in self.succ(n, p):
                x = (a & a2, p2)
                if x not in seen:
                    seen.add(x)
                    frontier.append(x)
        out = frozenset(seen)
        self._comp[key] = out
        return out


def stage_cap(aut) -> int:
    return aut.basis_size + 4


def path_topdown(aut, triple: Triple, n: int, engine: Optional[TopDown] = None) -> bool:
    """Whether ``triple`` belongs to R_n, with ``0 <= n <= |B| + 4``."""
    if not 0 <= n <= stage_cap(aut):
        raise ValueError(f"stage {n} outside [0, {stage_cap(aut)}]")
    engine = engine or TopDown(aut)
    q, a, q2 = triple
    return (a, q2) in engine.succ(n, q)


def check_nonempty_topdown(aut, engine: Optional[TopDown] = None) -> Verdict:
    """Acceptance via top-down membership: condition (A) at stage |B|+3,
    condition (B) at stage |B|+4."""
    engine = engine or TopDown(aut)
    na, nb = aut.basis_size + 3, aut.basis_size + 4
    for q0 in aut.initial_locations():
        if aut.is_final(q0):
            return Verdict(True, "A0", q0)
    for q0 in aut.initial_locations():
        for a, qf in sorted(engine.succ(na, q0)):
            if aut.is_final(qf):
                return Verdict(True, "A", (q0, a, qf))
        row = engine.succ(nb, q0)
        for q in [q0] + sorted({p for _, p in row}):
            for y, back in sorted(engine.succ(nb, q)):
                if back == q and aut.in_fcal(y):
                    prefix = None if q == q0 else next((q0, a, q) for a, p in sorted(row) if p == q)
                    return Verdict(True, "B", ("B", prefix, (q, y, q)))
    return Verdict(False)


# finite runs ------------------------------------------------------------------------

def finite_runs(aut, n: int) -> Optional[Word]:
    """An accepting run of length exactly ``n`` built from next edges only."""
    if n < 1:
        raise ValueError("length must be positive")
    layer = {q: None for q in aut.initial_locations()}
    parents = [layer]
    for _ in range(n - 1):
        nxt: Dict[int, int] = {}
        for q in sorted(layer):
            for s in aut.successors(q):
                nxt.setdefault(s, q)
        layer = nxt
        parents.append(layer)
    ends = sorted(q for q in layer if aut.is_final(q))
    if not ends:
        return None
    path = [ends[0]]
    for k in range(n - 1, 0, -1):
        path.append(parents[k][path[-1]])
    return Word(reversed(path))


def derivation_dump(table: RelTable) -> List[dict]:
    """Debug listing of every triple with its stage and provenance."""
    out = []
    for t in table.triples():
        how = table.deriv[t]
        if isinstance(how, Base):
            d = {"rule": "base"}
        elif isinstance(how, Compose):
            d = {"rule": "compose", "parts": [list(p) for p in how.parts]}
        else:
            d = {"rule": "limit", "prefix": list(how.prefix), "loop": list(how.loop),
                 "y": how.y, "target": how.target}
        out.append({"triple": list(t), "stage": table.stage[t], **d})
    return out
