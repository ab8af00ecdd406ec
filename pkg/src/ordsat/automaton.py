"""Simple and standard ordinal automata, finitely presented transfinite runs,
and the independent run checker.

Locations of a simple automaton are subsets of its basis, stored as int
bitmasks (bit i set means basis element i is present).

Every automaton-like object consumed by the checker and the emptiness engine
provides the same small query surface:

``basis_size``, ``is_location(q)``, ``initial_locations()``, ``is_initial(q)``,
``is_final(q)``, ``in_fcal(Y)``, ``next_ok(q, q2)``, ``lim_ok(Y, q)``,
``successors(q)``, ``lim_targets(Y)``, and ``all_locations()`` which returns
None for views that only materialise locations on demand.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import reduce
from typing import (Any, Callable, Dict, FrozenSet, Hashable, Iterable, List,
                    Optional, Sequence, Tuple, Union)

from .ordinal import Ordinal

Location = int


class AutomatonError(ValueError):
    pass


class InvalidLocation(AutomatonError):
    pass


# runs -------------------------------------------------------------------------------

class RunExpr:
    """Finitely presented transfinite sequence.

    Nodes: ``Word`` (finite nonempty sequence), ``Concat`` (two or more parts
    in order) and ``OmegaPower`` (the body repeated w times). Items are
    locations (ints) for runs and frozensets of variable names for models.
    """

    __slots__ = ("_attrs", "_hash")

    def _cached_hash(self, make) -> int:
        h = getattr(self, "_hash", None)
        if h is None:
            h = make()
            object.__setattr__(self, "_hash", h)
        return h

    def attrs(self) -> "RunAttrs":
        a = getattr(self, "_attrs", None)
        if a is None:
            a = self._compute()
            object.__setattr__(self, "_attrs", a)
        return a

    @property
    def length(self) -> Ordinal:
        return self.attrs().length

    def _compute(self) -> "RunAttrs":  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True)
class RunAttrs:
    length: Ordinal
    first: Any
    last: Any  # None for limit length
    blim: Any  # None for successor length
    all: Any

    @property
    def is_limit(self) -> bool:
        return self.last is None


class Word(RunExpr):
    __slots__ = ("items",)

    def __init__(self, items: Sequence):
        items = tuple(items)
        if not items:
            raise ValueError("empty word")
        object.__setattr__(self, "items", items)

    def _compute(self):
        return RunAttrs(Ordinal.of(len(self.items)), self.items[0], self.items[-1], None,
                        reduce(lambda x, y: x & y, self.items))

    def __eq__(self, other):
        return isinstance(other, Word) and self.items == other.items

    def __hash__(self):
        return self._cached_hash(lambda: hash(("word", self.items)))

    def __repr__(self):
        return f"Word({list(self.items)!r})"


def _same(a: RunExpr, b: RunExpr) -> bool:
    """Structural equality, visiting each pair of shared subterms once."""
    seen = set()
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y or (id(x), id(y)) in seen:
            continue
        if type(x) is not type(y) or hash(x) != hash(y):
            return False
        seen.add((id(x), id(y)))
        if isinstance(x, Word):
            if x.items != y.items:
                return False
        elif isinstance(x, Concat):
            if len(x.parts) != len(y.parts):
                return False
            stack.extend(zip(x.parts, y.parts))
        else:
            stack.append((x.body, y.body))
    return True


def Single(q) -> Word:
    return Word((q,))


class Concat(RunExpr):
    __slots__ = ("parts",)

    def __init__(self, *parts: RunExpr):
        if len(parts) == 1 and isinstance(parts[0], (list, tuple)):
            parts = tuple(parts[0])
        if len(parts) < 2:
            raise ValueError("concat needs at least two parts")
        object.__setattr__(self, "parts", tuple(parts))

    @property
    def left(self):
        return self.parts[0]

    @property
    def right(self):
        return self.parts[1] if len(self.parts) == 2 else Concat(self.parts[1:])

    def _compute(self):
        attrs = [p.attrs() for p in self.parts]
        length = Ordinal()
        for a in attrs:
            length = length + a.length
        end = attrs[-1]
        return RunAttrs(length, attrs[0].first, end.last, end.blim,
                        reduce(lambda x, y: x & y, (a.all for a in attrs)))

    def __eq__(self, other):
        return isinstance(other, Concat) and _same(self, other)

    def __hash__(self):
        return self._cached_hash(lambda: hash(("concat", self.parts)))

    def __repr__(self):
        return f"Concat({', '.join(map(repr, self.parts))})"


class OmegaPower(RunExpr):
    __slots__ = ("body",)

    def __init__(self, body: RunExpr):
        object.__setattr__(self, "body", body)

    def _compute(self):
        b = self.body.attrs()
        return RunAttrs(b.length.mul_omega(), b.first, None, b.all, b.all)

    def __eq__(self, other):
        return isinstance(other, OmegaPower) and _same(self, other)

    def __hash__(self):
        return self._cached_hash(lambda: hash(("omega", self.body)))

    def __repr__(self):
        return f"OmegaPower({self.body!r})"


def concat(*parts: RunExpr) -> RunExpr:
    """Concatenate, flattening nested concatenations and merging adjacent words."""
    flat: List[RunExpr] = []
    for p in parts:
        for q in (p.parts if isinstance(p, Concat) else (p,)):
            if isinstance(q, Word) and flat and isinstance(flat[-1], Word):
                flat[-1] = Word(flat[-1].items + q.items)
            else:
                flat.append(q)
    return flat[0] if len(flat) == 1 else Concat(tuple(flat))


def run_attrs(r: RunExpr) -> RunAttrs:
    return r.attrs()


def map_run(r: RunExpr, fn: Callable) -> RunExpr:
    """Same shape with every item replaced by ``fn(item)``."""
    memo: Dict[int, RunExpr] = {}

    def go(node):
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, Word):
            out = Word(tuple(fn(x) for x in node.items))
        elif isinstance(node, Concat):
            out = Concat(tuple(go(p) for p in node.parts))
        else:
            out = OmegaPower(go(node.body))
        memo[id(node)] = out
        return out

    return go(r)


def run_nodes(r: RunExpr) -> int:
    """Number of expression nodes of ``r`` read as a tree (shared subterms count each time)."""
    memo: Dict[int, int] = {}

    def go(node) -> int:
        hit = memo.get(id(node))
        if hit is None:
            if isinstance(node, Word):
                hit = 1
            elif isinstance(node, Concat):
                hit = 1 + sum(go(p) for p in node.parts)
            else:
                hit = 1 + go(node.body)
            memo[id(node)] = hit
        return hit

    return go(r)


def item_at(r: RunExpr, pos: int):
    """Item at a finite position (positions below w only)."""
    node = r
    while True:
        if isinstance(node, Word):
            if pos < len(node.items):
                return node.items[pos]
            raise IndexError(pos)
        if isinstance(node, OmegaPower):
            b = node.body.attrs().length
            if not b.is_finite():
                node = node.body
                continue
            pos %= int(b)
            node = node.body
            continue
        for p in node.parts:
            ln = p.attrs().length
            if not ln.is_finite():
                node = p
                break
            if pos < int(ln):
                node = p
                break
            pos -= int(ln)
        else:
            raise IndexError(pos)


# validation -------------------------------------------------------------------------

@dataclass
class RunReport:
    valid: bool
    message: str = ""
    attrs: Optional[RunAttrs] = None

    def __bool__(self):
        return self.valid


def _junction(aut, before: RunAttrs, q, where: str) -> Optional[str]:
    if before.is_limit:
        if not aut.lim_ok(before.blim, q):
            return f"{where}: limit transition ({_fmt(before.blim)}, {_fmt(q)}) not in delta_lim"
    elif not aut.next_ok(before.last, q):
        return f"{where}: next transition ({_fmt(before.last)}, {_fmt(q)}) not in delta_next"
    return None


def _fmt(x) -> str:
    return bin(x) if isinstance(x, int) else repr(x)


def validate_run(aut, r: RunExpr) -> RunReport:
    """Check every junction of ``r`` against the path conditions of ``aut``."""
    checked: Dict[int, Optional[str]] = {}

    def go(node, path: str) -> Optional[str]:
        key = id(node)
        if key in checked:
            return checked[key]
        err = None
        if isinstance(node, Word):
            for i, q in enumerate(node.items):
                if not aut.is_location(q):
                    raise InvalidLocation(f"{path}[{i}]: {_fmt(q)} is not a location")
            for i, (a, b) in enumerate(zip(node.items, node.items[1:])):
                if not aut.next_ok(a, b):
                    err = f"{path}[{i}->{i + 1}]: next transition ({_fmt(a)}, {_fmt(b)}) not in delta_next"
                    break
        elif isinstance(node, Concat):
            for i, p in enumerate(node.parts):
                err = go(p, f"{path}.{i}")
                if err:
                    break
            if err is None:
                for i in range(len(node.parts) - 1):
                    err = _junction(aut, node.parts[i].attrs(), node.parts[i + 1].attrs().first,
                                    f"{path} junction {i}->{i + 1}")
                    if err:
                        break
        elif isinstance(node, OmegaPower):
            err = go(node.body, f"{path}.body")
            if err is None:
                err = _junction(aut, node.body.attrs(), node.body.attrs().first, f"{path} loop")
        else:
            raise TypeError(f"not a run expression: {node!r}")
        checked[key] = err
        return err

    err = go(r, "run")
    return RunReport(err is None, err or "ok", r.attrs())


def is_accepting(aut, r: RunExpr) -> bool:
    a = r.attrs()
    if not aut.is_initial(a.first):
        return False
    if a.is_limit:
        return bool(aut.in_fcal(a.blim))
    return bool(aut.is_final(a.last))


def congruent(r1: RunExpr, r2: RunExpr) -> bool:
    a, b = r1.attrs(), r2.attrs()
    if a.first != b.first or a.all != b.all:
        return False
    if a.is_limit != b.is_limit:
        return False
    return a.blim == b.blim if a.is_limit else a.last == b.last


def abstraction(r: RunExpr) -> Tuple[Location, Location, Location]:
    """<first, all, last> of a successor-length run."""
    a = r.attrs()
    if a.is_limit:
        raise ValueError("abstraction is defined for successor-length runs")
    return (a.first, a.all, a.last)


# simple ordinal automata ------------------------------------------------------------

Pred = Callable[..., bool]


class SimpleOrdinalAutomaton:
    """Simple ordinal automaton with acceptance conditions.

    ``lim`` and ``fcal`` are either explicit collections or predicates
    ``lim(Y, q) -> bool`` / ``fcal(Y) -> bool``. ``letters`` optionally maps a
    next edge to the letters it reads.
    """

    def __init__(self, basis: Sequence[Hashable], locations: Iterable[Location],
                 next_rel: Iterable[Tuple[Location, Location]],
                 lim: Union[Iterable[Tuple[Location, Location]], Pred],
                 initial: Iterable[Location], final: Iterable[Location],
                 fcal: Union[Iterable[Location], Pred],
                 letters: Optional[Dict[Tuple[Location, Location], FrozenSet]] = None,
                 check: bool = True):
        self.basis = tuple(basis)
        self.full = (1 << len(self.basis)) - 1
        self.locations = frozenset(locations)
        self.next_rel = frozenset(next_rel)
        self.initial = frozenset(initial)
        self.final = frozenset(final)
        if callable(lim):
            self.lim_pred, self.lim = lim, None
        else:
            self.lim = frozenset(lim)
            self.lim_pred = None
        if callable(fcal):
            self.fcal_pred, self.fcal = fcal, None
        else:
            self.fcal = frozenset(fcal)
            self.fcal_pred = None
        self.letters = letters
        self._succ: Dict[Location, List[Location]] = {q: [] for q in self.locations}
        self._lim_index: Dict[Location, List[Location]] = {}
        if check:
            self._check()
        for q, q2 in sorted(self.next_rel):
            self._succ.setdefault(q, []).append(q2)
        if self.lim is not None:
            for y, q in sorted(self.lim):
                self._lim_index.setdefault(y, []).append(q)
        self._lim_cache: Dict[Location, Tuple[Location, ...]] = {}

    def _check(self):
        for q in self.locations:
            if q < 0 or q & ~self.full:
                raise AutomatonError(f"location {q:b} not a subset of the basis")
        if not self.initial <= self.locations or not self.final <= self.locations:
            raise AutomatonError("I and F must be sets of locations")
        for q, q2 in self.next_rel:
            if q not in self.locations or q2 not in self.locations:
                raise AutomatonError("next transition endpoint is not a location")
        if self.lim is not None:
            for y, q in self.lim:
                if q not in self.locations or y & ~self.full:
                    raise AutomatonError("bad limit transition")

    # query surface
    @property
    def basis_size(self) -> int:
        return len(self.basis)

    def all_locations(self):
        return sorted(self.locations)

    def is_location(self, q) -> bool:
        return q in self.locations

    def initial_locations(self):
        return sorted(self.initial)

    def is_initial(self, q) -> bool:
        return q in self.initial

    def is_final(self, q) -> bool:
        return q in self.final

    def in_fcal(self, y) -> bool:
        return self.fcal_pred(y) if self.fcal is None else y in self.fcal

    def next_ok(self, q, q2) -> bool:
        return (q, q2) in self.next_rel

    def lim_ok(self, y, q) -> bool:
        if self.lim is None:
            return q in self.locations and bool(self.lim_pred(y, q))
        return (y, q) in self.lim

    def successors(self, q):
        return self._succ.get(q, ())

    def lim_targets(self, y):
        if self.lim is not None:
            return self._lim_index.get(y, ())
        hit = self._lim_cache.get(y)
        if hit is None:
            hit = tuple(q for q in sorted(self.locations) if self.lim_pred(y, q))
            self._lim_cache[y] = hit
        return hit

    # helpers
    def label_set(self, q: Location) -> List[Hashable]:
        return [b for i, b in enumerate(self.basis) if q >> i & 1]

    def mask_of(self, labels: Iterable[Hashable]) -> Location:
        index = {b: i for i, b in enumerate(self.basis)}
        m = 0
        for lab in labels:
            if lab not in index:
                raise AutomatonError(f"unknown basis element {lab!r}")
            m |= 1 << index[lab]
        return m

    def edge_letters(self, q, q2) -> FrozenSet:
        if self.letters is None:
            return frozenset({"a"})
        return self.letters.get((q, q2), frozenset())

    def __repr__(self):
        return (f"SimpleOrdinalAutomaton(|B|={len(self.basis)}, |Q|={len(self.locations)}, "
                f"|next|={len(self.next_rel)})")


def limit_candidates(locations: Iterable[Location], full: int) -> List[Location]:
    """All intersections of nonempty sets of locations: every possible B_lim."""
    seen = set()
    frontier = list(set(locations))
    seen.update(frontier)
    base = list(seen)
    while frontier:
        new = []
        for y in frontier:
            for q in base:
                z = y & q
                if z not in seen:
                    seen.add(z)
                    new.append(z)
        frontier = new
    return sorted(seen)


def materialize(aut: SimpleOrdinalAutomaton) -> SimpleOrdinalAutomaton:
    """Explicit copy of a predicate-backed automaton.

    Limit transitions and F-sets are enumerated over the sets that can occur
    as B_lim of some run (intersections of locations), so runs and acceptance
    are unchanged.
    """
    if aut.lim is not None and aut.fcal is not None:
        return aut
    cands = limit_candidates(aut.locations, aut.full)
    lim = [(y, q) for y in cands for q in aut.lim_targets(y)] if aut.lim is None else aut.lim
    fcal = [y for y in cands if aut.in_fcal(y)] if aut.fcal is None else aut.fcal
    return SimpleOrdinalAutomaton(aut.basis, aut.locations, aut.next_rel, lim, aut.initial,
                                  aut.final, fcal, aut.letters)


# standard ordinal automata ----------------------------------------------------------

@dataclass(frozen=True)
class StandardOrdinalAutomaton:
    alphabet: FrozenSet
    locations: Tuple[Hashable, ...]
    next_rel: FrozenSet[Tuple[Hashable, Any, Hashable]]
    lim: FrozenSet[Tuple[FrozenSet, Hashable]]
    initial: FrozenSet
    final: FrozenSet
    fcal: FrozenSet[FrozenSet]

    def __post_init__(self):
        qs = set(self.locations)
        for q, a, q2 in self.next_rel:
            if q not in qs or q2 not in qs or a not in self.alphabet:
                raise AutomatonError("bad next transition")
        for y, q in self.lim:
            if q not in qs or not y <= qs:
                raise AutomatonError("bad limit transition")
        if not self.initial <= qs or not self.final <= qs:
            raise AutomatonError("I and F must be sets of locations")
        for y in self.fcal:
            if not y <= qs:
                raise AutomatonError("bad acceptance set")


MAX_STANDARD_SUBSETS = 1 << 14


def simple_to_standard(aut: SimpleOrdinalAutomaton) -> StandardOrdinalAutomaton:
    """Standard automaton over the same locations.

    A cofinal location set Y gets limit transition (Y, q) when some
    (Z, q) in delta_lim has Z inside every member of Y and every element
    outside Z missing from some member of Y, i.e. Z is the intersection of Y.
    Acceptance sets are translated the same way.
    """
    if aut.lim is None:
        raise AutomatonError("explicit limit transitions required")
    qs = sorted(aut.locations)
    if len(qs) > 14:
        raise AutomatonError("too many locations for subset enumeration")
    if aut.letters is None:
        alphabet = frozenset({"a"})
        nxt = frozenset((q, "a", q2) for q, q2 in aut.next_rel)
    else:
        alphabet = frozenset().union(*aut.letters.values()) if aut.letters else frozenset()
        nxt = frozenset((q, a, q2) for (q, q2) in aut.next_rel for a in aut.edge_letters(q, q2))
    lim = set()
    fcal = set()
    by_z: Dict[int, List[Location]] = {}
    for z, q in aut.lim:
        by_z.setdefault(z, []).append(q)
    for k in range(1, len(qs) + 1):
        for ys in itertools.combinations(qs, k):
            inter = aut.full
            for q in ys:
                inter &= q
            y = frozenset(ys)
            for z, targets in by_z.items():
                if all(z & ~q2 == 0 for q2 in ys) and all(
                        any(not (q2 >> a & 1) for q2 in ys)
                        for a in range(len(aut.basis)) if not (z >> a & 1)):
                    for q in targets:
                        lim.add((y, q))
            if aut.in_fcal(inter):
                fcal.add(y)
    return StandardOrdinalAutomaton(alphabet, tuple(qs), nxt, frozenset(lim),
                                    frozenset(aut.initial), frozenset(aut.final), frozenset(fcal))


MAX_STANDARD_LOCATIONS = 5


def standard_to_simple(std: StandardOrdinalAutomaton) -> Tuple[SimpleOrdinalAutomaton, Dict[Hashable, Location]]:
    """Simple automaton with basis 2^Q; location q becomes {Y subset of Q : q in Y}.

    Returns the automaton and the map from standard locations to simple ones.
    """
    qs = list(std.locations)
    n = len(qs)
    if n > MAX_STANDARD_LOCATIONS:
        raise AutomatonError(f"basis 2^{n} exceeds the supported width")
    idx = {q: i for i, q in enumerate(qs)}
    subsets = range(1 << n)  # basis element j is the subset of Q with bitmask j

    def encode(y: FrozenSet) -> int:
        return sum(1 << idx[q] for q in y)

    def lift(ymask: int) -> Location:
        # {a in B' : Y subset of a}
        return sum(1 << a for a in subsets if a & ymask == ymask)

    loc = {q: lift(1 << idx[q]) for q in qs}
    basis = tuple(frozenset(qs[i] for i in range(n) if a >> i & 1) for a in subsets)
    letters: Dict[Tuple[Location, Location], set] = {}
    for q, a, q2 in std.next_rel:
        letters.setdefault((loc[q], loc[q2]), set()).add(a)
    lim = {(lift(encode(y)), loc[q]) for y, q in std.lim}
    fcal = {lift(encode(y)) for y in std.fcal}
    aut = SimpleOrdinalAutomaton(
        basis, loc.values(), letters.keys(), lim,
        [loc[q] for q in std.initial], [loc[q] for q in std.final], fcal,
        letters={k: frozenset(v) for k, v in letters.items()})
    return aut, loc


# JSON ----------------------------------------------------------------------------------

def automaton_to_json(aut: SimpleOrdinalAutomaton) -> dict:
    aut = materialize(aut)
    lab = lambda q: [str(b) for b in aut.label_set(q)]  # noqa: E731
    return {
        "basis": [str(b) for b in aut.basis],
        "locations": [lab(q) for q in sorted(aut.locations)],
        "next": [[lab(q), lab(q2)] for q, q2 in sorted(aut.next_rel)],
        "lim": [[lab(y), lab(q)] for y, q in sorted(aut.lim)],
        "initial": [lab(q) for q in sorted(aut.initial)],
        "final": [lab(q) for q in sorted(aut.final)],
        "fcal": [lab(y) for y in sorted(aut.fcal)],
    }


def automaton_from_json(doc: dict) -> SimpleOrdinalAutomaton:
    try:
        basis = [str(b) for b in doc["basis"]]
        if len(set(basis)) != len(basis):
            raise AutomatonError("duplicate basis labels")
        index = {b: i for i, b in enumerate(basis)}

        def mask(labels) -> int:
            m = 0
            for lab in labels:
                if str(lab) not in index:
                    raise AutomatonError(f"unknown basis element {lab!r}")
                m |= 1 << index[str(lab)]
            return m

        return SimpleOrdinalAutomaton(
            basis,
            [mask(q) for q in doc["locations"]],
            [(mask(a), mask(b)) for a, b in doc.get("next", [])],
            [(mask(y), mask(q)) for y, q in doc.get("lim", [])],
            [mask(q) for q in doc.get("initial", [])],
            [mask(q) for q in doc.get("final", [])],
            [mask(y) for y in doc.get("fcal", [])],
        )
    except (KeyError, TypeError) as exc:
        raise AutomatonError(f"malformed automaton document: {exc}") from None


def load_automaton(path) -> SimpleOrdinalAutomaton:
    with open(path, encoding="utf-8") as fh:
        return automaton_from_json(json.load(fh))


def run_to_json(r: RunExpr, item_to_json: Callable[[Any], Any]) -> dict:
    """Shared-node encoding: ``{"nodes": [...], "root": i}``.

    Each node is ``["word", [items]]``, ``["concat", i, j, ...]`` or
    ``["omega", i]``, where indices point at earlier nodes. Witnesses reuse
    subterms heavily, so a plain tree would be exponentially larger.
    """
    index: Dict[int, int] = {}
    nodes: list = []

    def go(node) -> int:
        hit = index.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, Word):
            enc = ["word", [item_to_json(x) for x in node.items]]
        elif isinstance(node, Concat):
            enc = ["concat"] + [go(p) for p in node.parts]
        else:
            enc = ["omega", go(node.body)]
        index[id(node)] = len(nodes)
        nodes.append(enc)
        return index[id(node)]

    root = go(r)
    return {"nodes": nodes, "root": root}


def run_from_json(doc, item_from_json: Callable[[Any], Any]) -> RunExpr:
    """Inverse of ``run_to_json``; a nested tree ``["concat", [...], ...]`` is also accepted."""
    if isinstance(doc, dict):
        nodes, root = doc.get("nodes"), doc.get("root")
        if not isinstance(nodes, list) or not isinstance(root, int) or not 0 <= root < len(nodes):
            raise AutomatonError("run needs a node list and a root index")
        built: List[RunExpr] = []

        def ref(i):
            if not isinstance(i, int) or not 0 <= i < len(built):
                raise AutomatonError(f"node {len(built)} refers to {i!r}, not an earlier node")
            return built[i]

        for enc in nodes:
            built.append(_decode(enc, ref, item_from_json))
        return built[root]
    return _decode(doc, lambda d: run_from_json(d, item_from_json), item_from_json)


def _decode(enc, child, item_from_json) -> RunExpr:
    if not isinstance(enc, list) or not enc:
        raise AutomatonError(f"bad run expression {enc!r}")
    tag = enc[0]
    if tag == "word":
        if len(enc) != 2 or not isinstance(enc[1], list) or not enc[1]:
            raise AutomatonError("word needs a nonempty item list")
        return Word(tuple(item_from_json(x) for x in enc[1]))
    if tag == "concat":
        if len(enc) < 3:
            raise AutomatonError("concat needs at least two parts")
        return Concat(tuple(child(d) for d in enc[1:]))
    if tag == "omega":
        if len(enc) != 2:
            raise AutomatonError("omega takes one body")
        return OmegaPower(child(enc[1]))
    raise AutomatonError(f"unknown run tag {tag!r}")


def location_run_to_json(aut: SimpleOrdinalAutomaton, r: RunExpr) -> dict:
    return run_to_json(r, lambda q: [str(b) for b in aut.label_set(q)])


def location_run_from_json(aut: SimpleOrdinalAutomaton, doc) -> RunExpr:
    return run_from_json(doc, aut.mask_of)
