"""Formula to simple ordinal automaton.

The basis is the closure of the formula with one bit per element, both
polarities included: closure position i is bit i, so a positive subformula
at position 2k has its negation at bit 2k+1. Locations are the maximally
Boolean consistent subsets.

Only bits of variables, until- and since-formulas are free; the rest follow
by consistency. Given a location q, the since-bits of any next-step
successor are fixed, and the until-bits of q must equal the set of untils a
successor "promises" (``need``); successors are looked up in an index
grouped by these two keys, built lazily per since-bit pattern.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Tuple

from . import formula as fm
from .automaton import RunExpr, SimpleOrdinalAutomaton, map_run

DEFAULT_MAX_CLOSURE = 20
LABEL_TEXT_MAX = 200


class TranslationLimit(RuntimeError):
    pass


class FormulaAutomaton:
    """Predicate-backed view of the automaton for a formula.

    Locations are materialised on demand; every predicate runs in time
    polynomial in the closure size.
    """

    def __init__(self, phi: fm.Formula, max_free_bits: int = 24):
        self.formula = phi
        self.closure = fm.closure(phi)
        cl = self.closure
        self.basis_size = len(cl)
        self.full = (1 << len(cl)) - 1
        self.root_bit = cl.index[phi]
        self.var_bits: List[int] = []
        self.untils: List[Tuple[int, int, int]] = []  # (own bit, left bit, right bit)
        self.sinces: List[Tuple[int, int, int]] = []
        self.derived: List[Tuple[int, str, int, int]] = []  # bits fixed by consistency
        for k, p in enumerate(cl.positives()):
            b = 2 * k
            if p.kind == fm.VAR:
                self.var_bits.append(b)
            elif p.kind == fm.UNTIL:
                self.untils.append((b, cl.index[p.left], cl.index[p.right]))
            elif p.kind == fm.SINCE:
                self.sinces.append((b, cl.index[p.left], cl.index[p.right]))
            elif p.kind == fm.TRUE:
                self.derived.append((b, "true", -1, -1))
            elif p.kind == fm.AND:
                self.derived.append((b, "and", cl.index[p.left], cl.index[p.right]))
        self.umask = sum(1 << b for b, _, _ in self.untils)
        self.smask = sum(1 << b for b, _, _ in self.sinces)
        self.free_bits = self.var_bits + [b for b, _, _ in self.untils]
        if len(self.free_bits) > max_free_bits:
            raise TranslationLimit(f"{len(self.free_bits)} free bits exceed the cap {max_free_bits}")
        self.pos_mask = sum(1 << (2 * k) for k in range(len(cl) // 2))
        self.choice_mask = sum(1 << b for b in self.free_bits) | self.smask
        # bits read by limit transitions and limit acceptance
        rel = 0
        for b, lb, rb in self.untils:
            rel |= (1 << b) | (1 << lb) | (1 << (rb ^ 1))
        for b, lb, _ in self.sinces:
            rel |= (1 << b) | (1 << lb)
        self.relevant_mask = rel
        self._steps = [(2 * k, p.kind,
                        cl.index[p.left] if p.left is not None else -1,
                        cl.index[p.right] if p.right is not None else -1)
                       for k, p in enumerate(cl.positives())]
        self._index: Dict[Tuple[int, ...], List[int]] = {}
        self._groups: Dict[int, Dict[int, List[int]]] = {}
        self._lim_cache: Dict[int, Tuple[int, ...]] = {}
        self._succ_cache: Dict[int, List[int]] = {}
        self._labels: Optional[List[str]] = None
        self._label_index: Optional[Dict[str, int]] = None

    # consistency -----------------------------------------------------------------
    def complete(self, assignment: int) -> int:
        """Extend an assignment of free positive bits to a consistent location."""
        q = assignment | ((~assignment & self.choice_mask) << 1)
        # post-order: children are settled before their parents
        for b, kind, lb, rb in self.derived:
            if kind == "true" or (q >> lb & 1 and q >> rb & 1):
                q |= 1 << b
            else:
                q |= 1 << (b + 1)
        return q

    def is_location(self, q) -> bool:
        if not isinstance(q, int) or q < 0 or q & ~self.full:
            return False
        pos = q & self.pos_mask
        if (q >> 1) & self.pos_mask != ~pos & self.pos_mask:
            return False
        return self.complete(q & self.choice_mask) == q

    def need(self, q: int) -> int:
        """Untils whose promise is met at q: right side holds, or left side and the until itself."""
        m = 0
        for b, lb, rb in self.untils:
            if q >> rb & 1 or (q >> lb & 1 and q >> b & 1):
                m |= 1 << b
        return m

    def since_provision(self, q: int) -> int:
        """Since-bits forced on any next-step successor of q."""
        m = 0
        for b, lb, rb in self.sinces:
            if q >> rb & 1 or (q >> lb & 1 and q >> b & 1):
                m |= 1 << b
        return m

    def _matching(self, sbits: int, care: int, want: int, rcare: int = 0, rwant: int = 0) -> List[int]:
        """Sorted locations with since-bits ``sbits``, ``need(q) & care == want``
        and ``q & rcare == rwant``.

        Built level by level over the closure in post-order; an until is
        checked as soon as its own bit is chosen, so dead branches are cut early.
        """
        key = (sbits, care, want, rcare, rwant)
        hit = self._index.get(key)
        if hit is not None:
            return hit
        VAR, UNTIL, SINCE, TRUE = fm.VAR, fm.UNTIL, fm.SINCE, fm.TRUE
        qs = [0]
        for b, kind, lb, rb in self._steps:
            pb, nb = 1 << b, 1 << (b + 1)
            if kind == VAR:
                qs = [q | x for q in qs for x in (nb, pb)]
            elif kind == UNTIL:
                if care & pb:
                    w = bool(want & pb)
                    qs = ([q | nb for q in qs if bool(q >> rb & 1) == w]
                          + [q | pb for q in qs if bool(q >> rb & 1 or q >> lb & 1) == w])
                else:
                    qs = [q | x for q in qs for x in (nb, pb)]
            elif kind == SINCE:
                x = pb if sbits & pb else nb
                qs = [q | x for q in qs]
            elif kind == TRUE:
                qs = [q | pb for q in qs]
            else:
                qs = [q | (pb if q >> lb & 1 and q >> rb & 1 else nb) for q in qs]
            c = rcare & (pb | nb)
            if c:
                r = rwant & c
                qs = [q for q in qs if q & c == r]
        qs.sort()
        self._index[key] = qs
        return qs

    def _group(self, sbits: int) -> Dict[int, List[int]]:
        """All locations with since-bits ``sbits``, keyed by ``need``."""
        g = self._groups.get(sbits)
        if g is not None:
            return g
        VAR, UNTIL, SINCE, TRUE = fm.VAR, fm.UNTIL, fm.SINCE, fm.TRUE
        qs = [0]
        needs = [0]
        for b, kind, lb, rb in self._steps:
            pb, nb = 1 << b, 1 << (b + 1)
            if kind == VAR:
                qs = [q | x for q in qs for x in (nb, pb)]
                needs = [n for n in needs for _ in (0, 1)]
            elif kind == UNTIL:
                # false: met iff right holds; true: met iff right or left holds
                needs = ([n | pb if q >> rb & 1 else n for q, n in zip(qs, needs)]
                         + [n | pb if q >> rb & 1 or q >> lb & 1 else n for q, n in zip(qs, needs)])
                qs = [q | nb for q in qs] + [q | pb for q in qs]
            elif kind == SINCE:
                x = pb if sbits & pb else nb
                qs = [q | x for q in qs]
            elif kind == TRUE:
                qs = [q | pb for q in qs]
            else:
                qs = [q | (pb if q >> lb & 1 and q >> rb & 1 else nb) for q in qs]
        g = {}
        for q, n in zip(qs, needs):
            g.setdefault(n, []).append(q)
        for v in g.values():
            v.sort()
        self._groups[sbits] = g
        return g

    # query surface ----------------------------------------------------------------
    def all_locations(self):
        return None

    def enumerate_locations(self) -> List[int]:
        out = []
        free = self.free_bits + [b for b, _, _ in self.sinces]
        for n in range(1 << len(free)):
            a = 0
            for i, b in enumerate(free):
                if n >> i & 1:
                    a |= 1 << b
            out.append(self.complete(a))
        return sorted(out)

    def initial_locations(self) -> List[int]:
        # every top-level conjunct of the root must hold, which prunes the search early
        care = 0
        stack = [self.formula]
        while stack:
            f = stack.pop()
            care |= 1 << self.closure.index[f]
            if f.kind == fm.AND:
                stack += [f.left, f.right]
        return self._matching(0, 0, 0, care, care)

    def is_initial(self, q) -> bool:
        return bool(q >> self.root_bit & 1) and not (q & self.smask)

    def is_final(self, q) -> bool:
        return not (q & self.umask)

    def in_fcal(self, y) -> bool:
        for b, lb, rb in self.untils:
            if y >> lb & 1 and y >> (rb ^ 1) & 1 and y >> b & 1:
                return False
        return True

    def next_ok(self, q, q2) -> bool:
        """(next_U) and (next_S) checked verbatim."""
        for b, lb, rb in self.untils:
            if bool(q >> b & 1) != bool(q2 >> rb & 1 or (q2 >> lb & 1 and q2 >> b & 1)):
                return False
        for b, lb, rb in self.sinces:
            if bool(q2 >> b & 1) != bool(q >> rb & 1 or (q >> lb & 1 and q >> b & 1)):
                return False
        return True

    def lim_ok(self, y, q) -> bool:
        """(lim_U1), (lim_U2), (lim_U3) and (lim_S) checked verbatim."""
        if not self.is_location(q):
            return False
        for b, lb, rb in self.untils:
            if y >> lb & 1 and y >> (rb ^ 1) & 1 and y >> b & 1:
                if not (q >> rb & 1 or (q >> lb & 1 and q >> b & 1)):
                    return False
            if q >> lb & 1 and q >> b & 1 and y >> lb & 1 and not y >> b & 1:
                return False
            if y >> lb & 1 and q >> rb & 1 and not y >> b & 1:
                return False
        for b, lb, rb in self.sinces:
            if bool(q >> b & 1) != bool(y >> lb & 1 and y >> b & 1):
                return False
        return True

    def successors(self, q) -> List[int]:
        hit = self._succ_cache.get(q)
        if hit is None:
            sb = self.since_provision(q)
            g = self._groups.get(sb)
            if g is None:
                g = self._group(sb)
            hit = g.get(q & self.umask, [])
            self._succ_cache[q] = hit
        return hit

    def lim_targets(self, y) -> Tuple[int, ...]:
        hit = self._lim_cache.get(y)
        if hit is not None:
            return hit
        sbits = 0
        for b, lb, _ in self.sinces:
            if y >> lb & 1 and y >> b & 1:
                sbits |= 1 << b
        care = 0
        want = 0
        for b, lb, rb in self.untils:
            if not y >> lb & 1:
                continue
            if not y >> b & 1:
                care |= 1 << b
            elif y >> (rb ^ 1) & 1:
                care |= 1 << b
                want |= 1 << b
        hit = tuple(self._matching(sbits, care, want))
        self._lim_cache[y] = hit
        return hit

    # helpers ----------------------------------------------------------------------
    @property
    def labels(self) -> List[str]:
        """One label per closure position.

        A formula whose text is longer than LABEL_TEXT_MAX is labelled
        ``#i`` by its closure position; printing it could take exponential
        space when its subformulas are shared.
        """
        if self._labels is None:
            self._labels = [fm.to_text(f) if fm.text_length(f) <= LABEL_TEXT_MAX else f"#{i}"
                            for i, f in enumerate(self.closure.formulas)]
        return self._labels

    def label_set(self, q: int) -> List[str]:
        return [lab for i, lab in enumerate(self.labels) if q >> i & 1]

    def mask_of(self, labels: Iterable[str]) -> int:
        if self._label_index is None:
            index = {f"#{i}": i for i in range(len(self.labels))}
            index.update((lab, i) for i, lab in enumerate(self.labels))
            self._label_index = index
        index = self._label_index
        labels = list(labels)
        unknown = [lab for lab in labels if lab not in index]
        if unknown:
            more = f" and {len(unknown) - 3} more" if len(unknown) > 3 else ""
            raise ValueError(f"not in the closure: {', '.join(unknown[:3])}{more}")
        return sum(1 << index[lab] for lab in labels)

    def letter(self, q: int) -> frozenset:
        return frozenset(self.closure.formulas[b].name for b in self.var_bits if q >> b & 1)

    def contains(self, q: int, f: fm.Formula) -> bool:
        return bool(q >> self.closure.index[f] & 1)


def build_lazy_view(phi: fm.Formula) -> FormulaAutomaton:
    return FormulaAutomaton(phi)


def build_automaton(phi: fm.Formula, max_closure: int = DEFAULT_MAX_CLOSURE) -> SimpleOrdinalAutomaton:
    """Explicit locations, next relation, I and F; limit transitions and the
    limit acceptance family stay predicate-backed."""
    n = fm.size(phi)
    if n > max_closure:
        raise TranslationLimit(f"closure size {n} exceeds {max_closure}; use build_lazy_view")
    view = FormulaAutomaton(phi)
    locs = view.enumerate_locations()
    nxt = [(q, q2) for q in locs for q2 in view.successors(q)]
    aut = SimpleOrdinalAutomaton(
        list(view.labels), locs, nxt,
        view.lim_ok, [q for q in locs if view.is_initial(q)],
        [q for q in locs if view.is_final(q)], view.in_fcal)
    aut.view = view
    return aut


def project_model(r: RunExpr, view: FormulaAutomaton, names: Optional[Iterable[str]] = None) -> RunExpr:
    """Replace every location by the set of variables it contains."""
    if names is None:
        return map_run(r, view.letter)
    keep = frozenset(names)
    return map_run(r, lambda q: view.letter(q) & keep)
