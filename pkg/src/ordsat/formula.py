"""Hash-consed LTL(U,S) formulas, derived operators, parser/printer and closure.

Formulas are interned: building the same structure twice returns the same
object, so identity (``is``) is structural equality. Double negations never
exist as nodes; ``neg(neg(f)) is f``.

The intern table is guarded by a lock, so formulas may be built from several
threads. Formula objects are immutable.
"""
from __future__ import annotations

import functools
import re
import threading
from typing import Dict, Iterator, List, Optional, Tuple

VAR = "var"
TRUE = "true"
NOT = "not"
AND = "and"
UNTIL = "until"
SINCE = "since"

_BINARY = (AND, UNTIL, SINCE)


class Formula:
    __slots__ = ("kind", "name", "left", "right", "uid", "__weakref__")

    kind: str
    name: Optional[str]
    left: Optional["Formula"]
    right: Optional["Formula"]
    uid: int

    def __setattr__(self, key, value):
        raise AttributeError("Formula is immutable")

    # identity semantics: interning makes structural equality coincide with `is`
    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return self.uid

    @property
    def child(self) -> "Formula":
        assert self.kind == NOT
        return self.left

    def __repr__(self):
        return f"Formula({to_text(self)!r})"

    def __str__(self):
        return to_text(self)


_lock = threading.Lock()
_table: Dict[tuple, Formula] = {}


def _intern(kind: str, name=None, left=None, right=None) -> Formula:
    key = (kind, name, None if left is None else left.uid, None if right is None else right.uid)
    f = _table.get(key)
    if f is not None:
        return f
    with _lock:
        f = _table.get(key)
        if f is None:
            f = object.__new__(Formula)
            set_ = object.__setattr__
            set_(f, "kind", kind)
            set_(f, "name", name)
            set_(f, "left", left)
            set_(f, "right", right)
            set_(f, "uid", len(_table))
            _table[key] = f
        return f


def var(name: str) -> Formula:
    if not isinstance(name, str) or not name:
        raise ValueError(f"bad variable name {name!r}")
    return _intern(VAR, name=name)


def top() -> Formula:
    return _intern(TRUE)


def bottom() -> Formula:
    return neg(top())


def neg(f: Formula) -> Formula:
    if f.kind == NOT:
        return f.left
    return _intern(NOT, left=f)


def conj(a: Formula, b: Formula) -> Formula:
    return _intern(AND, left=a, right=b)


def until(a: Formula, b: Formula) -> Formula:
    return _intern(UNTIL, left=a, right=b)


def since(a: Formula, b: Formula) -> Formula:
    return _intern(SINCE, left=a, right=b)


def disj(a: Formula, b: Formula) -> Formula:
    return neg(conj(neg(a), neg(b)))


def big_conj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return top()
    acc = parts[-1]
    for p in reversed(parts[:-1]):
        acc = conj(p, acc)
    return acc


# derived operators -----------------------------------------------------------

def G(f: Formula) -> Formula:
    return conj(f, neg(until(top(), neg(f))))


def G_plus(f: Formula) -> Formula:
    return neg(until(top(), neg(f)))


def F(f: Formula) -> Formula:
    return neg(G(neg(f)))


def F_plus(f: Formula) -> Formula:
    return neg(G_plus(neg(f)))


def X(f: Formula) -> Formula:
    return until(bottom(), f)


def X_prev(f: Formula) -> Formula:
    return since(bottom(), f)


DERIVED = {
    "G": G,
    "G+": G_plus,
    "F": F,
    "F+": F_plus,
    "X": X,
    "X-": X_prev,
}


def expand_derived(op: str, arg: Formula) -> Formula:
    """Apply a derived operator (``G``, ``G+``, ``F``, ``F+``, ``X``, ``X-``)."""
    try:
        return DERIVED[op](arg)
    except KeyError:
        raise FormulaSyntaxError(f"unknown operator {op!r}") from None


# traversal / closure -----------------------------------------------------------

def children(f: Formula) -> Tuple[Formula, ...]:
    if f.kind == NOT:
        return (f.left,)
    if f.kind in _BINARY:
        return (f.left, f.right)
    return ()


def positive(f: Formula) -> Formula:
    """Strip one negation (there is never more than one)."""
    return f.left if f.kind == NOT else f


@functools.lru_cache(maxsize=4096)
def _postorder_positives(root: Formula) -> Tuple[Formula, ...]:
    if root.kind == AND:
        # the left closure is closed under subformulas, so skipping its members
        # in the right order is exactly what the traversal below would do
        left = _postorder_dfs(root.left)
        seen = set(left)
        right = [g for g in _postorder_dfs(root.right) if g not in seen]
        return left + tuple(right) + (root,)
    return _postorder_dfs(root)


@functools.lru_cache(maxsize=4096)
def _postorder_dfs(root: Formula) -> Tuple[Formula, ...]:
    seen = set()
    out: List[Formula] = []
    stack: List[Tuple[Formula, bool]] = [(positive(root), False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            out.append(node)
            continue
        if node in seen:
            continue
        seen.add(node)
        stack.append((node, True))
        for c in reversed(children(node)):
            c = positive(c)
            if c not in seen:
                stack.append((c, False))
    return tuple(out)


class Closure:
    """The set sub(f) in a fixed order.

    Order: positive (non-negated) subformulas in post-order of first
    discovery (left child before right child), each immediately followed by
    its negation. Position ``2*k`` is the k-th positive subformula and
    ``2*k+1`` its negation, which the automaton's bit layout relies on.
    """

    __slots__ = ("root", "formulas", "index")

    def __init__(self, root: Formula):
        self.root = root
        items: List[Formula] = []
        for p in _postorder_positives(root):
            items.append(p)
            items.append(neg(p))
        self.formulas: Tuple[Formula, ...] = tuple(items)
        self.index: Dict[Formula, int] = {f: i for i, f in enumerate(items)}

    @property
    def size(self) -> int:
        return len(self.formulas)

    def __len__(self):
        return len(self.formulas)

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.formulas)

    def __contains__(self, f):
        return f in self.index

    def positives(self) -> Tuple[Formula, ...]:
        return self.formulas[::2]


def closure(f: Formula) -> Closure:
    return Closure(f)


def size(f: Formula) -> int:
    """|f|: cardinality of the closure (DAG size, both polarities)."""
    return len(_postorder_positives(f)) * 2


def variables(f: Formula) -> List[str]:
    return sorted({p.name for p in _postorder_positives(f) if p.kind == VAR})


# printing ---------------------------------------------------------------------

def to_text(f: Formula) -> str:
    """Fully parenthesised text that ``parse`` maps back to the same object."""
    memo: Dict[Formula, str] = {}

    def go(g: Formula) -> str:
        s = memo.get(g)
        if s is not None:
            return s
        k = g.kind
        if k == VAR:
            s = g.name
        elif k == TRUE:
            s = "true"
        elif k == NOT:
            s = "false" if g.left.kind == TRUE else "!" + go(g.left)
        else:
            op = {AND: "&", UNTIL: "U", SINCE: "S"}[k]
            s = f"({go(g.left)} {op} {go(g.right)})"
        memo[g] = s
        return s

    return go(f)


def text_length(f: Formula) -> int:
    """``len(to_text(f))`` without building the string.

    Shared subformulas are printed once per occurrence, so the text of a
    deeply shared formula can be exponentially longer than its DAG.
    """
    memo: Dict[Formula, int] = {}
    stack = [f]
    while stack:
        g = stack[-1]
        if g in memo:
            stack.pop()
            continue
        todo = [c for c in children(g) if c not in memo]
        if todo:
            stack.extend(todo)
            continue
        stack.pop()
        k = g.kind
        if k == VAR:
            n = len(g.name)
        elif k == TRUE:
            n = 4
        elif k == NOT:
            n = 5 if g.left.kind == TRUE else 1 + memo[g.left]
        else:
            n = memo[g.left] + memo[g.right] + 5
        memo[g] = n
    return memo[f]


# parsing ----------------------------------------------------------------------

class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position


_TOKEN = re.compile(
    r"\s*(?:(?P<op>X-|F\+|G\+|[()!&|])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<bad>\S))"
)
_RESERVED = {"U", "S", "X", "F", "G", "true", "false"}
_PREFIX = {"!", "X", "X-", "F", "F+", "G", "G+"}


def _tokenize(text: str) -> List[Tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group("bad") is not None:
            raise FormulaSyntaxError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        if m.group("op") is not None:
            tokens.append((m.group("op"), m.start("op")))
        elif m.group("ident") is not None:
            tokens.append((m.group("ident"), m.start("ident")))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.end = len(text)

    def peek(self) -> Optional[str]:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else self.end

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input", self.end)
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.temporal()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"unexpected token {self.peek()!r}", self.pos())
        return f

    # U and S: lowest precedence, right associative
    def temporal(self) -> Formula:
        left = self.disjunction()
        tok = self.peek()
        if tok in ("U", "S"):
            self.take()
            right = self.temporal()
            return until(left, right) if tok == "U" else since(left, right)
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = disj(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.prefix()
        while self.peek() == "&":
            self.take()
            f = conj(f, self.prefix())
        return f

    def prefix(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return neg(self.prefix())
        if tok in _PREFIX:
            self.take()
            return expand_derived(tok, self.prefix())
        return self.atom()

    def atom(self) -> Formula:
        pos = self.pos()
        tok = self.take()
        if tok == "(":
            f = self.temporal()
            if self.peek() != ")":
                raise FormulaSyntaxError("expected ')'", self.pos())
            self.take()
            return f
        if tok == "true":
            return top()
        if tok == "false":
            return bottom()
        if tok in _RESERVED:
            raise FormulaSyntaxError(f"operator {tok!r} used as operand", pos)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            return var(tok)
        raise FormulaSyntaxError(f"unexpected token {tok!r}", pos)


def parse(text: str) -> Formula:
    """Parse formula text.

    Precedence from loosest to tightest: ``U``/``S`` (right associative),
    ``|``, ``&``, prefix operators ``! X X- F F+ G G+``.
    """
    return _Parser(text).parse()
