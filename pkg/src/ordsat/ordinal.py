"""Ordinals below w^w in Cantor normal form, truncation, m-codes, and the
length-defining formulas theta_i / def_alpha.

Ordinals at or above w^w are only ever handled through their codes.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Optional, Tuple, Union

from . import formula as fm

OMEGA = "w"
"""Marker for m = w in codes."""

_MAX_NAT = 2**63 - 1


def _check_nat(x: int) -> int:
    if x > _MAX_NAT:
        raise OverflowError(f"natural {x} exceeds machine width")
    return x


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """``sum(w^e * c for e, c in terms)`` with strictly decreasing exponents."""

    terms: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        prev = None
        for e, c in self.terms:
            if not (isinstance(e, int) and isinstance(c, int)) or e < 0 or c < 1:
                raise ValueError(f"bad CNF term w^{e}*{c}")
            if prev is not None and e >= prev:
                raise ValueError("exponents must strictly decrease")
            _check_nat(c)
            prev = e

    # construction ----------------------------------------------------------
    @classmethod
    def of(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("negative ordinal")
        return cls(((0, n),)) if n else cls()

    @classmethod
    def omega_pow(cls, k: int, coeff: int = 1) -> "Ordinal":
        return cls(((k, coeff),)) if coeff else cls()

    # properties --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_limit(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] > 0

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] == 0

    def is_finite(self) -> bool:
        return not self.terms or self.terms[0][0] == 0

    def degree(self) -> int:
        """Leading exponent (0 for finite ordinals, including 0)."""
        return self.terms[0][0] if self.terms else 0

    def coefficient(self, k: int) -> int:
        for e, c in self.terms:
            if e == k:
                return c
        return 0

    def __int__(self):
        if not self.is_finite():
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    # arithmetic --------------------------------------------------------------
    def __add__(self, other: "Ordinal") -> "Ordinal":
        other = as_ordinal(other)
        if not other.terms:
            return self
        k, c = other.terms[0]
        head = [t for t in self.terms if t[0] > k]
        same = self.coefficient(k)
        return Ordinal(tuple(head) + ((k, _check_nat(same + c)),) + other.terms[1:])

    def __radd__(self, other):
        return as_ordinal(other) + self

    def __mul__(self, other: "Ordinal") -> "Ordinal":
        other = as_ordinal(other)
        if not self.terms or not other.terms:
            return Ordinal()
        lead_e, lead_c = self.terms[0]
        out = Ordinal()
        for e, c in other.terms:
            if e > 0:
                out = out + Ordinal.omega_pow(lead_e + e, c)
            else:
                # self * c: only the leading coefficient is multiplied
                part = ((lead_e, _check_nat(lead_c * c)),) + self.terms[1:]
                out = out + Ordinal(part)
        return out

    def __rmul__(self, other):
        return as_ordinal(other) * self

    def mul_omega(self) -> "Ordinal":
        return self * Ordinal.omega_pow(1)

    def __lt__(self, other):
        other = as_ordinal(other)
        return _cmp(self, other) < 0

    def __str__(self):
        return format_ordinal(self)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"


def as_ordinal(x: Union[int, Ordinal]) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int):
        return Ordinal.of(x)
    raise TypeError(f"not an ordinal: {x!r}")


def _cmp(a: Ordinal, b: Ordinal) -> int:
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        if ea != eb:
            return 1 if ea > eb else -1
        if ca != cb:
            return 1 if ca > cb else -1
    return (len(a.terms) > len(b.terms)) - (len(a.terms) < len(b.terms))


def ord_add(a, b) -> Ordinal:
    return as_ordinal(a) + as_ordinal(b)


def ord_cmp(a, b) -> int:
    return _cmp(as_ordinal(a), as_ordinal(b))


def ord_mul_omega(a) -> Ordinal:
    return as_ordinal(a).mul_omega()


W = Ordinal.omega_pow(1)


# text ---------------------------------------------------------------------------

def format_ordinal(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if e == 0:
            parts.append(str(c))
            continue
        base = "w" if e == 1 else f"w^{e}"
        parts.append(base if c == 1 else f"{base}*{c}")
    return "+".join(parts)


_TERM = re.compile(r"^(?:(?P<n>\d+)|w(?:\^(?P<e>\d+))?(?:\*(?P<c>\d+))?)$")


def parse_ordinal(text: str) -> Ordinal:
    """Parse ``w^k*a + ... + c``; ``w`` stands for omega."""
    s = re.sub(r"\s+", "", text.replace("ω", "w"))
    if not s:
        raise ValueError("empty ordinal")
    terms = []
    for chunk in s.split("+"):
        m = _TERM.match(chunk)
        if m is None:
            raise ValueError(f"bad ordinal term {chunk!r}")
        if m.group("n") is not None:
            e, c = 0, int(m.group("n"))
        else:
            e = int(m.group("e")) if m.group("e") is not None else 1
            c = int(m.group("c")) if m.group("c") is not None else 1
        if c == 0:
            if len(s.split("+")) == 1 and e == 0:
                return Ordinal()
            raise ValueError("zero coefficient")
        terms.append((e, c))
    for (e1, _), (e2, _) in zip(terms, terms[1:]):
        if e2 >= e1:
            raise ValueError("exponents must strictly decrease")
    return Ordinal(tuple(terms))


# codes --------------------------------------------------------------------------

@dataclass(frozen=True)
class OrdinalCode:
    """m-code (p, t) of a countable ordinal ``alpha = w^m * alpha' + zeta``.

    ``p`` is -2 when alpha' = 0 and -1 otherwise. ``t`` is the coefficient
    tuple (a_n, ..., a_0) of zeta with a_n != 0, or -3 when zeta = 0.
    """

    m: Union[int, str]
    p: int
    t: Union[Tuple[int, ...], int]

    def __post_init__(self):
        if self.m != OMEGA and not (isinstance(self.m, int) and self.m >= 1):
            raise ValueError(f"bad code level {self.m!r}")
        if self.p not in (-2, -1):
            raise ValueError("p must be -2 or -1")
        if self.t != -3:
            if not isinstance(self.t, tuple) or not self.t or self.t[0] == 0:
                raise ValueError("t must be -3 or a tuple with nonzero leading entry")
            if any((not isinstance(a, int)) or a < 0 for a in self.t):
                raise ValueError("t entries must be naturals")
            if self.m != OMEGA and len(self.t) > self.m:
                raise ValueError("remainder must be below w^m")

    def remainder(self) -> Ordinal:
        if self.t == -3:
            return Ordinal()
        n = len(self.t) - 1
        return Ordinal(tuple((n - i, a) for i, a in enumerate(self.t) if a))

    def is_zero(self) -> bool:
        return self.p == -2 and self.t == -3

    def level_ge(self, n: int) -> bool:
        return self.m == OMEGA or self.m >= n

    def down(self, n: int) -> "OrdinalCode":
        """The n-code of the same ordinal, for n at most this code's level."""
        if not self.level_ge(n):
            raise ValueError(f"cannot derive a {n}-code from a {self.m}-code")
        zeta = self.remainder()
        high = any(e >= n for e, _ in zeta.terms)
        low = Ordinal(tuple(t for t in zeta.terms if t[0] < n))
        p = -1 if (self.p == -1 or high) else -2
        return _make_code(n, p, low)

    def __str__(self):
        return format_code(self)


def _make_code(m, p: int, zeta: Ordinal) -> OrdinalCode:
    if zeta.is_zero():
        return OrdinalCode(m, p, -3)
    n = zeta.degree()
    return OrdinalCode(m, p, tuple(zeta.coefficient(n - i) for i in range(n + 1)))


def code_of(a, m) -> OrdinalCode:
    """m-code of an ordinal below w^w given in CNF."""
    a = as_ordinal(a)
    if m == OMEGA:
        return _make_code(OMEGA, -2, a)
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"bad code level {m!r}")
    quotient = any(e >= m for e, _ in a.terms)
    zeta = Ordinal(tuple(t for t in a.terms if t[0] < m))
    return _make_code(m, -1 if quotient else -2, zeta)


def ordinal_of_code(code: OrdinalCode) -> Optional[Ordinal]:
    """The ordinal when the code pins it down (p = -2), else None."""
    return code.remainder() if code.p == -2 else None


def format_code(code: OrdinalCode) -> str:
    if code.t == -3:
        return f"({code.p}, -)"
    return f"({code.p}, [{','.join(map(str, code.t))}])"


def parse_code(text: str, m) -> OrdinalCode:
    s = re.sub(r"\s+", "", text).strip("<>()")
    head, _, tail = s.partition(",")
    if not tail:
        raise ValueError(f"bad code {text!r}")
    try:
        p = int(head)
    except ValueError:
        raise ValueError(f"bad code flag {head!r}") from None
    if tail in ("-", "-3"):
        t: Union[int, Tuple[int, ...]] = -3
    else:
        body = tail.strip("[]")
        try:
            t = tuple(int(x) for x in body.split(",") if x)
        except ValueError:
            raise ValueError(f"bad code tuple {tail!r}") from None
    return OrdinalCode(parse_level(m) if isinstance(m, str) else m, p, t)


def parse_level(text: str):
    text = text.strip()
    if text in ("w", "ω", "omega"):
        return OMEGA
    return int(text)


# truncation -----------------------------------------------------------------------

def trunc(n: int, a) -> Ordinal:
    """``w^n * min(g, 1) + b`` where ``a = w^n * g + b`` and ``b < w^n``."""
    if isinstance(a, OrdinalCode):
        if a.is_zero():
            raise ValueError("trunc of 0")
        c = a.down(n) if a.m != n else a
        low = c.remainder()
        return (Ordinal.omega_pow(n) if c.p == -1 else Ordinal()) + low
    a = as_ordinal(a)
    if a.is_zero():
        raise ValueError("trunc of 0")
    high = any(e >= n for e, _ in a.terms)
    low = Ordinal(tuple(t for t in a.terms if t[0] < n))
    return (Ordinal.omega_pow(n) if high else Ordinal()) + low


def n_equivalent(n: int, a, b) -> bool:
    return trunc(n, a) == trunc(n, b)


# length-defining formulas -----------------------------------------------------

def theta(i: int) -> fm.Formula:
    """Holds exactly at positions that are multiples of w^i."""
    f = fm.top()
    for _ in range(i):
        f = fm.conj(f, fm.neg(fm.since(fm.neg(f), f)))
    return f


def def_formula(a) -> fm.Formula:
    """Variable-free formula true at position 0 exactly of models of length ``a``."""
    a = as_ordinal(a)
    if a.is_zero():
        raise ValueError("no model has length 0")
    return _def(a)


def _def(a: Ordinal) -> fm.Formula:
    if a.is_finite():
        f = fm.neg(fm.F_plus(fm.top()))
        for _ in range(int(a) - 1):
            f = fm.X(f)
        return f
    k, c = a.terms[0]
    if c == 1 and len(a.terms) == 1:
        if k == 1:
            return fm.conj(
                fm.conj(fm.G_plus(fm.X_prev(fm.top())), fm.F_plus(fm.top())),
                fm.G_plus(fm.X(fm.top())),
            )
        return fm.conj(fm.G_plus(fm.neg(theta(k))), fm.G(fm.F_plus(theta(k - 1))))
    rest = Ordinal(((k, c - 1),) + a.terms[1:]) if c > 1 else Ordinal(a.terms[1:])
    th = theta(k)
    return fm.until(fm.neg(th), fm.conj(th, _def(rest)))


def cnf_weight(a: Ordinal) -> int:
    """sum of k_i * a_i, the quantity def_formula's size is linear in."""
    return sum(max(e, 1) * c for e, c in as_ordinal(a).terms)
