"""End-to-end satisfiability: over all countable ordinals, at a fixed length,
and for formulas with quantitative operators X^beta and U^beta."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

from . import formula as fm
from .automaton import (RunExpr, is_accepting, location_run_to_json, run_to_json,
                        validate_run)
from .emptiness import (Limits, ResourceLimit, TopDown, check_nonempty,
                        check_nonempty_topdown)
from .ordinal import (OMEGA, Ordinal, OrdinalCode, as_ordinal, def_formula,
                      format_ordinal, parse_ordinal, theta, trunc)
from .translate import FormulaAutomaton, TranslationLimit, project_model

SAT = "SAT"
UNSAT = "UNSAT"

__all__ = ["SAT", "UNSAT", "SatVerdict", "WitnessError", "sat", "sat_at", "small_model_bound",
           "QuantFormula", "QVar", "QTrue", "QNot", "QAnd", "QNext", "QUntil", "OMEGA_OMEGA",
           "normalize_quant", "translate_quant", "parse_quant", "quant_size", "ResourceLimit"]


class WitnessError(AssertionError):
    """The engine produced a witness the independent checker rejects."""


@dataclass
class SatVerdict:
    status: str
    formula: fm.Formula
    witness: Optional[RunExpr] = None
    model: Optional[RunExpr] = None
    length: Optional[Ordinal] = None
    condition: Optional[str] = None
    view: Optional[FormulaAutomaton] = field(default=None, repr=False)
    stats: Dict[str, int] = field(default_factory=dict)
    query: Optional[fm.Formula] = None  # the caller's formula when it differs from ``formula``

    @property
    def sat(self) -> bool:
        return self.status == SAT

    def to_json(self, with_witness: bool = True) -> dict:
        out = {"status": self.status,
               "formula": fm.to_text(self.query if self.query is not None else self.formula)}
        if self.sat:
            out["length"] = format_ordinal(self.length)
            out["condition"] = self.condition
            if with_witness:
                out["model"] = run_to_json(self.model, lambda x: sorted(x))
                out["witness"] = location_run_to_json(self.view, self.witness)
        out["stats"] = dict(self.stats)
        return out


def small_model_bound(phi: fm.Formula) -> Ordinal:
    """w^(|phi|+2): every satisfiable formula has a model shorter than this."""
    return Ordinal.omega_pow(fm.size(phi) + 2)


def sat(phi: fm.Formula, limits: Optional[Limits] = None, engine: str = "saturate",
        check: bool = True) -> SatVerdict:
    """Decide satisfiability of ``phi`` over all countable ordinals.

    On SAT the verdict carries an accepting run of the formula's automaton,
    the model it induces and the model's length; the run is re-checked by
    the independent validator before it is returned.
    """
    limits = limits or Limits()
    try:
        view = FormulaAutomaton(phi)
    except TranslationLimit as e:
        raise ResourceLimit(str(e)) from None
    mask = view.relevant_mask
    if engine == "topdown":
        decided = check_nonempty_topdown(view, TopDown(view, mask)).nonempty
        if not decided:
            return SatVerdict(UNSAT, phi, view=view)
        v = check_nonempty(view, mask, limits, early=True)
        if not v.nonempty:
            raise WitnessError("engines disagree: top-down found a run, saturation did not")
    elif engine == "saturate":
        v = check_nonempty(view, mask, limits, early=True)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    stats = {"locations": len(v.table.locations), "triples": len(v.table),
             "stages": v.table.stages}
    if not v.nonempty:
        return SatVerdict(UNSAT, phi, view=view, stats=stats)
    w = v.witness
    if check:
        report = validate_run(view, w)
        if not report.valid:
            raise WitnessError(report.message)
        if not is_accepting(view, w):
            raise WitnessError("witness run is not accepting")
        if not w.length < small_model_bound(phi):
            raise WitnessError(f"witness length {w.length} exceeds the small-model bound")
    return SatVerdict(SAT, phi, w, project_model(w, view), w.length, v.condition, view, stats)


def _target_length(phi: fm.Formula, alpha) -> Ordinal:
    n = fm.size(phi) + 2
    if isinstance(alpha, OrdinalCode):
        if alpha.is_zero():
            raise ValueError("models have positive length")
        if not alpha.level_ge(n):
            raise ValueError(f"a {alpha.m}-code cannot decide a formula of size {n - 2}; "
                             f"need an {n}-code or a w-code")
        return trunc(n, alpha)
    a = as_ordinal(alpha)
    if a.is_zero():
        raise ValueError("models have positive length")
    return trunc(n, a)


def sat_at(phi: fm.Formula, alpha: Union[int, Ordinal, OrdinalCode],
           limits: Optional[Limits] = None, engine: str = "saturate") -> SatVerdict:
    """Decide whether ``phi`` has a model of length exactly ``alpha``.

    ``alpha`` is truncated to ``trunc_{|phi|+2}``, which preserves the
    answer; ordinals at or beyond w^w are given by an m-code with m at
    least |phi|+2 (or m = w).
    """
    beta = _target_length(phi, alpha)
    v = sat(fm.conj(phi, def_formula(beta)), limits, engine)
    v.query = phi
    v.stats["target"] = format_ordinal(beta)  # type: ignore[assignment]
    return v


def sat_at_formula(phi: fm.Formula, alpha: Union[int, Ordinal, OrdinalCode]) -> fm.Formula:
    """The formula ``sat_at`` actually decides: phi and def of the truncated length."""
    return fm.conj(phi, def_formula(_target_length(phi, alpha)))


# quantitative operators ---------------------------------------------------------

OMEGA_OMEGA = "w^w"


class QuantFormula:
    __slots__ = ()


@dataclass(frozen=True)
class QVar(QuantFormula):
    name: str


@dataclass(frozen=True)
class QTrue(QuantFormula):
    pass


@dataclass(frozen=True)
class QNot(QuantFormula):
    child: QuantFormula


@dataclass(frozen=True)
class QAnd(QuantFormula):
    left: QuantFormula
    right: QuantFormula


@dataclass(frozen=True)
class QNext(QuantFormula):
    """``X^beta child``: position current+beta exists and satisfies child."""
    beta: Ordinal
    child: QuantFormula


@dataclass(frozen=True)
class QUntil(QuantFormula):
    """``left U^beta right``; beta is an ordinal or OMEGA_OMEGA."""
    beta: Union[Ordinal, str]
    left: QuantFormula
    right: QuantFormula


def _check_level(q: QuantFormula, k) -> None:
    bound = None if k == OMEGA else Ordinal.omega_pow(k)
    stack = [q]
    while stack:
        n = stack.pop()
        if isinstance(n, QNext):
            if bound is not None and not n.beta < bound:
                raise ValueError(f"X^{format_ordinal(n.beta)} is outside level {k}")
            stack.append(n.child)
        elif isinstance(n, QUntil):
            if n.beta == OMEGA_OMEGA:
                if k != OMEGA:
                    raise ValueError(f"U^w^w is outside level {k}")
            elif bound is not None and bound < n.beta:
                raise ValueError(f"U^{format_ordinal(n.beta)} is outside level {k}")
            stack.extend((n.left, n.right))
        elif isinstance(n, QNot):
            stack.append(n.child)
        elif isinstance(n, QAnd):
            stack.extend((n.left, n.right))


def normalize_quant(q: QuantFormula) -> QuantFormula:
    """Rewrite into operators X^(w^i), U^(w^i) and U^(w^w) only.

    X^(w^k1*a1 + ...) becomes a1 copies of X^(w^k1) followed by the smaller
    terms; U^beta with beta = w^k + beta'' (k the leading exponent) unfolds
    into its first w^k steps, then the remainder from position +w^k:
    (l U^(w^k) r) | (!(true U^(w^k) !l) & X^(w^k)(r | (l & l U^beta'' r))).
    """
    memo: Dict[int, QuantFormula] = {}

    def go(n: QuantFormula) -> QuantFormula:
        hit = memo.get(id(n))
        if hit is not None:
            return hit
        if isinstance(n, (QVar, QTrue)):
            out = n
        elif isinstance(n, QNot):
            out = QNot(go(n.child))
        elif isinstance(n, QAnd):
            out = QAnd(go(n.left), go(n.right))
        elif isinstance(n, QNext):
            out = go(n.child)
            for e, c in reversed(n.beta.terms):
                for _ in range(c):
                    out = QNext(Ordinal.omega_pow(e), out)
        else:
            out = _unfold_until(n.beta, go(n.left), go(n.right))
        memo[id(n)] = out
        return out

    return go(q)


def _unfold_until(beta, left: QuantFormula, right: QuantFormula) -> QuantFormula:
    if beta == OMEGA_OMEGA:
        return QUntil(OMEGA_OMEGA, left, right)
    if beta.is_zero():
        return QNot(QTrue())
    k, c = beta.terms[0]
    if c == 1 and len(beta.terms) == 1:
        return QUntil(beta, left, right)
    step = Ordinal.omega_pow(k)
    rest = Ordinal(((k, c - 1),) + beta.terms[1:]) if c > 1 else Ordinal(beta.terms[1:])
    head = QUntil(step, left, right)
    stay = QNot(QUntil(step, QTrue(), QNot(left)))
    later = _q_or(right, QAnd(left, _unfold_until(rest, left, right)))
    return _q_or(head, QAnd(stay, QNext(step, later)))


def _q_or(a: QuantFormula, b: QuantFormula) -> QuantFormula:
    return QNot(QAnd(QNot(a), QNot(b)))


def translate_quant(q: QuantFormula, k=OMEGA) -> fm.Formula:
    """Meaning-preserving translation into strict until/since formulas."""
    _check_level(q, k)
    norm = normalize_quant(q)
    memo: Dict[int, fm.Formula] = {}

    def go(n: QuantFormula) -> fm.Formula:
        hit = memo.get(id(n))
        if hit is not None:
            return hit
        if isinstance(n, QVar):
            out = fm.var(n.name)
        elif isinstance(n, QTrue):
            out = fm.top()
        elif isinstance(n, QNot):
            out = fm.neg(go(n.child))
        elif isinstance(n, QAnd):
            out = fm.conj(go(n.left), go(n.right))
        elif isinstance(n, QNext):
            th = theta(n.beta.degree())
            out = fm.until(fm.neg(th), fm.conj(th, go(n.child)))
        elif n.beta == OMEGA_OMEGA:
            out = fm.until(go(n.left), go(n.right))
        else:
            nth = fm.neg(theta(n.beta.degree()))
            out = fm.until(fm.conj(nth, go(n.left)), fm.conj(nth, go(n.right)))
        memo[id(n)] = out
        return out

    return go(norm)


def quant_size(q: QuantFormula) -> int:
    """Input size with unary ordinal annotations: one per node plus, for every
    annotation, the sum of its coefficients and its leading exponent."""
    seen = set()
    total = 0
    stack = [q]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        total += 1
        beta = getattr(n, "beta", None)
        if isinstance(beta, Ordinal):
            total += sum(c for _, c in beta.terms) + beta.degree()
        elif beta == OMEGA_OMEGA:
            total += 1
        for attr in ("child", "left", "right"):
            c = getattr(n, attr, None)
            if c is not None:
                stack.append(c)
    return total


_QTOKEN = re.compile(r"\s*(?:(?P<pow>[XU]\^\{[^}]*\}|[XU]\^w\^w|[XU]\^[0-9w]+)|(?P<op>[()!&|])|"
                     r"(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<bad>\S))")


def parse_quant(text: str) -> QuantFormula:
    """Parse e.g. ``X^{w+2} p``, ``p U^{w^2} q``, ``p U^{w^w} q``, ``X p``, ``p U q``.

    Plain ``X`` is ``X^1`` and plain ``U`` is ``U^{w^w}``. Precedence as for
    ordinary formulas: until (right associative) < ``|`` < ``&`` < prefix.
    """
    toks = []
    pos = 0
    while pos < len(text):
        m = _QTOKEN.match(text, pos)
        if m is None:
            break
        if m.group("bad"):
            raise fm.FormulaSyntaxError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        toks.append(next(g for g in (m.group("pow"), m.group("op"), m.group("ident")) if g))
        pos = m.end()
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def take():
        nonlocal i
        if i >= len(toks):
            raise fm.FormulaSyntaxError("unexpected end of input", len(text))
        i += 1
        return toks[i - 1]

    def annotation(tok: str):
        body = tok[2:].strip("{}")
        if body.replace(" ", "") in ("w^w", "ω^ω"):
            return OMEGA_OMEGA
        return parse_ordinal(body)

    def is_until(tok):
        return tok == "U" or (tok is not None and tok.startswith("U^"))

    def until():
        left = disj()
        tok = peek()
        if is_until(tok):
            take()
            beta = OMEGA_OMEGA if tok == "U" else annotation(tok)
            return QUntil(beta, left, until())
        return left

    def disj():
        f = conj()
        while peek() == "|":
            take()
            f = _q_or(f, conj())
        return f

    def conj():
        f = prefix()
        while peek() == "&":
            take()
            f = QAnd(f, prefix())
        return f

    def prefix():
        tok = peek()
        if tok == "!":
            take()
            return QNot(prefix())
        if tok == "X" or (tok is not None and tok.startswith("X^")):
            take()
            beta = Ordinal.of(1) if tok == "X" else annotation(tok)
            if beta == OMEGA_OMEGA:
                raise fm.FormulaSyntaxError("X^w^w is not an operator")
            return QNext(beta, prefix())
        return atom()

    def atom():
        tok = take()
        if tok == "(":
            f = until()
            if take() != ")":
                raise fm.FormulaSyntaxError("expected ')'")
            return f
        if tok == "true":
            return QTrue()
        if tok == "false":
            return QNot(QTrue())
        if tok in ("U", "S", "X", "F", "G") or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            raise fm.FormulaSyntaxError(f"unexpected token {tok!r}")
        return QVar(tok)

    f = until()
    if peek() is not None:
        raise fm.FormulaSyntaxError(f"unexpected token {peek()!r}")
    return f
