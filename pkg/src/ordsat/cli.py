"""Command-line interface.

Exit status: 0 satisfiable / nonempty / valid, 1 unsatisfiable / empty /
invalid, 2 usage or input error, 3 resource cap reached.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, List, Optional

from . import __version__
from . import formula as fm
from . import oracle
from .automaton import (AutomatonError, Concat, OmegaPower, RunExpr, Word, automaton_to_json,
                        is_accepting, load_automaton, location_run_from_json,
                        location_run_to_json, validate_run)
from .emptiness import Limits, ResourceLimit, TopDown, check_nonempty, check_nonempty_topdown
from .ordinal import (OMEGA, def_formula, format_ordinal, parse_code, parse_level,
                      parse_ordinal)
from .solver import UNSAT, parse_quant, sat, sat_at, sat_at_formula, translate_quant
from .translate import FormulaAutomaton, TranslationLimit, build_automaton

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def format_run(r: RunExpr, item) -> str:
    """Text form; subterms used more than once are named $1, $2, ... and
    defined after ``where``, so the text stays as small as the expression."""
    refs: Dict[int, int] = {}
    order: List[RunExpr] = []

    def count(node):
        refs[id(node)] = refs.get(id(node), 0) + 1
        if refs[id(node)] > 1:
            return
        for c in _children(node):
            count(c)
        order.append(node)

    count(r)
    names = {}
    for node in order:
        if node is not r and refs[id(node)] > 1 and not isinstance(node, Word):
            names[id(node)] = f"${len(names) + 1}"

    def show(node, top=False) -> str:
        if not top and id(node) in names:
            return names[id(node)]
        if isinstance(node, Word):
            return " ".join(item(x) for x in node.items)
        if isinstance(node, Concat):
            return " ".join(show(p) for p in node.parts)
        return f"({show(node.body)})^w"

    text = show(r, True)
    defs = [f"{names[id(n)]} = {show(n, True)}" for n in order if id(n) in names]
    return text + (" where " + "; ".join(defs) if defs else "")


def _children(node) -> List[RunExpr]:
    if isinstance(node, Concat):
        return list(node.parts)
    if isinstance(node, OmegaPower):
        return [node.body]
    return []


def _letter(x) -> str:
    return "{" + ",".join(sorted(x)) + "}"


def _limits(args) -> Limits:
    return Limits(max_stages=args.max_stages, max_locations=args.max_locations,
                  max_triples=args.max_triples, timeout_ms=args.timeout_ms)


def _emit(args, doc: dict, lines: List[str]):
    if args.json:
        print(json.dumps(doc, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _write_witness(path: str, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.write("\n")


def _verdict_out(args, v) -> int:
    lines = [v.status]
    if v.sat:
        lines.append(f"length: {format_ordinal(v.length)}")
        lines.append(f"model: {format_run(v.model, _letter)}")
    _emit(args, v.to_json(with_witness=args.json), lines)
    if v.sat and args.witness:
        _write_witness(args.witness, location_run_to_json(v.view, v.witness))
    return EXIT_YES if v.sat else EXIT_NO


def cmd_sat(args) -> int:
    return _verdict_out(args, sat(fm.parse(args.formula), _limits(args), args.engine))


def _alpha(args):
    if args.code is not None:
        if args.alpha is not None:
            raise UsageError("give either --alpha or --code")
        if args.code_m is None:
            raise UsageError("--code needs --code-m")
        return parse_code(args.code, parse_level(args.code_m))
    if args.alpha is None:
        raise UsageError("give --alpha or --code")
    return parse_ordinal(args.alpha)


def cmd_sat_at(args) -> int:
    phi = fm.parse(args.formula)
    return _verdict_out(args, sat_at(phi, _alpha(args), _limits(args), args.engine))


def cmd_emptiness(args) -> int:
    aut = load_automaton(args.automaton)
    if args.engine == "topdown":
        v = check_nonempty_topdown(aut, TopDown(aut))
        if v.nonempty:
            v = check_nonempty(aut, limits=_limits(args))
    else:
        v = check_nonempty(aut, limits=_limits(args))
    doc = {"status": "NONEMPTY" if v.nonempty else "EMPTY"}
    lines = [doc["status"]]
    if v.nonempty:
        run = location_run_to_json(aut, v.witness)
        doc.update(condition=v.condition, length=format_ordinal(v.witness.length), witness=run)
        lines.append(f"length: {format_ordinal(v.witness.length)}")
        if args.witness:
            _write_witness(args.witness, run)
    _emit(args, doc, lines)
    return EXIT_YES if v.nonempty else EXIT_NO


def cmd_check_run(args) -> int:
    with open(args.run, encoding="utf-8") as fh:
        doc = json.load(fh)
    if args.formula is not None:
        phi = fm.parse(args.formula)
        if args.alpha is not None or args.code is not None:
            phi = sat_at_formula(phi, _alpha(args))
        aut = FormulaAutomaton(phi)
    elif args.alpha is not None or args.code is not None:
        raise UsageError("--alpha and --code need --formula")
    elif args.automaton is not None:
        aut = load_automaton(args.automaton)
    else:
        raise UsageError("give an automaton file or --formula")
    r = location_run_from_json(aut, doc)
    report = validate_run(aut, r)
    acc = report.valid and is_accepting(aut, r)
    out = {"valid": report.valid, "accepting": acc, "message": report.message,
           "length": format_ordinal(r.length)}
    _emit(args, out, [("ACCEPTED" if acc else "REJECTED"), report.message,
                      f"length: {out['length']}"])
    return EXIT_YES if acc else EXIT_NO


def cmd_translate(args) -> int:
    aut = build_automaton(fm.parse(args.formula), args.max_closure)
    text = json.dumps(automaton_to_json(aut), sort_keys=True)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_YES


def cmd_def_alpha(args) -> int:
    f = def_formula(parse_ordinal(args.alpha))
    _emit(args, {"formula": fm.to_text(f), "size": fm.size(f)},
          [fm.to_text(f)] + ([f"size: {fm.size(f)}"] if args.size else []))
    return EXIT_YES


def cmd_quant(args) -> int:
    q = parse_quant(args.formula)
    level = OMEGA if args.level is None else parse_level(args.level)
    phi = translate_quant(q, level)
    if args.alpha is None and args.code is None:
        if args.translate_only:
            _emit(args, {"formula": fm.to_text(phi)}, [fm.to_text(phi)])
            return EXIT_YES
        return _verdict_out(args, sat(phi, _limits(args), args.engine))
    return _verdict_out(args, sat_at(phi, _alpha(args), _limits(args), args.engine))


def _seed() -> int:
    return int(os.environ.get("ORDSAT_SEED", "0"))


def cmd_oracle(args) -> int:
    if args.task == "enum":
        phi = fm.parse(args.formula)
        m = oracle.find_finite_model(phi, args.length, args.vars)
        doc = {"status": UNSAT if m is None else "SAT"}
        if m is not None:
            doc["model"] = m.to_json()
        _emit(args, doc, [doc["status"]] + ([" ".join(_letter(x) for x in m.letters)] if m else []))
        return EXIT_NO if m is None else EXIT_YES
    if args.task == "lasso":
        phi = fm.parse(args.formula)
        u = json.loads(args.prefix)
        v = json.loads(args.loop)
        ok = oracle.eval_lasso(phi, oracle.LassoModel(tuple(u), tuple(v)), args.position)
        _emit(args, {"holds": ok}, ["TRUE" if ok else "FALSE"])
        return EXIT_YES if ok else EXIT_NO
    if args.task == "gen-formula":
        f = oracle.gen_formula(_seed(), args.size, args.vars or ("p", "q"))
        _emit(args, {"formula": fm.to_text(f)}, [fm.to_text(f)])
        return EXIT_YES
    aut = oracle.gen_automaton(_seed(), args.basis)
    print(json.dumps(automaton_to_json(aut), sort_keys=True))
    return EXIT_YES


def _add_caps(p: argparse.ArgumentParser):
    p.add_argument("--max-locations", type=int, default=None)
    p.add_argument("--max-stages", type=int, default=None)
    p.add_argument("--max-triples", type=int, default=None)
    p.add_argument("--timeout-ms", type=int, default=None)
    p.add_argument("--engine", choices=("saturate", "topdown"), default="saturate")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _add_alpha(p: argparse.ArgumentParser):
    p.add_argument("--alpha", help='ordinal below w^w, e.g. "w^2*3+w+2"')
    p.add_argument("--code", help='m-code "(p, [a_n,...,a_0])" or "(p, -)"')
    p.add_argument("--code-m", help="level of --code: a natural or w")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ordsat", description=(
        "Satisfiability of temporal logic with strict until and since over countable ordinals."))
    ap.add_argument("--version", action="version", version=f"ordsat {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sat", help="satisfiability over all countable ordinals")
    p.add_argument("formula")
    p.add_argument("--witness", help="write the accepting run here")
    _add_caps(p)
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("sat-at", help="satisfiability at one model length")
    p.add_argument("formula")
    p.add_argument("--witness")
    _add_alpha(p)
    _add_caps(p)
    p.set_defaults(func=cmd_sat_at)

    p = sub.add_parser("emptiness", help="nonemptiness of an automaton file")
    p.add_argument("automaton")
    p.add_argument("--witness")
    _add_caps(p)
    p.set_defaults(func=cmd_emptiness)

    p = sub.add_parser("check-run", help="validate a run file against an automaton")
    p.add_argument("automaton", nargs="?")
    p.add_argument("run")
    p.add_argument("--formula", help="check against the automaton of this formula instead")
    p.add_argument("--alpha", help="with --formula: the run came from sat-at at this length")
    p.add_argument("--code", help="with --formula: the run came from sat-at at this m-code")
    p.add_argument("--code-m")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check_run)

    p = sub.add_parser("translate", help="explicit automaton of a formula as JSON")
    p.add_argument("formula")
    p.add_argument("-o", "--output")
    p.add_argument("--max-closure", type=int, default=20)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("def-alpha", help="formula satisfied exactly by models of a length")
    p.add_argument("--alpha", required=True)
    p.add_argument("--size", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_def_alpha)

    p = sub.add_parser("quant", help="formulas with X^beta and U^beta")
    p.add_argument("formula")
    p.add_argument("--level", help="operator level k (natural or w, default w)")
    p.add_argument("--translate-only", action="store_true")
    p.add_argument("--witness")
    _add_alpha(p)
    _add_caps(p)
    p.set_defaults(func=cmd_quant)

    p = sub.add_parser("oracle", help="brute-force evaluators and generators")
    p.add_argument("task", choices=("enum", "lasso", "gen-formula", "gen-automaton"))
    p.add_argument("formula", nargs="?")
    p.add_argument("-n", "--length", type=int, default=1)
    p.add_argument("--vars", nargs="*")
    p.add_argument("--prefix", default="[]", help="lasso prefix as JSON letter list")
    p.add_argument("--loop", default="[[]]", help="lasso loop as JSON letter list")
    p.add_argument("--position", type=int, default=0)
    p.add_argument("--size", type=int, default=6)
    p.add_argument("--basis", type=int, default=3)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "oracle" and args.task in ("enum", "lasso") and not args.formula:
        ap.error(f"oracle {args.task} needs a formula")
    try:
        return args.func(args)
    except ResourceLimit as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except TranslationLimit as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except (fm.FormulaSyntaxError, AutomatonError, UsageError, ValueError, OSError,
            json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def run_cli(argv: Optional[List[str]] = None) -> int:
    return main(argv)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
