"""Command-line front end: ``lgcalc prove|proofs|readings|sym|check-lexicon``.

Exit codes: 0 success or derivable, 1 not derivable, 2 usage or type error.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .cps import UnsupportedRule, cps_proof
from .lam import TermTypeError, show_term
from .prover import ResourceLimit, Search, as_goal
from .semantics import (
    LexiconError,
    NoDerivation,
    analyse,
    bundled_lexicon_path,
    evaluate,
    load_lexicon,
)
from .structures import ConfigViolation, RuleConfig, show_sequent
from .syntax import FormulaSyntaxError, bowtie, infinity, parse_formula, show_formula, show_type

OK, NOT_DERIVABLE, USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--rules", default="distr,distr-unary",
                   help="comma list of distr, distr-unary, distr-inv, or none")
    p.add_argument("--allow-both", action="store_true",
                   help="permit distr together with distr-inv")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--max-steps", type=int, default=None, help="search state budget")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lgcalc", description="Lambek-Grishin calculus with (dual) Galois connections")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("prove", help="decide an arrow 'A -> B'")
    p.add_argument("arrow")
    _common(p)

    p = sub.add_parser("proofs", help="enumerate cut-free proofs of an arrow")
    p.add_argument("arrow")
    p.add_argument("--limit", type=int, default=20)
    p.add_argument("--terms", action="store_true", help="also print CPS terms")
    _common(p)

    p = sub.add_parser("readings", help="derive the readings of a sentence")
    p.add_argument("--lexicon", default="paper.lg")
    p.add_argument("--goal", default="s")
    p.add_argument("--sentence", required=True)
    p.add_argument("--brackets", default=None, help="e.g. '(alice (claims ((some unicorn) left)))'")
    p.add_argument("--eval", action="store_true", help="apply readings to the identity continuation")
    p.add_argument("--limit", type=int, default=200)
    _common(p)

    p = sub.add_parser("sym", help="apply a symmetry to a formula")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--bowtie", action="store_true")
    g.add_argument("--infinity", action="store_true")
    p.add_argument("formula")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("check-lexicon", help="validate a lexicon file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    return ap


def resolve_lexicon(name: str) -> Path:
    path = Path(name)
    if path.exists():
        return path
    if name == "paper.lg" or path.name == name and (bundled_lexicon_path().parent / name).exists():
        return bundled_lexicon_path().parent / name
    raise FileNotFoundError(f"lexicon not found: {name}")


def _config(args) -> RuleConfig:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return RuleConfig.from_names(args.rules, args.allow_both)


def _emit(args, data, text: str):
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(text)


def cmd_prove(args) -> int:
    search = Search(as_goal(args.arrow), _config(args), args.max_steps)
    proof = search.proof()
    data = {"goal": args.arrow, "derivable": proof is not None,
            "proof": proof.to_json() if proof else None}
    text = proof.render() if proof else f"not derivable: {args.arrow}"
    _emit(args, data, text)
    return OK if proof else NOT_DERIVABLE


def cmd_proofs(args) -> int:
    search = Search(as_goal(args.arrow), _config(args), args.max_steps)
    proofs = search.enumerate(args.limit)
    items, chunks = [], []
    for i, p in enumerate(proofs, 1):
        item = {"proof": p.to_json()}
        chunk = [f"# proof {i}", p.render()]
        if args.terms:
            try:
                tt = cps_proof(p)
                item["term"] = show_term(tt.term)
                item["type"] = show_type(tt.type)
                chunk.append(f"term: {show_term(tt.term)} : {show_type(tt.type)}")
            except UnsupportedRule as exc:
                item["term"] = None
                chunk.append(f"term: unavailable ({exc})")
        items.append(item)
        chunks.append("\n".join(chunk))
    if not proofs:
        chunks.append(f"not derivable: {args.arrow}")
    _emit(args, {"goal": args.arrow, "count": len(proofs), "proofs": items}, "\n\n".join(chunks))
    return OK if proofs else NOT_DERIVABLE


def cmd_readings(args) -> int:
    lex = load_lexicon(resolve_lexicon(args.lexicon).read_text())
    goal = parse_formula(args.goal)
    try:
        found = analyse(args.sentence, args.brackets, goal, lex, _config(args), args.limit)
    except NoDerivation as exc:
        _emit(args, {"sentence": args.sentence, "readings": []}, str(exc))
        return NOT_DERIVABLE
    items, lines = [], []
    for i, r in enumerate(found, 1):
        item = {"term": show_term(r.term)}
        line = f"{i}. {show_term(r.term)}"
        if args.eval:
            v = evaluate(r.term, lex)
            item["value"] = show_term(v)
            line += f"\n   = {show_term(v)}"
        items.append(item)
        lines.append(line)
    _emit(args, {"sentence": args.sentence, "goal": show_formula(goal), "readings": items},
          "\n".join(lines))
    return OK


def cmd_sym(args) -> int:
    f = parse_formula(args.formula)
    g = bowtie(f) if args.bowtie else infinity(f)
    _emit(args, {"input": show_formula(f), "output": show_formula(g)}, show_formula(g))
    return OK


def cmd_check_lexicon(args) -> int:
    lex = load_lexicon(resolve_lexicon(args.file).read_text())
    n = sum(len(v) for v in lex.entries.values())
    _emit(args, {"ok": True, "words": len(lex.entries), "entries": n},
          f"ok: {len(lex.entries)} words, {n} entries")
    return OK


COMMANDS = {"prove": cmd_prove, "proofs": cmd_proofs, "readings": cmd_readings,
            "sym": cmd_sym, "check-lexicon": cmd_check_lexicon}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (FormulaSyntaxError, LexiconError, TermTypeError, ConfigViolation,
            FileNotFoundError, UnsupportedRule, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ResourceLimit as exc:
        print(f"error: search budget exhausted: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
