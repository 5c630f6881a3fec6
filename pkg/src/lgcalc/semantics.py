"""Lexicons and the sentence-to-readings pipeline.

Lexicon files are line oriented::

    # comment
    atom np = e
    atom r = t
    const like : e -> e -> t
    word likes : (np\\s)/np = \\v. \\y. v (\\c. \\x. c (like y x))

Word keys may join several surface words with ``_`` (``picture_of``);
sentences are tokenized by greedy longest match against the keys.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .cps import TypedTerm, cps_proof
from .lam import (
    Abs,
    App,
    Term,
    TermTypeError,
    Var,
    alpha_key,
    beta_normalize,
    free_vars,
    parse_term,
    principal_type,
    substitute_many,
    typecheck,
)
from .prover import Search
from .structures import Leaf, RuleConfig, SBin, Sequent
from .syntax import (
    RESPONSE,
    Formula,
    FormulaSyntaxError,
    T,
    TArrow,
    Ty,
    atoms,
    cps_type,
    lex_type,
    neg,
    parse_formula,
    parse_type,
    show_formula,
    show_type,
)


class LexiconError(ValueError):
    pass


class UnknownWord(LexiconError):
    pass


class NoDerivation(ValueError):
    pass


@dataclass(frozen=True)
class LexEntry:
    word: str
    source_type: Formula
    sem_term: Term


@dataclass
class Lexicon:
    atom_map: dict[str, Ty] = field(default_factory=dict)
    constants: dict[str, Ty] = field(default_factory=dict)
    entries: dict[str, list[LexEntry]] = field(default_factory=dict)

    def semantic_type(self, f: Formula) -> Ty:
        return lex_type(cps_type(f), self.atom_map)

    def lookup(self, word: str) -> list[LexEntry]:
        if word not in self.entries:
            raise UnknownWord(f"unknown word {word!r}")
        return self.entries[word]

    def add(self, entry: LexEntry):
        self.validate_entry(entry)
        self.entries.setdefault(entry.word, []).append(entry)

    def validate_entry(self, entry: LexEntry):
        missing = atoms(entry.source_type) - set(self.atom_map)
        if missing:
            raise LexiconError(f"word {entry.word!r}: no semantic type for atom(s) {sorted(missing)}")
        expected = self.semantic_type(entry.source_type)
        stray = free_vars(entry.sem_term)
        if stray:
            raise LexiconError(f"word {entry.word!r}: term is not closed (free {sorted(stray)})")
        try:
            typecheck(entry.sem_term, self.constants, expected=expected)
        except TermTypeError as exc:
            actual = principal_type(entry.sem_term, self.constants)
            raise LexiconError(
                f"word {entry.word!r}: expected type {show_type(expected)}, "
                f"got {actual}") from exc

    def tokenize(self, sentence: str) -> list[str]:
        raw = sentence.split()
        out = []
        i = 0
        longest = max((k.count("_") + 1 for k in self.entries), default=1)
        while i < len(raw):
            for n in range(min(longest, len(raw) - i), 0, -1):
                key = "_".join(raw[i:i + n])
                if key in self.entries:
                    out.append(key)
                    i += n
                    break
            else:
                raise UnknownWord(f"unknown word {raw[i]!r}")
        return out


def load_lexicon(text: str) -> Lexicon:
    lex = Lexicon()
    pending: list[tuple[int, str, str, str]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if m := re.fullmatch(r"atom\s+(\w+)\s*=\s*(.+)", line):
                lex.atom_map[m.group(1)] = parse_type(m.group(2))
            elif m := re.fullmatch(r"const\s+(\S+)\s*:\s*(.+)", line):
                lex.constants[m.group(1)] = parse_type(m.group(2))
            elif m := re.fullmatch(r"word\s+(\S+)\s*:\s*(.+?)\s*=\s*(.+)", line):
                pending.append((lineno, m.group(1), m.group(2), m.group(3)))
            else:
                raise LexiconError(f"line {lineno}: cannot parse {line!r}")
        except FormulaSyntaxError as exc:
            raise LexiconError(f"line {lineno}: {exc}") from exc
    if RESPONSE not in lex.atom_map:
        raise LexiconError("lexicon must declare 'atom r = ...'")
    consts = frozenset(lex.constants)
    for lineno, word, ftext, ttext in pending:
        try:
            f = parse_formula(ftext)
            term = parse_term(ttext, consts)
        except (FormulaSyntaxError, ValueError) as exc:
            raise LexiconError(f"line {lineno}: word {word!r}: {exc}") from exc
        lex.add(LexEntry(word, f, term))
    return lex


def bundled_lexicon_path() -> Path:
    return Path(str(resources.files("lgcalc") / "data" / "paper.lg"))


def paper_lexicon() -> Lexicon:
    return load_lexicon(bundled_lexicon_path().read_text())


# ---------------------------------------------------------------------------
# terms

def lex_term(tt: TypedTerm, lex: Lexicon, binding: Mapping[str, LexEntry | str]) -> Term:
    """Substitute lexical recipes for the free (word) variables of ``tt``.

    ``binding`` maps a free variable to a lexicon entry, or to a word with
    a single entry.  The result is beta-normal and typechecked against the
    lexical image of ``tt.type``.
    """
    mapping = {}
    env = {}
    for name in sorted(free_vars(tt.term)):
        if name not in binding:
            raise UnknownWord(f"no word bound to free variable {name!r}")
        entry = binding[name]
        if isinstance(entry, str):
            entries = lex.lookup(entry)
            if len(entries) != 1:
                raise LexiconError(f"word {entry!r} is ambiguous; bind an entry")
            entry = entries[0]
        expected = lex_type(tt.free_env[name], lex.atom_map)
        actual = lex.semantic_type(entry.source_type)
        if expected != actual:
            raise TermTypeError(
                f"{name!r} needs {show_type(expected)}, word {entry.word!r} has {show_type(actual)}")
        mapping[name] = entry.sem_term
        env[name] = actual
    body = _lex_annotations(tt.term, lex.atom_map)
    out = beta_normalize(substitute_many(body, mapping))
    typecheck(out, lex.constants, expected=lex_type(tt.type, lex.atom_map))
    return out


def _lex_annotations(t: Term, atom_map) -> Term:
    match t:
        case Abs(v, b, ty):
            ty = lex_type(ty, atom_map) if ty is not None else None
            return Abs(v, _lex_annotations(b, atom_map), ty)
        case App(f, a):
            return App(_lex_annotations(f, atom_map), _lex_annotations(a, atom_map))
    return t


def evaluate(t: Term, lex: Lexicon | None = None) -> Term:
    """Apply a sentence computation to the identity continuation."""
    if lex is not None:
        want = TArrow(TArrow(T, T), T)
        try:
            typecheck(t, lex.constants, expected=want)
        except TermTypeError as exc:
            got = principal_type(t, lex.constants)
            raise TermTypeError(f"evaluate needs type {show_type(want)}, got {got}") from exc
    return beta_normalize(App(t, Abs("p", Var("p"))))


# ---------------------------------------------------------------------------
# sentences

def parse_brackets(text: str, words: Sequence[str]):
    """Parse a bracketing such as ``(everyone (likes someone))`` into a
    nested tuple of word positions."""
    toks = re.findall(r"\(|\)|[^\s()]+", text)
    i = 0
    pos = 0

    def node():
        nonlocal i, pos
        if toks[i] == "(":
            i += 1
            kids = []
            while toks[i] != ")":
                kids.append(node())
            i += 1
            if len(kids) == 1:
                return kids[0]
            if len(kids) != 2:
                raise ValueError("brackets must be binary")
            return tuple(kids)
        tok = toks[i]
        i += 1
        if pos >= len(words) or tok != words[pos] and tok.replace(" ", "_") != words[pos]:
            raise ValueError(f"bracket word {tok!r} does not match sentence")
        pos += 1
        return pos - 1

    tree = node()
    if i != len(toks) or pos != len(words):
        raise ValueError("bracketing does not cover the sentence")
    return tree


def right_branching(n: int):
    tree = n - 1
    for i in range(n - 2, -1, -1):
        tree = (i, tree)
    return tree


def all_bracketings(lo: int, hi: int):
    """Every binary tree over positions lo..hi-1, right-branching first."""
    if hi - lo == 1:
        yield lo
        return
    for split in range(lo + 1, hi):
        for left in all_bracketings(lo, split):
            for right in all_bracketings(split, hi):
                yield (left, right)


def sentence_sequent(types: Sequence[Formula], tree, goal: Formula) -> Sequent:
    def build(t):
        if isinstance(t, int):
            return Leaf(types[t], False, f"w{t + 1}")
        return SBin("prod", build(t[0]), build(t[1]))
    return Sequent(build(tree), goal)


@dataclass(frozen=True)
class Reading:
    term: Term
    entries: tuple[LexEntry, ...]
    derivational: TypedTerm
    tree: object = None


def readings(words: Sequence[str] | str, brackets=None, goal: Formula | str = "s",
             lex: Lexicon | None = None, cfg: RuleConfig | None = None,
             limit: int = 200) -> list[Term]:
    return [r.term for r in analyse(words, brackets, goal, lex, cfg, limit)]


def analyse(words, brackets=None, goal="s", lex=None, cfg=None, limit: int = 200) -> list[Reading]:
    """Every distinct reading (up to alpha) of a sentence, in a fixed order."""
    lex = lex if lex is not None else paper_lexicon()
    if isinstance(words, str):
        words = lex.tokenize(words)
    if isinstance(goal, str):
        goal = parse_formula(goal)
    for w in words:
        lex.lookup(w)
    if brackets is None:
        # right-branching first; other trees only if it has no derivation
        for tree in all_bracketings(0, len(words)):
            out = _analyse_tree(words, tree, goal, lex, cfg, limit)
            if out:
                return out
        raise NoDerivation(f"no derivation for {' '.join(words)} |- {show_formula(goal)}")
    if isinstance(brackets, str):
        tree = parse_brackets(brackets, words)
    else:
        tree = brackets
    out = _analyse_tree(words, tree, goal, lex, cfg, limit)
    if not out:
        raise NoDerivation(f"no derivation for {' '.join(words)} |- {show_formula(goal)}")
    return out


def _analyse_tree(words, tree, goal, lex, cfg, limit) -> list[Reading]:
    seen: set[str] = set()
    out: list[Reading] = []
    for choice in itertools.product(*(lex.lookup(w) for w in words)):
        seq = sentence_sequent([e.source_type for e in choice], tree, goal)
        search = Search(seq, cfg)
        if not search.provable():
            continue
        binding = {f"w{i + 1}": e for i, e in enumerate(choice)}
        for proof in search.enumerate(limit):
            tt = cps_proof(proof)
            term = lex_term(tt, lex, binding)
            key = alpha_key(term)
            if key not in seen:
                seen.add(key)
                out.append(Reading(term, choice, tt, tree))
    return out
