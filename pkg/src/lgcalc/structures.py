"""Polarized display structures, sequents and structural rules.

A structure is a tree of labelled formula leaves and structural
connectives.  Connectives reuse the formula operator names; the polarity
of a node is fixed by its operator (``INPUT_OPS``), the polarity of a
leaf is stored on it.

Display postulates (residuation, dual residuation, Galois and dual
Galois) are invertible and generate finite orbits.  The distributivity
groups are one-way rules given as premise/conclusion patterns.
"""
from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Union

from .syntax import CHILD_OUTPUT, INPUT_OPS, Formula, show_formula


class ConfigViolation(ValueError):
    pass


# hashes are cached: search hashes the same deep trees many times

@dataclass(frozen=True, slots=True)
class Leaf:
    formula: Formula
    output: bool
    label: str | None = None
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((self.formula, self.output, self.label)))

    def __hash__(self) -> int:
        return self._h


@dataclass(frozen=True, slots=True)
class SBin:
    op: str
    left: "Structure"
    right: "Structure"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((self.op, self.left, self.right)))

    def __hash__(self) -> int:
        return self._h


@dataclass(frozen=True, slots=True)
class SUn:
    op: str
    arg: "Structure"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((self.op, self.arg)))

    def __hash__(self) -> int:
        return self._h


Structure = Union[Leaf, SBin, SUn]
Side = Union[Leaf, SBin, SUn, Formula]


def is_output(s: Structure) -> bool:
    if isinstance(s, Leaf):
        return s.output
    return s.op not in INPUT_OPS


def is_structure(x) -> bool:
    return isinstance(x, (Leaf, SBin, SUn))


def make(op: str, *args: Structure) -> Structure:
    """Build a structural node, checking argument polarities."""
    want = CHILD_OUTPUT[op]
    if len(args) != len(want):
        raise ValueError(f"{op} takes {len(want)} arguments")
    for a, w in zip(args, want):
        if is_output(a) != w:
            raise ValueError(f"polarity violation: {op} expects {'output' if w else 'input'} argument")
    return SBin(op, *args) if len(args) == 2 else SUn(op, args[0])


def children(s: Structure) -> tuple[Structure, ...]:
    match s:
        case SBin(_, l, r):
            return (l, r)
        case SUn(_, a):
            return (a,)
    return ()


def leaves(s: Structure) -> list[Leaf]:
    if isinstance(s, Leaf):
        return [s]
    out = []
    for c in children(s):
        out.extend(leaves(c))
    return out


@lru_cache(maxsize=500_000)
def erase(s: Structure) -> Structure:
    match s:
        case Leaf(f, o, _):
            return Leaf(f, o)
        case SBin(op, l, r):
            return SBin(op, erase(l), erase(r))
        case SUn(op, a):
            return SUn(op, erase(a))
    raise TypeError(s)


@dataclass(frozen=True, slots=True)
class Sequent:
    """``ant |- suc``; at most one side is a bare (active) formula."""

    ant: Side
    suc: Side
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __hash__(self) -> int:
        return self._h

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((self.ant, self.suc)))
        a, s = is_structure(self.ant), is_structure(self.suc)
        if not a and not s:
            raise ValueError("a sequent has at most one active formula")
        if a and is_output(self.ant):
            raise ValueError("antecedent must be an input structure")
        if s and not is_output(self.suc):
            raise ValueError("succedent must be an output structure")

    @property
    def kind(self) -> str:
        """'passive', 'right' (active output) or 'left' (active input)."""
        if not is_structure(self.suc):
            return "right"
        if not is_structure(self.ant):
            return "left"
        return "passive"

    @property
    def active(self) -> Formula | None:
        if not is_structure(self.suc):
            return self.suc
        if not is_structure(self.ant):
            return self.ant
        return None

    def leaves(self) -> list[Leaf]:
        out = []
        for side in (self.ant, self.suc):
            if is_structure(side):
                out.extend(leaves(side))
        return out

    def labels(self) -> list[str]:
        return [l.label for l in self.leaves()]

    def erase(self) -> "Sequent":
        return Sequent(_erase_side(self.ant), _erase_side(self.suc))

    def __str__(self) -> str:
        return show_sequent(self)


def _erase_side(x: Side) -> Side:
    return erase(x) if is_structure(x) else x


# ---------------------------------------------------------------------------
# rendering

_DOTTED = {"prod": ".*.", "over": "./.", "under": ".\\.", "coprod": ".+.",
           "rdiff": ".(/).", "ldiff": ".(\\)."}


@lru_cache(maxsize=500_000)
def show_structure(s: Structure) -> str:
    match s:
        case Leaf(f, out, label):
            fs = show_formula(f)
            if label is None:
                return fs if _simple(f) else f"({fs})"
            return f"{label}{chr(39) if out else ''}:{fs if _simple(f) else '(' + fs + ')'}"
        case SBin(op, l, r):
            return f"{_wrap(l)} {_DOTTED[op]} {_wrap(r)}"
        case SUn("dgall", a):
            return f".^1 {_wrap(a)}"
        case SUn("gall", a):
            return f".^0 {_wrap(a)}"
        case SUn("dgalr", a):
            return f"{_wrap(a)} ^1."
        case SUn("galr", a):
            return f"{_wrap(a)} ^0."
    raise TypeError(s)


def _simple(f: Formula) -> bool:
    from .syntax import Atom
    return isinstance(f, Atom)


def _wrap(s: Structure) -> str:
    txt = show_structure(s)
    return txt if isinstance(s, Leaf) else f"({txt})"


def show_side(x: Side) -> str:
    return show_structure(x) if is_structure(x) else show_formula(x)


def show_sequent(s: Sequent) -> str:
    return f"{show_side(s.ant)} |- {show_side(s.suc)}"


# ---------------------------------------------------------------------------
# display postulates

def display_moves_labeled(s: Sequent) -> list[tuple[str, Sequent]]:
    """One-step images under rp/drp/gc/dgc, tagged with the rule name.

    Only passive sequents are rewritten; active sequents have no images.
    """
    if s.kind != "passive":
        return []
    out: list[tuple[str, Sequent]] = []
    x, y = s.ant, s.suc
    match x:
        case SBin("prod", a, b):          # A.*.B |- Z  <=> A |- Z./.B <=> B |- A.\.Z
            out.append(("rp", Sequent(a, SBin("over", y, b))))
            out.append(("rp", Sequent(b, SBin("under", a, y))))
        case SBin("ldiff", b, z):         # B.(\).Z |- A <=> Z |- B.+.A
            out.append(("drp", Sequent(z, SBin("coprod", b, y))))
        case SBin("rdiff", z, a):         # Z.(/).A |- B <=> Z |- B.+.A
            out.append(("drp", Sequent(z, SBin("coprod", y, a))))
        case SUn("dgall", b):             # .^1 B |- A <=> A ^1. |- B
            out.append(("dgc", Sequent(SUn("dgalr", y), b)))
        case SUn("dgalr", a):             # A ^1. |- B <=> .^1 B |- A
            out.append(("dgc", Sequent(SUn("dgall", y), a)))
    match y:
        case SBin("over", z, b):          # A |- Z./.B <=> A.*.B |- Z
            out.append(("rp", Sequent(SBin("prod", x, b), z)))
        case SBin("under", a, z):         # B |- A.\.Z <=> A.*.B |- Z
            out.append(("rp", Sequent(SBin("prod", a, x), z)))
        case SBin("coprod", b, a):        # Z |- B.+.A <=> B.(\).Z |- A <=> Z.(/).A |- B
            out.append(("drp", Sequent(SBin("ldiff", b, x), a)))
            out.append(("drp", Sequent(SBin("rdiff", x, a), b)))
        case SUn("galr", b):              # A |- B ^0. <=> B |- .^0 A
            out.append(("gc", Sequent(b, SUn("gall", x))))
        case SUn("gall", a):              # B |- .^0 A <=> A |- B ^0.
            out.append(("gc", Sequent(a, SUn("galr", x))))
    return out


def display_moves(s: Sequent) -> set[Sequent]:
    return {t for _, t in display_moves_labeled(s)}


def display_orbit_paths(s: Sequent) -> dict[Sequent, tuple[Sequent | None, str | None]]:
    """Breadth-first closure; maps each member to (parent, rule) for path recovery."""
    parents: dict[Sequent, tuple[Sequent | None, str | None]] = {s: (None, None)}
    queue = deque([s])
    while queue:
        cur = queue.popleft()
        for rule, nxt in display_moves_labeled(cur):
            if nxt not in parents:
                parents[nxt] = (cur, rule)
                queue.append(nxt)
    return parents


def display_orbit(s: Sequent) -> set[Sequent]:
    return set(display_orbit_paths(s))


def orbit_list(s: Sequent) -> list[Sequent]:
    """Orbit members in breadth-first discovery order."""
    return list(display_orbit_paths(s))


def display_path(parents, member: Sequent) -> list[tuple[str, Sequent]]:
    """Steps (rule, sequent) leading from the orbit root to ``member``."""
    steps = []
    cur = member
    while True:
        parent, rule = parents[cur]
        if parent is None:
            break
        steps.append((rule, cur))
        cur = parent
    steps.reverse()
    return steps


def canonical(s: Sequent) -> Sequent:
    """Deterministic orbit representative: least rendered member."""
    if s.kind != "passive":
        return s
    return min(display_orbit(s), key=show_sequent)


def canonical_key(s: Sequent) -> str:
    """Label-free memo key of a sequent's display orbit."""
    e = s.erase()
    if e.kind != "passive":
        return "A|" + show_sequent(e)
    return "P|" + min(show_sequent(m) for m in display_orbit(e))


# ---------------------------------------------------------------------------
# rule groups

@dataclass(frozen=True)
class RuleConfig:
    distr_binary: bool = True
    distr_unary: bool = True
    distr_inverse: bool = False
    allow_both_groups: bool = False

    def __post_init__(self):
        if self.distr_binary and self.distr_inverse:
            if not self.allow_both_groups:
                raise ConfigViolation(
                    "distr and distr^-1 together require allow_both_groups=True")
            warnings.warn(
                "combining distr with its converses collapses non-associativity "
                "and non-commutativity of product/coproduct", stacklevel=3)

    @classmethod
    def none(cls) -> "RuleConfig":
        return cls(False, False, False)

    @classmethod
    def from_names(cls, names: str, allow_both: bool = False) -> "RuleConfig":
        """Parse a comma list of ``distr``, ``distr-unary``, ``distr-inv``."""
        parts = {p.strip() for p in names.split(",") if p.strip()}
        unknown = parts - {"distr", "distr-unary", "distr-inv", "none"}
        if unknown:
            raise ConfigViolation(f"unknown rule group(s): {', '.join(sorted(unknown))}")
        return cls("distr" in parts, "distr-unary" in parts, "distr-inv" in parts, allow_both)

    def groups(self) -> tuple[str, ...]:
        g = []
        if self.distr_binary:
            g.append("distr")
        if self.distr_unary:
            g.append("distr-unary")
        if self.distr_inverse:
            g.append("distr-inv")
        return tuple(g)


# Patterns: strings are structure metavariables, tuples are (op, *args).
# Each rule: (id, premise, conclusion) with premise/conclusion = (ant, suc).
_FIG1 = [
    ("distr1", (("prod", "X", "Y"), ("coprod", "Z", "W")), (("ldiff", "Z", "X"), ("over", "W", "Y"))),
    ("distr2", (("prod", "X", "Y"), ("coprod", "Z", "W")), (("rdiff", "Y", "W"), ("under", "X", "Z"))),
    ("distr3", (("prod", "X", "Y"), ("coprod", "Z", "W")), (("ldiff", "Z", "Y"), ("under", "X", "W"))),
    ("distr4", (("prod", "X", "Y"), ("coprod", "Z", "W")), (("rdiff", "X", "W"), ("over", "Z", "Y"))),
]
_FIG2 = [
    ("gdistr1", ("X", "Y"), (("dgall", "Y"), ("galr", "X"))),
    ("gdistr2", ("X", "Y"), (("dgall", "Y"), ("gall", "X"))),
    ("gdistr3", ("X", "Y"), (("dgalr", "Y"), ("gall", "X"))),
    ("gdistr4", ("X", "Y"), (("dgalr", "Y"), ("galr", "X"))),
    ("gdistr5", ("X", ("coprod", "Y", "Z")), (("dgalr", "Y"), ("under", "X", "Z"))),
    ("gdistr6", ("X", ("coprod", "Y", "Z")), (("dgalr", "Y"), ("over", "Z", "X"))),
    ("gdistr7", ("X", ("coprod", "Y", "Z")), (("dgall", "Z"), ("under", "X", "Y"))),
    ("gdistr8", ("X", ("coprod", "Y", "Z")), (("dgall", "Z"), ("over", "Y", "X"))),
    ("gdistr9", (("prod", "X", "Y"), "Z"), (("ldiff", "Z", "X"), ("gall", "Y"))),
    ("gdistr10", (("prod", "X", "Y"), "Z"), (("rdiff", "X", "Z"), ("gall", "Y"))),
    ("gdistr11", (("prod", "X", "Y"), "Z"), (("ldiff", "Z", "Y"), ("galr", "X"))),
    ("gdistr12", (("prod", "X", "Y"), "Z"), (("rdiff", "Y", "Z"), ("galr", "X"))),
]
_FIG1_INV = [(rid.replace("distr", "distrinv"), concl, prem) for rid, prem, concl in _FIG1]

RULE_GROUPS = {"distr": _FIG1, "distr-unary": _FIG2, "distr-inv": _FIG1_INV}


@lru_cache(maxsize=None)
def rules_for(cfg: RuleConfig) -> tuple[tuple[str, tuple, tuple], ...]:
    out = []
    for g in cfg.groups():
        out.extend(RULE_GROUPS[g])
    return tuple(out)


def _match(pat, s: Structure, env: dict) -> bool:
    if isinstance(pat, str):
        if pat in env:
            return env[pat] == s
        env[pat] = s
        return True
    op, *args = pat
    kids = children(s)
    if isinstance(s, Leaf) or s.op != op or len(kids) != len(args):
        return False
    return all(_match(p, k, env) for p, k in zip(args, kids))


def _build(pat, env: dict) -> Structure:
    if isinstance(pat, str):
        return env[pat]
    op, *args = pat
    return make(op, *(_build(a, env) for a in args))


def _top_ok(pat, s) -> bool:
    return isinstance(pat, str) or (isinstance(s, (SBin, SUn)) and s.op == pat[0])


def _rewrite(s: Sequent, src, dst) -> Sequent | None:
    if not (_top_ok(src[0], s.ant) and _top_ok(src[1], s.suc)):
        return None
    if s.kind != "passive":
        return None
    env: dict = {}
    if not (_match(src[0], s.ant, env) and _match(src[1], s.suc, env)):
        return None
    try:
        return Sequent(_build(dst[0], env), _build(dst[1], env))
    except ValueError:
        return None


def distr_moves_labeled(s: Sequent, cfg: RuleConfig) -> list[tuple[str, Sequent]]:
    """Forward one-step images: premise ``s`` to each enabled conclusion."""
    out = []
    for rid, prem, concl in rules_for(cfg):
        t = _rewrite(s, prem, concl)
        if t is not None:
            out.append((rid, t))
    return out


def distr_moves(s: Sequent, cfg: RuleConfig) -> set[Sequent]:
    return {t for _, t in distr_moves_labeled(s, cfg)}


def distr_premises(s: Sequent, cfg: RuleConfig) -> list[tuple[str, Sequent]]:
    """Backward step: premises from which an enabled rule concludes ``s``."""
    out = []
    for rid, prem, concl in rules_for(cfg):
        t = _rewrite(s, concl, prem)
        if t is not None:
            out.append((rid, t))
    return out


def rule_by_id(rid: str):
    for group in RULE_GROUPS.values():
        for r in group:
            if r[0] == rid:
                return r
    raise KeyError(rid)


def iter_positions(s: Structure, path=()) -> Iterator[tuple[tuple, Structure]]:
    yield path, s
    for i, c in enumerate(children(s)):
        yield from iter_positions(c, path + (i,))
