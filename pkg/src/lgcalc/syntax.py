"""Formula language of LG with Galois and dual-Galois negations.

Binary connectives (ASCII concrete syntax in brackets):

    prod   A * B       coprod  A + B
    over   C / D       rdiff   A (/) B
    under  A \\ B       ldiff   A (\\) B

Unary negations: ``galr`` (A^0), ``gall`` (^0 A), ``dgalr`` (A^1),
``dgall`` (^1 A).  Postfix negations bind tighter than prefix ones, every
unary binds tighter than any binary, and binaries never associate: a
formula with two binary operators needs parentheses.

The module also holds the two symmetries on formulas (mirror and
arrow-reversing duality) and the type-level CPS translation into the
implicational target language over the atoms plus the response atom ``r``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Union

RESPONSE = "r"

BINARY_OPS = ("prod", "over", "under", "coprod", "rdiff", "ldiff")
UNARY_OPS = ("galr", "gall", "dgalr", "dgall")

# connectives whose structural counterpart lives in input (antecedent) position
INPUT_OPS = frozenset({"prod", "rdiff", "ldiff", "dgall", "dgalr"})
OUTPUT_OPS = frozenset({"coprod", "under", "over", "galr", "gall"})

# polarity of each argument place; True = output
CHILD_OUTPUT = {
    "prod": (False, False),
    "rdiff": (False, True),
    "ldiff": (True, False),
    "coprod": (True, True),
    "under": (False, True),
    "over": (True, False),
    "dgall": (True,),
    "dgalr": (True,),
    "galr": (False,),
    "gall": (False,),
}

BINARY_TOKENS = {
    "prod": "*",
    "over": "/",
    "under": "\\",
    "coprod": "+",
    "rdiff": "(/)",
    "ldiff": "(\\)",
}
TOKEN_BINARY = {v: k for k, v in BINARY_TOKENS.items()}
POSTFIX = {"^0": "galr", "^1": "dgalr"}
PREFIX = {"^0": "gall", "^1": "dgall"}


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}" + (f": {text!r}" if text else ""))
        self.position = position


class ReservedAtomError(FormulaSyntaxError):
    pass


class UnsupportedConnective(ValueError):
    """Raised when a connective has no CPS image (product, coproduct)."""


@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Bin:
    op: str
    left: "Formula"
    right: "Formula"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((self.op, self.left, self.right)))

    def __hash__(self) -> int:
        return self._h

    def __str__(self) -> str:
        return show_formula(self)


@dataclass(frozen=True, slots=True)
class Un:
    op: str
    arg: "Formula"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((self.op, self.arg)))

    def __hash__(self) -> int:
        return self._h

    def __str__(self) -> str:
        return show_formula(self)


Formula = Union[Atom, Bin, Un]


def Prod(a, b): return Bin("prod", a, b)
def Over(c, d): return Bin("over", c, d)
def Under(a, b): return Bin("under", a, b)
def Coprod(a, b): return Bin("coprod", a, b)
def RDiff(a, b): return Bin("rdiff", a, b)
def LDiff(a, b): return Bin("ldiff", a, b)
def GalR(a): return Un("galr", a)
def GalL(a): return Un("gall", a)
def DGalR(a): return Un("dgalr", a)
def DGalL(a): return Un("dgall", a)


def is_atomic(f: Formula) -> bool:
    return isinstance(f, Atom)


def subformula_count(f: Formula) -> int:
    match f:
        case Atom():
            return 1
        case Bin(_, l, r):
            return 1 + subformula_count(l) + subformula_count(r)
        case Un(_, a):
            return 1 + subformula_count(a)
    raise TypeError(f)


def atoms(f: Formula) -> set[str]:
    match f:
        case Atom(n):
            return {n}
        case Bin(_, l, r):
            return atoms(l) | atoms(r)
        case Un(_, a):
            return atoms(a)
    raise TypeError(f)


# ---------------------------------------------------------------------------
# printing

def show_formula(f: Formula) -> str:
    match f:
        case Atom(name):
            return name
        case Bin(op, l, r):
            return f"{_operand(l)} {BINARY_TOKENS[op]} {_operand(r)}"
        case Un(op, a) if op in ("galr", "dgalr"):
            inner = show_formula(a)
            if not (isinstance(a, Atom) or (isinstance(a, Un) and a.op in ("galr", "dgalr"))):
                inner = f"({inner})"
            return inner + ("^0" if op == "galr" else "^1")
        case Un(op, a):
            tok = "^0" if op == "gall" else "^1"
            if isinstance(a, Atom):
                return f"{tok} {a.name}"
            if isinstance(a, Un) and a.op in ("gall", "dgall"):
                return f"{tok} {show_formula(a)}"
            return f"{tok}({show_formula(a)})"
    raise TypeError(f)


def _operand(f: Formula) -> str:
    s = show_formula(f)
    return f"({s})" if isinstance(f, Bin) else s


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(\(/\)|\(\\\)|\^0|\^1|->|[()*/\\+]|[A-Za-z][A-Za-z0-9_]*|\S)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def take(self) -> str:
        tok = self.toks[self.i][0]
        self.i += 1
        return tok

    def error(self, msg: str):
        raise FormulaSyntaxError(msg, self.pos(), self.text)

    def formula(self) -> Formula:
        left = self.unary()
        tok = self.peek()
        if tok in TOKEN_BINARY:
            self.take()
            right = self.unary()
            if self.peek() in TOKEN_BINARY:
                self.error("binary operators do not associate; mixed binaries need parentheses")
            return Bin(TOKEN_BINARY[tok], left, right)
        return left

    def unary(self) -> Formula:
        if self.peek() in PREFIX:
            op = PREFIX[self.take()]
            return Un(op, self.unary())
        return self.postfix()

    def postfix(self) -> Formula:
        f = self.primary()
        while self.peek() in POSTFIX:
            f = Un(POSTFIX[self.take()], f)
        return f

    def primary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        if tok == "(":
            self.take()
            f = self.formula()
            if self.peek() != ")":
                self.error("expected ')'")
            self.take()
            return f
        if re.fullmatch(r"[a-z][A-Za-z0-9_]*", tok):
            if tok == RESPONSE:
                raise ReservedAtomError("atom 'r' is reserved for the response type", self.pos(), self.text)
            self.take()
            return Atom(tok)
        self.error(f"unexpected token {tok!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.peek() is not None:
        if p.peek() in TOKEN_BINARY:
            p.error("binary operators do not associate; mixed binaries need parentheses")
        p.error(f"unexpected token {p.peek()!r}")
    return f


def parse_arrow(text: str) -> tuple[Formula, Formula]:
    """Parse an arrow sequent ``F -> G``."""
    parts = text.split("->")
    if len(parts) != 2:
        raise FormulaSyntaxError("arrow sequent needs exactly one '->'", 0, text)
    return parse_formula(parts[0]), parse_formula(parts[1])


# ---------------------------------------------------------------------------
# symmetries

_BOWTIE_BIN = {"prod": "prod", "coprod": "coprod", "over": "under", "under": "over",
               "rdiff": "ldiff", "ldiff": "rdiff"}
_BOWTIE_UN = {"galr": "gall", "gall": "galr", "dgalr": "dgall", "dgall": "dgalr"}
_INF_BIN = {"prod": "coprod", "coprod": "prod", "over": "ldiff", "ldiff": "over",
            "under": "rdiff", "rdiff": "under"}
_INF_UN = {"galr": "dgall", "dgall": "galr", "gall": "dgalr", "dgalr": "gall"}


def bowtie(f: Formula) -> Formula:
    """Left-right mirror image; swaps operands of every binary connective."""
    match f:
        case Atom():
            return f
        case Bin(op, l, r):
            return Bin(_BOWTIE_BIN[op], bowtie(r), bowtie(l))
        case Un(op, a):
            return Un(_BOWTIE_UN[op], bowtie(a))
    raise TypeError(f)


def infinity(f: Formula) -> Formula:
    """Arrow-reversing duality between the product and coproduct families."""
    match f:
        case Atom():
            return f
        case Bin(op, l, r):
            return Bin(_INF_BIN[op], infinity(r), infinity(l))
        case Un(op, a):
            return Un(_INF_UN[op], infinity(a))
    raise TypeError(f)


# ---------------------------------------------------------------------------
# target types

@dataclass(frozen=True, slots=True)
class TAtom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class TArrow:
    dom: "Ty"
    cod: "Ty"

    def __str__(self) -> str:
        return show_type(self)


Ty = Union[TAtom, TArrow]
R = TAtom(RESPONSE)
E = TAtom("e")
T = TAtom("t")


def neg(t: Ty) -> Ty:
    """``t -> r``"""
    return TArrow(t, R)


def show_type(t: Ty) -> str:
    match t:
        case TAtom(n):
            return n
        case TArrow(d, c):
            ds = show_type(d)
            if isinstance(d, TArrow):
                ds = f"({ds})"
            return f"{ds} -> {show_type(c)}"
    raise TypeError(t)


def parse_type(text: str) -> Ty:
    """Parse ``e``, ``t``, atoms and right-associative ``->``."""
    toks = re.findall(r"->|[()]|[A-Za-z][A-Za-z0-9_]*|\S", text)
    i = 0

    def arrow() -> Ty:
        nonlocal i
        left = base()
        if i < len(toks) and toks[i] == "->":
            i += 1
            return TArrow(left, arrow())
        return left

    def base() -> Ty:
        nonlocal i
        if i >= len(toks):
            raise FormulaSyntaxError("unexpected end of type", len(text), text)
        tok = toks[i]
        i += 1
        if tok == "(":
            t = arrow()
            if i >= len(toks) or toks[i] != ")":
                raise FormulaSyntaxError("expected ')' in type", i, text)
            i += 1
            return t
        if re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", tok):
            return TAtom(tok)
        raise FormulaSyntaxError(f"unexpected token {tok!r} in type", i, text)

    t = arrow()
    if i != len(toks):
        raise FormulaSyntaxError("trailing input in type", i, text)
    return t


def cps_type(f: Formula) -> Ty:
    """Call-by-value value type of a source formula.

    Mirror images share a translation, so ``/`` and ``\\`` (and the two
    differences) map alike modulo argument order.
    """
    match f:
        case Atom(n):
            return TAtom(n)
        case Bin("under", a, b):          # A\B = B^ -> A^
            return TArrow(neg(cps_type(b)), neg(cps_type(a)))
        case Bin("over", c, d):           # C/D = C^ -> D^
            return TArrow(neg(cps_type(c)), neg(cps_type(d)))
        case Bin("rdiff", a, b):          # A(/)B = (A\B)^
            return neg(TArrow(neg(cps_type(b)), neg(cps_type(a))))
        case Bin("ldiff", d, c):          # D(\)C = (D^ -> C^)^
            return neg(TArrow(neg(cps_type(d)), neg(cps_type(c))))
        case Un(_, a):
            return neg(cps_type(a))
        case Bin(op, _, _):
            raise UnsupportedConnective(f"{BINARY_TOKENS[op]!r} has no CPS translation")
    raise TypeError(f)


def lex_type(t: Ty, atom_map: Mapping[str, Ty]) -> Ty:
    """Replace target atoms (including ``r``) by semantic types."""
    match t:
        case TAtom(n):
            if n not in atom_map:
                raise KeyError(f"no semantic type for atom {n!r}")
            return atom_map[n]
        case TArrow(d, c):
            return TArrow(lex_type(d, atom_map), lex_type(c, atom_map))
    raise TypeError(t)
