"""Simply typed (linear) lambda terms: typing, substitution, normalization."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Mapping, Union

from .syntax import TArrow, TAtom, Ty, show_type


class TermTypeError(TypeError):
    pass


class TermSyntaxError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return show_term(self)


@dataclass(frozen=True, slots=True)
class Const:
    name: str

    def __str__(self):
        return show_term(self)


@dataclass(frozen=True, slots=True)
class Abs:
    var: str
    body: "Term"
    ty: Ty | None = field(default=None, compare=False)

    def __str__(self):
        return show_term(self)


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"

    def __str__(self):
        return show_term(self)


Term = Union[Var, Const, Abs, App]


def lam(*names_and_body) -> Term:
    """``lam('x', 'y', body)`` builds nested abstractions."""
    *names, body = names_and_body
    for n in reversed(names):
        body = Abs(n, body)
    return body


def app(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def show_term(t: Term) -> str:
    match t:
        case Var(n) | Const(n):
            return n
        case Abs(v, b, _):
            return f"\\{v}. {show_term(b)}"
        case App(f, a):
            fs = show_term(f)
            if isinstance(f, Abs):
                fs = f"({fs})"
            as_ = show_term(a)
            if isinstance(a, (Abs, App)):
                as_ = f"({as_})"
            return f"{fs} {as_}"
    raise TypeError(t)


# ---------------------------------------------------------------------------
# parsing

_TOK = re.compile(r"\s*(\\|\.|\(|\)|[A-Za-z_][A-Za-z0-9_'+\-]*|\S)")


def parse_term(text: str, constants=frozenset()) -> Term:
    """Parse ``\\x. M``, left-associative application and parentheses.

    Identifiers that are not bound and appear in ``constants`` become
    ``Const``; other free identifiers are variables.
    """
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOK.match(text, pos)
        toks.append(m.group(1))
        pos = m.end()
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def expect(tok):
        nonlocal i
        if peek() != tok:
            raise TermSyntaxError(f"expected {tok!r} but found {peek()!r} in {text!r}")
        i += 1

    def term(bound):
        nonlocal i
        if peek() == "\\":
            i += 1
            names = []
            while peek() not in (".", None):
                names.append(toks[i])
                i += 1
            expect(".")
            if not names:
                raise TermSyntaxError(f"lambda without variable in {text!r}")
            body = term(bound | set(names))
            return lam(*names, body)
        head = atom(bound)
        while peek() not in (None, ")"):
            if peek() == "\\":
                head = App(head, term(bound))
                break
            head = App(head, atom(bound))
        return head

    def atom(bound):
        nonlocal i
        tok = peek()
        if tok is None:
            raise TermSyntaxError(f"unexpected end of term {text!r}")
        if tok == "(":
            i += 1
            t = term(bound)
            expect(")")
            return t
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_'+\-]*", tok):
            i += 1
            if tok not in bound and tok in constants:
                return Const(tok)
            return Var(tok)
        raise TermSyntaxError(f"unexpected token {tok!r} in {text!r}")

    t = term(frozenset())
    if i != len(toks):
        raise TermSyntaxError(f"trailing input in {text!r}")
    return t


# ---------------------------------------------------------------------------
# variables and substitution

def free_vars(t: Term) -> set[str]:
    match t:
        case Var(n):
            return {n}
        case Const():
            return set()
        case Abs(v, b, _):
            return free_vars(b) - {v}
        case App(f, a):
            return free_vars(f) | free_vars(a)
    raise TypeError(t)


def all_names(t: Term) -> set[str]:
    match t:
        case Var(n) | Const(n):
            return {n}
        case Abs(v, b, _):
            return {v} | all_names(b)
        case App(f, a):
            return all_names(f) | all_names(a)
    raise TypeError(t)


def fresh_name(base: str, avoid: set[str]) -> str:
    stem = base.rstrip("0123456789") or "v"
    for k in itertools.count(1):
        cand = f"{stem}{k}"
        if cand not in avoid:
            return cand


def subst(t: Term, name: str, value: Term) -> Term:
    """Capture-avoiding ``t[value/name]``."""
    return _subst(t, name, value, free_vars(value))


def _subst(t: Term, name: str, value: Term, fv: set[str]) -> Term:
    match t:
        case Var(n):
            return value if n == name else t
        case Const():
            return t
        case App(f, a):
            return App(_subst(f, name, value, fv), _subst(a, name, value, fv))
        case Abs(v, b, ty):
            if v == name or name not in free_vars(b):
                return t
            if v in fv:
                nv = fresh_name(v, fv | all_names(b) | {name})
                b = _subst(b, v, Var(nv), {nv})
                v = nv
            return Abs(v, _subst(b, name, value, fv), ty)
    raise TypeError(t)


def substitute_many(t: Term, mapping: Mapping[str, Term]) -> Term:
    for k, v in mapping.items():
        t = subst(t, k, v)
    return t


# ---------------------------------------------------------------------------
# reduction

def beta_normalize(t: Term, strategy: str = "normal") -> Term:
    """Beta normal form.  ``strategy`` is ``normal`` (leftmost-outermost)
    or ``applicative`` (arguments first); on simply typed terms both
    terminate and agree up to renaming of bound variables."""
    if strategy == "normal":
        return _nf(t)
    if strategy == "applicative":
        return _nf_app(t)
    raise ValueError(f"unknown strategy {strategy!r}")


def _whnf(t: Term) -> Term:
    while isinstance(t, App):
        f = _whnf(t.fun)
        if isinstance(f, Abs):
            t = subst(f.body, f.var, t.arg)
        else:
            return App(f, t.arg)
    return t


def _nf(t: Term) -> Term:
    t = _whnf(t)
    match t:
        case Abs(v, b, ty):
            return Abs(v, _nf(b), ty)
        case App(f, a):
            return App(_nf(f), _nf(a))
    return t


def _nf_app(t: Term) -> Term:
    match t:
        case Abs(v, b, ty):
            return Abs(v, _nf_app(b), ty)
        case App(f, a):
            f, a = _nf_app(f), _nf_app(a)
            if isinstance(f, Abs):
                return _nf_app(subst(f.body, f.var, a))
            return App(f, a)
    return t


def is_normal(t: Term) -> bool:
    match t:
        case Abs(_, b, _):
            return is_normal(b)
        case App(f, a):
            return not isinstance(f, Abs) and is_normal(f) and is_normal(a)
    return True


def alpha_eq(t1: Term, t2: Term) -> bool:
    return _aeq(t1, t2, {}, {}, 0)


def _aeq(a: Term, b: Term, ea: dict, eb: dict, depth: int) -> bool:
    match a, b:
        case Var(x), Var(y):
            if x in ea or y in eb:
                return ea.get(x) == eb.get(y)
            return x == y
        case Const(x), Const(y):
            return x == y
        case Abs(x, ba, _), Abs(y, bb, _):
            return _aeq(ba, bb, {**ea, x: depth}, {**eb, y: depth}, depth + 1)
        case App(f1, a1), App(f2, a2):
            return _aeq(f1, f2, ea, eb, depth) and _aeq(a1, a2, ea, eb, depth)
    return False


def alpha_key(t: Term, env: dict | None = None, depth: int = 0) -> str:
    """Hashable rendering with bound names replaced by de Bruijn levels."""
    env = env or {}
    match t:
        case Var(x):
            return f"#{env[x]}" if x in env else f"v:{x}"
        case Const(x):
            return f"c:{x}"
        case Abs(x, b, _):
            return f"(L {alpha_key(b, {**env, x: depth}, depth + 1)})"
        case App(f, a):
            return f"({alpha_key(f, env, depth)} {alpha_key(a, env, depth)})"
    raise TypeError(t)


def is_linear(t: Term, over: set[str] | None = None) -> bool:
    """Every variable in ``over`` (all variables when ``None``) is used
    exactly once: free ones in ``t``, bound ones in their binder's body."""
    fv_counts: dict[str, int] = {}
    ok = _lin(t, over, fv_counts)
    if not ok:
        return False
    for name, n in fv_counts.items():
        if (over is None or name in over) and n != 1:
            return False
    if over is not None:
        binders = _binders(t)
        for name in over:
            if name not in fv_counts and name not in binders:
                return False
    return True


def _binders(t: Term) -> set[str]:
    match t:
        case Abs(v, b, _):
            return {v} | _binders(b)
        case App(f, a):
            return _binders(f) | _binders(a)
    return set()


def _lin(t: Term, over, counts: dict[str, int]) -> bool:
    match t:
        case Var(n):
            counts[n] = counts.get(n, 0) + 1
            return True
        case Const():
            return True
        case App(f, a):
            return _lin(f, over, counts) and _lin(a, over, counts)
        case Abs(v, b, _):
            inner: dict[str, int] = {}
            if not _lin(b, over, inner):
                return False
            if (over is None or v in over) and inner.get(v, 0) != 1:
                return False
            inner.pop(v, None)
            for k, n in inner.items():
                counts[k] = counts.get(k, 0) + n
            return True
    raise TypeError(t)


# ---------------------------------------------------------------------------
# typing

@dataclass(frozen=True, slots=True)
class _TVar:
    n: int


class _Unifier:
    def __init__(self):
        self.sub: dict[int, object] = {}
        self.counter = itertools.count()

    def fresh(self):
        return _TVar(next(self.counter))

    def resolve(self, t):
        while isinstance(t, _TVar) and t.n in self.sub:
            t = self.sub[t.n]
        return t

    def zonk(self, t):
        t = self.resolve(t)
        if isinstance(t, TArrow):
            return TArrow(self.zonk(t.dom), self.zonk(t.cod))
        return t

    def occurs(self, v, t) -> bool:
        t = self.resolve(t)
        if isinstance(t, _TVar):
            return t.n == v.n
        if isinstance(t, TArrow):
            return self.occurs(v, t.dom) or self.occurs(v, t.cod)
        return False

    def unify(self, a, b, where: Term):
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return
        if isinstance(a, _TVar):
            if self.occurs(a, b):
                raise TermTypeError(f"infinite type in {show_term(where)}")
            self.sub[a.n] = b
            return
        if isinstance(b, _TVar):
            self.unify(b, a, where)
            return
        if isinstance(a, TArrow) and isinstance(b, TArrow):
            self.unify(a.dom, b.dom, where)
            self.unify(a.cod, b.cod, where)
            return
        raise TermTypeError(
            f"type mismatch in {show_term(where)}: {_show(self.zonk(a))} vs {_show(self.zonk(b))}")


def _show(t) -> str:
    if isinstance(t, _TVar):
        return f"?{t.n}"
    if isinstance(t, TArrow):
        d = _show(t.dom)
        if isinstance(t.dom, TArrow):
            d = f"({d})"
        return f"{d} -> {_show(t.cod)}"
    return show_type(t)


def _infer(t: Term, env: Mapping[str, Ty], u: "_Unifier"):
    def infer(t: Term, ctx: dict):
        match t:
            case Var(n):
                if n in ctx:
                    return ctx[n]
                if n in env:
                    return env[n]
                raise TermTypeError(f"unbound variable {n!r}")
            case Const(n):
                if n in env:
                    return env[n]
                raise TermTypeError(f"undeclared constant {n!r}")
            case Abs(v, b, ty):
                dom = ty if ty is not None else u.fresh()
                cod = infer(b, {**ctx, v: dom})
                return TArrow(dom, cod)
            case App(f, a):
                ft = infer(f, ctx)
                at = infer(a, ctx)
                res = u.fresh()
                u.unify(ft, TArrow(at, res), t)
                return res
        raise TypeError(t)

    return infer(t, {})


def typecheck(t: Term, env: Mapping[str, Ty], expected: Ty | None = None) -> Ty:
    """Infer the simple type of ``t``; ``env`` types free variables and constants.

    Binder annotations are honoured when present; unannotated binders get
    their type from unification.
    """
    u = _Unifier()
    ty = _infer(t, env, u)
    if expected is not None:
        u.unify(ty, expected, t)
    out = u.zonk(ty)
    if _has_tvar(out):
        raise TermTypeError(f"ambiguous type {_show(out)} for {show_term(t)}")
    return out


def principal_type(t: Term, env: Mapping[str, Ty]) -> str:
    """Most general type of ``t`` as text, with ``?n`` for unresolved parts."""
    u = _Unifier()
    try:
        return _show(u.zonk(_infer(t, env, u)))
    except TermTypeError as exc:
        return f"<ill-typed: {exc}>"


def _has_tvar(t) -> bool:
    if isinstance(t, _TVar):
        return True
    if isinstance(t, TArrow):
        return _has_tvar(t.dom) or _has_tvar(t.cod)
    return False


__all__ = [
    "Var", "Const", "Abs", "App", "Term", "lam", "app", "show_term", "parse_term",
    "free_vars", "subst", "substitute_many", "beta_normalize", "is_normal", "alpha_eq",
    "alpha_key", "is_linear", "typecheck", "TermTypeError", "TermSyntaxError", "TAtom",
]
