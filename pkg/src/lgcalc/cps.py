"""Compile display-calculus proofs to linear lambda terms (call-by-value CPS).

Passive input labels become value variables, passive output labels
continuation variables.  Sequent kinds map to target types:

    X |- Y   ->  r
    X |- A   ->  |A|^^   (computation)
    A |- Y   ->  |A|^    (continuation)

Structural rules leave the term unchanged.  Mirror-image rules reuse the
term of their counterpart, since both sides share one target type.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .lam import Abs, App, Term, Var, beta_normalize, typecheck
from .prover import Proof
from .structures import Sequent, children
from .syntax import CHILD_OUTPUT, INPUT_OPS, R, Ty, UnsupportedConnective, cps_type, neg


class UnsupportedRule(ValueError):
    pass


@dataclass(frozen=True)
class TypedTerm:
    term: Term
    type: Ty
    free_env: Mapping[str, Ty]

    def check(self) -> bool:
        return typecheck(self.term, self.free_env) == self.type


def sequent_target_type(s: Sequent) -> Ty:
    kind = s.kind
    if kind == "passive":
        return R
    if kind == "right":
        return neg(neg(cps_type(s.suc)))
    return neg(cps_type(s.ant))


def label_env(s: Sequent) -> dict[str, Ty]:
    env = {}
    for leaf in s.leaves():
        t = cps_type(leaf.formula)
        env[leaf.label] = neg(t) if leaf.output else t
    return env


def cps_proof(p: Proof, normalize: bool = True) -> TypedTerm:
    try:
        raw = _compile(p)
        env = label_env(p.conclusion)
        ty = sequent_target_type(p.conclusion)
    except UnsupportedConnective as exc:
        raise UnsupportedRule(str(exc)) from exc
    term = beta_normalize(raw) if normalize else raw
    return TypedTerm(term, ty, env)


def _compile(p: Proof) -> Term:
    # binders k, h, u never clash with labels, which always carry a digit
    r = p.rule
    c = p.conclusion
    prem = p.premises
    match r.kind:
        case "Ax":
            a = cps_type(c.suc)
            return Abs("k", App(Var("k"), Var(c.ant.label)), neg(a))
        case "CoAx":
            return Var(c.suc.label)
        case "AxLink":
            return App(Var(c.suc.label), Var(c.ant.label))
        case "Cut":
            return App(_compile(prem[0]), _compile(prem[1]))
        case "Mu":
            return Abs(r.label, _compile(prem[0]), neg(cps_type(r.formula)))
        case "MuTilde":
            return Abs(r.label, _compile(prem[0]), cps_type(r.formula))
        case "FocusL":
            a = cps_type(r.formula)
            ax = Abs("k", App(Var("k"), Var(r.label)), neg(a))
            return App(ax, _compile(prem[0]))
        case "FocusR":
            return App(_compile(prem[0]), Var(r.label))
        case "Structural":
            return _compile(prem[0])
        case "Logical":
            return _logical(p)
    raise UnsupportedRule(f"no CPS image for rule {r}")


def _logical(p: Proof) -> Term:
    r = p.rule
    op, side = r.name, r.side
    if op in ("prod", "coprod"):
        raise UnsupportedRule(f"{r} has no CPS image")
    passive_premise = (side == "L") == (op in INPUT_OPS)
    f = r.formula
    if passive_premise:
        (q,) = p.premises
        s = q.conclusion
        node = s.ant if side == "L" else s.suc
        body = _compile(q)
        kids = children(node)
        if op in ("galr", "gall"):                 # R: \k. k (\x. S)
            x = kids[0]
            inner = Abs(x.label, body, cps_type(x.formula))
            return Abs("k", App(Var("k"), inner), neg(cps_type(f)))
        if op in ("dgalr", "dgall"):               # L: \a. S
            a = kids[0]
            return Abs(a.label, body, neg(cps_type(a.formula)))
        # \R, /R, (/)L, (\)L: \h. h (\b. \x. S)
        xin = next(k for k, w in zip(kids, CHILD_OUTPUT[op]) if not w)
        bout = next(k for k, w in zip(kids, CHILD_OUTPUT[op]) if w)
        inner = Abs(bout.label, Abs(xin.label, body, cps_type(xin.formula)),
                    neg(cps_type(bout.formula)))
        hty = neg(cps_type(f)) if side == "R" else cps_type(f)
        return Abs("h", App(Var("h"), inner), hty)
    # rules with active premises
    if op in ("dgalr", "dgall"):                   # R: \k. k K
        (q,) = p.premises
        return Abs("k", App(Var("k"), _compile(q)), neg(cps_type(f)))
    if op in ("galr", "gall"):                     # L: identity
        (q,) = p.premises
        return _compile(q)
    # \L, /L: \u. M (u K) ; (/)R, (\)R: \k. k (\u. M (u K))
    m = k = None
    for q, w in zip(p.premises, CHILD_OUTPUT[op]):
        if w:
            k = _compile(q)
        else:
            m = _compile(q)
    if op in ("under", "over"):
        return Abs("u", App(m, App(Var("u"), k)), cps_type(f))
    u_ty = cps_type(f).dom          # value type of the underlying implication
    body = Abs("u", App(m, App(Var("u"), k)), u_ty)
    return Abs("k", App(Var("k"), body), neg(cps_type(f)))

