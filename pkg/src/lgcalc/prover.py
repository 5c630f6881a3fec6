"""Focused backward proof search for display sequents.

Search states are labelled sequents; memoization uses label-free keys
(display orbit representatives for passive sequents).  The reachable
state graph from a goal is finite, so provability is computed as the
least fixpoint of an AND/OR graph, and every proven state records the
order in which it was established.  Proof extraction follows options
whose premises were established strictly earlier, which rules out cyclic
justifications.

Moves per sequent kind:

* passive ``X |- Y``: close by AxLink when the orbit contains ``x:p |- a:p``;
  shift focus to a displayed non-atomic leaf (a cut against a (co)axiom);
  or step back through an enabled distributivity rule.
* active ``X |- A``: Ax on an atom; the invertible right rule of an
  output connective; for an input connective its right rule (when ``X``
  has the matching shape) or ``mu``.
* active ``A |- Y``: dually.
"""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterator, Sequence

from .structures import (
    ConfigViolation,
    Leaf,
    RuleConfig,
    SBin,
    SUn,
    Sequent,
    children,
    display_moves,
    display_orbit_paths,
    display_path,
    distr_moves,
    distr_premises,
    is_structure,
    make,
    rule_by_id,
    show_sequent,
)
from .syntax import (
    CHILD_OUTPUT,
    INPUT_OPS,
    Atom,
    Bin,
    Formula,
    Un,
    parse_arrow,
    show_formula,
)


class ResourceLimit(RuntimeError):
    pass


class NotARedex(ValueError):
    pass


class CutMismatch(ValueError):
    pass


LOGICAL_SYMBOL = {
    "prod": "*", "over": "/", "under": "\\", "coprod": "+", "rdiff": "(/)", "ldiff": "(\\)",
    "galr": "^0", "gall": "0^", "dgalr": "^1", "dgall": "1^",
}


@dataclass(frozen=True)
class Rule:
    kind: str                     # Ax CoAx AxLink Cut Mu MuTilde FocusL FocusR Structural Logical
    name: str = ""                # structural rule id, or connective op for Logical
    side: str = ""                # 'L' / 'R' for Logical
    label: str | None = None      # (co)variable bound or introduced
    formula: Formula | None = None

    def __str__(self) -> str:
        if self.kind == "Logical":
            return f"{LOGICAL_SYMBOL[self.name]}{self.side}"
        if self.kind == "Structural":
            return self.name
        if self.kind == "Cut":
            return f"Cut[{show_formula(self.formula)}]"
        if self.kind in ("Mu", "MuTilde", "FocusL", "FocusR"):
            return f"{self.kind}[{self.label}]"
        return self.kind


@dataclass(frozen=True)
class Proof:
    conclusion: Sequent
    rule: Rule
    premises: tuple["Proof", ...] = ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def nodes(self) -> Iterator["Proof"]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def render(self, indent: int = 0) -> str:
        lines = [f"{'  ' * indent}{self.rule}: {show_sequent(self.conclusion)}"]
        for p in self.premises:
            lines.append(p.render(indent + 1))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "rule": str(self.rule),
            "conclusion": show_sequent(self.conclusion),
            "premises": [p.to_json() for p in self.premises],
        }

    def __str__(self) -> str:
        return self.render()


# ---------------------------------------------------------------------------
# goals

def arrow_goal(a: Formula, b: Formula, label: str = "x0") -> Sequent:
    return Sequent(Leaf(a, False, label), b)


def as_goal(goal) -> Sequent:
    if isinstance(goal, Sequent):
        return goal
    if isinstance(goal, str):
        return arrow_goal(*parse_arrow(goal))
    if isinstance(goal, tuple) and len(goal) == 2:
        return arrow_goal(*goal)
    raise TypeError(f"cannot interpret goal {goal!r}")


def formula_children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Bin):
        return (f.left, f.right)
    if isinstance(f, Un):
        return (f.arg,)
    return ()


# ---------------------------------------------------------------------------
# move generation

class Fresh:
    def __init__(self, prefix: str = "_"):
        self.prefix = prefix
        self.counter = itertools.count(1)

    def __call__(self, output: bool) -> str:
        return f"{self.prefix}{'a' if output else 'x'}{next(self.counter)}"


@dataclass(frozen=True)
class Option:
    steps: tuple                   # display/distr path: ((rule name, sequent), ...)
    rule: Rule
    premises: tuple[Sequent, ...]

    def at(self, root: Sequent) -> Sequent:
        return self.steps[-1][1] if self.steps else root


def _unfold(op: str, f: Formula, fresh: Fresh) -> "SBin | SUn":
    kids = [Leaf(a, w, fresh(w)) for a, w in zip(formula_children(f), CHILD_OUTPUT[op])]
    return make(op, *kids)


def _active_premises(op: str, f: Formula, s) -> tuple[Sequent, ...]:
    out = []
    for a, sub, w in zip(formula_children(f), children(s), CHILD_OUTPUT[op]):
        out.append(Sequent(a, sub) if w else Sequent(sub, a))
    return tuple(out)


def options(seq: Sequent, cfg: RuleConfig, fresh: Fresh) -> list[Option]:
    """All backward moves from ``seq`` in deterministic order."""
    kind = seq.kind
    if kind == "passive":
        return _passive_options(seq, cfg)
    if kind == "right":
        x, a = seq.ant, seq.suc
        if isinstance(a, Atom):
            if isinstance(x, Leaf) and x.formula == a:
                return [Option((), Rule("Ax", label=x.label, formula=a), ())]
            lab = fresh(True)
            return [Option((), Rule("Mu", label=lab, formula=a), (Sequent(x, Leaf(a, True, lab)),))]
        op = a.op
        if op not in INPUT_OPS:
            return [Option((), Rule("Logical", op, "R", formula=a), (Sequent(x, _unfold(op, a, fresh)),))]
        out = []
        if not isinstance(x, Leaf) and x.op == op:
            out.append(Option((), Rule("Logical", op, "R", formula=a), _active_premises(op, a, x)))
        lab = fresh(True)
        out.append(Option((), Rule("Mu", label=lab, formula=a), (Sequent(x, Leaf(a, True, lab)),)))
        return out
    # active input
    a, y = seq.ant, seq.suc
    if isinstance(a, Atom):
        if isinstance(y, Leaf) and y.formula == a:
            return [Option((), Rule("CoAx", label=y.label, formula=a), ())]
        lab = fresh(False)
        return [Option((), Rule("MuTilde", label=lab, formula=a), (Sequent(Leaf(a, False, lab), y),))]
    op = a.op
    if op in INPUT_OPS:
        return [Option((), Rule("Logical", op, "L", formula=a), (Sequent(_unfold(op, a, fresh), y),))]
    out = []
    if not isinstance(y, Leaf) and y.op == op:
        out.append(Option((), Rule("Logical", op, "L", formula=a), _active_premises(op, a, y)))
    lab = fresh(False)
    out.append(Option((), Rule("MuTilde", label=lab, formula=a), (Sequent(Leaf(a, False, lab), y),)))
    return out


def _passive_options(seq: Sequent, cfg: RuleConfig) -> list[Option]:
    parents = display_orbit_paths(seq)
    members = list(parents)
    out: list[Option] = []
    for m in members:
        if (isinstance(m.ant, Leaf) and isinstance(m.suc, Leaf)
                and isinstance(m.ant.formula, Atom) and m.ant.formula == m.suc.formula):
            out.append(Option(tuple(display_path(parents, m)), Rule("AxLink", formula=m.ant.formula), ()))
            break
    displayed: dict[str, tuple[Sequent, bool]] = {}
    for m in members:
        if isinstance(m.ant, Leaf):
            displayed.setdefault(m.ant.label, (m, False))
        if isinstance(m.suc, Leaf):
            displayed.setdefault(m.suc.label, (m, True))
    for leaf in seq.leaves():
        if isinstance(leaf.formula, Atom) or leaf.label not in displayed:
            continue
        m, output = displayed[leaf.label]
        steps = tuple(display_path(parents, m))
        if output:
            out.append(Option(steps, Rule("FocusR", label=leaf.label, formula=leaf.formula),
                              (Sequent(m.ant, leaf.formula),)))
        else:
            out.append(Option(steps, Rule("FocusL", label=leaf.label, formula=leaf.formula),
                              (Sequent(leaf.formula, m.suc),)))
    for m in members:
        for rid, prem in distr_premises(m, cfg):
            out.append(Option(tuple(display_path(parents, m)), Rule("Structural", rid), (prem,)))
    return out


_KEYS: dict[Sequent, str] = {}


def _erased_key(e: Sequent) -> str:
    key = _KEYS.get(e)
    if key is not None:
        return key
    if e.kind != "passive":
        key = "A|" + show_sequent(e)
        _KEYS[e] = key
        return key
    orbit = display_orbit_paths(e)
    key = "P|" + min(show_sequent(m) for m in orbit)
    if len(_KEYS) > 1_000_000:
        _KEYS.clear()
    for m in orbit:              # every member shares the key
        _KEYS[m] = key
    return key


def state_key(seq: Sequent) -> str:
    return _erased_key(seq.erase())


# ---------------------------------------------------------------------------
# search

class Search:
    """Explores the finite state graph of one goal and solves it."""

    def __init__(self, goal: Sequent, cfg: RuleConfig | None = None, max_steps: int | None = None):
        self.cfg = cfg if cfg is not None else RuleConfig()
        self.goal = goal
        self.max_steps = max_steps
        self.fresh = Fresh()
        self.graph: dict[str, list[list[str]]] = {}
        self.rank: dict[str, int] = {}
        self.steps = 0
        self._explore()
        self._solve()

    def _explore(self):
        queue = deque([self.goal])
        seen = {state_key(self.goal)}
        while queue:
            seq = queue.popleft()
            key = state_key(seq)
            self.steps += 1
            if self.max_steps is not None and self.steps > self.max_steps:
                raise ResourceLimit(f"search exceeded {self.max_steps} states")
            opts = []
            for opt in options(seq, self.cfg, self.fresh):
                pk = []
                for p in opt.premises:
                    k = state_key(p)
                    pk.append(k)
                    if k not in seen:
                        seen.add(k)
                        queue.append(p)
                opts.append(pk)
            self.graph[key] = opts

    def _solve(self):
        waiting: dict[str, list[tuple[str, int]]] = {}
        missing: dict[tuple[str, int], int] = {}
        ready = deque()
        for key, opts in self.graph.items():
            for i, prem in enumerate(opts):
                distinct = set(prem)
                missing[(key, i)] = len(distinct)
                if not distinct:
                    ready.append(key)
                for p in distinct:
                    waiting.setdefault(p, []).append((key, i))
        order = itertools.count()
        while ready:
            key = ready.popleft()
            if key in self.rank:
                continue
            self.rank[key] = next(order)
            for parent, i in waiting.get(key, ()):
                missing[(parent, i)] -= 1
                if missing[(parent, i)] == 0 and parent not in self.rank:
                    ready.append(parent)

    @property
    def states(self) -> int:
        return len(self.graph)

    def provable(self, seq: Sequent | None = None) -> bool:
        return state_key(seq if seq is not None else self.goal) in self.rank

    # -- proof construction -------------------------------------------------

    def _node(self, root: Sequent, opt: Option, premises: Sequence[Proof]) -> Proof:
        target = opt.at(root)
        p = Proof(target, opt.rule, tuple(premises))
        seqs = [root] + [s for _, s in opt.steps]
        for (rname, _), concl in zip(reversed(opt.steps), reversed(seqs[:-1])):
            p = Proof(concl, Rule("Structural", rname), (p,))
        return p

    def extract(self, seq: Sequent) -> Proof:
        key = state_key(seq)
        r = self.rank[key]
        for opt in options(seq, self.cfg, self.fresh):
            ranks = [self.rank.get(state_key(p)) for p in opt.premises]
            if all(x is not None and x < r for x in ranks):
                return self._node(seq, opt, [self.extract(p) for p in opt.premises])
        raise AssertionError(f"no justification for proven state {key}")

    def proof(self) -> Proof | None:
        if not self.provable():
            return None
        return relabel(self.extract(self.goal))

    def enumerate(self, limit: int) -> list[Proof]:
        out = []
        for p in self._enum(self.goal, frozenset()):
            out.append(relabel(p))
            if len(out) >= limit:
                break
        return out

    def _enum(self, seq: Sequent, ancestors: frozenset) -> Iterator[Proof]:
        key = state_key(seq)
        if key in ancestors or key not in self.rank:
            return
        anc = ancestors | {key}
        for opt in options(seq, self.cfg, self.fresh):
            if not all(state_key(p) in self.rank for p in opt.premises):
                continue
            if not opt.premises:
                yield self._node(seq, opt, [])
            elif len(opt.premises) == 1:
                for sub in self._enum(opt.premises[0], anc):
                    yield self._node(seq, opt, [sub])
            else:
                first, second = opt.premises
                cache: list[Proof] = []
                second_iter = self._enum(second, anc)
                exhausted = False
                for a in self._enum(first, anc):
                    i = 0
                    while True:
                        if i < len(cache):
                            b = cache[i]
                        elif exhausted:
                            break
                        else:
                            b = next(second_iter, None)
                            if b is None:
                                exhausted = True
                                break
                            cache.append(b)
                        i += 1
                        yield self._node(seq, opt, [a, b])


def prove(goal, cfg: RuleConfig | None = None, max_steps: int | None = None) -> Proof | None:
    """A cut-free proof of ``goal`` or ``None`` when it is not derivable.

    ``goal`` is an arrow string ``"A -> B"``, a pair of formulas or a sequent.
    """
    return Search(as_goal(goal), cfg, max_steps).proof()


def derivable(goal, cfg: RuleConfig | None = None, max_steps: int | None = None) -> bool:
    return Search(as_goal(goal), cfg, max_steps).provable()


def enumerate_proofs(goal, cfg: RuleConfig | None = None, limit: int = 100,
                     max_steps: int | None = None) -> list[Proof]:
    return Search(as_goal(goal), cfg, max_steps).enumerate(limit)


# ---------------------------------------------------------------------------
# labels

def rename_sequent(s: Sequent, mapping: dict[str, str]) -> Sequent:
    def go(x):
        match x:
            case Leaf(f, o, lab):
                return Leaf(f, o, mapping.get(lab, lab))
            case SBin(op, l, r):
                return SBin(op, go(l), go(r))
            case SUn(op, a):
                return SUn(op, go(a))
        return x
    return Sequent(go(s.ant), go(s.suc))


def rename_proof(p: Proof, mapping: dict[str, str]) -> Proof:
    rule = p.rule
    if rule.label is not None and rule.label in mapping:
        rule = replace(rule, label=mapping[rule.label])
    return Proof(rename_sequent(p.conclusion, mapping), rule,
                 tuple(rename_proof(q, mapping) for q in p.premises))


def relabel(p: Proof) -> Proof:
    """Rename internal labels to x1, x2, ... / a1, a2, ... in pre-order."""
    root = set(p.conclusion.labels())
    mapping: dict[str, str] = {}
    counters = {"x": itertools.count(1), "a": itertools.count(1)}
    taken = set(root)

    def visit(q: Proof):
        for leaf in q.conclusion.leaves():
            lab = leaf.label
            if lab in root or lab in mapping:
                continue
            pre = "a" if leaf.output else "x"
            while True:
                cand = f"{pre}{next(counters[pre])}"
                if cand not in taken:
                    break
            mapping[lab] = cand
            taken.add(cand)
        for sub in q.premises:
            visit(sub)

    visit(p)
    return rename_proof(p, mapping)


# ---------------------------------------------------------------------------
# replay

def _distinct_labels(s: Sequent) -> bool:
    labs = s.labels()
    return None not in labs and len(labs) == len(set(labs))


def replay(p: Proof) -> bool:
    """Check every node of ``p`` against its rule schema."""
    try:
        return all(_check(node) for node in p.nodes())
    except (ValueError, TypeError, AttributeError):
        return False


def _check(node: Proof) -> bool:
    c, r, ps = node.conclusion, node.rule, node.premises
    if not _distinct_labels(c):
        return False
    prem = [q.conclusion for q in ps]
    match r.kind:
        case "Ax":
            return (not ps and c.kind == "right" and isinstance(c.ant, Leaf)
                    and c.ant.formula == c.suc)
        case "CoAx":
            return (not ps and c.kind == "left" and isinstance(c.suc, Leaf)
                    and c.suc.formula == c.ant)
        case "AxLink":
            return (not ps and c.kind == "passive" and isinstance(c.ant, Leaf)
                    and isinstance(c.suc, Leaf) and isinstance(c.ant.formula, Atom)
                    and c.ant.formula == c.suc.formula)
        case "Cut":
            if len(ps) != 2 or c.kind != "passive":
                return False
            l, rr = prem
            return (l.kind == "right" and rr.kind == "left" and l.suc == rr.ant
                    and l.ant == c.ant and rr.suc == c.suc)
        case "Mu":
            if len(ps) != 1 or c.kind != "right":
                return False
            (q,) = prem
            return (q.kind == "passive" and q.ant == c.ant and isinstance(q.suc, Leaf)
                    and q.suc.formula == c.suc and q.suc.label not in c.labels())
        case "MuTilde":
            if len(ps) != 1 or c.kind != "left":
                return False
            (q,) = prem
            return (q.kind == "passive" and q.suc == c.suc and isinstance(q.ant, Leaf)
                    and q.ant.formula == c.ant and q.ant.label not in c.labels())
        case "FocusL":
            if len(ps) != 1 or c.kind != "passive" or not isinstance(c.ant, Leaf):
                return False
            (q,) = prem
            return q.kind == "left" and q.ant == c.ant.formula and q.suc == c.suc
        case "FocusR":
            if len(ps) != 1 or c.kind != "passive" or not isinstance(c.suc, Leaf):
                return False
            (q,) = prem
            return q.kind == "right" and q.suc == c.suc.formula and q.ant == c.ant
        case "Structural":
            if len(ps) != 1 or c.kind != "passive" or prem[0].kind != "passive":
                return False
            if r.name in ("rp", "drp", "gc", "dgc"):
                return prem[0] in display_moves(c)
            rid, pre, con = rule_by_id(r.name)
            from .structures import _rewrite
            return _rewrite(prem[0], pre, con) == c
        case "Logical":
            return _check_logical(c, r, prem)
    return False


def _check_logical(c: Sequent, r: Rule, prem: list[Sequent]) -> bool:
    op = r.name
    if r.side == "L":
        if c.kind != "left":
            return False
        f, y = c.ant, c.suc
        if not isinstance(f, (Bin, Un)) or f.op != op:
            return False
        if op in INPUT_OPS:
            if len(prem) != 1 or prem[0].suc != y or prem[0].kind != "passive":
                return False
            return _unfolded(prem[0].ant, op, f, c)
        if isinstance(y, Leaf) or y.op != op:
            return False
        return list(_active_premises(op, f, y)) == prem
    if c.kind != "right":
        return False
    x, f = c.ant, c.suc
    if not isinstance(f, (Bin, Un)) or f.op != op:
        return False
    if op not in INPUT_OPS:
        if len(prem) != 1 or prem[0].ant != x or prem[0].kind != "passive":
            return False
        return _unfolded(prem[0].suc, op, f, c)
    if isinstance(x, Leaf) or x.op != op:
        return False
    return list(_active_premises(op, f, x)) == prem


def _unfolded(s, op: str, f: Formula, concl: Sequent) -> bool:
    if isinstance(s, Leaf) or s.op != op:
        return False
    used = set(concl.labels())
    for sub, a, w in zip(children(s), formula_children(f), CHILD_OUTPUT[op]):
        if not isinstance(sub, Leaf) or sub.formula != a or sub.output != w or sub.label in used:
            return False
    return True


# ---------------------------------------------------------------------------
# cut and principal reductions

def cut(left: Proof, right: Proof) -> Proof:
    """Compose a proof of ``X |- A`` with one of ``A |- Y``."""
    l, r = left.conclusion, right.conclusion
    if l.kind != "right" or r.kind != "left":
        raise CutMismatch("cut needs an active output and an active input premise")
    if l.suc != r.ant:
        raise CutMismatch(f"cut formulas differ: {show_formula(l.suc)} vs {show_formula(r.ant)}")
    clash = set(l.labels()) & set(r.labels())
    if clash:
        used = {q for n in left.nodes() for q in n.conclusion.labels()}
        used |= {q for n in right.nodes() for q in n.conclusion.labels()}
        mapping = {}
        for lab in sorted(clash):
            k = 1
            while f"{lab}_{k}" in used:
                k += 1
            mapping[lab] = f"{lab}_{k}"
            used.add(mapping[lab])
        right = rename_proof(right, mapping)
        r = right.conclusion
    return Proof(Sequent(l.ant, r.suc), Rule("Cut", formula=l.suc), (left, right))


def reduce_principal_cut(p: Proof) -> Proof:
    """One reduction step at the root cut.

    Handles principal cuts on each of the four negations and cuts of an
    axiom against mu-tilde (coaxiom against mu), which reduce by renaming.
    """
    if p.rule.kind != "Cut":
        raise NotARedex("root is not a cut")
    left, right = p.premises
    a = p.rule.formula
    lr, rr = left.rule, right.rule
    if lr.kind == "Ax" and rr.kind == "MuTilde":
        (body,) = right.premises
        return rename_proof(body, {rr.label: left.conclusion.ant.label})
    if rr.kind == "CoAx" and lr.kind == "Mu":
        (body,) = left.premises
        return rename_proof(body, {lr.label: right.conclusion.suc.label})
    if not (isinstance(a, Un) and lr.kind == "Logical" and rr.kind == "Logical"
            and lr.name == a.op and rr.name == a.op and lr.side == "R" and rr.side == "L"):
        raise NotARedex("root cut is not principal on a negation")
    sub = a.arg
    concl = p.conclusion
    (lp,) = left.premises if len(left.premises) == 1 else (None,)
    (rp,) = right.premises if len(right.premises) == 1 else (None,)
    if a.op in ("gall", "galr"):
        # left: X |- N(x:A) ; right: Y |- A ; conclusion X |- N Y
        x_seq = lp.conclusion
        leaf = x_seq.suc.arg
        other = "galr" if a.op == "gall" else "gall"
        moved = Sequent(leaf, SUn(other, x_seq.ant))           # x:A |- X N'
        act = Proof(Sequent(sub, moved.suc), Rule("MuTilde", label=leaf.label, formula=sub),
                    (Proof(moved, Rule("Structural", "gc"), (lp,)),))
        inner = Proof(Sequent(rp.conclusion.ant, moved.suc), Rule("Cut", formula=sub), (rp, act))
        return Proof(concl, Rule("Structural", "gc"), (inner,))
    # dgalr / dgall -- left: N'-structure |- N A from A |- Y ; right: N A |- Z from N(a:A) |- Z
    y_seq = lp.conclusion
    z_seq = rp.conclusion
    leaf = z_seq.ant.arg
    other = "dgall" if a.op == "dgalr" else "dgalr"
    moved = Sequent(SUn(other, z_seq.suc), leaf)                # N'Z |- a:A
    act = Proof(Sequent(moved.ant, sub), Rule("Mu", label=leaf.label, formula=sub),
                (Proof(moved, Rule("Structural", "dgc"), (rp,)),))
    inner = Proof(Sequent(moved.ant, y_seq.suc), Rule("Cut", formula=sub), (act, lp))
    return Proof(concl, Rule("Structural", "dgc"), (inner,))


def proofs_json(proofs: Sequence[Proof]) -> str:
    return json.dumps([p.to_json() for p in proofs], indent=2)
