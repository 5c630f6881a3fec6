"""Unfocused exhaustive decision procedure, used to adjudicate verdicts.

Plain display calculus: sequents are structures over unlabelled formula
leaves, there is no active/passive distinction, and a logical rule fires
when its principal formula is displayed as a whole side.  The reachable
space of orbit-canonical sequents is closed breadth-first and
derivability is the least fixpoint over it.  Nothing here is shared with
the focused prover beyond the structural rule tables.
"""
from __future__ import annotations

from collections import deque

from .structures import (
    Leaf,
    RuleConfig,
    Sequent,
    children,
    display_orbit,
    distr_premises,
    make,
    show_sequent,
)
from .syntax import CHILD_OUTPUT, INPUT_OPS, Atom, Bin, Formula, Un, parse_arrow


def _subs(f: Formula):
    if isinstance(f, Bin):
        return (f.left, f.right)
    if isinstance(f, Un):
        return (f.arg,)
    return ()


def _key(s: Sequent) -> str:
    return min(show_sequent(m) for m in display_orbit(s))


def _moves(s: Sequent, cfg: RuleConfig) -> tuple[bool, list[list[Sequent]]]:
    """(is an identity axiom, list of premise lists) over the whole orbit."""
    axiom = False
    out: list[list[Sequent]] = []
    for m in display_orbit(s):
        a, y = m.ant, m.suc
        if isinstance(a, Leaf) and isinstance(y, Leaf) and isinstance(a.formula, Atom) \
                and a.formula == y.formula:
            axiom = True
        for _, prem in distr_premises(m, cfg):
            out.append([prem])
        if isinstance(a, Leaf) and not isinstance(a.formula, Atom):
            f = a.formula
            op = f.op
            if op in INPUT_OPS:
                kids = [Leaf(sub, w) for sub, w in zip(_subs(f), CHILD_OUTPUT[op])]
                out.append([Sequent(make(op, *kids), y)])
            elif not isinstance(y, Leaf) and y.op == op:
                out.append(_split(f, y))
        if isinstance(y, Leaf) and not isinstance(y.formula, Atom):
            f = y.formula
            op = f.op
            if op not in INPUT_OPS:
                kids = [Leaf(sub, w) for sub, w in zip(_subs(f), CHILD_OUTPUT[op])]
                out.append([Sequent(a, make(op, *kids))])
            elif not isinstance(a, Leaf) and a.op == op:
                out.append(_split(f, a))
    return axiom, out


def _split(f: Formula, s) -> list[Sequent]:
    prem = []
    for sub, part, w in zip(_subs(f), children(s), CHILD_OUTPUT[f.op]):
        prem.append(Sequent(Leaf(sub, False), part) if w else Sequent(part, Leaf(sub, True)))
    return prem


class Oracle:
    def __init__(self, cfg: RuleConfig | None = None, max_states: int = 2_000_000):
        self.cfg = cfg if cfg is not None else RuleConfig()
        self.max_states = max_states

    def derivable(self, ant: Formula, suc: Formula) -> bool:
        return self.decide(Sequent(Leaf(ant, False), Leaf(suc, True)))

    def decide(self, goal: Sequent) -> bool:
        goal = goal.erase()
        graph: dict[str, list[list[str]]] = {}
        axioms: set[str] = set()
        root = _key(goal)
        queue = deque([goal])
        seen = {root}
        while queue:
            s = queue.popleft()
            k = _key(s)
            ax, moves = _moves(s, self.cfg)
            if ax:
                axioms.add(k)
            rows = []
            for prem in moves:
                row = []
                for p in prem:
                    pk = _key(p)
                    row.append(pk)
                    if pk not in seen:
                        seen.add(pk)
                        queue.append(p)
                rows.append(row)
            graph[k] = rows
            if len(seen) > self.max_states:
                raise RuntimeError("oracle state space exceeded")
        proven = set(axioms)
        changed = True
        while changed:
            changed = False
            for k, rows in graph.items():
                if k in proven:
                    continue
                if any(all(p in proven for p in row) for row in rows):
                    proven.add(k)
                    changed = True
        return root in proven


def oracle_derivable(text_or_pair, cfg: RuleConfig | None = None) -> bool:
    if isinstance(text_or_pair, str):
        a, b = parse_arrow(text_or_pair)
    else:
        a, b = text_or_pair
    return Oracle(cfg).derivable(a, b)
