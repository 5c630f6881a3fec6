import itertools
import random
import warnings
from collections import Counter

import pytest

from lgcalc.structures import (
    RULE_GROUPS,
    ConfigViolation,
    Leaf,
    RuleConfig,
    SBin,
    Sequent,
    SUn,
    canonical,
    display_moves,
    display_orbit,
    iter_positions,
    distr_moves,
    distr_premises,
    leaves,
    make,
    show_sequent,
)
from lgcalc.syntax import CHILD_OUTPUT, INPUT_OPS, OUTPUT_OPS, Atom, Bin, Un, infinity, parse_formula

a, b, c, d = (Atom(n) for n in "abcd")


def X(lab="x", f=a):
    return Leaf(f, False, lab)


def A(lab="g", f=c):
    return Leaf(f, True, lab)


def random_structure(rng, output: bool, depth: int, counter):
    if depth == 0 or rng.random() < 0.35:
        return Leaf(Atom(rng.choice("pq")), output, f"{'a' if output else 'x'}{next(counter)}")
    op = rng.choice(sorted(OUTPUT_OPS if output else INPUT_OPS))
    kids = [random_structure(rng, w, depth - 1, counter) for w in CHILD_OUTPUT[op]]
    return make(op, *kids)


def random_sequent(rng, depth=3):
    counter = itertools.count(1)
    return Sequent(random_structure(rng, False, depth, counter),
                   random_structure(rng, True, depth, counter))


def test_rp_example():
    s = Sequent(SBin("prod", X("x", a), X("y", b)), A("g", c))
    assert Sequent(X("x", a), SBin("over", A("g", c), X("y", b))) in display_moves(s)


def test_gc_example():
    s = Sequent(X("x", Atom("p")), SUn("galr", X("y", Atom("q"))))
    assert Sequent(X("y", Atom("q")), SUn("gall", X("x", Atom("p")))) in display_moves(s)


def test_dgc_example():
    s = Sequent(SUn("dgall", A("y", b)), A("g", c))
    assert Sequent(SUn("dgalr", A("g", c)), A("y", b)) in display_moves(s)


def test_leaf_sequent_has_no_moves():
    s = Sequent(X("x", Atom("p")), A("a", Atom("p")))
    assert display_moves(s) == set()
    assert display_orbit(s) == {s}


def test_orbit_of_product():
    s = Sequent(SBin("prod", X("x", a), X("y", b)), A("g", c))
    orbit = display_orbit(s)
    assert len(orbit) == 3
    for leaf in leaves(s.ant) + leaves(s.suc):
        assert any(m.ant == leaf or m.suc == leaf for m in orbit)


def test_scope_endsequent_displays_subject():
    q = parse_formula("^1(np^1)")
    tv = parse_formula("(np \\ s) / np")
    s = Sequent(SBin("prod", X("su", q), SBin("prod", X("tv", tv), X("do", q))), A("a", Atom("s")))
    assert any(m.ant == X("su", q) for m in display_orbit(s))


def test_fig1_first_rule():
    s = Sequent(SBin("prod", X("x", a), X("y", b)), SBin("coprod", A("z", c), A("w", d)))
    assert Sequent(SBin("ldiff", A("z", c), X("x", a)), SBin("over", A("w", d), X("y", b))) \
        in distr_moves(s, RuleConfig())


def test_fig2_first_row_on_leaves():
    s = Sequent(X("x", a), A("y", b))
    assert Sequent(SUn("dgall", A("y", b)), SUn("galr", X("x", a))) in distr_moves(s, RuleConfig())


def test_no_groups_no_moves():
    rng = random.Random(5)
    for _ in range(50):
        s = random_sequent(rng)
        assert distr_moves(s, RuleConfig.none()) == set()
        assert distr_premises(s, RuleConfig.none()) == []


def test_interlock():
    with pytest.raises(ConfigViolation):
        RuleConfig(distr_binary=True, distr_inverse=True)
    with pytest.warns(UserWarning):
        RuleConfig(distr_binary=True, distr_inverse=True, allow_both_groups=True)
    cfg = RuleConfig(distr_binary=False, distr_unary=False, distr_inverse=True)
    assert cfg.groups() == ("distr-inv",)


def test_from_names():
    assert RuleConfig.from_names("distr,distr-unary") == RuleConfig()
    assert RuleConfig.from_names("none") == RuleConfig.none()
    with pytest.raises(ConfigViolation):
        RuleConfig.from_names("distr,bogus")


def test_group_sizes():
    assert len(RULE_GROUPS["distr"]) == 4
    assert len(RULE_GROUPS["distr-unary"]) == 12
    assert len(RULE_GROUPS["distr-inv"]) == 4


def test_canonical_same_for_display_equivalents():
    s = Sequent(SBin("prod", X("x", a), X("y", b)), A("g", c))
    t = Sequent(X("x", a), SBin("over", A("g", c), X("y", b)))
    assert canonical(s) == canonical(t)
    leaf = Sequent(X("x", a), A("g", a))
    assert canonical(leaf) == leaf


def test_random_display_properties():
    rng = random.Random(2024)
    for _ in range(100):
        s = random_sequent(rng)
        n = len(list(iter_positions(s.ant))) + len(list(iter_positions(s.suc)))
        orbit = display_orbit(s)
        # each member re-roots the same tree, so positions bound the orbit
        assert len(orbit) <= 2 * n + 1
        assert len(orbit) <= n
        for t in display_moves(s):
            assert s in display_moves(t)
        assert canonical(canonical(s)) == canonical(s)
        assert all(canonical(m) == canonical(s) for m in orbit)


def test_distr_preserves_leaves():
    rng = random.Random(7)
    cfg = RuleConfig()
    hits = 0
    for _ in range(300):
        s = random_sequent(rng)
        for t in distr_moves(s, cfg) | {p for _, p in distr_premises(s, cfg)}:
            hits += 1
            assert Counter(t.leaves()) == Counter(s.leaves())
    assert hits > 0


# --- the infinity symmetry maps each rule group onto itself ---------------

def _pat_formula(p):
    if isinstance(p, str):
        return Atom(p.lower())
    op, *args = p
    return Bin(op, *map(_pat_formula, args)) if len(args) == 2 else Un(op, _pat_formula(args[0]))


def _formula_pat(f):
    if isinstance(f, Atom):
        return f.name.upper()
    if isinstance(f, Bin):
        return (f.op, _formula_pat(f.left), _formula_pat(f.right))
    return (f.op, _formula_pat(f.arg))


def _normalize(rule):
    prem, concl = rule
    names = {}

    def walk(p):
        if isinstance(p, str):
            return names.setdefault(p, f"V{len(names)}")
        return (p[0], *map(walk, p[1:]))

    return tuple(walk(x) for x in (*prem, *concl))


def _infinity_rule(prem, concl):
    img = lambda p: _formula_pat(infinity(_pat_formula(p)))
    return (img(prem[1]), img(prem[0])), (img(concl[1]), img(concl[0]))


@pytest.mark.parametrize("group", ["distr", "distr-unary", "distr-inv"])
def test_infinity_closes_rule_groups(group):
    rules = {_normalize((prem, concl)) for _, prem, concl in RULE_GROUPS[group]}
    images = {_normalize(_infinity_rule(prem, concl)) for _, prem, concl in RULE_GROUPS[group]}
    assert images == rules


def test_rendering():
    s = Sequent(SBin("prod", X("x", a), SUn("dgall", A("y", b))), A("g", c))
    assert show_sequent(s) == "x:a .*. (.^1 y':b) |- g':c"
