import json

import pytest

from lgcalc.cps import cps_proof
from lgcalc.lam import alpha_eq, show_term
from lgcalc.prover import (
    CutMismatch,
    NotARedex,
    Proof,
    ResourceLimit,
    Rule,
    Search,
    cut,
    derivable,
    enumerate_proofs,
    proofs_json,
    prove,
    reduce_principal_cut,
    relabel,
    replay,
)
from lgcalc.structures import Leaf, RuleConfig, SBin, Sequent, SUn
from lgcalc.syntax import Atom, DGalL, DGalR, GalL, GalR, parse_formula

p = Atom("p")
INV_ONLY = RuleConfig(distr_binary=False, distr_unary=False, distr_inverse=True)


@pytest.mark.parametrize("goal,cfg", [
    ("^1 p -> p^0", RuleConfig()),
    ("p -> ^0(p^0)", RuleConfig.none()),
    ("^1(p^1) -> p", RuleConfig()),
    ("(p (\\) q) * n -> p (\\) (q * n)", RuleConfig()),
    ("(p + q) * n -> p + (q * n)", INV_ONLY),
    ("p \\ q -> (p^0) + q", RuleConfig()),
    ("(p * q)^1 -> (^0 q) + (^0 p)", RuleConfig()),
])
def test_provable_examples(goal, cfg):
    proof = prove(goal, cfg)
    assert proof is not None
    assert replay(proof)
    assert not any(n.rule.kind == "Cut" for n in proof.nodes())


@pytest.mark.parametrize("goal", ["p * q -> q * p", "p^0 -> ^1 p"])
def test_not_provable_examples(goal):
    assert prove(goal) is None
    assert enumerate_proofs(goal) == []


def test_identity_has_one_proof():
    proofs = enumerate_proofs("p -> p")
    assert len(proofs) == 1
    assert proofs[0].rule.kind == "Ax"


def test_scope_enumeration_gives_distinct_terms():
    q = parse_formula("^1(np^1)")
    tv = parse_formula("(np \\ s) / np")
    goal = Sequent(SBin("prod", Leaf(q, False, "su"),
                        SBin("prod", Leaf(tv, False, "tv"), Leaf(q, False, "do"))), Atom("s"))
    proofs = enumerate_proofs(goal, limit=50)
    assert len(proofs) >= 2
    terms = {show_term(cps_proof(pr).term) for pr in proofs}
    assert len(terms) >= 2
    assert all(replay(pr) for pr in proofs)


def test_enumeration_is_deterministic():
    a = [pr.render() for pr in enumerate_proofs("(p * q)^1 -> (^0 q) + (^0 p)", limit=10)]
    b = [pr.render() for pr in enumerate_proofs("(p * q)^1 -> (^0 q) + (^0 p)", limit=10)]
    assert a == b


def test_labels_are_renamed():
    proof = prove("p \\ q -> (p^0) + q")
    labels = {lab for n in proof.nodes() for lab in n.conclusion.labels()}
    assert labels and all(lab[0] in "xa" and lab[1:].isdigit() for lab in labels)
    assert relabel(proof).render() == proof.render()


def test_resource_limit():
    with pytest.raises(ResourceLimit):
        Search(Sequent(Leaf(parse_formula("(p * q)^1"), False, "x0"),
                       parse_formula("(^0 q) + (^0 p)")), max_steps=3)


def test_json_rendering():
    proof = prove("^1 p -> p^0")
    data = json.loads(proofs_json([proof]))[0]
    assert set(data) == {"rule", "conclusion", "premises"}
    assert data["conclusion"] == "x0:(^1 p) |- p^0"


# --- replay ------------------------------------------------------------------

def _ax(label, f):
    return Proof(Sequent(Leaf(f, False, label), f), Rule("Ax", label=label, formula=f))


def _coax(label, f):
    return Proof(Sequent(f, Leaf(f, True, label)), Rule("CoAx", label=label, formula=f))


def test_swapped_premises_fail_replay():
    f = parse_formula("np \\ s")
    np_, s = Atom("np"), Atom("s")
    concl = Sequent(f, SBin("under", Leaf(np_, False, "x"), Leaf(s, True, "a")))
    good = Proof(concl, Rule("Logical", "under", "L", formula=f), (_ax("x", np_), _coax("a", s)))
    bad = Proof(concl, Rule("Logical", "under", "L", formula=f), (_coax("a", s), _ax("x", np_)))
    assert replay(good)
    assert not replay(bad)


def _tease_ed_by_hand() -> Proof:
    P = parse_formula
    np_, s, i = Atom("np"), Atom("s"), Atom("i")
    tv = P("(i/np) (/) ((np\\s) (\\) i)")
    io, vi = P("i/np"), P("(np\\s) (\\) i")
    su, do, verb = Leaf(np_, False, "su"), Leaf(np_, False, "do"), Leaf(tv, False, "tv")
    a1, x1, a2, x2 = Leaf(s, True, "a1"), Leaf(io, False, "x1"), Leaf(vi, True, "a2"), Leaf(i, False, "x2")
    vp = SBin("under", su, a1)                                  # su .\. a1
    host = SBin("coprod", vp, a2)
    n = lambda c, r, *ps: Proof(c, r, tuple(ps))
    under_l = n(Sequent(P("np\\s"), vp), Rule("Logical", "under", "L", formula=P("np\\s")),
                _ax("su", np_), _coax("a1", s))
    ldiff_r = n(Sequent(SBin("ldiff", vp, x2), vi), Rule("Logical", "ldiff", "R", formula=vi),
                under_l, _ax("x2", i))
    focus_a2 = n(Sequent(SBin("ldiff", vp, x2), a2), Rule("FocusR", label="a2", formula=vi), ldiff_r)
    drp = n(Sequent(x2, host), Rule("Structural", "drp"), focus_a2)
    mut = n(Sequent(i, host), Rule("MuTilde", label="x2", formula=i), drp)
    over_l = n(Sequent(io, SBin("over", host, do)), Rule("Logical", "over", "L", formula=io),
               mut, _ax("do", np_))
    focus_x1 = n(Sequent(x1, SBin("over", host, do)), Rule("FocusL", label="x1", formula=io), over_l)
    rp1 = n(Sequent(SBin("prod", x1, do), host), Rule("Structural", "rp"), focus_x1)
    distr = n(Sequent(SBin("rdiff", x1, a2), SBin("over", vp, do)), Rule("Structural", "distr4"), rp1)
    rdiff_l = n(Sequent(tv, SBin("over", vp, do)), Rule("Logical", "rdiff", "L", formula=tv), distr)
    focus_tv = n(Sequent(verb, SBin("over", vp, do)), Rule("FocusL", label="tv", formula=tv), rdiff_l)
    rp2 = n(Sequent(SBin("prod", verb, do), vp), Rule("Structural", "rp"), focus_tv)
    rp3 = n(Sequent(SBin("prod", su, SBin("prod", verb, do)), a1), Rule("Structural", "rp"), rp2)
    return n(Sequent(SBin("prod", su, SBin("prod", verb, do)), s), Rule("Mu", label="a1", formula=s), rp3)


def test_hand_transcribed_tease_ed_replays():
    proof = _tease_ed_by_hand()
    assert replay(proof)
    tt = cps_proof(proof)
    assert tt.check()


# --- cut ---------------------------------------------------------------------

def test_cut_axioms_gives_link():
    c = cut(_ax("x", p), _coax("a", p))
    assert c.conclusion == Sequent(Leaf(p, False, "x"), Leaf(p, True, "a"))
    assert replay(c)
    assert show_term(cps_proof(c).term) == "a x"


def test_cut_composes_proofs():
    b = parse_formula("^0(p^0)")
    left = prove("p -> ^0(p^0)")
    right = Search(Sequent(b, Leaf(b, True, "a0"))).proof()
    c = cut(left, right)
    assert replay(c)
    assert c.conclusion == Sequent(Leaf(p, False, "x0"), Leaf(b, True, "a0"))


def test_cut_renames_clashing_labels():
    c = cut(_ax("x", p), _coax("x", p))
    assert replay(c)
    assert len(set(c.conclusion.labels())) == 2


def test_cut_mismatch():
    with pytest.raises(CutMismatch):
        cut(_ax("x", p), _coax("a", Atom("q")))


# --- principal cut reductions -------------------------------------------------

def _neg_redex(op):
    """A cut principal on the negation ``op`` applied to p."""
    mk = {"gall": GalL, "galr": GalR, "dgall": DGalL, "dgalr": DGalR}[op]
    f = mk(p)
    if op in ("gall", "galr"):
        left = Search(Sequent(Leaf(f, False, "z"), f)).proof()      # ends in the R rule
        right = Proof(Sequent(f, SUn(op, Leaf(p, False, "y"))),
                      Rule("Logical", op, "L", formula=f), (_ax("y", p),))
    else:
        left = Proof(Sequent(SUn(op, Leaf(p, True, "b")), f),
                     Rule("Logical", op, "R", formula=f), (_coax("b", p),))
        right = Search(Sequent(f, Leaf(f, True, "c"))).proof()     # ends in the L rule
    return cut(left, right)


@pytest.mark.parametrize("op", ["gall", "galr", "dgalr", "dgall"])
def test_principal_negation_cut(op):
    redex = _neg_redex(op)
    assert redex.premises[0].rule.name == op and redex.premises[1].rule.name == op
    after = reduce_principal_cut(redex)
    assert after.conclusion == redex.conclusion
    assert replay(redex) and replay(after)
    assert alpha_eq(cps_proof(redex).term, cps_proof(after).term)


def test_gall_reduct_shape():
    after = reduce_principal_cut(_neg_redex("gall"))
    assert after.rule.name == "gc"
    inner = after.premises[0]
    assert inner.rule.kind == "Cut" and inner.premises[1].rule.kind == "MuTilde"


def test_ax_against_mutilde():
    body = Proof(Sequent(Leaf(p, False, "y"), Leaf(p, True, "a")), Rule("AxLink"))
    right = Proof(Sequent(p, Leaf(p, True, "a")), Rule("MuTilde", label="y", formula=p), (body,))
    redex = cut(_ax("x", p), right)
    after = reduce_principal_cut(redex)
    assert after.conclusion == redex.conclusion
    assert replay(after)
    assert alpha_eq(cps_proof(redex).term, cps_proof(after).term)


def test_not_a_redex():
    with pytest.raises(NotARedex):
        reduce_principal_cut(_ax("x", p))
    with pytest.raises(NotARedex):
        reduce_principal_cut(cut(_ax("x", p), _coax("a", p)))


def test_derivable_matches_prove():
    assert derivable("p -> p") and not derivable("p * q -> q * p")
