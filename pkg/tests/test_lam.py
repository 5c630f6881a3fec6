import pytest

from lgcalc.lam import (
    Abs,
    App,
    Const,
    TermSyntaxError,
    TermTypeError,
    Var,
    alpha_eq,
    alpha_key,
    beta_normalize,
    free_vars,
    is_linear,
    is_normal,
    parse_term,
    show_term,
    subst,
    typecheck,
)
from lgcalc.syntax import R, TArrow, TAtom, neg, parse_type

A = TAtom("p")
CONSTS = frozenset({"forall", "exists", "like", "imp"})


def t(text):
    return parse_term(text, CONSTS)


def test_ax_term_type():
    term = Abs("k", App(Var("k"), Var("x")))
    assert typecheck(term, {"x": A}, expected=neg(neg(A))) == neg(neg(A))


def test_coax_term_type():
    assert typecheck(Var("a"), {"a": neg(A)}) == neg(A)


def test_cut_term_type():
    env = {"m": neg(neg(A)), "k": neg(A)}
    assert typecheck(App(Var("m"), Var("k")), env) == R


def test_type_errors():
    with pytest.raises(TermTypeError):
        typecheck(App(Var("x"), Var("x")), {"x": A})
    with pytest.raises(TermTypeError):
        typecheck(Var("y"), {})
    with pytest.raises(TermTypeError):
        typecheck(t("\\x. x"), {})      # ambiguous


def test_beta_examples():
    ax = Abs("k", App(Var("k"), Var("x")))
    assert beta_normalize(App(ax, Var("a"))) == App(Var("a"), Var("x"))
    body = Abs("x", Var("s"))
    lhs = App(Abs("k", App(Var("k"), body)), Var("m"))
    assert alpha_eq(beta_normalize(lhs), App(Var("m"), body))
    normal = t("\\c. exists (\\y. c y)")
    assert beta_normalize(normal) == normal


def test_alpha_eq_examples():
    assert alpha_eq(t("\\x. x"), t("\\y. y"))
    assert alpha_eq(t("\\x. \\y. x y"), t("\\y. \\x. y x"))
    assert not alpha_eq(t("\\x. \\y. x y"), t("\\x. \\y. y x"))
    assert alpha_key(t("\\x. x")) == alpha_key(t("\\z. z"))


def test_no_eta():
    term = t("\\x. f x")
    assert beta_normalize(term) == term


def test_capture_avoidance():
    term = t("\\y. x y")
    out = subst(term, "x", Var("y"))
    assert isinstance(out, Abs) and out.var != "y"
    assert free_vars(out) == {"y"}
    assert alpha_eq(out, t("\\z. y z"))


def test_parse_and_show():
    term = t("\\v. \\y. v (\\c. \\x. c (like y x))")
    assert show_term(term) == "\\v. \\y. v (\\c. \\x. c (like y x))"
    assert free_vars(term) == set()          # like is a constant
    with pytest.raises(TermSyntaxError):
        parse_term("\\x x")


def test_linearity():
    assert is_linear(t("\\k. k x"), {"k", "x"})
    every = t("\\Q. \\P. forall (\\x. imp (P x) (Q x))")
    assert not is_linear(every)
    assert not is_linear(t("\\x. y"), {"x"})


def test_normalization_strategies_agree():
    term = t("(\\f. \\x. f (f x)) (\\y. (\\z. z) y) w")
    n1 = beta_normalize(term, "normal")
    n2 = beta_normalize(term, "applicative")
    assert alpha_eq(n1, n2) and is_normal(n1)
    assert show_term(n1) == "w"


def test_annotated_binders_guide_inference():
    term = Abs("k", App(Var("k"), Var("x")), neg(A))
    assert typecheck(term, {"x": A}) == neg(neg(A))
    bad = Abs("k", App(Var("k"), Var("x")), neg(TAtom("q")))
    with pytest.raises(TermTypeError):
        typecheck(bad, {"x": A})


def test_expected_type():
    assert typecheck(t("\\x. x"), {}, expected=parse_type("e -> e")) == TArrow(TAtom("e"), TAtom("e"))
