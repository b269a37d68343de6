import pickle

import pytest
from hypothesis import given, settings

from negmu.parser import (
    ParseError, parse_conclusion, parse_term, parse_type, print_term, print_type,
)
from negmu.syntax import (
    BOTTOM, App, Arrow, FreshSupply, Lam, Mu, Naming, Neg, NegApp, Nu, TyVar, Var,
    all_names, alpha_eq, alpha_key, free_names, free_vars, fresh_like, is_closed,
    replace_at, size, subterm_at,
)
from strategies import terms, types

DNE = "\\y.mu 'a.[y](nu x.['a]x)"
DNE_AST = Lam("y", Mu("a", NegApp(Var("y"), Nu("x", Naming("a", Var("x"))))))


def test_parse_identity():
    assert parse_term("\\x.x") == Lam("x", Var("x"))


def test_parse_dne_witness():
    assert parse_term("\\y. mu 'a. [y](nu x. ['a]x)") == DNE_AST


def test_bracket_content_decides_naming_or_negapp():
    assert parse_term("['a] x") == Naming("a", Var("x"))
    assert parse_term("[y] x") == NegApp(Var("y"), Var("x"))


def test_unicode_and_ascii_spellings_agree():
    assert parse_term("λy.μ'a.[y](νx.['a]x)") == DNE_AST
    assert parse_term("lam y.mu 'a.[y](nu x.['a]x)") == DNE_AST


def test_application_is_left_associative():
    assert parse_term("x y z") == App(App(Var("x"), Var("y")), Var("z"))


def test_binder_extends_right():
    assert parse_term("\\x.x y") == Lam("x", App(Var("x"), Var("y")))
    assert parse_term("f \\x.x") == App(Var("f"), Lam("x", Var("x")))


def test_bare_binder_after_naming():
    t = parse_term("['b]mu 'g.['g]x")
    assert t == Naming("b", Mu("g", Naming("g", Var("x"))))


def test_print_identity():
    assert print_term(Lam("x", Var("x"))) == "\\x.x"


def test_print_dne_witness():
    assert print_term(DNE_AST) == DNE


def test_print_negapp_with_mu_left():
    assert print_term(NegApp(Mu("a", Var("m")), Var("n"))) == "[mu 'a.m] n"


def test_print_parenthesizes_binder_arguments():
    assert print_term(App(Var("f"), Lam("x", Var("x")))) == "f(\\x.x)"
    assert print_term(App(Lam("x", Var("x")), Var("y"))) == "(\\x.x) y"


@pytest.mark.parametrize("text", [
    "\\x.", "'a", "lam 'a.x", "mu x.x", "((x)", "x)", "", "[x]", "['a]",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_term(text)


def test_names_need_apostrophe_and_variables_must_not_have_one():
    with pytest.raises(ParseError, match="not a term"):
        parse_term("'a")
    with pytest.raises(ParseError, match="name"):
        parse_term("mu x.x")


def test_free_sets():
    t = parse_term("['a]x")
    assert free_names(t) == {"a"}
    assert free_vars(t) == {"x"}
    assert free_names(parse_term("mu 'a.['a]x")) == frozenset()


def test_dne_is_closed():
    t = parse_term(DNE)
    assert free_vars(t) == frozenset() and free_names(t) == frozenset()
    assert is_closed(t)


def test_alpha_eq_examples():
    assert alpha_eq(parse_term("\\x.x"), parse_term("\\y.y"))
    assert alpha_eq(parse_term("mu 'a.['a]x"), parse_term("mu 'b.['b]x"))
    assert not alpha_eq(parse_term("['a]x"), parse_term("['b]x"))


def test_alpha_eq_respects_shadowing():
    assert alpha_eq(parse_term("\\x.\\x.x"), parse_term("\\y.\\z.z"))
    assert not alpha_eq(parse_term("\\x.\\x.x"), parse_term("\\y.\\z.y"))
    assert not alpha_eq(parse_term("\\x.x"), parse_term("nu x.x"))


def test_positions():
    t = parse_term("(\\x.x)((\\y.y) z)")
    assert subterm_at(t, (1, 0)) == Lam("y", Var("y"))
    assert replace_at(t, (1,), Var("w")) == App(Lam("x", Var("x")), Var("w"))
    assert size(t) == 7


def test_fresh_like():
    assert fresh_like("x", {"x", "x1"}) == "x2"
    assert fresh_like("a1", {"a", "a1"}) == "a2"
    s = FreshSupply()
    assert s.tyvar() == TyVar("p1") and s.tyvar() == TyVar("p2")


def test_types():
    a = parse_type("(p1->p2)->~p1->p2")
    assert a == Arrow(Arrow(TyVar("p1"), TyVar("p2")), Arrow(Neg(TyVar("p1")), TyVar("p2")))
    assert print_type(a) == "(p1 -> p2) -> ~p1 -> p2"
    assert print_type(Neg(Arrow(TyVar("p1"), TyVar("p1")))) == "~(p1 -> p1)"
    assert parse_conclusion("#") is BOTTOM
    with pytest.raises(ParseError):
        parse_type("#")
    with pytest.raises(ParseError):
        parse_type("~# -> p1")


def test_bottom_is_a_singleton_under_pickle():
    assert pickle.loads(pickle.dumps(BOTTOM)) is BOTTOM


@settings(max_examples=300)
@given(terms())
def test_print_parse_round_trip(t):
    assert alpha_eq(parse_term(print_term(t)), t)


@settings(max_examples=200)
@given(terms())
def test_printing_is_a_fixpoint(t):
    s = print_term(parse_term(print_term(t)))
    assert print_term(parse_term(s)) == s


@settings(max_examples=200)
@given(types())
def test_type_round_trip(a):
    assert parse_type(print_type(a)) == a


@given(terms(), terms(), terms())
def test_alpha_eq_is_an_equivalence(a, b, c):
    assert alpha_eq(a, a)
    assert alpha_eq(a, b) == alpha_eq(b, a)
    if alpha_eq(a, b) and alpha_eq(b, c):
        assert alpha_eq(a, c)


@given(terms())
def test_alpha_key_ignores_bound_spelling(t):
    # rename every binder consistently by printing through the parser's renamer
    assert alpha_key(parse_term(print_term(t))) == alpha_key(t)


@given(terms())
def test_free_sets_within_all_sets(t):
    assert free_names(t) <= all_names(t)
