from hypothesis import given, settings, strategies as st

from negmu.parser import parse_term
from negmu.subst import rename_name, subst_insert, subst_struct, subst_term
from negmu.syntax import Var, alpha_eq, free_names, free_vars
from oracles import ln_rename, ln_subst_insert, ln_subst_struct, ln_subst_term, to_ln
from strategies import names, terms, variables

P = parse_term


def same(a, b):
    return alpha_eq(a, b)


def test_term_subst_examples():
    n = P("\\w.w")
    assert subst_term(P("x"), n, "x") == n
    assert same(subst_term(P("\\y.x"), P("z"), "x"), P("\\y.z"))


def test_term_subst_renames_to_avoid_capture():
    out = subst_term(P("\\y.x"), P("y"), "x")
    assert same(out, P("\\y1.y"))
    assert out.var != "y"
    assert to_ln(out) == ln_subst_term(to_ln(P("\\y.x")), to_ln(P("y")), "x")


def test_structural_examples():
    n = P("n")
    assert same(subst_struct(P("['a]x"), n, "a", "g"), P("['g](x n)"))
    assert same(subst_struct(P("['b]x"), n, "a", "g"), P("['b]x"))
    assert same(subst_struct(P("['a](mu 'b.['a]x)"), n, "a", "g"),
                P("['g]((mu 'b.['g](x n)) n)"))


def test_insertion_examples():
    n = P("n")
    assert same(subst_insert(P("['a]x"), n, "a"), P("[x] n"))
    assert same(subst_insert(P("['b]x"), n, "a"), P("['b]x"))
    assert same(subst_insert(P("['a](mu 'b.['a]y)"), n, "a"), P("[mu 'b.[y] n] n"))


def test_renaming_examples():
    assert same(rename_name(P("['a]x"), "b", "a"), P("['b]x"))
    assert same(rename_name(P("mu 'a.['a]x"), "b", "a"), P("mu 'a.['a]x"))
    assert same(rename_name(P("['g]mu 'd.['g]x"), "b", "g"), P("['b]mu 'd.['b]x"))


def test_renaming_avoids_capture_by_inner_mu():
    out = rename_name(P("['g]mu 'b.['g]x"), "b", "g")
    assert same(out, P("['b]mu 'd.['b]x"))


def test_structural_avoids_capturing_variables_of_the_argument():
    out = subst_struct(P("\\y.['a]x"), P("y"), "a", "g")
    assert same(out, P("\\z.['g](x y)"))


# against the locally nameless oracle

@settings(max_examples=400)
@given(terms(), terms(), variables)
def test_term_subst_matches_oracle(m, n, x):
    assert to_ln(subst_term(m, n, x)) == ln_subst_term(to_ln(m), to_ln(n), x)


@settings(max_examples=400)
@given(terms(), terms(), names, st.sampled_from(["a", "b", "c", "g"]))
def test_structural_matches_oracle(m, n, alpha, gamma):
    if gamma == alpha:
        return
    assert to_ln(subst_struct(m, n, alpha, gamma)) == \
        ln_subst_struct(to_ln(m), to_ln(n), alpha, gamma)


@settings(max_examples=400)
@given(terms(), terms(), names)
def test_insertion_matches_oracle(m, n, alpha):
    assert to_ln(subst_insert(m, n, alpha)) == ln_subst_insert(to_ln(m), to_ln(n), alpha)


@settings(max_examples=400)
@given(terms(), names, names)
def test_renaming_matches_oracle(m, beta, alpha):
    assert to_ln(rename_name(m, beta, alpha)) == ln_rename(to_ln(m), beta, alpha)


# general laws

@given(terms(), terms())
def test_substituting_an_absent_variable_is_identity(m, n):
    if "x" not in free_vars(m):
        assert same(subst_term(m, n, "x"), m)


@given(terms(), terms())
def test_absent_name_leaves_term_alone(m, n):
    if "a" not in free_names(m):
        assert same(subst_struct(m, n, "a", "g"), m)
        assert same(subst_insert(m, n, "a"), m)
        assert same(rename_name(m, "b", "a"), m)


@given(terms(), terms(), names)
def test_structural_free_names_bound(m, n, alpha):
    out = subst_struct(m, n, alpha, "g")
    assert free_names(out) <= (free_names(m) - {alpha}) | free_names(n) | {"g"}


@given(terms(), terms())
def test_term_subst_free_variables(m, n):
    out = subst_term(m, n, "x")
    expect = free_vars(m) - {"x"}
    if "x" in free_vars(m):
        expect |= free_vars(n)
    assert free_vars(out) == expect


@given(terms())
def test_self_substitution(m):
    assert same(subst_term(m, Var("x"), "x"), m)
    assert same(rename_name(m, "a", "a"), m)
