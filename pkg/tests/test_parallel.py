import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from negmu.parallel import (
    BoundExceeded, check_diamond, join, parallel_reduct_derivations, parallel_reducts,
    replay_derivation,
)
from negmu.parser import parse_term
from negmu.reduction import enumerate_redexes
from negmu.subst import rename_name, subst_insert, subst_struct, subst_term
from negmu.syntax import alpha_eq, alpha_key
from strategies import terms

P = parse_term
PARIGOT = "(mu 'a.['a]mu 'b.['a]m) n"


def keys(ts):
    return {alpha_key(t) for t in ts}


def test_variable_reduces_only_to_itself():
    assert parallel_reducts(P("x")) == [P("x")]


def test_identity_application():
    assert keys(parallel_reducts(P("(\\x.x) y"))) == keys([P("(\\x.x) y"), P("y")])


def test_critical_pair_reducts_present_and_joinable():
    t = P(PARIGOT)
    got = {alpha_key(r.target): r.derivation for r in parallel_reduct_derivations(t)}
    # outer mu rule alone
    direct = P("mu 'g.['g]((mu 'b.['g](m n)) n)")
    # inner renaming first, then the outer mu rule
    renamed = P("mu 'g.['g](m n)")
    assert alpha_key(direct) in got and got[alpha_key(direct)][0] == 10
    assert alpha_key(renamed) in got
    common = join(direct, renamed, 2)
    assert common is not None and alpha_eq(common, renamed)


def test_join_examples():
    assert join(P("y"), P("y"), 1) == P("y")
    assert alpha_eq(join(P("(\\x.x) y"), P("y"), 1), P("y"))
    assert join(P("x"), P("y"), 3) is None


def test_diamond_examples():
    assert check_diamond(P("x")).ok
    rep = check_diamond(P("(\\x.x)((\\y.y) z)"))
    # (\x.x) z and (\y.y) z are the same up to alpha, so three classes remain
    assert rep.ok and rep.reduct_count == 3 and rep.pairs_checked == 3
    assert check_diamond(P(PARIGOT)).ok


def test_bound():
    t = P("(\\x.x)((\\x.x)((\\x.x)((\\x.x)((\\x.x) y))))")
    with pytest.raises(BoundExceeded):
        parallel_reducts(t, bound=4)


def _reachable(t, steps):
    seen = {alpha_key(t)}
    frontier = [t]
    for _ in range(steps):
        nxt = []
        for s in frontier:
            for st in enumerate_redexes(s, include_theta=False):
                k = alpha_key(st.after)
                if k not in seen:
                    seen.add(k)
                    nxt.append(st.after)
        frontier = nxt
    return seen


def _contractions(d):
    return (d[0] >= 8) + sum(_contractions(x) for x in d[1:])


small = terms(max_leaves=7)
fast = settings(max_examples=150, suppress_health_check=[HealthCheck.too_slow])


@fast
@given(small)
def test_parallel_reduction_is_reflexive(t):
    assert alpha_key(t) in keys(parallel_reducts(t))


@fast
@given(small)
def test_single_steps_are_parallel_steps(t):
    pr = keys(parallel_reducts(t))
    for st in enumerate_redexes(t, include_theta=False):
        assert alpha_key(st.after) in pr


@fast
@given(small)
def test_derivations_replay_to_their_targets(t):
    for r in parallel_reduct_derivations(t):
        assert alpha_eq(replay_derivation(t, r.derivation), r.target)


@fast
@given(small)
def test_parallel_steps_are_reduction_sequences(t):
    for r in parallel_reduct_derivations(t):
        assert alpha_key(r.target) in _reachable(t, _contractions(r.derivation))


@fast
@given(small)
def test_diamond_on_raw_terms(t):
    assert check_diamond(t).ok


SUBSTS = {
    "term": lambda p, q: subst_term(p, q, "z"),
    "struct": lambda p, q: subst_struct(p, q, "a", "g"),
    "insert": lambda p, q: subst_insert(p, q, "a"),
    "rename": lambda p, q: rename_name(p, "b", "a"),
}


@pytest.mark.parametrize("kind", sorted(SUBSTS))
@settings(max_examples=120, suppress_health_check=[HealthCheck.too_slow], deadline=None)
@given(p=terms(max_leaves=5), q=terms(max_leaves=3), data=st.data())
def test_substitution_respects_parallel_reduction(kind, p, q, data):
    f = SUBSTS[kind]
    try:
        p2 = data.draw(st.sampled_from(parallel_reducts(p, bound=500)))
        q2 = data.draw(st.sampled_from(parallel_reducts(q, bound=500)))
        targets = keys(parallel_reducts(f(p, q), bound=5000))
    except BoundExceeded:
        assume(False)
    assert alpha_key(f(p2, q2)) in targets
