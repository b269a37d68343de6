import json

import pytest
from hypothesis import given, settings

from negmu.generate import GenConfig, gen_typed_term
from negmu.infer import check, pt
from negmu.parser import parse_term
from negmu.reduction import (
    RuleTag, apply_at, enumerate_redexes, is_normal, normalize, redex_positions,
    replay, root_step,
)
from negmu.syntax import alpha_eq, free_names, free_vars
from strategies import terms

P = parse_term


def rules(t, **kw):
    return [(s.rule, s.position) for s in enumerate_redexes(t, **kw)]


def test_beta():
    assert root_step(P("(\\x.x) y"), RuleTag.Beta) == P("y")


def test_delta_then_nu():
    t = P("[mu 'a.['a](nu x.['b]x)] z")
    t1 = root_step(t, RuleTag.Delta)
    assert alpha_eq(t1, P("[nu x.['b]x] z"))
    assert alpha_eq(root_step(t1, RuleTag.NuRule), P("['b]z"))


def test_mu_then_theta():
    t1 = root_step(P("(mu 'a.['a]x) y"), RuleTag.MuRule)
    assert alpha_eq(t1, P("mu 'g.['g](x y)"))
    assert t1.name != "a" or "a" not in free_names(t1)
    assert alpha_eq(root_step(t1, RuleTag.Theta), P("x y"))


def test_theta_needs_name_absent_from_body():
    assert root_step(P("mu 'a.['a](mu 'b.['a]x)"), RuleTag.Theta) is None
    assert root_step(P("mu 'a.['a]x"), RuleTag.Theta) == P("x")


def test_rho():
    assert alpha_eq(root_step(P("['b]mu 'g.['g]x"), RuleTag.Rho), P("['b]x"))


def test_rule_mismatch_is_none_and_apply_at_raises():
    assert root_step(P("x y"), RuleTag.Beta) is None
    with pytest.raises(ValueError):
        apply_at(P("x y"), (), RuleTag.Beta)


def test_enumerate_normal_variable():
    assert enumerate_redexes(P("x")) == []


def test_enumerate_two_betas():
    assert rules(P("(\\x.x)((\\y.y) z)")) == [(RuleTag.Beta, ()), (RuleTag.Beta, (1,))]


def test_enumerate_rho_term():
    t = P("['b]mu 'g.['g]x")
    assert rules(t, include_theta=False) == [(RuleTag.Rho, ())]
    # with theta the inner mu 'g.['g]x is a redex as well
    assert rules(t) == [(RuleTag.Rho, ()), (RuleTag.Theta, (0,))]


def test_normalize_identity_application():
    tr = normalize(P("(\\x.x) y"), "lo", 10)
    assert tr.final == P("y") and len(tr.steps) == 1 and not tr.fuel_exhausted


def test_normalize_rho():
    tr = normalize(P("['b]mu 'g.['g]x"), "lo", 10)
    assert alpha_eq(tr.final, P("['b]x"))
    assert [s.rule for s in tr.steps] == [RuleTag.Rho]


def test_dne_witness_applied_normalizes():
    t = P("(\\y.mu 'a.[y](nu x.['a]x))(nu w.[w] v)")
    assert pt(t) is not None
    for strategy in ("lo", "ri", "random"):
        tr = normalize(t, strategy, 10_000, seed=1)
        assert not tr.fuel_exhausted
        assert alpha_eq(tr.final, P("v"))


def test_fuel_exhaustion_on_untyped_loop():
    omega = P("(\\x.x x)(\\x.x x)")
    assert pt(omega) is None
    tr = normalize(omega, "lo", 50)
    assert tr.fuel_exhausted and len(tr.steps) == 50
    assert not normalize(P("y"), "lo", 0).fuel_exhausted
    with pytest.raises(ValueError):
        normalize(omega, "lo", -1)


def test_trace_json():
    tr = normalize(P("[mu 'a.['a](nu x.['b]x)] z"), "lo", 10)
    d = json.loads(tr.to_json())
    assert [s["rule"] for s in d["steps"]] == ["delta", "nu"]
    assert d["final"] == "['b]z" and d["fuel_exhausted"] is False


def test_strategies_pick_ends():
    t = P("(\\x.x)((\\y.y) z)")
    assert normalize(t, "lo", 1).steps[0].position == ()
    assert normalize(t, "ri", 1).steps[0].position == (1,)


def test_typed_terms_reach_one_normal_form():
    for g, t, a in gen_typed_term(GenConfig(seed=3), 60):
        lo = normalize(t, "lo", include_theta=False).final
        for seed in range(3):
            r = normalize(t, "random", seed=seed, include_theta=False).final
            assert alpha_eq(lo, r)
        assert check(g, lo, a)


@settings(max_examples=200)
@given(terms())
def test_replay_is_deterministic(t):
    tr = normalize(t, "random", 30, seed=7)
    assert replay(tr) == tr.final
    assert normalize(t, "random", 30, seed=7).final == tr.final


@settings(max_examples=200)
@given(terms())
def test_at_most_one_rule_per_position(t):
    pos = [p for p, _ in redex_positions(t)]
    assert len(pos) == len(set(pos))


@settings(max_examples=200)
@given(terms())
def test_steps_do_not_add_free_identifiers(t):
    for s in enumerate_redexes(t):
        assert free_vars(s.after) <= free_vars(t)
        assert free_names(s.after) <= free_names(t)


@given(terms())
def test_normal_iff_no_redex(t):
    assert is_normal(t) == (enumerate_redexes(t) == [])
