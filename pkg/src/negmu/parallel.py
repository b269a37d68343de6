"""Parallel reduction with Aczel-style contraction rules, used as an
executable confluence oracle.

Rule numbers in derivations:
  1 variable     2 lambda     3 mu        4 nu
  5 application  6 neg. app.  7 naming    8 renaming  [b]M => M'[b/a]
  9 beta        10 mu        11 nu       12 delta     [M]N => M'[N'/a]

Erasure (theta) is not part of this relation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .parser import print_term
from .reduction import fresh_mu_name
from .subst import rename_name, subst_insert, subst_struct, subst_term
from .syntax import App, Lam, Mu, Naming, NegApp, Nu, Var, alpha_key

DEFAULT_BOUND = 10_000


class BoundExceeded(RuntimeError):
    """The reduct set (or a product of child sets) grew past the bound."""


@dataclass(frozen=True)
class ParallelReduct:
    source: object
    target: object
    derivation: tuple = field(repr=False)


def _contract(rule, m2, n2):
    """Build the result of a contraction rule from already-reduced parts."""
    if rule == 9:
        return subst_term(m2.body, n2, m2.var)
    if rule == 10:
        g = fresh_mu_name(m2.body, n2, m2.name)
        return Mu(g, subst_struct(m2.body, n2, m2.name, g))
    if rule == 11:
        return subst_term(m2.body, n2, m2.var)
    if rule == 12:
        return subst_insert(m2.body, n2, m2.name)
    raise ValueError(rule)


class _Enum:
    def __init__(self, bound: int):
        self.bound = bound
        self.memo = {}

    def __call__(self, t) -> dict:
        got = self.memo.get(t)
        if got is None:
            got = self.memo[t] = self._compute(t)
        return got

    def _check(self, n):
        if n > self.bound:
            raise BoundExceeded(f"more than {self.bound} parallel reducts")

    def _compute(self, t) -> dict:
        out = {}

        def add(term, deriv):
            k = alpha_key(term)
            if k not in out:
                out[k] = (term, deriv)

        if isinstance(t, Var):
            add(t, (1,))
        elif isinstance(t, (Lam, Mu, Nu)):
            rule = {Lam: 2, Mu: 3, Nu: 4}[type(t)]
            for m2, d in self(t.body).values():
                add(type(t)(t.var if not isinstance(t, Mu) else t.name, m2), (rule, d))
        elif isinstance(t, Naming):
            for m2, d in self(t.body).values():
                add(Naming(t.name, m2), (7, d))
                if isinstance(m2, Mu):
                    add(rename_name(m2.body, t.name, m2.name), (8, d))
        else:
            left, right = (t.fun, t.arg) if isinstance(t, App) else (t.left, t.right)
            rl, rr = self(left), self(right)
            self._check(len(rl) * len(rr))
            for m2, dm in rl.values():
                for n2, dn in rr.values():
                    if isinstance(t, App):
                        add(App(m2, n2), (5, dm, dn))
                        if isinstance(m2, Lam):
                            add(_contract(9, m2, n2), (9, dm, dn))
                        elif isinstance(m2, Mu):
                            add(_contract(10, m2, n2), (10, dm, dn))
                    else:
                        add(NegApp(m2, n2), (6, dm, dn))
                        if isinstance(m2, Nu):
                            add(_contract(11, m2, n2), (11, dm, dn))
                        elif isinstance(m2, Mu):
                            add(_contract(12, m2, n2), (12, dm, dn))
        self._check(len(out))
        return out


def parallel_reduct_derivations(t, bound: int = DEFAULT_BOUND, _enum=None) -> list:
    e = _enum or _Enum(bound)
    return [ParallelReduct(t, term, d) for term, d in e(t).values()]


def parallel_reducts(t, bound: int = DEFAULT_BOUND) -> list:
    """All N with t => N, one representative per alpha-class."""
    return [term for term, _ in _Enum(bound)(t).values()]


def replay_derivation(t, d):
    """Follow a derivation tree from t and return the target it describes."""
    rule = d[0]
    if rule == 1:
        assert isinstance(t, Var)
        return t
    if rule in (2, 3, 4):
        body = replay_derivation(t.body, d[1])
        return type(t)(t.name if isinstance(t, Mu) else t.var, body)
    if rule == 7:
        return Naming(t.name, replay_derivation(t.body, d[1]))
    if rule == 8:
        m2 = replay_derivation(t.body, d[1])
        if not isinstance(m2, Mu):
            raise ValueError("renaming premise must reduce to a mu-abstraction")
        return rename_name(m2.body, t.name, m2.name)
    left, right = (t.fun, t.arg) if isinstance(t, App) else (t.left, t.right)
    m2 = replay_derivation(left, d[1])
    n2 = replay_derivation(right, d[2])
    if rule == 5:
        return App(m2, n2)
    if rule == 6:
        return NegApp(m2, n2)
    want = {9: Lam, 10: Mu, 11: Nu, 12: Mu}[rule]
    if not isinstance(m2, want):
        raise ValueError(f"rule {rule} premise has the wrong shape")
    return _contract(rule, m2, n2)


def join(t1, t2, depth: int, bound: int = DEFAULT_BOUND) -> Optional[object]:
    """Breadth-first search for a common =>-reduct within `depth` steps per side."""
    e = _Enum(bound)
    f1 = {alpha_key(t1): t1}
    f2 = {alpha_key(t2): t2}
    for d in range(depth + 1):
        common = f1.keys() & f2.keys()
        if common:
            return f1[min(common, key=repr)]
        if d == depth:
            return None
        f1 = {k: v for s in f1.values() for k, (v, _) in e(s).items()}
        f2 = {k: v for s in f2.values() for k, (v, _) in e(s).items()}
    return None


@dataclass
class DiamondReport:
    term: object
    reduct_count: int
    pairs_checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "term": print_term(self.term),
            "reduct_count": self.reduct_count,
            "pairs_checked": self.pairs_checked,
            "violations": [[print_term(a), print_term(b)] for a, b in self.violations],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, **kw)


def check_diamond(t, bound: int = DEFAULT_BOUND) -> DiamondReport:
    """Every two one-step =>-reducts of t must share a one-step =>-reduct."""
    e = _Enum(bound)
    reducts = [term for term, _ in e(t).values()]
    nexts = [set(e(r).keys()) for r in reducts]
    violations, pairs = [], 0
    for i in range(len(reducts)):
        for j in range(i + 1, len(reducts)):
            pairs += 1
            if not nexts[i] & nexts[j]:
                violations.append((reducts[i], reducts[j]))
    return DiamondReport(t, len(reducts), pairs, violations)
