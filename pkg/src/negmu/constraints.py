"""Decide a judgement Γ ⊢ M : A directly, by collecting type equations and
solving them. Type variables of Γ and A are rigid constants.

This does not share code with principal typing or its unifier, so the
harness can use it to cross-check them.
"""
from __future__ import annotations

import itertools

from .syntax import (
    BOTTOM, App, Arrow, Lam, Mu, Naming, Neg, NegApp, Nu, Var, free_names, free_vars,
)


class _Fail(Exception):
    pass


class _Solver:
    """Union-find over type terms. Metavariables are ('?', n) tuples; TyVar
    values come from the judgement and are never bound."""

    def __init__(self):
        self.parent = {}
        self.counter = itertools.count()

    def meta(self):
        return ("?", next(self.counter))

    def find(self, a):
        while isinstance(a, tuple) and a in self.parent:
            a = self.parent[a]
        return a

    def occurs(self, m, a) -> bool:
        a = self.find(a)
        if a == m:
            return True
        if isinstance(a, Arrow):
            return self.occurs(m, a.dom) or self.occurs(m, a.cod)
        if isinstance(a, Neg):
            return self.occurs(m, a.body)
        return False

    def eq(self, a, b):
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if isinstance(a, tuple):
            if self.occurs(a, b):
                raise _Fail
            self.parent[a] = b
        elif isinstance(b, tuple):
            self.eq(b, a)
        elif isinstance(a, Arrow) and isinstance(b, Arrow):
            self.eq(a.dom, b.dom)
            self.eq(a.cod, b.cod)
        elif isinstance(a, Neg) and isinstance(b, Neg):
            self.eq(a.body, b.body)
        else:
            # distinct rigid variables, or a constructor clash
            raise _Fail


def derivable(g, t, expected) -> bool:
    """True iff g ⊢ t : expected has a derivation (expected may be BOTTOM)."""
    return _solve(g, t, expected)


def typeable(t) -> bool:
    """True iff some context and conclusion make t derivable."""
    return _solve(None, t, None)


def _solve(g, t, expected) -> bool:
    sv = _Solver()

    def infer(t, vs, ns):
        if isinstance(t, Var):
            if t.name not in vs:
                raise _Fail
            return vs[t.name]
        if isinstance(t, Lam):
            a = sv.meta()
            b = infer(t.body, {**vs, t.var: a}, ns)
            if b is BOTTOM:
                raise _Fail
            return Arrow(a, b)
        if isinstance(t, App):
            f, x = infer(t.fun, vs, ns), infer(t.arg, vs, ns)
            if f is BOTTOM or x is BOTTOM:
                raise _Fail
            r = sv.meta()
            sv.eq(f, Arrow(x, r))
            return r
        if isinstance(t, Nu):
            a = sv.meta()
            if infer(t.body, {**vs, t.var: a}, ns) is not BOTTOM:
                raise _Fail
            return Neg(a)
        if isinstance(t, NegApp):
            f, x = infer(t.left, vs, ns), infer(t.right, vs, ns)
            if f is BOTTOM or x is BOTTOM:
                raise _Fail
            sv.eq(f, Neg(x))
            return BOTTOM
        if isinstance(t, Mu):
            a = sv.meta()
            if infer(t.body, vs, {**ns, t.name: Neg(a)}) is not BOTTOM:
                raise _Fail
            return a
        if isinstance(t, Naming):
            if t.name not in ns:
                raise _Fail
            b = infer(t.body, vs, ns)
            if b is BOTTOM:
                raise _Fail
            sv.eq(ns[t.name], Neg(b))
            return BOTTOM
        raise _Fail

    try:
        if g is None:
            vs = {x: sv.meta() for x in free_vars(t)}
            ns = {a: Neg(sv.meta()) for a in free_names(t)}
            infer(t, vs, ns)
            return True
        got = infer(t, dict(g.vars), dict(g.names))
        if (got is BOTTOM) != (expected is BOTTOM):
            return False
        if got is not BOTTOM:
            sv.eq(got, expected)
        return True
    except _Fail:
        return False

