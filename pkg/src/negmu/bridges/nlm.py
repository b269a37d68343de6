"""The single-identifier-class calculus: μ binds a variable of negated type
and bottom is an ordinary type. Syntax, principal typing and the
translation into the host calculus.

Terms reuse Var, Lam, App, Nu and NegApp; the μ binder is NlmMu.
"""
from __future__ import annotations

import itertools
import string

from ..infer import (
    TypingContext, Typing, Untypeable, canonicalize, unify, unify_contexts,
)
from ..parser import parse_term, print_term
from ..syntax import (
    BOTTOM, App, Arrow, FreshSupply, Lam, Mu, Naming, Neg, NegApp, NlmMu, Nu, Var,
    contains_bottom, free_vars,
)


class TranslationError(ValueError):
    pass


def parse_nlm(text: str):
    return parse_term(text, dialect="nlm")


print_nlm = print_term


# -- typing --

class _NlmPT:
    """Principal typing. With strict=True bottom stays a conclusion only,
    as in the host calculus; otherwise it may be unified into types."""

    def __init__(self, strict: bool):
        self.strict = strict
        self.supply = FreshSupply()

    def fresh(self):
        return self.supply.tyvar()

    def typed(self, t) -> Typing:
        r = self.run(t)
        if r.conclusion is BOTTOM and self.strict:
            raise Untypeable("expected a typed term, found one concluding bottom", t)
        return r

    def to_bottom(self, t) -> Typing:
        r = self.run(t)
        if r.conclusion is BOTTOM:
            return r
        if self.strict:
            raise Untypeable("expected a term concluding bottom", t)
        s = unify(r.conclusion, BOTTOM)
        if s is None:
            raise Untypeable("body cannot have type bottom", t)
        return s(Typing(r.context, BOTTOM))

    def _join(self, t, r1, r2, p1, target, result):
        s1 = unify(p1, target)
        if s1 is None:
            raise Untypeable("types do not fit together", t)
        s2 = unify_contexts(s1(r1.context), s1(r2.context))
        if s2 is None:
            raise Untypeable("contexts disagree", t)
        s = s2.compose(s1)
        return Typing(s(r1.context).union(s(r2.context)), s(result))

    def run(self, t) -> Typing:
        if isinstance(t, Var):
            a = self.fresh()
            return Typing(TypingContext({t.name: a}), a)
        if isinstance(t, Lam):
            r = self.typed(t.body)
            if t.var in r.context.vars:
                return Typing(r.context.without_var(t.var), Arrow(r.context.vars[t.var], r.conclusion))
            return Typing(r.context, Arrow(self.fresh(), r.conclusion))
        if isinstance(t, App):
            r1, r2 = self.typed(t.fun), self.typed(t.arg)
            phi = self.fresh()
            return self._join(t, r1, r2, r1.conclusion, Arrow(r2.conclusion, phi), phi)
        if isinstance(t, NegApp):
            r1, r2 = self.typed(t.left), self.typed(t.right)
            return self._join(t, r1, r2, r1.conclusion, Neg(r2.conclusion), BOTTOM)
        if isinstance(t, Nu):
            r = self.to_bottom(t.body)
            if t.var in r.context.vars:
                return Typing(r.context.without_var(t.var), Neg(r.context.vars[t.var]))
            return Typing(r.context, Neg(self.fresh()))
        if isinstance(t, NlmMu):
            r = self.to_bottom(t.body)
            if t.var in r.context.vars:
                phi = self.fresh()
                s = unify(r.context.vars[t.var], Neg(phi))
                if s is None:
                    raise Untypeable("mu-bound variable is not used at a negated type", t)
                return Typing(s(r.context.without_var(t.var)), s(phi))
            return Typing(r.context, self.fresh())
        raise Untypeable(f"not a term of this calculus: {type(t).__name__}", None)


def nlm_typing(t, strict: bool = False) -> Typing:
    return canonicalize(_NlmPT(strict).run(t))


def typecheck_nlm(t, strict: bool = False):
    """Principal typing or None. strict=True keeps bottom out of types."""
    try:
        return nlm_typing(t, strict)
    except Untypeable:
        return None


def mentions_bottom(ty: Typing) -> bool:
    if ty.conclusion is not BOTTOM and contains_bottom(ty.conclusion):
        return True
    return any(contains_bottom(a) for a in ty.context.vars.values())


# -- UL and translation --

def _name_stream(avoid=()):
    letters = string.ascii_lowercase
    for n in itertools.count(0):
        for c in letters:
            cand = c if n == 0 else f"{c}{n}"
            if cand not in avoid:
                yield cand


def ul(t, avoid=()) -> dict:
    """Map each μ-bound variable to its own fresh name, in binder order."""
    out = {}
    names = _name_stream(avoid)

    def go(t):
        if isinstance(t, NlmMu):
            if t.var not in out:
                out[t.var] = next(names)
            go(t.body)
            return
        for c in (t.fun, t.arg) if isinstance(t, App) else \
                 (t.left, t.right) if isinstance(t, NegApp) else \
                 (t.body,) if isinstance(t, (Lam, Nu)) else ():
            go(c)

    go(t)
    return out


def translate(t, v: dict = None, check_types: bool = False):
    """Replace each μx by μα and each occurrence of such an x by νx.[α]x.

    With check_types, refuse terms whose principal typing only exists
    because bottom is a type.
    """
    if v is None:
        v = ul(t)
    if check_types:
        loose = typecheck_nlm(t)
        if loose is not None and (mentions_bottom(loose) or typecheck_nlm(t, strict=True) is None):
            raise TranslationError("typing needs bottom inside a type; no counterpart exists")

    def go(t, scope):
        # scope: μ-bound variables visible here, mapped to their names
        if isinstance(t, Var):
            a = scope.get(t.name)
            return Nu(t.name, Naming(a, Var(t.name))) if a else t
        if isinstance(t, NlmMu):
            a = v.get(t.var)
            if a is None:
                raise TranslationError(f"no name assigned to mu-bound {t.var}")
            return Mu(a, go(t.body, {**scope, t.var: a}))
        if isinstance(t, Lam):
            return Lam(t.var, go(t.body, {k: a for k, a in scope.items() if k != t.var}))
        if isinstance(t, Nu):
            return Nu(t.var, go(t.body, {k: a for k, a in scope.items() if k != t.var}))
        if isinstance(t, App):
            return App(go(t.fun, scope), go(t.arg, scope))
        if isinstance(t, NegApp):
            return NegApp(go(t.left, scope), go(t.right, scope))
        raise TranslationError(f"not a term of this calculus: {t!r}")

    top = {x: a for x, a in v.items() if x in free_vars(t)}
    return go(t, top)


def translate_context(g: TypingContext, v: dict) -> TypingContext:
    """x:A becomes the name α:A when α/x is in v."""
    vars_ = {x: a for x, a in g.vars.items() if x not in v}
    names = dict(g.names)
    for x, a in g.vars.items():
        if x in v:
            names[v[x]] = a
    return TypingContext(vars_, names)


def from_host(t):
    """Read a host term as one of this calculus: names become variables.

    Assumes no name is spelled like a variable of the same term.
    """
    if isinstance(t, Var):
        return t
    if isinstance(t, Lam):
        return Lam(t.var, from_host(t.body))
    if isinstance(t, Nu):
        return Nu(t.var, from_host(t.body))
    if isinstance(t, App):
        return App(from_host(t.fun), from_host(t.arg))
    if isinstance(t, NegApp):
        return NegApp(from_host(t.left), from_host(t.right))
    if isinstance(t, Mu):
        return NlmMu(t.name, from_host(t.body))
    if isinstance(t, Naming):
        return NegApp(Var(t.name), from_host(t.body))
    raise TypeError(f"not a term: {t!r}")

