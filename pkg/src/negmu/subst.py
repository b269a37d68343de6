"""The four meta-level substitutions on terms.

    subst_term(M, N, x)         M[N/x]    replace free x by N
    subst_struct(M, N, a, g)    M[N.g/a]  [a]P becomes [g](P N)
    subst_insert(M, N, a)       M[N/a]    [a]P becomes [P]N
    rename_name(M, b, a)        M[b/a]    [a]P becomes [b]P

All of them share one traversal. Binders are renamed only when they would
capture a free identifier of the inserted material.
"""
from __future__ import annotations

from .syntax import (
    App, Mu, Naming, NegApp, Var, VAR_BINDERS,
    all_names, all_vars, free_names, free_vars, fresh_like,
)


class _Subst:
    """Capture-avoiding traversal.

    `target` is a variable when `is_var` is set, otherwise a name. For names,
    `at_naming(body)` builds the replacement for [target]body once body has
    already been substituted.
    """

    def __init__(self, target, is_var, payload=None, at_naming=None,
                 avoid_vars=frozenset(), avoid_names=frozenset()):
        self.target = target
        self.is_var = is_var
        self.payload = payload
        self.at_naming = at_naming
        self.avoid_vars = avoid_vars
        self.avoid_names = avoid_names

    def _target_free(self, t) -> bool:
        return self.target in (free_vars(t) if self.is_var else free_names(t))

    def run(self, t):
        if not self._target_free(t):
            return t
        return self.go(t, {}, {})

    def go(self, t, vr, nr):
        # vr/nr: renamings for binders passed on the way down. A binder of the
        # target maps to itself, so "target in vr/nr" means it is bound here.
        # Binders that keep their name and shadow nothing are left out.
        if not vr and not nr and not self._target_free(t):
            return t
        if isinstance(t, Var):
            if t.name in vr:
                return Var(vr[t.name])
            if self.is_var and t.name == self.target:
                return self.payload
            return t
        if isinstance(t, VAR_BINDERS):
            x = t.var
            shadows = self.is_var and x == self.target
            if not shadows and x in self.avoid_vars and self._needs_rename(t, vr, nr):
                x = fresh_like(x, self.avoid_vars | all_vars(t.body) | set(vr.values()) | {self.target})
            if x != t.var or shadows or t.var in vr:
                vr = {**vr, t.var: x}
            return type(t)(x, self.go(t.body, vr, nr))
        if isinstance(t, Mu):
            a = t.name
            shadows = not self.is_var and a == self.target
            if not shadows and a in self.avoid_names and self._needs_rename(t, vr, nr):
                a = fresh_like(a, self.avoid_names | all_names(t.body) | set(nr.values()) | {self.target})
            if a != t.name or shadows or t.name in nr:
                nr = {**nr, t.name: a}
            return Mu(a, self.go(t.body, vr, nr))
        if isinstance(t, Naming):
            body = self.go(t.body, vr, nr)
            if t.name in nr:
                return Naming(nr[t.name], body)
            if not self.is_var and t.name == self.target:
                return self.at_naming(body)
            return Naming(t.name, body)
        if isinstance(t, App):
            return App(self.go(t.fun, vr, nr), self.go(t.arg, vr, nr))
        if isinstance(t, NegApp):
            return NegApp(self.go(t.left, vr, nr), self.go(t.right, vr, nr))
        raise TypeError(f"not a term: {t!r}")

    def _needs_rename(self, t, vr, nr) -> bool:
        # the binder only matters if the target is still free below it
        bound = self.target in (vr if self.is_var else nr)
        return not bound and self._target_free(t.body)


def subst_term(m, n, x: str):
    """M[N/x]"""
    return _Subst(x, True, payload=n,
                  avoid_vars=free_vars(n), avoid_names=free_names(n)).run(m)


def subst_struct(m, n, alpha: str, gamma: str):
    """M[N.g/a]: every free [a]P becomes [g](P N)."""
    return _Subst(alpha, False,
                  at_naming=lambda p: Naming(gamma, App(p, n)),
                  avoid_vars=free_vars(n),
                  avoid_names=free_names(n) | {gamma}).run(m)


def subst_insert(m, n, alpha: str):
    """M[N/a]: every free [a]P becomes [P]N, P itself substituted first."""
    return _Subst(alpha, False,
                  at_naming=lambda p: NegApp(p, n),
                  avoid_vars=free_vars(n), avoid_names=free_names(n)).run(m)


def rename_name(m, beta: str, alpha: str):
    """M[b/a]: free occurrences of the name a become b."""
    if beta == alpha:
        return m
    return _Subst(alpha, False,
                  at_naming=lambda p: Naming(beta, p),
                  avoid_names=frozenset((beta,))).run(m)

