"""Abstract syntax for terms and types, free identifiers, alpha-equivalence
and a fresh-identifier supply.

Term variables and names are two disjoint classes of identifiers. Names are
stored without the leading apostrophe used by the concrete syntax.
"""
from __future__ import annotations

import itertools
import re
import threading
from dataclasses import dataclass
from typing import Iterable, Union


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lam:
    var: str
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Nu:
    var: str
    body: "Term"


@dataclass(frozen=True)
class NegApp:
    """[M]N: M applied negatively to N."""
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mu:
    name: str
    body: "Term"


@dataclass(frozen=True)
class Naming:
    """[a]M"""
    name: str
    body: "Term"


@dataclass(frozen=True)
class NlmMu:
    """mu x.M of the single-identifier-class calculus: binds a variable."""
    var: str
    body: "Term"


Term = Union[Var, Lam, App, Nu, NegApp, Mu, Naming]

VAR_BINDERS = (Lam, Nu, NlmMu)


def children(t: Term) -> tuple:
    if isinstance(t, Var):
        return ()
    if isinstance(t, (App,)):
        return (t.fun, t.arg)
    if isinstance(t, NegApp):
        return (t.left, t.right)
    return (t.body,)


def replace_child(t: Term, i: int, new: Term) -> Term:
    if isinstance(t, App):
        return App(new, t.arg) if i == 0 else App(t.fun, new)
    if isinstance(t, NegApp):
        return NegApp(new, t.right) if i == 0 else NegApp(t.left, new)
    if isinstance(t, Lam):
        return Lam(t.var, new)
    if isinstance(t, Nu):
        return Nu(t.var, new)
    if isinstance(t, Mu):
        return Mu(t.name, new)
    if isinstance(t, Naming):
        return Naming(t.name, new)
    if isinstance(t, NlmMu):
        return NlmMu(t.var, new)
    raise IndexError("variables have no children")


def subterm_at(t: Term, pos: Iterable[int]) -> Term:
    for i in pos:
        t = children(t)[i]
    return t


def replace_at(t: Term, pos: tuple, new: Term) -> Term:
    if not pos:
        return new
    sub = children(t)[pos[0]]
    return replace_child(t, pos[0], replace_at(sub, pos[1:], new))


def size(t: Term) -> int:
    return 1 + sum(size(c) for c in children(t))


# -- free and bound identifiers (memoized on the node) --

def _cached(t, key, compute):
    d = t.__dict__
    if key not in d:
        object.__setattr__(t, key, compute())
    return d[key]


def free_vars(t: Term) -> frozenset:
    def go():
        if isinstance(t, Var):
            return frozenset((t.name,))
        if isinstance(t, VAR_BINDERS):
            return free_vars(t.body) - {t.var}
        out = frozenset()
        for c in children(t):
            out |= free_vars(c)
        return out
    return _cached(t, "_fv", go)


def free_names(t: Term) -> frozenset:
    def go():
        if isinstance(t, Var):
            return frozenset()
        if isinstance(t, Mu):
            return free_names(t.body) - {t.name}
        if isinstance(t, Naming):
            return free_names(t.body) | {t.name}
        out = frozenset()
        for c in children(t):
            out |= free_names(c)
        return out
    return _cached(t, "_fn", go)


def all_vars(t: Term) -> frozenset:
    """Every variable occurring in t, free or bound."""
    def go():
        if isinstance(t, Var):
            return frozenset((t.name,))
        out = frozenset((t.var,)) if isinstance(t, VAR_BINDERS) else frozenset()
        for c in children(t):
            out |= all_vars(c)
        return out
    return _cached(t, "_av", go)


def all_names(t: Term) -> frozenset:
    def go():
        out = frozenset((t.name,)) if isinstance(t, (Mu, Naming)) else frozenset()
        for c in children(t):
            out |= all_names(c)
        return out
    return _cached(t, "_an", go)


def bound_names(t: Term) -> frozenset:
    def go():
        out = frozenset((t.name,)) if isinstance(t, Mu) else frozenset()
        for c in children(t):
            out |= bound_names(c)
        return out
    return _cached(t, "_bn", go)


def is_closed(t: Term) -> bool:
    return not free_vars(t) and not free_names(t)


# -- alpha-equivalence --

def alpha_key(t: Term):
    """Nameless key: bound identifiers become binder depths, free ones stay.

    Two terms are alpha-equivalent iff their keys are equal, so the key is
    usable for hashing and set membership.
    """
    def go(t, vs, ns, d):
        if isinstance(t, Var):
            return ("v", vs[t.name]) if t.name in vs else ("V", t.name)
        if isinstance(t, Lam):
            return ("lam", go(t.body, {**vs, t.var: d}, ns, d + 1))
        if isinstance(t, Nu):
            return ("nu", go(t.body, {**vs, t.var: d}, ns, d + 1))
        if isinstance(t, NlmMu):
            return ("muv", go(t.body, {**vs, t.var: d}, ns, d + 1))
        if isinstance(t, Mu):
            return ("mu", go(t.body, vs, {**ns, t.name: d}, d + 1))
        if isinstance(t, Naming):
            tag = ("n", ns[t.name]) if t.name in ns else ("N", t.name)
            return ("name", tag, go(t.body, vs, ns, d))
        if isinstance(t, App):
            return ("app", go(t.fun, vs, ns, d), go(t.arg, vs, ns, d))
        return ("neg", go(t.left, vs, ns, d), go(t.right, vs, ns, d))

    return _cached(t, "_ak", lambda: go(t, {}, {}, 0))


def alpha_eq(t1: Term, t2: Term) -> bool:
    return t1 == t2 or alpha_key(t1) == alpha_key(t2)


# -- types --

@dataclass(frozen=True)
class TyVar:
    name: str


@dataclass(frozen=True)
class Arrow:
    dom: "Type"
    cod: "Type"


@dataclass(frozen=True)
class Neg:
    body: "Type"


class _Bottom:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "BOTTOM"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()

Type = Union[TyVar, Arrow, Neg]
# the νλμ lane lets BOTTOM appear inside types; plain 𝓛 never does
Conclusion = Union[TyVar, Arrow, Neg, _Bottom]


def type_vars(a) -> frozenset:
    if isinstance(a, TyVar):
        return frozenset((a.name,))
    if isinstance(a, Arrow):
        return type_vars(a.dom) | type_vars(a.cod)
    if isinstance(a, Neg):
        return type_vars(a.body)
    return frozenset()


def contains_bottom(a) -> bool:
    if a is BOTTOM:
        return True
    if isinstance(a, Arrow):
        return contains_bottom(a.dom) or contains_bottom(a.cod)
    if isinstance(a, Neg):
        return contains_bottom(a.body)
    return False


# -- fresh identifiers --

_TRAILING_DIGITS = re.compile(r"[\d']+$")


def stem(ident: str) -> str:
    s = _TRAILING_DIGITS.sub("", ident)
    return s or "x"


def fresh_like(base: str, taken) -> str:
    s = stem(base)
    for i in itertools.count(1):
        cand = f"{s}{i}"
        if cand not in taken:
            return cand


class FreshSupply:
    """Issues identifiers that are new to this supply and to the given avoid sets.

    Counters are per identifier class and only go up, so nothing is issued
    twice. A lock makes sharing a supply between threads safe.
    """

    KINDS = ("var", "name", "tyvar")

    def __init__(self, avoid_vars=(), avoid_names=(), avoid_tyvars=()):
        self._taken = {
            "var": set(avoid_vars),
            "name": set(avoid_names),
            "tyvar": set(avoid_tyvars),
        }
        self._count = dict.fromkeys(self.KINDS, 0)
        self._lock = threading.Lock()

    @classmethod
    def for_terms(cls, *terms: Term) -> "FreshSupply":
        vs, ns = set(), set()
        for t in terms:
            vs |= all_vars(t)
            ns |= all_names(t)
        return cls(vs, ns)

    def avoid(self, kind: str, idents) -> None:
        with self._lock:
            self._taken[kind].update(idents)

    def _issue(self, kind: str, hint: str) -> str:
        s = stem(hint)
        with self._lock:
            taken = self._taken[kind]
            while True:
                self._count[kind] += 1
                cand = f"{s}{self._count[kind]}"
                if cand not in taken:
                    taken.add(cand)
                    return cand

    def var(self, hint: str = "x") -> str:
        return self._issue("var", hint)

    def name(self, hint: str = "a") -> str:
        return self._issue("name", hint)

    def tyvar(self) -> TyVar:
        return TyVar(self._issue("tyvar", "p"))
