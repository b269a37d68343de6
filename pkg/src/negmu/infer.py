"""Type assignment: substitutions, unification, principal typing and checking.

Bottom is threaded through as a distinct conclusion. A body that must
conclude bottom but yields a type (or the other way round) is a failure.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .parser import ParseError, parse_type, print_term, print_type
from .syntax import (
    BOTTOM, App, Arrow, FreshSupply, Lam, Mu, Naming, Neg, NegApp, Nu, TyVar,
    Var, type_vars,
)


# -- contexts and typings --

@dataclass(frozen=True)
class TypingContext:
    """Variables map to types; names map to negated types."""
    vars: Mapping = field(default_factory=dict)
    names: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vars", dict(self.vars))
        object.__setattr__(self, "names", dict(self.names))

    def __hash__(self):
        return hash((tuple(sorted(self.vars.items(), key=repr)),
                     tuple(sorted(self.names.items(), key=repr))))

    def with_var(self, x, a) -> "TypingContext":
        return TypingContext({**self.vars, x: a}, self.names)

    def with_name(self, alpha, a) -> "TypingContext":
        return TypingContext(self.vars, {**self.names, alpha: a})

    def without_var(self, x) -> "TypingContext":
        return TypingContext({k: v for k, v in self.vars.items() if k != x}, self.names)

    def without_name(self, alpha) -> "TypingContext":
        return TypingContext(self.vars, {k: v for k, v in self.names.items() if k != alpha})

    def union(self, other: "TypingContext") -> "TypingContext":
        for k, v in other.vars.items():
            if k in self.vars and self.vars[k] != v:
                raise AssertionError(f"incompatible contexts at {k}")
        for k, v in other.names.items():
            if k in self.names and self.names[k] != v:
                raise AssertionError(f"incompatible contexts at '{k}")
        return TypingContext({**self.vars, **other.vars}, {**self.names, **other.names})

    def is_subset_of(self, other: "TypingContext") -> bool:
        return (all(other.vars.get(k) == v for k, v in self.vars.items())
                and all(other.names.get(k) == v for k, v in self.names.items()))

    def is_empty(self) -> bool:
        return not self.vars and not self.names

    def type_vars(self) -> frozenset:
        out = frozenset()
        for a in list(self.vars.values()) + list(self.names.values()):
            out |= type_vars(a)
        return out

    def to_text(self) -> str:
        parts = [f"{x}:{print_type(a)}" for x, a in sorted(self.vars.items())]
        parts += [f"'{n}:{print_type(a)}" for n, a in sorted(self.names.items())]
        return ", ".join(parts)

    def to_dict(self) -> dict:
        return {"vars": {x: print_type(a) for x, a in sorted(self.vars.items())},
                "names": {n: print_type(a) for n, a in sorted(self.names.items())}}


EMPTY = TypingContext()


def parse_context(text: str) -> TypingContext:
    """Read "x:p1, 'a:~p2"; names must carry negated types."""
    vars_, names = {}, {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        ident, sep, ty = part.partition(":")
        ident = ident.strip()
        if not sep or not ident:
            raise ParseError(f"expected ident:type, got {part!r}", 0)
        a = parse_type(ty)
        if ident.startswith("'"):
            if not isinstance(a, Neg):
                raise ParseError(f"name {ident} needs a negated type", 0)
            names[ident[1:]] = a
        else:
            vars_[ident] = a
    return TypingContext(vars_, names)


@dataclass(frozen=True)
class Typing:
    context: TypingContext
    conclusion: object


def judgement_text(g: TypingContext, t, concl) -> str:
    ctx = g.to_text()
    return f"{ctx + ' ' if ctx else ''}⊢ {print_term(t)} : {print_type(concl)}"


def judgement_dict(g: TypingContext, t, concl) -> dict:
    return {"context": g.to_dict(), "term": print_term(t), "conclusion": print_type(concl)}


def judgement_json(g, t, concl, **kw) -> str:
    return json.dumps(judgement_dict(g, t, concl), ensure_ascii=False, **kw)


# -- substitutions --

class TypeSubstitution:
    """Finite map from type-variable names to types; identity elsewhere."""

    __slots__ = ("mapping",)

    def __init__(self, mapping=None):
        self.mapping = {k: v for k, v in (mapping or {}).items() if v != TyVar(k)}

    def __eq__(self, other):
        return isinstance(other, TypeSubstitution) and self.mapping == other.mapping

    def __repr__(self):
        inner = ", ".join(f"{k}↦{print_type(v)}" for k, v in sorted(self.mapping.items()))
        return "{" + inner + "}"

    def __call__(self, x):
        return apply_subst(self, x)

    def compose(self, inner: "TypeSubstitution") -> "TypeSubstitution":
        """self ∘ inner: first inner, then self."""
        out = {k: apply_subst(self, v) for k, v in inner.mapping.items()}
        for k, v in self.mapping.items():
            out.setdefault(k, v)
        return TypeSubstitution(out)


IDENTITY = TypeSubstitution()


def apply_subst(s: TypeSubstitution, x):
    if not s.mapping:
        return x
    if x is BOTTOM:
        return x
    if isinstance(x, TyVar):
        return s.mapping.get(x.name, x)
    if isinstance(x, Arrow):
        return Arrow(apply_subst(s, x.dom), apply_subst(s, x.cod))
    if isinstance(x, Neg):
        return Neg(apply_subst(s, x.body))
    if isinstance(x, TypingContext):
        return TypingContext({k: apply_subst(s, v) for k, v in x.vars.items()},
                             {k: apply_subst(s, v) for k, v in x.names.items()})
    if isinstance(x, Typing):
        return Typing(apply_subst(s, x.context), apply_subst(s, x.conclusion))
    raise TypeError(f"cannot substitute into {x!r}")


def unify(a, b) -> Optional[TypeSubstitution]:
    """Most general unifier, or None on clash or occurs-check failure.

    Cases are tried in the classic order: var/var, var/type with occurs check,
    type/var by symmetry, arrow/arrow, neg/neg. Bottom only unifies with itself
    or a variable.
    """
    if isinstance(a, TyVar):
        if a == b:
            return IDENTITY
        if a.name in type_vars(b):
            return None
        return TypeSubstitution({a.name: b})
    if isinstance(b, TyVar):
        return unify(b, a)
    if isinstance(a, Arrow) and isinstance(b, Arrow):
        s1 = unify(a.dom, b.dom)
        if s1 is None:
            return None
        s2 = unify(s1(a.cod), s1(b.cod))
        if s2 is None:
            return None
        return s2.compose(s1)
    if isinstance(a, Neg) and isinstance(b, Neg):
        return unify(a.body, b.body)
    if a is BOTTOM and b is BOTTOM:
        return IDENTITY
    return None


def _unify_maps(m1: dict, m2: dict) -> Optional[TypeSubstitution]:
    acc = IDENTITY
    for k, a in m1.items():
        if k in m2:
            s = unify(acc(a), acc(m2[k]))
            if s is None:
                return None
            acc = s.compose(acc)
    return acc


def unify_contexts(g1: TypingContext, g2: TypingContext) -> Optional[TypeSubstitution]:
    """Fold unify over the subjects the two contexts share."""
    s1 = _unify_maps(g1.vars, g2.vars)
    if s1 is None:
        return None
    s2 = _unify_maps(s1(g1).names, s1(g2).names)
    if s2 is None:
        return None
    return s2.compose(s1)


# -- principal typing --

class Untypeable(Exception):
    def __init__(self, reason: str, subterm=None):
        where = f" in {print_term(subterm)}" if subterm is not None else ""
        super().__init__(reason + where)
        self.reason = reason
        self.subterm = subterm


class _PT:
    def __init__(self):
        self.supply = FreshSupply()

    def fresh(self) -> TyVar:
        return self.supply.tyvar()

    def typ(self, t) -> Typing:
        r = self.run(t)
        if r.conclusion is BOTTOM:
            raise Untypeable("expected a typed term, found one concluding bottom", t)
        return r

    def bottom(self, t) -> Typing:
        r = self.run(t)
        if r.conclusion is not BOTTOM:
            raise Untypeable("expected a term concluding bottom", t)
        return r

    def run(self, t) -> Typing:
        if isinstance(t, Var):
            a = self.fresh()
            return Typing(TypingContext({t.name: a}), a)
        if isinstance(t, Lam):
            r = self.typ(t.body)
            if t.var in r.context.vars:
                return Typing(r.context.without_var(t.var),
                              Arrow(r.context.vars[t.var], r.conclusion))
            return Typing(r.context, Arrow(self.fresh(), r.conclusion))
        if isinstance(t, App):
            r1, r2 = self.typ(t.fun), self.typ(t.arg)
            phi = self.fresh()
            s1 = unify(r1.conclusion, Arrow(r2.conclusion, phi))
            if s1 is None:
                raise Untypeable("function type does not match its argument", t)
            s2 = unify_contexts(s1(r1.context), s1(r2.context))
            if s2 is None:
                raise Untypeable("contexts of function and argument disagree", t)
            s = s2.compose(s1)
            return Typing(s(r1.context).union(s(r2.context)), s(phi))
        if isinstance(t, Nu):
            r = self.bottom(t.body)
            if t.var in r.context.vars:
                return Typing(r.context.without_var(t.var), Neg(r.context.vars[t.var]))
            return Typing(r.context, Neg(self.fresh()))
        if isinstance(t, NegApp):
            r1, r2 = self.typ(t.left), self.typ(t.right)
            s1 = unify(r1.conclusion, Neg(r2.conclusion))
            if s1 is None:
                raise Untypeable("left side of a negated application is not a negation of the right", t)
            s2 = unify_contexts(s1(r1.context), s1(r2.context))
            if s2 is None:
                raise Untypeable("contexts of a negated application disagree", t)
            s = s2.compose(s1)
            return Typing(s(r1.context).union(s(r2.context)), BOTTOM)
        if isinstance(t, Mu):
            r = self.bottom(t.body)
            if t.name in r.context.names:
                return Typing(r.context.without_name(t.name), r.context.names[t.name].body)
            return Typing(r.context, self.fresh())
        if isinstance(t, Naming):
            r = self.typ(t.body)
            if t.name in r.context.names:
                s = unify(r.context.names[t.name].body, r.conclusion)
                if s is None:
                    raise Untypeable(f"name '{t.name} used at two different types", t)
                return Typing(s(r.context), BOTTOM)
            return Typing(r.context.with_name(t.name, Neg(r.conclusion)), BOTTOM)
        raise Untypeable(f"not a term of this calculus: {type(t).__name__}", None)


def canonical_renaming(g: TypingContext, concl) -> TypeSubstitution:
    """Rename type variables to p1, p2, ... in order of first appearance
    in the printed judgement (context first, then conclusion)."""
    order = []

    def visit(a):
        if isinstance(a, TyVar):
            if a.name not in order:
                order.append(a.name)
        elif isinstance(a, Arrow):
            visit(a.dom)
            visit(a.cod)
        elif isinstance(a, Neg):
            visit(a.body)

    for _, a in sorted(g.vars.items()):
        visit(a)
    for _, a in sorted(g.names.items()):
        visit(a)
    visit(concl)
    # two-phase so a target like p1 cannot collide with a source named p1
    tmp = {v: TyVar(f"\0{i}") for i, v in enumerate(order, 1)}
    final = {f"\0{i}": TyVar(f"p{i}") for i in range(1, len(order) + 1)}
    return TypeSubstitution(final).compose(TypeSubstitution(tmp))


def canonicalize(ty: Typing) -> Typing:
    return apply_subst(canonical_renaming(ty.context, ty.conclusion), ty)


def principal_typing(t) -> Typing:
    """Principal typing, canonically renamed. Raises Untypeable."""
    return canonicalize(_PT().run(t))


def pt(t) -> Optional[Typing]:
    try:
        return principal_typing(t)
    except Untypeable:
        return None


# -- checking by instance matching --

def match(pattern, target, s: dict) -> bool:
    """One-way matching: extend s so that s(pattern) == target."""
    if isinstance(pattern, TyVar):
        if pattern.name in s:
            return s[pattern.name] == target
        s[pattern.name] = target
        return True
    if pattern is BOTTOM or target is BOTTOM:
        return pattern is target
    if isinstance(pattern, Arrow) and isinstance(target, Arrow):
        return match(pattern.dom, target.dom, s) and match(pattern.cod, target.cod, s)
    if isinstance(pattern, Neg) and isinstance(target, Neg):
        return match(pattern.body, target.body, s)
    return False


def instance_of(ty: Typing, g: TypingContext, expected) -> Optional[TypeSubstitution]:
    """A substitution S with S(context) ⊆ g and S(conclusion) = expected."""
    s: dict = {}
    if not match(ty.conclusion, expected, s):
        return None
    for x, a in ty.context.vars.items():
        if x not in g.vars or not match(a, g.vars[x], s):
            return None
    for n, a in ty.context.names.items():
        if n not in g.names or not match(a, g.names[n], s):
            return None
    return TypeSubstitution(s)


def check(g: TypingContext, t, expected) -> bool:
    ty = pt(t)
    return ty is not None and instance_of(ty, g, expected) is not None


def types_equivalent(a, b) -> bool:
    """Equal up to a bijective renaming of type variables."""
    s1: dict = {}
    s2: dict = {}
    return match(a, b, s1) and match(b, a, s2)


# -- subject reduction --

@dataclass
class SubjectReductionReport:
    context: TypingContext
    term: object
    conclusion: object
    checked: int
    violation: Optional[list] = None   # the path of steps leading to the failure

    @property
    def ok(self) -> bool:
        return self.violation is None

    def to_dict(self) -> dict:
        d = {"judgement": judgement_dict(self.context, self.term, self.conclusion),
             "checked": self.checked, "ok": self.ok}
        if self.violation is not None:
            d["trace"] = [s.to_dict() for s in self.violation]
        return d


def instantiated_conclusion(g: TypingContext, t):
    """The conclusion pt assigns to t once its context is matched into g."""
    ty = pt(t)
    if ty is None:
        return None
    s: dict = {}
    for x, a in ty.context.vars.items():
        if x not in g.vars or not match(a, g.vars[x], s):
            return None
    for n, a in ty.context.names.items():
        if n not in g.names or not match(a, g.names[n], s):
            return None
    return TypeSubstitution(s)(ty.conclusion)


def subject_reduction_check(g: TypingContext, t, steps: int, expected=None,
                            include_theta: bool = True) -> SubjectReductionReport:
    """Explore reducts breadth-first (every redex, not one strategy) and check
    each contractum at the same judgement, up to `steps` checks."""
    from .reduction import enumerate_redexes
    from .syntax import alpha_key

    if expected is None:
        expected = instantiated_conclusion(g, t)
        if expected is None:
            raise ValueError("term does not type in the given context")
    queue = [(t, [])]
    seen = {alpha_key(t)}
    checked = 0
    while queue and checked < steps:
        cur, path = queue.pop(0)
        for step in enumerate_redexes(cur, include_theta):
            if checked >= steps:
                break
            checked += 1
            trail = path + [step]
            if not check(g, step.after, expected):
                return SubjectReductionReport(g, t, expected, checked, trail)
            k = alpha_key(step.after)
            if k not in seen:
                seen.add(k)
                queue.append((step.after, trail))
    return SubjectReductionReport(g, t, expected, checked)
