"""Parigot's λμ as a fragment: terms whose μ is always followed by a naming.

Typing goes through the embedding (embed, infer, split the context). The
one-step reducer below follows λμ's own rule shapes and evaluation contexts,
so that its steps can be compared with the host calculus.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..infer import TypingContext, Typing, canonicalize, _PT, Untypeable
from ..parser import parse_term, print_type, print_term
from ..subst import rename_name, subst_struct, subst_term
from ..syntax import App, Lam, Mu, Naming, Neg, Var, all_names, fresh_like, alpha_key


@dataclass(frozen=True)
class ContextSwitch:
    """mu alpha.[beta]body"""
    alpha: str
    beta: str
    body: object


class NotInFragment(ValueError):
    pass


def embed_lmu(t):
    if isinstance(t, Var):
        return t
    if isinstance(t, Lam):
        return Lam(t.var, embed_lmu(t.body))
    if isinstance(t, App):
        return App(embed_lmu(t.fun), embed_lmu(t.arg))
    if isinstance(t, ContextSwitch):
        return Mu(t.alpha, Naming(t.beta, embed_lmu(t.body)))
    raise NotInFragment(f"not a λμ term: {t!r}")


def to_lmu(t):
    """Read a host term back as λμ; fails outside the fragment."""
    if isinstance(t, Var):
        return t
    if isinstance(t, Lam):
        return Lam(t.var, to_lmu(t.body))
    if isinstance(t, App):
        return App(to_lmu(t.fun), to_lmu(t.arg))
    if isinstance(t, Mu) and isinstance(t.body, Naming):
        return ContextSwitch(t.name, t.body.name, to_lmu(t.body.body))
    raise NotInFragment(f"{print_term(t)} is outside the λμ fragment")


def parse_lmu(text: str):
    return to_lmu(parse_term(text))


def print_lmu(t) -> str:
    return print_term(embed_lmu(t))


# -- typing --

@dataclass(frozen=True)
class LmuJudgement:
    gamma: Mapping = field(default_factory=dict)
    term: object = None
    type: object = None
    delta: Mapping = field(default_factory=dict)

    def host_context(self) -> TypingContext:
        """Γ together with ¬Δ."""
        return TypingContext(self.gamma, {a: Neg(b) for a, b in self.delta.items()})

    def to_text(self) -> str:
        g = ", ".join(f"{x}:{print_type(a)}" for x, a in sorted(self.gamma.items()))
        d = ", ".join(f"'{n}:{print_type(a)}" for n, a in sorted(self.delta.items()))
        return f"{g + ' ' if g else ''}⊢ {print_lmu(self.term)} : {print_type(self.type)}" + (
            f" | {d}" if d else "")


def lmu_typing(t) -> LmuJudgement:
    """Principal λμ typing: embed, infer, then split names off as Δ."""
    ty: Typing = canonicalize(_PT().run(embed_lmu(t)))
    delta = {n: a.body for n, a in ty.context.names.items()}
    return LmuJudgement(dict(ty.context.vars), t, ty.conclusion, delta)


def lmu_pt(t):
    try:
        return lmu_typing(t)
    except Untypeable:
        return None


# -- one-step reduction with λμ's rules --

def _names(t):
    return all_names(embed_lmu(t))


def _lmu_struct(cmd_beta, cmd_body, n, alpha, gamma):
    """([beta]M)[N.gamma/alpha] on a command, returned as (beta', M')."""
    named = subst_struct(Naming(cmd_beta, embed_lmu(cmd_body)), n, alpha, gamma)
    return named.name, to_lmu(named.body)


def lmu_root_steps(t) -> list:
    """(rule, contractum) pairs for λμ's beta, mu, theta and rho at the root."""
    out = []
    if isinstance(t, App) and isinstance(t.fun, Lam):
        out.append(("beta", to_lmu(subst_term(embed_lmu(t.fun.body), embed_lmu(t.arg), t.fun.var))))
    if isinstance(t, App) and isinstance(t.fun, ContextSwitch):
        cs = t.fun
        g = fresh_like(cs.alpha, _names(cs) | _names(t.arg))
        b2, m2 = _lmu_struct(cs.beta, cs.body, embed_lmu(t.arg), cs.alpha, g)
        out.append(("mu", ContextSwitch(g, b2, m2)))
    if isinstance(t, ContextSwitch):
        if t.beta == t.alpha and t.alpha not in _names(t.body):
            out.append(("theta", t.body))
        inner = t.body
        if isinstance(inner, ContextSwitch):
            # mu a.[b]mu g.[d]M: rename g to b; keep b as the name if d = g
            renamed = to_lmu(rename_name(embed_lmu(inner.body), t.beta, inner.alpha))
            head = t.beta if inner.beta == inner.alpha else inner.beta
            out.append(("rho", ContextSwitch(t.alpha, head, renamed)))
    return out


def lmu_one_step_reducts(t) -> list:
    """Every (rule, position, result) over λμ evaluation contexts
    (both sides of application, under λ, under μα.[β])."""
    out = [(r, (), s) for r, s in lmu_root_steps(t)]
    if isinstance(t, App):
        out += [(r, (0,) + p, App(s, t.arg)) for r, p, s in lmu_one_step_reducts(t.fun)]
        out += [(r, (1,) + p, App(t.fun, s)) for r, p, s in lmu_one_step_reducts(t.arg)]
    elif isinstance(t, Lam):
        out += [(r, (0,) + p, Lam(t.var, s)) for r, p, s in lmu_one_step_reducts(t.body)]
    elif isinstance(t, ContextSwitch):
        # the host position of the body is under both μ and the naming
        out += [(r, (0, 0) + p, ContextSwitch(t.alpha, t.beta, s))
                for r, p, s in lmu_one_step_reducts(t.body)]
    return out


def lmu_key(t):
    return alpha_key(embed_lmu(t))
