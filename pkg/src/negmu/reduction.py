"""One-step reduction, redex enumeration, strategies and fuel-bounded
normalization with replayable traces."""
from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field
from typing import Optional

from .parser import print_term
from .subst import rename_name, subst_insert, subst_struct, subst_term
from .syntax import (
    App, Lam, Mu, Naming, NegApp, Nu, all_names, children, fresh_like,
    replace_at, subterm_at,
)


class RuleTag(enum.Enum):
    Beta = "beta"
    NuRule = "nu"
    MuRule = "mu"
    Delta = "delta"
    Theta = "theta"
    Rho = "rho"


def fresh_mu_name(m, n, hint: str) -> str:
    """Deterministic fresh name for the mu rule: new to both M and N."""
    return fresh_like(hint, all_names(m) | all_names(n))


def root_step(t, rule: RuleTag):
    """Contract t at the root with `rule`, or return None if it does not match."""
    if rule is RuleTag.Beta:
        if isinstance(t, App) and isinstance(t.fun, Lam):
            return subst_term(t.fun.body, t.arg, t.fun.var)
    elif rule is RuleTag.NuRule:
        if isinstance(t, NegApp) and isinstance(t.left, Nu):
            return subst_term(t.left.body, t.right, t.left.var)
    elif rule is RuleTag.MuRule:
        if isinstance(t, App) and isinstance(t.fun, Mu):
            m, a = t.fun.body, t.fun.name
            g = fresh_mu_name(m, t.arg, a)
            return Mu(g, subst_struct(m, t.arg, a, g))
    elif rule is RuleTag.Delta:
        if isinstance(t, NegApp) and isinstance(t.left, Mu):
            return subst_insert(t.left.body, t.right, t.left.name)
    elif rule is RuleTag.Theta:
        # the name may not occur in M at all, free or bound
        if (isinstance(t, Mu) and isinstance(t.body, Naming)
                and t.body.name == t.name and t.name not in all_names(t.body.body)):
            return t.body.body
    elif rule is RuleTag.Rho:
        if isinstance(t, Naming) and isinstance(t.body, Mu):
            return rename_name(t.body.body, t.name, t.body.name)
    return None


def root_rules(t, include_theta: bool = True) -> list:
    """Rules whose left-hand side matches t at the root."""
    out = []
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            out.append(RuleTag.Beta)
        elif isinstance(t.fun, Mu):
            out.append(RuleTag.MuRule)
    elif isinstance(t, NegApp):
        if isinstance(t.left, Nu):
            out.append(RuleTag.NuRule)
        elif isinstance(t.left, Mu):
            out.append(RuleTag.Delta)
    elif isinstance(t, Mu):
        if include_theta and root_step(t, RuleTag.Theta) is not None:
            out.append(RuleTag.Theta)
    elif isinstance(t, Naming) and isinstance(t.body, Mu):
        out.append(RuleTag.Rho)
    return out


@dataclass(frozen=True)
class ReductionStep:
    rule: RuleTag
    position: tuple
    before: object = field(repr=False)
    after: object = field(repr=False)

    def to_dict(self) -> dict:
        return {"rule": self.rule.value, "position": list(self.position),
                "after": print_term(self.after)}


def redex_positions(t, include_theta: bool = True) -> list:
    """(position, rule) for every redex, in leftmost-outermost order."""
    out = []
    stack = [((), t)]
    while stack:
        pos, s = stack.pop()
        for r in root_rules(s, include_theta):
            out.append((pos, r))
        kids = children(s)
        for i in reversed(range(len(kids))):
            stack.append((pos + (i,), kids[i]))
    return out


def apply_at(t, pos: tuple, rule: RuleTag):
    new = root_step(subterm_at(t, pos), rule)
    if new is None:
        raise ValueError(f"{rule.name} does not apply at {list(pos)}")
    return replace_at(t, pos, new)


def enumerate_redexes(t, include_theta: bool = True) -> list:
    return [ReductionStep(r, pos, t, apply_at(t, pos, r))
            for pos, r in redex_positions(t, include_theta)]


# -- strategies --

class Strategy:
    LO = "lo"
    RI = "ri"
    RANDOM = "random"


def _choose(redexes, strategy: str, rng):
    if strategy == Strategy.LO:
        return redexes[0]
    if strategy == Strategy.RI:
        # the last redex in pre-order contains no other redex and starts rightmost
        return redexes[-1]
    return rng.choice(redexes)


@dataclass
class Trace:
    initial: object
    steps: list
    final: object
    fuel_exhausted: bool

    def to_dict(self) -> dict:
        return {
            "initial": print_term(self.initial),
            "steps": [s.to_dict() for s in self.steps],
            "final": print_term(self.final),
            "fuel_exhausted": self.fuel_exhausted,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, **kw)


def normalize(t, strategy: str = Strategy.LO, fuel: int = 10_000,
              seed: Optional[int] = None, include_theta: bool = True,
              record: bool = True) -> Trace:
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    rng = random.Random(seed)
    steps = []
    cur = t
    for _ in range(fuel):
        redexes = redex_positions(cur, include_theta)
        if not redexes:
            return Trace(t, steps, cur, False)
        pos, rule = _choose(redexes, strategy, rng)
        nxt = apply_at(cur, pos, rule)
        if record:
            steps.append(ReductionStep(rule, pos, cur, nxt))
        cur = nxt
    exhausted = bool(redex_positions(cur, include_theta))
    return Trace(t, steps, cur, exhausted)


def replay(trace: Trace):
    """Re-run the recorded steps from the initial term."""
    cur = trace.initial
    for s in trace.steps:
        cur = apply_at(cur, s.position, s.rule)
    return cur


def is_normal(t, include_theta: bool = True) -> bool:
    return not redex_positions(t, include_theta)
