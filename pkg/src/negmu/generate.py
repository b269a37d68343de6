"""Random well-typed terms, built by growing typing derivations top-down.

Three generators share the machinery: the host calculus, the λμ fragment,
and the single-identifier-class calculus restricted to bottom-free types.
Each returns (context, term, conclusion) triples; terms are renamed apart
by construction because every binder gets a supply-fresh identifier.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .bridges.lmu import ContextSwitch
from .infer import TypingContext
from .syntax import (
    BOTTOM, App, Arrow, FreshSupply, Lam, Mu, Naming, Neg, NegApp, NlmMu, Nu,
    TyVar, Var, size,
)

DEFAULT_WEIGHTS = {
    "ax": 1.0, "lam": 3.0, "app": 3.0, "mu": 2.0, "nu": 2.0,
    "naming": 2.0, "negapp": 2.0, "elim": 2.0,
}


@dataclass
class GenConfig:
    seed: int = 0
    max_size: int = 30
    weights: dict = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    counts: dict = field(default_factory=dict)
    n_tyvars: int = 3
    type_depth: int = 2
    bottom_goal_rate: float = 0.2
    redex_rate: float = 0.5

    def count(self, suite: str, default: int) -> int:
        return self.counts.get(suite, default)


def random_type(rng, n_tyvars=3, depth=2, neg=True):
    r = rng.random()
    if depth <= 0 or r < 0.45:
        return TyVar(f"p{rng.randint(1, n_tyvars)}")
    if neg and r < 0.7:
        return Neg(random_type(rng, n_tyvars, depth - 1, neg))
    return Arrow(random_type(rng, n_tyvars, depth - 1, neg),
                 random_type(rng, n_tyvars, depth - 1, neg))


class _Builder:
    """One derivation. `free_vars`/`free_names` collect the context Γ."""

    def __init__(self, rng, cfg: GenConfig, dialect: str):
        self.rng = rng
        self.cfg = cfg
        self.dialect = dialect          # "l", "lmu" or "nlm"
        self.supply = FreshSupply()
        self.free_vars = {}
        self.free_names = {}            # name -> A, meaning name : ¬A

    def rtype(self, depth=None):
        return random_type(self.rng, self.cfg.n_tyvars,
                           self.cfg.type_depth if depth is None else depth,
                           neg=self.dialect != "lmu")

    def pick(self, options):
        opts = [(o, self.cfg.weights.get(o, 1.0)) for o in options]
        total = sum(w for _, w in opts)
        r = self.rng.random() * total
        for o, w in opts:
            r -= w
            if r <= 0:
                return o
        return opts[-1][0]

    def split(self, budget):
        if budget <= 1:
            return 1, 1
        k = self.rng.randint(1, budget - 1)
        return k, budget - k

    # -- axioms --

    def axiom(self, goal, vs):
        hits = [x for x, a in vs.items() if a == goal]
        hits += [x for x, a in self.free_vars.items() if a == goal]
        if hits and self.rng.random() < 0.85:
            return Var(self.rng.choice(hits))
        x = self.supply.var("f")
        self.free_vars[x] = goal
        return Var(x)

    def pick_name(self, ns):
        """An in-scope or free name, or a new free one; returns (name, A)."""
        pool = list(ns.items())
        if pool and self.rng.random() < 0.8:
            return self.rng.choice(pool)
        if self.free_names and self.rng.random() < 0.5:
            return self.rng.choice(list(self.free_names.items()))
        a = self.supply.name("k")
        b = self.rtype(1)
        self.free_names[a] = b
        return a, b

    # -- goals --

    def term(self, goal, vs, ns, budget, force=None):
        if goal is BOTTOM:
            return self.bottom(vs, ns, budget)
        options = ["ax"]
        if budget >= 2 and isinstance(goal, Arrow):
            options.append("lam")
        if budget >= 3:
            options.append("app")
            if self.dialect != "lmu" and isinstance(goal, Neg):
                options.append("nu")
            options.append("mu")
        heads = self.heads(goal, vs, budget)
        if heads:
            options.append("elim")
        if budget <= 1:
            options = ["ax"]
        rule = force if force in options else self.pick(options)
        if rule == "ax":
            return self.axiom(goal, vs)
        if rule == "elim":
            x, args = self.rng.choice(heads)
            t = Var(x)
            share = max(1, (budget - 1) // len(args))
            for b in args:
                t = App(t, self.term(b, vs, ns, share))
            return t
        if rule == "lam":
            x = self.supply.var("x")
            return Lam(x, self.term(goal.cod, {**vs, x: goal.dom}, ns, budget - 1))
        if rule == "app":
            b = self.arg_type(vs)
            l, r = self.split(budget - 1)
            return App(self.term(Arrow(b, goal), vs, ns, l, self.redex_head(["lam", "mu"])),
                       self.term(b, vs, ns, r))
        if rule == "nu":
            y = self.supply.var("y")
            return Nu(y, self.term(BOTTOM, {**vs, y: goal.body}, ns, budget - 1))
        # mu
        if self.dialect == "nlm":
            z = self.supply.var("z")
            return NlmMu(z, self.term(BOTTOM, {**vs, z: Neg(goal)}, ns, budget - 1))
        a = self.supply.name("a")
        ns2 = {**ns, a: goal}
        if self.dialect == "lmu":
            beta, b = self.pick_name(ns2)
            return ContextSwitch(a, beta, self.term(b, vs, ns2, budget - 1,
                                                    self.redex_head(["mu"])))
        return Mu(a, self.term(BOTTOM, vs, ns2, budget - 1))

    def redex_head(self, rules):
        """Sometimes insist on an introduction form, so that a redex appears."""
        if self.rng.random() < self.cfg.redex_rate:
            return self.rng.choice(rules)
        return None

    def heads(self, goal, vs, budget):
        """Variables whose type is B1 -> ... -> Bn -> goal, n >= 1, with args."""
        out = []
        for x, a in vs.items():
            args = []
            while isinstance(a, Arrow) and len(args) < budget - 1:
                args.append(a.dom)
                a = a.cod
                if a == goal:
                    out.append((x, list(args)))
        return out

    def arg_type(self, vs):
        pool = [a for a in vs.values() if a is not BOTTOM]
        if pool and self.rng.random() < 0.4:
            return self.rng.choice(pool)
        return self.rtype(1)

    def bottom(self, vs, ns, budget):
        options = ["negapp"]
        if self.dialect == "l":
            options.append("naming")
        rule = self.pick(options) if budget >= 3 else options[-1]
        if rule == "naming":
            a, b = self.pick_name(ns)
            return Naming(a, self.term(b, vs, ns, budget - 1, self.redex_head(["mu"])))
        # [M]N; prefer a negated assumption on the left when one is in scope
        negs = [a.body for a in vs.values() if isinstance(a, Neg)]
        b = self.rng.choice(negs) if negs and self.rng.random() < 0.5 else self.arg_type(vs)
        l, r = self.split(budget - 1)
        return NegApp(self.term(Neg(b), vs, ns, l, self.redex_head(["nu", "mu"])),
                      self.term(b, vs, ns, r))

    def context(self) -> TypingContext:
        return TypingContext(dict(self.free_vars),
                             {a: Neg(b) for a, b in self.free_names.items()})


def _lmu_size(t):
    if isinstance(t, ContextSwitch):
        return 2 + _lmu_size(t.body)
    if isinstance(t, App):
        return 1 + _lmu_size(t.fun) + _lmu_size(t.arg)
    if isinstance(t, Lam):
        return 1 + _lmu_size(t.body)
    return 1


def _generate(cfg: GenConfig, n: int, dialect: str, max_size=None):
    rng = random.Random(f"{dialect}:{cfg.seed}")
    limit = cfg.max_size if max_size is None else max_size
    out = []
    while len(out) < n:
        b = _Builder(rng, cfg, dialect)
        # lean towards the upper end of the size range
        target = max(rng.randint(1, limit), rng.randint(1, limit))
        if dialect == "lmu" or rng.random() >= cfg.bottom_goal_rate:
            goal = b.rtype()
        else:
            goal = BOTTOM
        t = b.term(goal, {}, {}, target)
        n_size = _lmu_size(t) if dialect == "lmu" else size(t)
        if n_size > limit:
            continue    # over budget: draw again
        out.append((b.context(), t, goal))
    return out


def gen_typed_term(cfg: GenConfig, n: int = None, max_size: int = None) -> list:
    """(context, term, conclusion) triples for the host calculus."""
    return _generate(cfg, cfg.count("typed", 100) if n is None else n, "l", max_size)


def gen_lmu_judgement(cfg: GenConfig, n: int = 100, max_size: int = None) -> list:
    """(gamma, λμ term, type, delta) with delta un-negated."""
    out = []
    for g, t, a in _generate(cfg, n, "lmu", max_size):
        out.append((dict(g.vars), t, a, {k: v.body for k, v in g.names.items()}))
    return out


def gen_nlm_judgement(cfg: GenConfig, n: int = 100, max_size: int = None) -> list:
    """(context, term, type) with bottom never inside a type."""
    return _generate(cfg, n, "nlm", max_size)


# -- untyped terms for the substitution laws --

def random_term(rng, size_left: int, var_pool, name_pool, binder_fresh=None):
    """A random term using the given free identifiers. Binders draw from the
    same pools (so shadowing happens) or from `binder_fresh`."""
    if size_left <= 1:
        return Var(rng.choice(var_pool))
    kind = rng.choice(["lam", "app", "nu", "negapp", "mu", "naming", "app", "naming"])
    rest = size_left - 1

    def pick(pool, kind_):
        if binder_fresh is not None and rng.random() < 0.5:
            return binder_fresh(kind_)
        return rng.choice(pool)

    if kind in ("app", "negapp"):
        if rest < 2:
            return Var(rng.choice(var_pool))
        k = rng.randint(1, rest - 1)
        l = random_term(rng, k, var_pool, name_pool, binder_fresh)
        r = random_term(rng, rest - k, var_pool, name_pool, binder_fresh)
        return App(l, r) if kind == "app" else NegApp(l, r)
    body = random_term(rng, rest, var_pool, name_pool, binder_fresh)
    if kind == "lam":
        return Lam(pick(var_pool, "var"), body)
    if kind == "nu":
        return Nu(pick(var_pool, "var"), body)
    if kind == "mu":
        return Mu(pick(name_pool, "name"), body)
    return Naming(rng.choice(name_pool), body)
