"""Property suites over generated corpora, with greedy shrinking and
JSON/table reports."""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

from .bridges.lmu import embed_lmu, lmu_one_step_reducts
from .bridges.nlm import translate, translate_context, typecheck_nlm, ul
from .constraints import derivable
from .generate import (
    GenConfig, gen_lmu_judgement, gen_nlm_judgement, gen_typed_term, random_term,
    random_type,
)
from .infer import (
    TypeSubstitution, TypingContext, check, instance_of, match, pt, subject_reduction_check,
    unify,
)
from .parallel import BoundExceeded, check_diamond
from .parser import print_term, print_type
from .reduction import enumerate_redexes, normalize
from .subst import rename_name, subst_insert, subst_struct, subst_term
from .syntax import (
    Arrow, Neg, TyVar, all_names, alpha_eq, alpha_key, children, fresh_like, size,
    type_vars,
)

SUITES = ("subject-reduction", "confluence", "sn", "subst-commute",
          "pt-roundtrip", "translation", "mgu")

THEOREMS = {
    "subject-reduction": "types are preserved by every reduction step",
    "confluence": "parallel reduction has the diamond property; all strategies reach one normal form",
    "sn": "well-typed terms are strongly normalising",
    "subst-commute": "the four substitutions commute (16 equations)",
    "pt-roundtrip": "principal typing is sound and complete",
    "translation": "λμ embeds conservatively; the translation preserves typing",
    "mgu": "unify returns a most general unifier",
}

DEFAULT_COUNTS = {
    "subject-reduction": 1000, "confluence": 500, "diamond": 300, "sn": 1000,
    "subst-commute": 200, "pt-roundtrip": 500, "translation": 200, "mgu": 500,
}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    trials: int = 0
    failures: list = field(default_factory=list)
    wall_time: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"suite": self.suite, "theorem": THEOREMS[self.suite], "seed": self.seed,
                "trials": self.trials, "failures": self.failures,
                "wall_time": round(self.wall_time, 3), "notes": self.notes, "ok": self.ok}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, **kw)

    def table(self) -> str:
        rows = [("suite", self.suite), ("property", THEOREMS[self.suite]),
                ("seed", str(self.seed)), ("trials", str(self.trials)),
                ("failures", str(len(self.failures))),
                ("wall time", f"{self.wall_time:.2f}s")]
        rows += [(k, str(v)) for k, v in self.notes.items()]
        w = max(len(k) for k, _ in rows)
        lines = [f"{k.ljust(w)}  {v}" for k, v in rows]
        for f in self.failures[:10]:
            lines.append(f"  trial {f['trial']}: {f['detail']}")
            lines.append(f"    {f.get('shrunk') or f.get('term', '')}")
        return "\n".join(lines)


# -- shrinking --

def subterms(t):
    out = []
    stack = list(children(t))
    while stack:
        s = stack.pop()
        out.append(s)
        stack.extend(children(s))
    return out


def shrink(t, fails, max_rounds: int = 200):
    """Greedy: move to the smallest proper subterm that still fails, until
    none does. The result always satisfies `fails`."""
    for _ in range(max_rounds):
        for s in sorted(subterms(t), key=size):
            try:
                bad = fails(s)
            except Exception:
                bad = False
            if bad:
                t = s
                break
        else:
            return t
    return t


def _failure(trial, term, detail, fails=None, **extra):
    rec = {"trial": trial, "term": print_term(term), "detail": detail, **extra}
    if fails is not None:
        rec["shrunk"] = print_term(shrink(term, fails))
    return rec


def _pt_judgement(t):
    ty = pt(t)
    return None if ty is None else (ty.context, ty.conclusion)


# -- suites --

def _sr_fails(t) -> bool:
    j = _pt_judgement(t)
    if j is None:
        return False
    g, a = j
    return any(not check(g, s.after, a) for s in enumerate_redexes(t))


def suite_subject_reduction(cfg: GenConfig, rep: SuiteReport, steps: int = 1):
    corpus = gen_typed_term(cfg, cfg.count("subject-reduction", DEFAULT_COUNTS["subject-reduction"]))
    checked = 0
    for i, (g, t, a) in enumerate(corpus):
        rep.trials += 1
        # every enumerated step, cross-checked by the constraint solver too
        for s in enumerate_redexes(t):
            checked += 1
            if not (check(g, s.after, a) and derivable(g, s.after, a)):
                rep.failures.append(_failure(i, t, f"{s.rule.name} at {list(s.position)} "
                                             f"gives {print_term(s.after)}", _sr_fails))
                break
        else:
            if steps > 1:
                r = subject_reduction_check(g, t, steps, a)
                checked += r.checked
                if not r.ok:
                    rep.failures.append(_failure(i, t, "a later reduct loses its type", _sr_fails,
                                                 trace=r.to_dict().get("trace")))
    rep.notes["steps checked"] = checked


def _nf(t, strategy, seed=None, fuel=10_000):
    return normalize(t, strategy, fuel, seed=seed, include_theta=False, record=False)


def suite_confluence(cfg: GenConfig, rep: SuiteReport, strategies: int = 5,
                     diamond_size: int = 12):
    n_diamond = cfg.count("diamond", DEFAULT_COUNTS["diamond"])
    small = gen_typed_term(GenConfig(**{**cfg.__dict__, "seed": cfg.seed + 7919}),
                           n_diamond, max_size=diamond_size)
    reducts = pairs = bound_hits = 0
    for i, (_, t, _) in enumerate(small):
        rep.trials += 1
        try:
            d = check_diamond(t)
        except BoundExceeded:
            bound_hits += 1
            rep.failures.append(_failure(i, t, "reduct enumeration bound exceeded"))
            continue
        reducts += d.reduct_count
        pairs += d.pairs_checked
        if not d.ok:
            a, b = d.violations[0]
            rep.failures.append(_failure(
                i, t, f"no common one-step reduct of {print_term(a)} and {print_term(b)}",
                lambda s: not check_diamond(s).ok))
    rep.notes.update({"diamond terms": len(small), "reducts": reducts, "pairs": pairs})

    corpus = gen_typed_term(cfg, cfg.count("confluence", DEFAULT_COUNTS["confluence"]))
    for i, (_, t, _) in enumerate(corpus):
        rep.trials += 1
        lo = _nf(t, "lo")
        if lo.fuel_exhausted:
            rep.failures.append(_failure(i, t, "leftmost-outermost ran out of fuel"))
            continue
        for k in range(strategies):
            r = _nf(t, "random", seed=cfg.seed * 1000 + i * 10 + k)
            if r.fuel_exhausted or not alpha_eq(r.final, lo.final):
                def fails(s, k=k):
                    a = _nf(s, "lo")
                    b = _nf(s, "random", seed=k)
                    return not alpha_eq(a.final, b.final)
                rep.failures.append(_failure(
                    i, t, f"normal forms differ: {print_term(lo.final)} vs {print_term(r.final)}",
                    fails))
                break
    rep.notes["normal-form terms"] = len(corpus)


def suite_sn(cfg: GenConfig, rep: SuiteReport, fuel: int = 10_000):
    corpus = gen_typed_term(cfg, cfg.count("sn", DEFAULT_COUNTS["sn"]))
    longest = 0
    for i, (_, t, _) in enumerate(corpus):
        rep.trials += 1
        for strat, seed in (("lo", None), ("ri", None), ("random", i)):
            tr = normalize(t, strat, fuel, seed=seed)
            if tr.fuel_exhausted:
                rep.failures.append(_failure(i, t, f"{strat} exhausted fuel {fuel}",
                                             lambda s: normalize(s, strat, fuel, seed=seed,
                                                                 record=False).fuel_exhausted))
                break
            longest = max(longest, len(tr.steps))
    rep.notes["fuel"] = fuel
    rep.notes["longest reduction"] = longest


# -- substitution laws --

def _laws():
    """The sixteen equations. Each maps (M, N, P, ids) to (lhs, rhs).

    ids: x, y variables; a (the outer target name), b (the inner one);
    g fresh for the inner structural substitution; g4 the renaming target
    of group 4; d_struct / d_rename the outer name arguments.
    """
    def outer(kind, ids):
        y, a = ids["y"], ids["a"]
        if kind == "a":
            return lambda t, P: subst_term(t, P, y)
        if kind == "b":
            return lambda t, P: subst_struct(t, P, a, ids["d_struct"])
        if kind == "c":
            return lambda t, P: subst_insert(t, P, a)
        return lambda t, P: rename_name(t, ids["d_rename"], a)

    laws = {}
    for k in "abcd":
        def law1(M, N, P, ids, k=k):
            S = outer(k, ids)
            x = ids["x"]
            return S(subst_term(M, N, x), P), subst_term(S(M, P), S(N, P), x)

        def law2(M, N, P, ids, k=k):
            S = outer(k, ids)
            b, g = ids["b"], ids["g"]
            return (S(subst_struct(M, N, b, g), P),
                    subst_struct(S(M, P), S(N, P), b, g))

        def law3(M, N, P, ids, k=k):
            S = outer(k, ids)
            b = ids["b"]
            return S(subst_insert(M, N, b), P), subst_insert(S(M, P), S(N, P), b)

        def law4(M, N, P, ids, k=k):
            S = outer(k, ids)
            b, g = ids["b"], ids["g4"]
            if k == "a":
                return S(rename_name(M, g, b), P), rename_name(S(M, P), g, b)
            return S(rename_name(M, g, b), P), S(rename_name(S(M, P), g, b), P)

        laws[f"1{k}"], laws[f"2{k}"], laws[f"3{k}"], laws[f"4{k}"] = law1, law2, law3, law4
    return dict(sorted(laws.items()))


LAWS = _laws()


def substitution_triple(rng):
    """Random (M, N, P, ids) meeting the side conditions: no target
    identifier occurs in P; g is fresh; d differs from b."""
    vars_ = ["x", "y", "z", "u"]
    names = ["a", "b", "c", "e"]
    M = random_term(rng, rng.randint(1, 14), vars_, names)
    N = random_term(rng, rng.randint(1, 6), vars_, names)
    # substitutions act as binders: P mentions neither x, y nor a, b
    P = random_term(rng, rng.randint(1, 6), ["z", "u", "w"], ["c", "e"])
    used = all_names(M) | all_names(N) | all_names(P)
    g = fresh_like("g", used)
    d_fresh = fresh_like("h", used | {g})
    ids = {"x": "x", "y": "y", "a": "a", "b": "b", "g": g,
           # the structural target must be fresh; a renaming target only needs to differ from b
           "d_struct": d_fresh,
           "d_rename": rng.choice(["c", "e", d_fresh]),
           # the interesting case for group 4 is renaming onto the outer target
           "g4": "a" if rng.random() < 0.5 else rng.choice(["c", g])}
    return M, N, P, ids


def suite_subst_commute(cfg: GenConfig, rep: SuiteReport):
    rng = random.Random(f"subst:{cfg.seed}")
    n = cfg.count("subst-commute", DEFAULT_COUNTS["subst-commute"])
    per_law = dict.fromkeys(LAWS, 0)
    for i in range(n):
        rep.trials += 1
        M, N, P, ids = substitution_triple(rng)
        for name, law in LAWS.items():
            lhs, rhs = law(M, N, P, ids)
            per_law[name] += 1
            if not alpha_eq(lhs, rhs):
                rep.failures.append({
                    "trial": i, "detail": f"equation {name}",
                    "term": f"M={print_term(M)}  N={print_term(N)}  P={print_term(P)}  ids={ids}",
                    "lhs": print_term(lhs), "rhs": print_term(rhs)})
    rep.notes["equations"] = len(LAWS)
    rep.notes["checks"] = sum(per_law.values())


# -- principal typing round trip --

def random_instance(rng, g: TypingContext, concl, n_tyvars=3):
    """Apply a random substitution to a typing and add unrelated assumptions."""
    vs = sorted(g.type_vars() | type_vars(concl))
    s = TypeSubstitution({v: random_type(rng, n_tyvars, 2) for v in vs if rng.random() < 0.7})
    g2 = s(g)
    extra_v = {f"w{i}": random_type(rng, n_tyvars, 2) for i in range(rng.randint(0, 2))}
    extra_n = {f"w{i}": Neg(random_type(rng, n_tyvars, 1)) for i in range(rng.randint(0, 2))}
    return TypingContext({**extra_v, **g2.vars}, {**extra_n, **g2.names}), s(concl)


def suite_pt_roundtrip(cfg: GenConfig, rep: SuiteReport):
    rng = random.Random(f"pt:{cfg.seed}")
    corpus = gen_typed_term(cfg, cfg.count("pt-roundtrip", DEFAULT_COUNTS["pt-roundtrip"]))

    def unsound(t):
        j = _pt_judgement(t)
        return j is not None and not derivable(j[0], t, j[1])

    for i, (g, t, a) in enumerate(corpus):
        rep.trials += 1
        ty = pt(t)
        if ty is None:
            rep.failures.append(_failure(i, t, "pt rejects a derivable judgement"))
            continue
        if not derivable(ty.context, t, ty.conclusion):
            rep.failures.append(_failure(i, t, "pt output is not derivable", unsound))
            continue
        if not check(g, t, a):
            rep.failures.append(_failure(i, t, "generated judgement is not an instance of pt"))
            continue
        g2, a2 = random_instance(rng, ty.context, ty.conclusion)
        if not (check(g2, t, a2) and derivable(g2, t, a2)):
            rep.failures.append(_failure(i, t, f"instance {g2.to_text()} : {print_type(a2)} rejected"))


# -- bridges --

def suite_translation(cfg: GenConfig, rep: SuiteReport):
    n = cfg.count("translation", DEFAULT_COUNTS["translation"])
    steps = 0
    for i, (gamma, t, a, delta) in enumerate(gen_lmu_judgement(cfg, n)):
        rep.trials += 1
        e = embed_lmu(t)
        g = TypingContext(gamma, {k: Neg(v) for k, v in delta.items()})
        if not (check(g, e, a) and derivable(g, e, a)):
            rep.failures.append(_failure(i, e, "embedded λμ judgement does not check"))
            continue
        host = {alpha_key(s.after) for s in enumerate_redexes(e)}
        for rule, _, r in lmu_one_step_reducts(t):
            steps += 1
            if alpha_key(embed_lmu(r)) not in host:
                rep.failures.append(_failure(i, e, f"λμ {rule} step has no host counterpart"))
                break
    rep.notes["λμ steps matched"] = steps

    for i, (g, t, a) in enumerate(gen_nlm_judgement(cfg, n)):
        rep.trials += 1
        loose = typecheck_nlm(t, strict=True)
        if loose is None or instance_of(loose, g, a) is None:
            rep.failures.append(_failure(i, t, "generated judgement is not an instance of its typing"))
            continue
        v = ul(t)
        tt = translate(t, v, check_types=True)
        gg = translate_context(g, v)
        if not (check(gg, tt, a) and derivable(gg, tt, a)):
            rep.failures.append(_failure(i, t, f"translation {print_term(tt)} does not check"))


# -- most general unifiers --

def _generalize(rng, t, supply, prefix):
    """Replace random subterms of t by fresh variables; returns (pattern, map)."""
    mapping = {}

    def go(a):
        if rng.random() < 0.25:
            v = f"{prefix}{next(supply)}"
            mapping[v] = a
            return TyVar(v)
        if isinstance(a, Arrow):
            return Arrow(go(a.dom), go(a.cod))
        if isinstance(a, Neg):
            return Neg(go(a.body))
        return a

    return go(t), mapping


def mgu_pair(rng, n_tyvars=4):
    """Two types with a known unifier U: generalisations of one type T."""
    import itertools
    t = random_type(rng, n_tyvars, 4)
    counter = itertools.count(1)
    a, ma = _generalize(rng, t, counter, "q")
    b, mb = _generalize(rng, t, counter, "r")
    # a further random instance of the shared variables
    r = TypeSubstitution({f"p{i}": random_type(rng, n_tyvars, 1)
                          for i in range(1, n_tyvars + 1) if rng.random() < 0.5})
    u = r.compose(TypeSubstitution({**ma, **mb}))
    return a, b, u


def factors_through(s: TypeSubstitution, u: TypeSubstitution, variables) -> bool:
    """Is there W with u(v) = W(s(v)) for every v?"""
    w: dict = {}
    return all(match(s(TyVar(v)), u(TyVar(v)), w) for v in sorted(variables))


def suite_mgu(cfg: GenConfig, rep: SuiteReport):
    rng = random.Random(f"mgu:{cfg.seed}")
    for i in range(cfg.count("mgu", DEFAULT_COUNTS["mgu"])):
        rep.trials += 1
        a, b, u = mgu_pair(rng)
        assert u(a) == u(b)
        s = unify(a, b)
        detail = None
        if s is None:
            detail = "unify failed on a unifiable pair"
        elif s(a) != s(b):
            detail = "unify result is not a unifier"
        elif not factors_through(s, u, type_vars(a) | type_vars(b)):
            detail = "independent unifier does not factor through unify"
        if detail:
            rep.failures.append({"trial": i, "detail": detail,
                                 "term": f"{print_type(a)}  =?=  {print_type(b)}"})


_RUNNERS = {
    "subject-reduction": suite_subject_reduction,
    "confluence": suite_confluence,
    "sn": suite_sn,
    "subst-commute": suite_subst_commute,
    "pt-roundtrip": suite_pt_roundtrip,
    "translation": suite_translation,
    "mgu": suite_mgu,
}


def run_suite(name: str, cfg: GenConfig = None) -> SuiteReport:
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cfg = cfg or GenConfig()
    rep = SuiteReport(name, cfg.seed)
    start = time.perf_counter()
    _RUNNERS[name](cfg, rep)
    rep.wall_time = time.perf_counter() - start
    return rep
