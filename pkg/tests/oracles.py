"""Reference implementations that share no code with the package.

Terms are converted to a locally nameless form: bound identifiers become
indices counted from their binder, free ones keep their spelling. In that
form substitution can never capture, so each operation is a plain
structural rewrite. Comparing these with the package's named versions
checks the renaming logic independently.
"""
from negmu.syntax import App, Lam, Mu, Naming, NegApp, Nu, Var


def to_ln(t, vs=(), ns=()):
    if isinstance(t, Var):
        return ("var", _ref(t.name, vs))
    if isinstance(t, Lam):
        return ("lam", to_ln(t.body, (t.var,) + vs, ns))
    if isinstance(t, Nu):
        return ("nu", to_ln(t.body, (t.var,) + vs, ns))
    if isinstance(t, Mu):
        return ("mu", to_ln(t.body, vs, (t.name,) + ns))
    if isinstance(t, App):
        return ("app", to_ln(t.fun, vs, ns), to_ln(t.arg, vs, ns))
    if isinstance(t, NegApp):
        return ("neg", to_ln(t.left, vs, ns), to_ln(t.right, vs, ns))
    if isinstance(t, Naming):
        return ("name", _ref(t.name, ns), to_ln(t.body, vs, ns))
    raise TypeError(t)


def _ref(ident, stack):
    return ("b", stack.index(ident)) if ident in stack else ("f", ident)


def _map(t, leaf):
    """Rebuild t bottom-up; `leaf` may rewrite var and name nodes."""
    tag = t[0]
    if tag == "var":
        return leaf(t)
    if tag in ("lam", "nu", "mu"):
        return (tag, _map(t[1], leaf))
    if tag in ("app", "neg"):
        return (tag, _map(t[1], leaf), _map(t[2], leaf))
    return leaf((tag, t[1], _map(t[2], leaf)))


def ln_subst_term(m, n, x):
    return _map(m, lambda t: n if t == ("var", ("f", x)) else t)


def ln_subst_struct(m, n, alpha, gamma):
    def leaf(t):
        if t[0] == "name" and t[1] == ("f", alpha):
            return ("name", ("f", gamma), ("app", t[2], n))
        return t
    return _map(m, leaf)


def ln_subst_insert(m, n, alpha):
    def leaf(t):
        if t[0] == "name" and t[1] == ("f", alpha):
            return ("neg", t[2], n)
        return t
    return _map(m, leaf)


def ln_rename(m, beta, alpha):
    def leaf(t):
        if t[0] == "name" and t[1] == ("f", alpha):
            return ("name", ("f", beta), t[2])
        return t
    return _map(m, leaf)
