"""Concrete syntax: lexer, parser and printer for terms, types and judgements.

Term grammar, loosest first::

    term    := binder | app
    binder  := ("\\" | "lam") ident "." term | "nu" ident "." term | "mu" name "." term
    app     := atom {atom} [binder]
    atom    := ident | "[" name "]" operand | "[" term "]" operand | "(" term ")"
    operand := atom | binder
    name    := "'" ident

A binder in the last argument slot or right after a bracket extends as far
right as possible, so "['b]mu 'g.['g]x" needs no parentheses.

Types: "~" binds tighter than "->", which associates to the right. Bottom is
written "#" and is only accepted as a whole conclusion.

Dialect "nlm" has a single identifier class: mu binds a plain variable and
name tokens are rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    BOTTOM, App, Arrow, Lam, Mu, Naming, Neg, NegApp, NlmMu, Nu, TyVar, Var,
    VAR_BINDERS, free_names, free_vars, fresh_like,
)


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at offset {pos}")
        self.pos = pos


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->|→)
  | (?P<name>'[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<punct>[\\λμν.()\[\]~¬#⊥,:⊢|])
""", re.VERBOSE)

_ALIASES = {"λ": "lam", "\\": "lam", "μ": "mu", "ν": "nu", "¬": "~", "⊥": "#"}
KEYWORDS = {"lam", "mu", "nu"}


@dataclass(frozen=True)
class Tok:
    kind: str   # kw, ident, name, sym, eof
    text: str
    pos: int


def tokenize(text: str) -> list:
    out, i = [], 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        s = m.group()
        if kind == "ident" and s in KEYWORDS:
            out.append(Tok("kw", s, i))
        elif kind == "ident":
            out.append(Tok("ident", s, i))
        elif kind == "name":
            out.append(Tok("name", s[1:], i))
        elif kind == "arrow":
            out.append(Tok("sym", "->", i))
        elif kind == "punct":
            s = _ALIASES.get(s, s)
            out.append(Tok("kw" if s in KEYWORDS else "sym", s, i))
        i = m.end()
    out.append(Tok("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, dialect: str = "l"):
        self.toks = tokenize(text)
        self.i = 0
        self.dialect = dialect

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Tok:
        t = self.tok
        self.i += 1
        return t

    def expect(self, kind, text=None) -> Tok:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", t.pos)
        return self.advance()

    def at(self, kind, text=None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    def done(self):
        if not self.at("eof"):
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)

    # -- terms --

    def variable(self, binder: str) -> str:
        t = self.tok
        if t.kind == "name":
            raise ParseError(f"{binder} binds a variable, not the name '{t.text}", t.pos)
        return self.expect("ident").text

    def name(self) -> str:
        t = self.tok
        if t.kind == "ident":
            raise ParseError(f"expected a name like '{t.text}, got variable {t.text}", t.pos)
        return self.expect("name").text

    def at_binder(self) -> bool:
        return self.tok.kind == "kw"

    def binder(self):
        kw = self.advance().text
        if kw == "lam":
            x = self.variable("lambda")
            self.expect("sym", ".")
            return Lam(x, self.term())
        if kw == "nu":
            x = self.variable("nu")
            self.expect("sym", ".")
            return Nu(x, self.term())
        if self.dialect == "nlm":
            x = self.variable("mu")
            self.expect("sym", ".")
            return NlmMu(x, self.term())
        a = self.name()
        self.expect("sym", ".")
        return Mu(a, self.term())

    def term(self):
        if self.at_binder():
            return self.binder()
        t = self.atom()
        while True:
            if self.at_binder():
                return App(t, self.binder())
            if self.starts_atom():
                t = App(t, self.atom())
            else:
                return t

    def starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("ident", "name") or (t.kind == "sym" and t.text in "([")

    def operand(self):
        return self.binder() if self.at_binder() else self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return Var(t.text)
        if t.kind == "name":
            raise ParseError(f"the name '{t.text} is not a term", t.pos)
        if t.kind == "sym" and t.text == "(":
            self.advance()
            inner = self.term()
            self.expect("sym", ")")
            return inner
        if t.kind == "sym" and t.text == "[":
            self.advance()
            if self.at("name") and self.peek().kind == "sym" and self.peek().text == "]":
                if self.dialect == "nlm":
                    raise ParseError("names do not exist in this dialect", self.tok.pos)
                a = self.advance().text
                self.advance()
                return Naming(a, self.operand())
            left = self.term()
            self.expect("sym", "]")
            return NegApp(left, self.operand())
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)

    # -- types --

    def type_(self, allow_bottom=False):
        a = self.ntype(allow_bottom)
        if self.at("sym", "->"):
            self.advance()
            return Arrow(a, self.type_(allow_bottom))
        return a

    def ntype(self, allow_bottom):
        t = self.tok
        if t.kind == "sym" and t.text == "~":
            self.advance()
            return Neg(self.ntype(allow_bottom))
        if t.kind == "sym" and t.text == "(":
            self.advance()
            a = self.type_(allow_bottom)
            self.expect("sym", ")")
            return a
        if t.kind == "sym" and t.text == "#":
            if not allow_bottom:
                raise ParseError("bottom is a conclusion, not a type", t.pos)
            self.advance()
            return BOTTOM
        if t.kind in ("ident", "kw"):
            self.advance()
            return TyVar(t.text)
        raise ParseError(f"expected a type, got {t.text or 'end of input'!r}", t.pos)

    def conclusion(self, allow_bottom_inside=False):
        if self.at("sym", "#") and self.peek().kind == "eof":
            self.advance()
            return BOTTOM
        return self.type_(allow_bottom_inside)


def rename_apart(t):
    """Give every binder a distinct identifier that is also distinct from
    every free identifier."""
    used_v = set(free_vars(t))
    used_n = set(free_names(t))

    def go(t, vs, ns):
        if isinstance(t, Var):
            return Var(vs.get(t.name, t.name))
        if isinstance(t, VAR_BINDERS):
            x = t.var if t.var not in used_v else fresh_like(t.var, used_v)
            used_v.add(x)
            return type(t)(x, go(t.body, {**vs, t.var: x}, ns))
        if isinstance(t, Mu):
            a = t.name if t.name not in used_n else fresh_like(t.name, used_n)
            used_n.add(a)
            return Mu(a, go(t.body, vs, {**ns, t.name: a}))
        if isinstance(t, Naming):
            return Naming(ns.get(t.name, t.name), go(t.body, vs, ns))
        if isinstance(t, App):
            return App(go(t.fun, vs, ns), go(t.arg, vs, ns))
        return NegApp(go(t.left, vs, ns), go(t.right, vs, ns))

    return go(t, {}, {})


def parse_term(text: str, dialect: str = "l"):
    """Parse a term; dialect "l" (default) or "nlm". Binders come out renamed apart."""
    p = _Parser(text, dialect)
    t = p.term()
    p.done()
    return rename_apart(t)


def parse_type(text: str, allow_bottom: bool = False):
    p = _Parser(text)
    a = p.type_(allow_bottom)
    p.done()
    return a


def parse_conclusion(text: str, allow_bottom_inside: bool = False):
    p = _Parser(text)
    a = p.conclusion(allow_bottom_inside)
    p.done()
    return a


# -- printing --

_TOP, _FUN, _ARG = 0, 1, 2


def _pr(t, ctx) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, (Lam, Nu, Mu, NlmMu)):
        if isinstance(t, Lam):
            head = f"\\{t.var}."
        elif isinstance(t, Nu):
            head = f"nu {t.var}."
        elif isinstance(t, Mu):
            head = f"mu '{t.name}."
        else:
            head = f"mu {t.var}."
        s = head + _pr(t.body, _TOP)
        return s if ctx == _TOP else f"({s})"
    if isinstance(t, App):
        arg = _pr(t.arg, _ARG)
        s = _pr(t.fun, _FUN) + ("" if arg.startswith("(") else " ") + arg
        return f"({s})" if ctx == _ARG else s
    if isinstance(t, NegApp):
        right = _pr(t.right, _ARG)
        compact = isinstance(t.left, (Var, Naming, NegApp)) or right.startswith("(")
        return f"[{_pr(t.left, _TOP)}]{'' if compact else ' '}{right}"
    if isinstance(t, Naming):
        return f"['{t.name}]{_pr(t.body, _ARG)}"
    raise TypeError(f"not a term: {t!r}")


def print_term(t) -> str:
    return _pr(t, _TOP)


def print_type(a) -> str:
    if a is BOTTOM:
        return "#"
    if isinstance(a, TyVar):
        return a.name
    if isinstance(a, Neg):
        inner = print_type(a.body)
        return "~" + (f"({inner})" if isinstance(a.body, Arrow) else inner)
    left = print_type(a.dom)
    if isinstance(a.dom, Arrow):
        left = f"({left})"
    return f"{left} -> {print_type(a.cod)}"


print_conclusion = print_type
