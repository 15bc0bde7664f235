"""Quantifier-free formulas in the two variables x, y over binary symbols.

Grammar (whitespace is insignificant, ``!`` binds tighter than ``&``, which
binds tighter than ``|``; binary connectives associate to the left)::

    formula := disj
    disj    := conj ("|" conj)*
    conj    := unary ("&" unary)*
    unary   := "!" unary | "(" formula ")" | atom
    atom    := NAME "(" var "," var ")" | var "=" var
    var     := "x" | "y"
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import ParseError, PreconditionError
from .structures import Signature, Structure


@dataclass(frozen=True)
class Atom:
    symbol: str
    left: str
    right: str


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Eq, Not, And, Or]

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z0-9_.<]+)|(?P<punct>[()!&|,=]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
        kind = "name" if m.group("name") else "punct"
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature | None):
        self.text = text
        self.sig = sig
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value: str | None = None, kind: str | None = None):
        tok = self.peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[0] != "end" else "end of input"
            raise ParseError(f"expected {want}, got {got}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.disj()
        self.take(kind="end")
        return f

    def disj(self):
        f = self.conj()
        while self.peek()[1] == "|":
            self.take("|")
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek()[1] == "&":
            self.take("&")
            f = And(f, self.unary())
        return f

    def unary(self):
        tok = self.peek()
        if tok[1] == "!":
            self.take("!")
            return Not(self.unary())
        if tok[1] == "(":
            self.take("(")
            f = self.disj()
            self.take(")")
            return f
        return self.atom()

    def var(self):
        tok = self.take(kind="name")
        if tok[1] not in ("x", "y"):
            raise ParseError(f"expected variable x or y, got {tok[1]!r}", self.text, tok[2])
        return tok[1]

    def atom(self):
        tok = self.take(kind="name")
        if self.peek()[1] == "=":
            if tok[1] not in ("x", "y"):
                raise ParseError(f"expected variable x or y, got {tok[1]!r}", self.text, tok[2])
            self.take("=")
            return Eq(tok[1], self.var())
        self.take("(")
        a = self.var()
        self.take(",")
        b = self.var()
        self.take(")")
        if self.sig is not None:
            if tok[1] not in self.sig:
                raise ParseError(f"unknown symbol {tok[1]!r}", self.text, tok[2])
            if self.sig.arity(tok[1]) != 2:
                raise ParseError(f"symbol {tok[1]!r} is not binary", self.text, tok[2])
        return Atom(tok[1], a, b)


def parse_formula(text: str, sig: Signature | None = None) -> Formula:
    """Parse ``text``; with ``sig`` given, atoms must name binary symbols of it."""
    return _Parser(text, sig).parse()


def render(f: Formula) -> str:
    """Inverse of :func:`parse_formula`, with minimal parentheses."""
    if isinstance(f, Atom):
        return f"{f.symbol}({f.left},{f.right})"
    if isinstance(f, Eq):
        return f"{f.left}={f.right}"
    if isinstance(f, Not):
        inner = render(f.arg)
        return "!" + (f"({inner})" if isinstance(f.arg, (And, Or)) else inner)
    if isinstance(f, And):
        left = render(f.left)
        if isinstance(f.left, Or):
            left = f"({left})"
        right = render(f.right)
        if isinstance(f.right, (And, Or)):
            right = f"({right})"
        return f"{left} & {right}"
    if isinstance(f, Or):
        right = render(f.right)
        if isinstance(f.right, Or):
            right = f"({right})"
        return f"{render(f.left)} | {right}"
    raise TypeError(f"not a formula: {f!r}")


def symbols(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.symbol}
    if isinstance(f, Eq):
        return set()
    if isinstance(f, Not):
        return symbols(f.arg)
    return symbols(f.left) | symbols(f.right)


def _check_symbols(f: Formula, sig: Signature):
    for s in symbols(f):
        if s not in sig or sig.arity(s) != 2:
            raise PreconditionError(f"formula uses {s!r}, which is not a binary symbol of the structure")


def _eval(f: Formula, S: Structure, env: dict[str, int]) -> bool:
    if isinstance(f, Atom):
        return (env[f.left], env[f.right]) in S.rels[f.symbol]
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Not):
        return not _eval(f.arg, S, env)
    if isinstance(f, And):
        return _eval(f.left, S, env) and _eval(f.right, S, env)
    return _eval(f.left, S, env) or _eval(f.right, S, env)


def evaluate(f: Formula, S: Structure, a: int, b: int) -> bool:
    """Truth of ``f`` in ``S`` with x := a and y := b."""
    for e in (a, b):
        if not 0 <= e < S.size:
            raise ValueError(f"element {e} is outside the domain of size {S.size}")
    _check_symbols(f, S.sig)
    return _eval(f, S, {"x": a, "y": b})


def defined_relation(S: Structure, f: Formula) -> set[tuple[int, int]]:
    _check_symbols(f, S.sig)
    return {(a, b) for a in S.domain for b in S.domain if _eval(f, S, {"x": a, "y": b})}


def expand_by_formula(S: Structure, f: Formula, name: str) -> Structure:
    """Expansion of ``S`` by a fresh binary symbol interpreted as the relation ``f`` defines."""
    if name in S.sig:
        raise PreconditionError(f"symbol {name!r} already occurs in the signature")
    rel = defined_relation(S, f)
    return S.with_relations(Signature(((name, 2),)), {name: rel})


def is_strict_linear_order(S: Structure, name: str) -> bool:
    """Irreflexive, transitive and total on the whole domain."""
    if name not in S.sig or S.sig.arity(name) != 2:
        raise PreconditionError(f"{name!r} is not a binary symbol of the structure")
    return is_linear_order_relation(S.rels[name], S.size)


def is_linear_order_relation(rel, n: int) -> bool:
    if any(a == b for a, b in rel):
        return False
    for a in range(n):
        for b in range(a + 1, n):
            if ((a, b) in rel) == ((b, a) in rel):
                return False
    # irreflexive + exactly one direction per pair: transitive iff no 3-cycle
    succ = [[b for b in range(n) if (a, b) in rel] for a in range(n)]
    return all((a, c) in rel for a in range(n) for b in succ[a] for c in succ[b])
