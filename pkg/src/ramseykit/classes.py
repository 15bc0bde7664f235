"""Hereditary classes of finite structures with decidable membership.

A class is described by a small immutable tree: built-in leaves (linear
orders, graphs, tournaments, K_n-free graphs, linearly extended posets),
``Wedge`` nodes (structures whose reducts lie in both parts) and ``Forget``
nodes (reducts of members after dropping some symbols).

Every class expressible this way is closed under induced substructures.  The
searches below rely on that: a partial assignment is abandoned as soon as the
part decided so far is not a member.
"""
from __future__ import annotations

import itertools
import random
import re
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .errors import ParseError, SignatureMismatchError
from .formula import is_linear_order_relation
from .structures import Signature, Structure, automorphisms, canonical_form, canonize

KINDS = ("LO", "Graph", "Tournament", "KnFree", "PosetLinExt")

DEFAULT_SYMBOLS = {
    "LO": ("<",),
    "Graph": ("E",),
    "Tournament": ("A",),
    "KnFree": ("E",),
    "PosetLinExt": ("prec", "lt"),
}


@dataclass(frozen=True)
class Builtin:
    kind: str
    symbols: tuple[str, ...] = ()
    n: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown class kind {self.kind!r}")
        if not self.symbols:
            object.__setattr__(self, "symbols", DEFAULT_SYMBOLS[self.kind])
        if len(self.symbols) != len(DEFAULT_SYMBOLS[self.kind]):
            raise ValueError(f"{self.kind} takes {len(DEFAULT_SYMBOLS[self.kind])} symbols")
        if self.kind == "KnFree":
            if self.n is None or self.n < 2:
                raise ValueError("KnFree needs n >= 2")
            if self.n == 2:
                warnings.warn("K2-free graphs are exactly the edgeless graphs", stacklevel=3)
        elif self.n is not None:
            raise ValueError(f"{self.kind} takes no parameter")

    @property
    def sig(self) -> Signature:
        return Signature(tuple((s, 2) for s in self.symbols))


@dataclass(frozen=True)
class Wedge:
    left: "ClassSpec"
    right: "ClassSpec"

    def __post_init__(self):
        clash = set(self.left.sig.names) & set(self.right.sig.names)
        if clash:
            raise SignatureMismatchError(
                f"wedge needs disjoint signatures; both sides use {sorted(clash)} (rename one side first)")

    @property
    def sig(self) -> Signature:
        return self.left.sig.union(self.right.sig)


@dataclass(frozen=True)
class Forget:
    inner: "ClassSpec"
    dropped: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "dropped", frozenset(self.dropped))
        unknown = self.dropped - set(self.inner.sig.names)
        if unknown:
            raise SignatureMismatchError(f"cannot forget unknown symbols {sorted(unknown)}")

    @property
    def sig(self) -> Signature:
        return self.inner.sig.restrict(set(self.inner.sig.names) - self.dropped)


ClassSpec = Union[Builtin, Wedge, Forget]

LO = Builtin("LO")
GRAPHS = Builtin("Graph")
TOURNAMENTS = Builtin("Tournament")
POSETS_LINEXT = Builtin("PosetLinExt")


def kn_free(n: int) -> Builtin:
    return Builtin("KnFree", n=n)


def wedge(c1: ClassSpec, c2: ClassSpec) -> Wedge:
    return Wedge(c1, c2)


def forget(c: ClassSpec, dropped) -> Forget:
    return Forget(c, frozenset(dropped))


def rename_symbols(c: ClassSpec, prefix: str) -> ClassSpec:
    """Prefix every symbol name with ``prefix + "."``."""
    if not prefix or not re.fullmatch(r"[A-Za-z0-9_.<]+", prefix):
        raise ValueError(f"invalid rename prefix {prefix!r}")
    if isinstance(c, Builtin):
        return Builtin(c.kind, tuple(f"{prefix}.{s}" for s in c.symbols), c.n)
    if isinstance(c, Wedge):
        return Wedge(rename_symbols(c.left, prefix), rename_symbols(c.right, prefix))
    return Forget(rename_symbols(c.inner, prefix), frozenset(f"{prefix}.{s}" for s in c.dropped))


def permutations_class() -> Wedge:
    """Two independent linear orders ``a.<`` and ``b.<``."""
    return wedge(rename_symbols(LO, "a"), rename_symbols(LO, "b"))


# -- membership -------------------------------------------------------------

def _is_graph(rel) -> bool:
    return all(a != b and (b, a) in rel for a, b in rel)


def _has_clique(rel, n: int, k: int) -> bool:
    adj = [set() for _ in range(n)]
    for a, b in rel:
        adj[a].add(b)

    def grow(clique_size, candidates):
        if clique_size == k:
            return True
        for i, v in enumerate(candidates):
            if grow(clique_size + 1, [w for w in candidates[i + 1:] if w in adj[v]]):
                return True
        return False

    return grow(0, list(range(n)))


def _builtin_member(c: Builtin, n: int, rels) -> bool:
    rs = [rels[s] for s in c.symbols]
    if c.kind == "LO":
        return is_linear_order_relation(rs[0], n)
    if c.kind == "Graph":
        return _is_graph(rs[0])
    if c.kind == "KnFree":
        return _is_graph(rs[0]) and not _has_clique(rs[0], n, c.n)
    if c.kind == "Tournament":
        r = rs[0]
        return all(a != b for a, b in r) and all(
            ((a, b) in r) != ((b, a) in r) for a in range(n) for b in range(a + 1, n))
    prec, lt = rs
    if any(a == b for a, b in prec) or not all(t in lt for t in prec):
        return False
    if any((a, c) not in prec for a, b in prec for b2, c in prec if b == b2):
        return False
    return is_linear_order_relation(lt, n)


def _member(c: ClassSpec, n: int, rels) -> bool:
    """Membership on raw data: ``rels`` maps (at least) the symbols of ``c`` to tuple sets."""
    if isinstance(c, Builtin):
        return _builtin_member(c, n, rels)
    if isinstance(c, Wedge):
        return _member(c.left, n, rels) and _member(c.right, n, rels)
    return _forget_search(c, n, rels) is not None


def membership(c: ClassSpec, S: Structure) -> bool:
    if S.sig != c.sig:
        raise SignatureMismatchError(
            f"structure signature {S.sig.render()!r} differs from class signature {c.sig.render()!r}")
    return _member(c, S.size, S.rels)


def _subsets(items):
    for mask in range(1 << len(items)):
        yield [t for i, t in enumerate(items) if mask >> i & 1]


def _forget_search(c: Forget, n: int, rels) -> dict | None:
    """First interpretation of the dropped symbols putting the expansion into ``c.inner``.

    Decides the dropped tuples element by element (tuples whose largest entry
    is u at step u) and checks the induced substructure on 0..u each time.
    """
    dropped = [(name, arity) for name, arity in c.inner.sig if name in c.dropped]
    kept = [name for name in c.inner.sig.names if name not in c.dropped]
    prefix = [{name: {t for t in rels[name] if max(t) <= u} for name in kept} for u in range(n)]
    extra: dict[str, set] = {name: set() for name, _ in dropped}

    def step(u: int) -> dict | None:
        if u == n:
            return {name: frozenset(ts) for name, ts in extra.items()}
        cands = [(name, t) for name, arity in dropped
                 for t in itertools.product(range(u + 1), repeat=arity) if u in t]
        for chosen in _subsets(cands):
            for name, t in chosen:
                extra[name].add(t)
            if _member(c.inner, u + 1, {**prefix[u], **extra}):
                found = step(u + 1)
                if found is not None:
                    return found
            for name, t in chosen:
                extra[name].discard(t)
        return None

    if n == 0:
        return extra if _member(c.inner, 0, {**{k: set() for k in kept}, **extra}) else None
    return step(0)


def forget_witness(c: Forget, S: Structure) -> Structure | None:
    """An expansion of ``S`` lying in ``c.inner`` (so witnessing ``S`` in ``c``), or None."""
    if S.sig != c.sig:
        raise SignatureMismatchError("structure signature differs from class signature")
    found = _forget_search(c, S.size, S.rels)
    if found is None:
        return None
    return S.with_relations(c.inner.sig.restrict(c.dropped), found)


# -- enumeration --------------------------------------------------------------

def _extensions(c: ClassSpec, sig: Signature, base_n: int, base_rels):
    """Raw relation dicts of members on base_n+1 points restricting to ``base_rels`` on 0..base_n-1."""
    v = base_n
    n = v + 1
    names = sig.names
    # stage 0: tuples made of v alone; stage u+1: tuples over {0..u, v} using both u and v
    stages = [[(name, (v,) * arity) for name, arity in sig]]
    for u in range(v):
        stage = []
        for name, arity in sig:
            for t in itertools.product(list(range(u + 1)) + [v], repeat=arity):
                if u in t and v in t:
                    stage.append((name, t))
        stages.append(stage)
    prefix = [{name: {t for t in base_rels[name] if max(t) < i} for name in names} for i in range(n)]
    new: dict[str, list] = {name: [] for name in names}

    def step(i: int):
        if i == len(stages):
            yield {name: frozenset(base_rels[name]) | frozenset(new[name]) for name in names}
            return
        for chosen in _subsets(stages[i]):
            for name, t in chosen:
                new[name].append(t)
            # induced substructure on {0..i-1, v}, with v renamed to i
            sub = {name: prefix[i][name] | {tuple(i if x == v else x for x in t) for t in new[name]}
                   for name in names}
            if _member(c, i + 1, sub):
                yield from step(i + 1)
            for name, t in chosen:
                new[name].pop()

    yield from step(0)


@lru_cache(maxsize=None)
def _labeled(c: ClassSpec, n: int) -> tuple[Structure, ...]:
    """Every member with domain 0..n-1 (not up to isomorphism)."""
    sig = c.sig
    if n == 0:
        empty = Structure(sig, 0)
        return (empty,) if _member(c, 0, empty.rels) else ()
    if isinstance(c, Wedge):
        return tuple(Structure._raw(sig, n, {**a.rels, **b.rels})
                     for a in _labeled(c.left, n) for b in _labeled(c.right, n))
    return tuple(Structure._raw(sig, n, rels)
                 for base in _labeled(c, n - 1) for rels in _extensions(c, sig, n - 1, base.rels))


def _orbit_minimal(S: Structure, perms) -> bool:
    key = tuple(sorted(S.rels[name]) for name in S.sig.names)
    for p in perms:
        other = tuple(sorted(tuple(p[x] for x in t) for t in S.rels[name]) for name in S.sig.names)
        if other < key:
            return False
    return True


def _iso_types(c: ClassSpec, n: int):
    """One structure per isomorphism type (arbitrary labelling)."""
    sig = c.sig
    if n == 0:
        yield from _labeled(c, 0)
        return
    if isinstance(c, Wedge):
        # fix a representative of the left part; right parts are then distinct
        # up to the automorphisms of that representative
        for a in _members(c.left, n):
            perms = [e.map for e in automorphisms(a) if e.map != tuple(range(n))]
            for b in _labeled(c.right, n):
                if _orbit_minimal(b, perms):
                    yield Structure._raw(sig, n, {**a.rels, **b.rels})
        return
    seen = set()
    for base in _members(c, n - 1):
        for rels in _extensions(c, sig, n - 1, base.rels):
            S = Structure._raw(sig, n, rels)
            code = canonical_form(S)
            if code not in seen:
                seen.add(code)
                yield S


@lru_cache(maxsize=None)
def _members(c: ClassSpec, n: int) -> tuple[Structure, ...]:
    found = {}
    for S in _iso_types(c, n):
        label, code = canonize(S)
        found[code] = S.relabel(label)
    return tuple(found[k] for k in sorted(found))


def enumerate_members(c: ClassSpec, n: int) -> list[Structure]:
    """One member of size ``n`` per isomorphism type, sorted by canonical form."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return list(_members(c, n))


def enumerate_labeled_members(c: ClassSpec, n: int) -> list[Structure]:
    """All members on the domain 0..n-1, isomorphic copies included."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return list(_labeled(c, n))


def random_member(c: ClassSpec, n: int, rng: random.Random) -> Structure:
    """A random member on 0..n-1 (not uniformly distributed)."""
    if isinstance(c, Wedge):
        a, b = random_member(c.left, n, rng), random_member(c.right, n, rng)
        return Structure._raw(c.sig, n, {**a.rels, **b.rels})
    if isinstance(c, Forget):
        inner = random_member(c.inner, n, rng)
        return Structure(c.sig, n, {name: inner.rels[name] for name in c.sig.names})
    perm = list(range(n))
    rng.shuffle(perm)
    order = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n)]
    if c.kind == "LO":
        rels = [order]
    elif c.kind == "Tournament":
        rels = [[(a, b) if rng.random() < 0.5 else (b, a) for a, b in order]]
    elif c.kind == "Graph":
        rels = [[t for a, b in order if rng.random() < 0.5 for t in ((a, b), (b, a))]]
    elif c.kind == "KnFree":
        edges: set = set()
        pairs = [p for p in order if rng.random() < 0.6]
        for a, b in pairs:
            edges |= {(a, b), (b, a)}
            if _has_clique(edges, n, c.n):
                edges -= {(a, b), (b, a)}
        rels = [edges]
    else:
        prec = {p for p in order if rng.random() < 0.4}
        changed = True
        while changed:
            extra = {(a, d) for a, b in prec for b2, d in prec if b == b2} - prec
            changed = bool(extra)
            prec |= extra
        rels = [prec, order]
    return Structure(c.sig, n, dict(zip(c.symbols, rels)))


# -- class-spec DSL -------------------------------------------------------------

_SPEC_TOKEN = re.compile(r'\s*(?:(?P<name>[A-Za-z0-9_.<]+)|(?P<string>"[^"]*")|(?P<punct>[(),{}]))')

_ATOMS = {
    "LO": lambda: LO,
    "G": lambda: GRAPHS,
    "Graph": lambda: GRAPHS,
    "T": lambda: TOURNAMENTS,
    "Tournament": lambda: TOURNAMENTS,
    "PLE": lambda: POSETS_LINEXT,
    "PosetLinExt": lambda: POSETS_LINEXT,
    "perm": permutations_class,
}


class _SpecParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while text[pos:].strip():
            m = _SPEC_TOKEN.match(text, pos)
            if not m:
                bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def take(self, value=None, kind=None):
        tok = self.tokens[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[0] != "end" else "end of input"
            raise ParseError(f"expected {want}, got {got}", self.text, tok[2])
        self.i += 1
        return tok

    def spec(self) -> ClassSpec:
        kind, word, pos = self.take(kind="name")
        try:
            if word in _ATOMS:
                return _ATOMS[word]()
            if word in ("F", "KnFree"):
                self.take("(")
                _, num, npos = self.take(kind="name")
                if not num.isdigit():
                    raise ParseError("expected an integer", self.text, npos)
                self.take(")")
                return kn_free(int(num))
            if word == "wedge":
                self.take("(")
                left = self.spec()
                self.take(",")
                right = self.spec()
                self.take(")")
                return wedge(left, right)
            if word == "rename":
                self.take("(")
                inner = self.spec()
                self.take(",")
                _, s, _ = self.take(kind="string")
                self.take(")")
                return rename_symbols(inner, s[1:-1])
            if word == "forget":
                self.take("(")
                inner = self.spec()
                self.take(",")
                self.take("{")
                names = [self.take(kind="name")[1]]
                while self.tokens[self.i][1] == ",":
                    self.take(",")
                    names.append(self.take(kind="name")[1])
                self.take("}")
                self.take(")")
                return forget(inner, names)
        except (ValueError, SignatureMismatchError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), self.text, pos) from None
        raise ParseError(f"unknown class {word!r}", self.text, pos)

    def parse(self) -> ClassSpec:
        c = self.spec()
        self.take(kind="end")
        return c


def parse_class_spec(text: str) -> ClassSpec:
    """Parse the class DSL: LO, G, T, F(n), PLE, perm, wedge(X,Y), rename(X,"p"), forget(X,{s,...})."""
    return _SpecParser(text).parse()


_SHORT = {"LO": "LO", "Graph": "G", "Tournament": "T", "PosetLinExt": "PLE"}


def render_class_spec(c: ClassSpec) -> str:
    if isinstance(c, Builtin):
        base = f"F({c.n})" if c.kind == "KnFree" else _SHORT[c.kind]
        defaults = DEFAULT_SYMBOLS[c.kind]
        if c.symbols == defaults:
            return base
        prefixes = {s[: -len(d) - 1] for s, d in zip(c.symbols, defaults)
                    if s.endswith("." + d) and len(s) > len(d) + 1}
        if len(prefixes) == 1 and all(s.endswith("." + d) for s, d in zip(c.symbols, defaults)):
            return f'rename({base},"{prefixes.pop()}")'
        raise ValueError(f"symbols {c.symbols} are not expressible in the DSL")
    if isinstance(c, Wedge):
        return f"wedge({render_class_spec(c.left)},{render_class_spec(c.right)})"
    return f"forget({render_class_spec(c.inner)},{{{','.join(sorted(c.dropped))}}})"
