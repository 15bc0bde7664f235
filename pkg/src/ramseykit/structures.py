"""Finite relational structures on the domain {0, ..., n-1}.

A :class:`Structure` is immutable and hashable.  Embeddings are enumerated
by backtracking over partial injective maps, assigning source elements in
ascending order and trying target elements in ascending order, so the result
list is sorted lexicographically by image tuple.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import SignatureMismatchError, StructureFormatError

_NAME_RE = re.compile(r"^[A-Za-z0-9_.<]+$")

Tuple_ = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Signature:
    """Relation symbols with arities.

    Symbol order only matters for rendering; two signatures are equal when
    they contain the same (name, arity) pairs.
    """

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple((str(n), int(k)) for n, k in self.symbols))
        seen = set()
        for name, arity in self.symbols:
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid symbol name {name!r}")
            if arity < 1:
                raise ValueError(f"symbol {name!r} has arity {arity} < 1")
            if name in seen:
                raise ValueError(f"duplicate symbol name {name!r}")
            seen.add(name)

    @classmethod
    def of(cls, *pairs: tuple[str, int], **arities: int) -> "Signature":
        return cls(tuple(pairs) + tuple(arities.items()))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.symbols)

    def arity(self, name: str) -> int:
        for n, k in self.symbols:
            if n == name:
                return k
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(n == name for n, _ in self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return frozenset(self.symbols) == frozenset(other.symbols)

    def __hash__(self):
        return hash(frozenset(self.symbols))

    def sorted_symbols(self) -> tuple[tuple[str, int], ...]:
        return tuple(sorted(self.symbols))

    def restrict(self, keep: Iterable[str]) -> "Signature":
        keep = set(keep)
        return Signature(tuple(s for s in self.symbols if s[0] in keep))

    def union(self, other: "Signature") -> "Signature":
        clash = set(self.names) & set(other.names)
        if clash:
            raise SignatureMismatchError(f"signatures overlap on {sorted(clash)}")
        return Signature(self.symbols + other.symbols)

    def render(self) -> str:
        return ", ".join(f"{n}/{k}" for n, k in self.symbols)

    def __repr__(self):
        return f"Signature({self.render()!r})"


class Structure:
    """A finite relational structure over ``sig`` with domain ``range(size)``."""

    __slots__ = ("sig", "size", "rels", "_hash")

    def __init__(self, sig: Signature, size: int, rels: Mapping[str, Iterable[Sequence[int]]] | None = None):
        if size < 0:
            raise ValueError("size must be >= 0")
        rels = dict(rels or {})
        unknown = set(rels) - set(sig.names)
        if unknown:
            raise ValueError(f"relations given for unknown symbols {sorted(unknown)}")
        frozen = {}
        for name, arity in sig:
            tuples = frozenset(tuple(int(x) for x in t) for t in rels.get(name, ()))
            for t in tuples:
                if len(t) != arity:
                    raise ValueError(f"tuple {t} has wrong arity for {name}/{arity}")
                if any(x < 0 or x >= size for x in t):
                    raise ValueError(f"tuple {t} of {name} leaves the domain of size {size}")
            frozen[name] = tuples
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "size", int(size))
        object.__setattr__(self, "rels", frozen)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, sig: Signature, size: int, rels: dict) -> "Structure":
        # trusted constructor: rels must map every symbol to a frozenset of valid tuples
        self = object.__new__(cls)
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "rels", rels)
        object.__setattr__(self, "_hash", None)
        return self

    def __setattr__(self, key, value):
        raise AttributeError("Structure is immutable")

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return self.size == other.size and self.sig == other.sig and self.rels == other.rels

    def __hash__(self):
        if self._hash is None:
            h = hash((self.sig, self.size, frozenset(self.rels.items())))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{n}={sorted(self.rels[n])}" for n in self.sig.names)
        return f"Structure(size={self.size}, {body})"

    def __reduce__(self):
        return (Structure, (self.sig, self.size, {k: tuple(v) for k, v in self.rels.items()}))

    @property
    def domain(self) -> range:
        return range(self.size)

    def holds(self, name: str, *elems: int) -> bool:
        return tuple(elems) in self.rels[name]

    def relabel(self, perm: Sequence[int]) -> "Structure":
        """Return the isomorphic copy in which element ``x`` becomes ``perm[x]``."""
        if sorted(perm) != list(range(self.size)):
            raise ValueError("relabelling must be a permutation of the domain")
        return Structure._raw(self.sig, self.size, {
            n: frozenset(tuple(perm[x] for x in t) for t in ts) for n, ts in self.rels.items()})

    def with_relations(self, sig: Signature, extra: Mapping[str, Iterable[Sequence[int]]]) -> "Structure":
        """Expansion by new symbols (``sig`` must be disjoint from ours)."""
        rels = {n: self.rels[n] for n in self.sig.names}
        rels.update(extra)
        return Structure(self.sig.union(sig), self.size, rels)


@dataclass(frozen=True)
class Embedding:
    source: Structure
    target: Structure
    map: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.map[x]

    def image(self) -> frozenset[int]:
        return frozenset(self.map)

    def compose(self, after: "Embedding") -> "Embedding":
        """``after ∘ self``."""
        return Embedding(self.source, after.target, tuple(after.map[x] for x in self.map))

    def is_valid(self) -> bool:
        return is_embedding(self.map, self.source, self.target)


def _require_same_sig(a: Structure, b: Structure):
    if a.sig != b.sig:
        raise SignatureMismatchError(f"signature mismatch: {a.sig.render()!r} vs {b.sig.render()!r}")


@lru_cache(maxsize=None)
def _tuples_ending_at(i: int, arity: int) -> tuple[Tuple_, ...]:
    """All tuples over range(i+1) that mention i."""
    return tuple(t for t in itertools.product(range(i + 1), repeat=arity) if i in t)


def _iter_embedding_maps(A: Structure, C: Structure) -> Iterator[tuple[int, ...]]:
    n, m = A.size, C.size
    if n > m:
        return
    symbols = [(A.rels[name], C.rels[name], arity) for name, arity in A.sig]
    assign: list[int] = [0] * n
    used = [False] * m

    def consistent(i: int) -> bool:
        for ra, rc, arity in symbols:
            for t in _tuples_ending_at(i, arity):
                if (t in ra) != (tuple(assign[x] for x in t) in rc):
                    return False
        return True

    def extend(i: int):
        if i == n:
            yield tuple(assign)
            return
        for c in range(m):
            if used[c]:
                continue
            assign[i] = c
            if consistent(i):
                used[c] = True
                yield from extend(i + 1)
                used[c] = False

    yield from extend(0)


def enumerate_embeddings(A: Structure, C: Structure) -> list[Embedding]:
    """All embeddings of ``A`` into ``C``, ordered lexicographically by image tuple."""
    _require_same_sig(A, C)
    return [Embedding(A, C, m) for m in _iter_embedding_maps(A, C)]


def embedding_maps(A: Structure, C: Structure) -> list[tuple[int, ...]]:
    """Like :func:`enumerate_embeddings` but returns bare image tuples."""
    _require_same_sig(A, C)
    return list(_iter_embedding_maps(A, C))


def embeds(A: Structure, C: Structure) -> bool:
    _require_same_sig(A, C)
    return next(_iter_embedding_maps(A, C), None) is not None


def automorphisms(A: Structure) -> list[Embedding]:
    return enumerate_embeddings(A, A)


def is_embedding(f: Sequence[int], A: Structure, C: Structure) -> bool:
    """Direct check: ``f`` injective and relation-reflecting in both directions."""
    _require_same_sig(A, C)
    if len(f) != A.size or len(set(f)) != len(f) or any(not 0 <= y < C.size for y in f):
        return False
    for name, arity in A.sig:
        ra, rc = A.rels[name], C.rels[name]
        for t in itertools.product(range(A.size), repeat=arity):
            if (t in ra) != (tuple(f[x] for x in t) in rc):
                return False
    return True


def is_homomorphism(f: Sequence[int], F: Structure, G: Structure) -> bool:
    """True iff every related tuple of ``F`` is mapped to a related tuple of ``G``."""
    _require_same_sig(F, G)
    if len(f) != F.size:
        raise ValueError(f"map has {len(f)} entries, source has {F.size} elements")
    if any(not 0 <= y < G.size for y in f):
        return False
    return all(tuple(f[x] for x in t) in G.rels[name] for name, ts in F.rels.items() for t in ts)


def reduct(A: Structure, keep: Iterable[str]) -> Structure:
    keep = set(keep)
    unknown = keep - set(A.sig.names)
    if unknown:
        raise KeyError(f"unknown symbols {sorted(unknown)}")
    sig = A.sig.restrict(keep)
    return Structure(sig, A.size, {n: A.rels[n] for n in sig.names})


def substructure(A: Structure, S: Iterable[int]) -> tuple[Structure, Embedding]:
    """Induced substructure on ``S``, relabelled to 0..|S|-1 in numeric order, and its inclusion."""
    elems = sorted(set(S))
    for x in elems:
        if not 0 <= x < A.size:
            raise ValueError(f"element {x} is outside the domain of size {A.size}")
    index = {x: i for i, x in enumerate(elems)}
    rels = {n: [tuple(index[x] for x in t) for t in ts if all(x in index for x in t)]
            for n, ts in A.rels.items()}
    sub = Structure(A.sig, len(elems), rels)
    return sub, Embedding(sub, A, tuple(elems))


def induced(A: Structure, S: Iterable[int]) -> Structure:
    return substructure(A, S)[0]


# -- canonical forms -------------------------------------------------------

@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Byte code determined by the isomorphism type; ordered bytewise."""

    code: bytes

    def hex(self) -> str:
        return self.code.hex()


def _incidence(A: Structure, order: Sequence[tuple[str, int]]):
    inc: list[list[tuple[tuple[int, tuple[int, ...]], Tuple_]]] = [[] for _ in range(A.size)]
    for r, (name, _) in enumerate(order):
        for t in A.rels[name]:
            for x in set(t):
                pos = tuple(i for i, y in enumerate(t) if y == x)
                inc[x].append(((r, pos), t))
    return inc


def _refine(colors: list[int], inc) -> list[int]:
    n = len(colors)
    ranks = {c: i for i, c in enumerate(sorted(set(colors)))}
    colors = [ranks[c] for c in colors]
    ncolors = len(ranks)
    while ncolors < n:
        get = colors.__getitem__
        sigs = [(c, tuple(sorted([(k, tuple(map(get, t))) for k, t in inc[x]])))
                for x, c in enumerate(colors)]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [ranks[s] for s in sigs]
        if len(ranks) == ncolors:
            break
        ncolors = len(ranks)
    return colors


def _leaf_code(A: Structure, order, label: Sequence[int]):
    return tuple(tuple(sorted(tuple(label[x] for x in t) for t in A.rels[name])) for name, _ in order)


def _encode(A: Structure, order, best) -> bytes:
    parts = [f"n={A.size};"]
    for (name, arity), ts in zip(order, best):
        parts.append(f"{name}/{arity}:")
        parts.append(";".join(",".join(map(str, t)) for t in ts))
        parts.append("|")
    return "".join(parts).encode()


def _swap_is_automorphism(A: Structure, v: int, w: int) -> bool:
    sw = {v: w, w: v}
    for ts in A.rels.values():
        for t in ts:
            if (v in t or w in t) and tuple(sw.get(x, x) for x in t) not in ts:
                return False
    return True


def _twin_representatives(A: Structure, cell: Sequence[int]) -> list[int]:
    # transposition twins give isomorphic subtrees; one branch per twin class suffices
    reps: list[int] = []
    for v in cell:
        if not any(_swap_is_automorphism(A, r, v) for r in reps):
            reps.append(v)
    return reps


def canonical_labeling(A: Structure) -> tuple[int, ...]:
    """A relabelling ``perm`` such that ``A.relabel(perm)`` is the canonical representative.

    Individualisation-refinement: colour refinement to an equitable ordered
    partition, then branch on the vertices of the first non-singleton cell
    (one per class of transposition twins).  The search tree is isomorphism-invariant, and the minimal leaf code is taken,
    so the result is exact.
    """
    order = A.sig.sorted_symbols()
    inc = _incidence(A, order)
    best_code = None
    best_label: tuple[int, ...] = tuple(range(A.size))

    def search(colors):
        nonlocal best_code, best_label
        colors = _refine(colors, inc)
        cells: dict[int, list[int]] = {}
        for x, c in enumerate(colors):
            cells.setdefault(c, []).append(x)
        target = next((cells[c] for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            code = _leaf_code(A, order, colors)
            if best_code is None or code < best_code:
                best_code, best_label = code, tuple(colors)
            return
        for v in _twin_representatives(A, target):
            search([2 * c + (0 if y == v else 1) for y, c in enumerate(colors)])

    if A.size:
        search([0] * A.size)
    return best_label


def canonical_form(A: Structure) -> CanonicalForm:
    return canonize(A)[1]


def canonize(A: Structure) -> tuple[tuple[int, ...], CanonicalForm]:
    """Canonical labelling together with the resulting canonical form."""
    order = A.sig.sorted_symbols()
    label = canonical_labeling(A)
    return label, CanonicalForm(_encode(A, order, _leaf_code(A, order, label)))


def canonical_representative(A: Structure) -> Structure:
    return A.relabel(canonical_labeling(A))


def is_isomorphic(A: Structure, B: Structure) -> bool:
    if A.sig != B.sig or A.size != B.size:
        return False
    if any(len(A.rels[n]) != len(B.rels[n]) for n in A.sig.names):
        return False
    return canonical_form(A) == canonical_form(B)


# -- text format -----------------------------------------------------------

def render_structure(A: Structure) -> str:
    lines = [f"signature: {A.sig.render()}", f"size: {A.size}"]
    for name in A.sig.names:
        ts = sorted(A.rels[name])
        lines.append(f"{name}: " + "; ".join(" ".join(map(str, t)) for t in ts) if ts else f"{name}:")
    return "\n".join(lines) + "\n"


def parse_signature(text: str) -> Signature:
    text = text.strip()
    if not text:
        return Signature(())
    pairs = []
    for item in text.split(","):
        item = item.strip()
        name, sep, arity = item.rpartition("/")
        if not sep or not name or not arity.strip().isdigit():
            raise StructureFormatError(f"bad signature entry {item!r} (expected NAME/ARITY)")
        pairs.append((name.strip(), int(arity)))
    try:
        return Signature(tuple(pairs))
    except ValueError as exc:
        raise StructureFormatError(str(exc)) from None


def parse_structure(text: str, source: str = "<string>") -> Structure:
    """Parse the line-based structure format (see :func:`render_structure`)."""
    sig = None
    size = None
    rels: dict[str, set[Tuple_]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{source}:{lineno}"
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise StructureFormatError(f"{where}: expected 'KEY: ...', got {line!r}")
        if sig is None:
            if key != "signature":
                raise StructureFormatError(f"{where}: first line must be 'signature: ...'")
            try:
                sig = parse_signature(rest)
            except StructureFormatError as exc:
                raise StructureFormatError(f"{where}: {exc}") from None
            continue
        if size is None:
            if key != "size" or not rest.strip().isdigit():
                raise StructureFormatError(f"{where}: expected 'size: N'")
            size = int(rest)
            continue
        if key not in sig:
            raise StructureFormatError(f"{where}: unknown symbol {key!r}")
        if key in rels:
            raise StructureFormatError(f"{where}: relation {key!r} given twice")
        arity = sig.arity(key)
        tuples: set[Tuple_] = set()
        for chunk in rest.split(";"):
            chunk = chunk.strip()
            if not chunk:
                if rest.strip():
                    raise StructureFormatError(f"{where}: empty tuple in {key!r}")
                continue
            try:
                t = tuple(int(x) for x in chunk.split())
            except ValueError:
                raise StructureFormatError(f"{where}: non-integer entry in {chunk!r}") from None
            if len(t) != arity:
                raise StructureFormatError(f"{where}: tuple {chunk!r} has arity {len(t)}, {key} has {arity}")
            if any(not 0 <= x < size for x in t):
                raise StructureFormatError(f"{where}: tuple {chunk!r} leaves the domain 0..{size - 1}")
            if t in tuples:
                raise StructureFormatError(f"{where}: duplicate tuple {chunk!r} in {key!r}")
            tuples.add(t)
        rels[key] = tuples
    if sig is None or size is None:
        raise StructureFormatError(f"{source}: missing signature or size line")
    return Structure(sig, size, rels)


def parse_structures(text: str, source: str = "<string>") -> list[Structure]:
    """Parse several structures separated by lines consisting of ``---``."""
    chunks, cur = [], []
    for line in text.splitlines():
        if line.strip() == "---":
            chunks.append("\n".join(cur))
            cur = []
        else:
            cur.append(line)
    chunks.append("\n".join(cur))
    return [parse_structure(c, source) for c in chunks if any(
        ln.strip() and not ln.strip().startswith("#") for ln in c.splitlines())]


# -- small builders ----------------------------------------------------------

LO_SIG = Signature((("<", 2),))
GRAPH_SIG = Signature((("E", 2),))


def chain(n: int, symbol: str = "<") -> Structure:
    """The n-element chain 0 < 1 < ... < n-1."""
    return Structure(Signature(((symbol, 2),)), n, {symbol: itertools.combinations(range(n), 2)})


def linear_order(perm: Sequence[int], symbol: str = "<") -> Structure:
    """Linear order listing elements from smallest to largest as ``perm``."""
    pos = {x: i for i, x in enumerate(perm)}
    n = len(perm)
    return Structure(Signature(((symbol, 2),)), n,
                     {symbol: [(a, b) for a in range(n) for b in range(n) if pos[a] < pos[b]]})


def graph(n: int, edges: Iterable[tuple[int, int]], symbol: str = "E") -> Structure:
    sym = set()
    for a, b in edges:
        sym.add((a, b))
        sym.add((b, a))
    return Structure(Signature(((symbol, 2),)), n, {symbol: sym})


def complete_graph(n: int, symbol: str = "E") -> Structure:
    return graph(n, itertools.combinations(range(n), 2), symbol)


def empty_structure(sig: Signature, n: int = 0) -> Structure:
    return Structure(sig, n, {})


def combine(*parts: Structure) -> Structure:
    """Common expansion of structures on the same domain with disjoint signatures."""
    size = parts[0].size
    if any(p.size != size for p in parts):
        raise ValueError("parts have different domain sizes")
    sig = parts[0].sig
    rels = dict(parts[0].rels)
    for p in parts[1:]:
        sig = sig.union(p.sig)
        rels.update(p.rels)
    return Structure(sig, size, rels)


def ordered_graph(n: int, edges: Iterable[tuple[int, int]]) -> Structure:
    """Graph on 0..n-1 with the natural order under ``<``."""
    return combine(chain(n), graph(n, edges))


def has_injective_relations(A: Structure) -> bool:
    return all(len(set(t)) == len(t) for ts in A.rels.values() for t in ts)
