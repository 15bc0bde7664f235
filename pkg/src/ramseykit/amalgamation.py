"""Amalgamation diagrams, amalgams, and bounded checks of AP / SAP / JEP.

Amalgams are laid out on a fixed domain: the elements of ``B1`` keep their
numbers (``f1`` is the identity) and the elements of ``B2`` outside the glued
part follow in ascending order.  A completion search then decides the cross
tuples, i.e. those mentioning both a point only in the image of ``B1`` and a
point only in the image of ``B2``.  It proceeds in stages and abandons a
branch as soon as the part decided so far leaves the class; this is sound
because every class here is closed under induced substructures.

Searches never add points beyond ``|B1| + |B2| - |A|``; a failing diagram is
therefore reported as failing *within that size cap*.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .classes import ClassSpec, Wedge, _member, enumerate_members, membership
from .errors import AmalgamationError, PreconditionError, SignatureMismatchError
from .structures import (Embedding, Structure, automorphisms, canonical_labeling, embedding_maps,
                         has_injective_relations, is_homomorphism, reduct, substructure)


@dataclass(frozen=True)
class AmalgamationDiagram:
    A: Structure
    B1: Structure
    B2: Structure
    e1: Embedding
    e2: Embedding

    def __post_init__(self):
        if not (self.A.sig == self.B1.sig == self.B2.sig):
            raise SignatureMismatchError("diagram structures must share one signature")
        for e, B, name in ((self.e1, self.B1, "e1"), (self.e2, self.B2, "e2")):
            if e.source != self.A or e.target != B:
                raise ValueError(f"{name} has the wrong endpoints")
            if not e.is_valid():
                raise ValueError(f"{name} is not an embedding")

    @classmethod
    def from_maps(cls, A: Structure, B1: Structure, B2: Structure,
                  m1: Sequence[int], m2: Sequence[int]) -> "AmalgamationDiagram":
        return cls(A, B1, B2, Embedding(A, B1, tuple(m1)), Embedding(A, B2, tuple(m2)))


@dataclass(frozen=True)
class Amalgam:
    C: Structure
    f1: Embedding
    f2: Embedding
    strong: bool = field(default=False)


def is_amalgam(d: AmalgamationDiagram, am: Amalgam) -> bool:
    """Direct check of the amalgam conditions (f1, f2 embeddings agreeing on A)."""
    if not (am.f1.is_valid() and am.f2.is_valid()):
        return False
    return all(am.f1(d.e1(a)) == am.f2(d.e2(a)) for a in d.A.domain)


def is_strong_amalgam(d: AmalgamationDiagram, am: Amalgam) -> bool:
    glued = {am.f1(d.e1(a)) for a in d.A.domain}
    return is_amalgam(d, am) and am.f1.image() & am.f2.image() == glued


def _layout(d: AmalgamationDiagram, matching: dict[int, int]):
    """Domain size and the map f2; ``matching`` sends B2-only points to B1-only points."""
    f2 = [-1] * d.B2.size
    for a in d.A.domain:
        f2[d.e2(a)] = d.e1(a)
    nxt = d.B1.size
    for y in range(d.B2.size):
        if f2[y] == -1:
            if y in matching:
                f2[y] = matching[y]
            else:
                f2[y] = nxt
                nxt += 1
    return nxt, tuple(f2)


def _reduct_diagram(d: AmalgamationDiagram, names) -> AmalgamationDiagram:
    A, B1, B2 = (reduct(S, names) for S in (d.A, d.B1, d.B2))
    return AmalgamationDiagram.from_maps(A, B1, B2, d.e1.map, d.e2.map)


def _completions(C: ClassSpec, d: AmalgamationDiagram, matching: dict[int, int]) -> Iterator[Amalgam]:
    if isinstance(C, Wedge):
        # membership is a conjunction over disjoint symbol sets and every cross
        # tuple belongs to one side, so the two sides complete independently
        dl = _reduct_diagram(d, C.left.sig.names)
        dr = _reduct_diagram(d, C.right.sig.names)
        for left in _completions(C.left, dl, matching):
            for right in _completions(C.right, dr, matching):
                S = Structure._raw(d.A.sig, left.C.size, {**left.C.rels, **right.C.rels})
                yield Amalgam(S, Embedding(d.B1, S, left.f1.map), Embedding(d.B2, S, left.f2.map), left.strong)
        return
    n, f2 = _layout(d, matching)
    sig = d.A.sig
    names = sig.names
    base: dict[str, set] = {}
    img2 = set(f2)
    img1 = set(range(d.B1.size))
    shared = sorted(img1 & img2)
    for name in names:
        r1 = set(d.B1.rels[name])
        r2 = {tuple(f2[x] for x in t) for t in d.B2.rels[name]}
        # the two halves must agree where they overlap
        if {t for t in r1 if set(t) <= img2} != {t for t in r2 if set(t) <= img1}:
            return
        base[name] = r1 | r2
    left = sorted(img1 - img2)
    right = sorted(img2 - img1)

    stages = []
    for j, y in enumerate(right):
        for i, x in enumerate(left):
            elems = sorted(shared + left[: i + 1] + right[: j + 1])
            stage = []
            for name, arity in sig:
                for t in itertools.product(elems, repeat=arity):
                    if x in t and y in t:
                        stage.append((name, t))
            stages.append((elems, stage))
    if not stages:
        stages.append((list(range(n)), []))

    chosen: dict[str, list] = {name: [] for name in names}
    strong = not matching
    ident = Embedding(d.B1, d.B1, tuple(range(d.B1.size)))
    # fixed part of each stage's induced substructure, already renumbered
    indexes = [{x: i for i, x in enumerate(elems)} for elems, _ in stages]
    fixed = [{name: frozenset(tuple(ix[x] for x in t) for t in base[name] if all(x in ix for x in t))
              for name in names} for ix in indexes]

    def check(k: int) -> bool:
        ix = indexes[k]
        sub = {name: fixed[k][name].union(tuple(ix[x] for x in t) for t in chosen[name] if all(x in ix for x in t))
               for name in names}
        return _member(C, len(ix), sub)

    def step(k: int):
        if k == len(stages):
            rels = {name: frozenset(base[name]).union(chosen[name]) for name in names}
            S = Structure._raw(sig, n, rels)
            yield Amalgam(S, Embedding(d.B1, S, ident.map), Embedding(d.B2, S, f2), strong)
            return
        stage = stages[k][1]
        for mask in range(1 << len(stage)):
            picked = [stage[b] for b in range(len(stage)) if mask >> b & 1]
            for name, t in picked:
                chosen[name].append(t)
            if check(k):
                yield from step(k + 1)
            for name, t in picked:
                chosen[name].pop()

    yield from step(0)


def free_amalgam(d: AmalgamationDiagram) -> Amalgam:
    """Disjoint union of B1 and B2 over the glued copy of A, with no extra tuples."""
    n, f2 = _layout(d, {})
    rels = {name: set(d.B1.rels[name]) | {tuple(f2[x] for x in t) for t in d.B2.rels[name]}
            for name in d.A.sig.names}
    S = Structure(d.A.sig, n, rels)
    return Amalgam(S, Embedding(d.B1, S, tuple(range(d.B1.size))), Embedding(d.B2, S, f2), True)


def _require_class_sig(d: AmalgamationDiagram, C: ClassSpec):
    if d.A.sig != C.sig:
        raise SignatureMismatchError("diagram signature differs from class signature")


def find_strong_amalgams(d: AmalgamationDiagram, C: ClassSpec) -> list[Amalgam]:
    """All strong amalgams of ``d`` in ``C`` on |B1|+|B2|-|A| points.

    f1 and f2 are fixed by the layout and jointly cover the domain, so the
    only automorphism fixing both images is the identity: distinct completions
    are already pairwise inequivalent.
    """
    _require_class_sig(d, C)
    return list(_completions(C, d, {}))


def _matchings(left: list[int], right: list[int]) -> Iterator[dict[int, int]]:
    """Partial injections right -> left, the empty one first."""
    for k in range(min(len(left), len(right)) + 1):
        for ys in itertools.combinations(right, k):
            for xs in itertools.permutations(left, k):
                yield dict(zip(ys, xs))


def find_amalgam(d: AmalgamationDiagram, C: ClassSpec, strong: bool = False) -> Amalgam | None:
    """First amalgam of ``d`` in ``C`` (strong ones first), or None within the size cap."""
    _require_class_sig(d, C)
    if strong:
        return next(_completions(C, d, {}), None)
    img2 = {d.e2(a) for a in d.A.domain}
    img1 = {d.e1(a) for a in d.A.domain}
    b1_only = [x for x in range(d.B1.size) if x not in img1]
    b2_only = [y for y in range(d.B2.size) if y not in img2]
    for m in _matchings(b1_only, b2_only):
        found = next(_completions(C, d, m), None)
        if found is not None:
            return found
    return None


# -- bounded property checks ------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    prop: str
    bound: int
    ok: bool
    counterexample: AmalgamationDiagram | None = None
    diagrams_checked: int = 0

    def report(self) -> str:
        if self.ok:
            return f"{self.prop} verified up to size {self.bound}"
        d = self.counterexample
        cap = d.B1.size + d.B2.size - d.A.size
        return (f"{self.prop} counterexample within size cap {cap} "
                f"(|A|={d.A.size}, |B1|={d.B1.size}, |B2|={d.B2.size}; bound {self.bound})")

    def __bool__(self):
        return self.ok


def _orbit_key(m1, m2, aut_a, aut_b1, aut_b2):
    best = None
    for g in aut_a:
        for a1 in aut_b1:
            k1 = tuple(a1[m1[g[x]]] for x in range(len(g)))
            for a2 in aut_b2:
                key = (k1, tuple(a2[m2[g[x]]] for x in range(len(g))))
                if best is None or key < best:
                    best = key
    return best


def iter_diagrams(C: ClassSpec, k: int, empty_only: bool = False) -> Iterator[AmalgamationDiagram]:
    """Diagrams with |B1|, |B2| <= k over members of ``C``, one per orbit, in a fixed order.

    Two diagrams over the same (A, B1, B2) are identified when they differ by
    automorphisms of A, B1 and B2.
    """
    members = {s: enumerate_members(C, s) for s in range(k + 1)}
    auts = {S: [e.map for e in automorphisms(S)] for ms in members.values() for S in ms}
    for a_size in range(0, 1 if empty_only else k + 1):
        for A in members[a_size]:
            for s1 in range(a_size, k + 1):
                for i1, B1 in enumerate(members[s1]):
                    embs1 = embedding_maps(A, B1)
                    if not embs1:
                        continue
                    for s2 in range(s1, k + 1):
                        for i2, B2 in enumerate(members[s2]):
                            if s1 == s2 and i2 < i1:
                                continue
                            embs2 = embedding_maps(A, B2)
                            seen = set()
                            for m1 in embs1:
                                for m2 in embs2:
                                    key = _orbit_key(m1, m2, auts[A], auts[B1], auts[B2])
                                    if key in seen:
                                        continue
                                    seen.add(key)
                                    yield AmalgamationDiagram.from_maps(A, B1, B2, m1, m2)


def _restrict(S: Structure, names) -> Structure:
    return Structure._raw(S.sig.restrict(names), S.size, {n: S.rels[n] for n in names})


def _completable(C: ClassSpec, A: Structure, B1: Structure, B2: Structure,
                 m1: tuple, m2: tuple, matching: tuple) -> bool:
    if isinstance(C, Wedge):
        return all(_completable(side, *(_restrict(S, side.sig.names) for S in (A, B1, B2)), m1, m2, matching)
                   for side in (C.left, C.right))
    # relabelling B1 and B2 (and transporting the maps) does not change the answer
    l1, l2 = canonical_labeling(B1), canonical_labeling(B2)
    return _completable_canonical(
        C, A, B1.relabel(l1), B2.relabel(l2), tuple(l1[x] for x in m1), tuple(l2[x] for x in m2),
        tuple(sorted((l2[y], l1[x]) for y, x in matching)))


@lru_cache(maxsize=1 << 16)
def _completable_canonical(C, A, B1, B2, m1, m2, matching) -> bool:
    d = AmalgamationDiagram.from_maps(A, B1, B2, m1, m2)
    return next(_completions(C, d, dict(matching)), None) is not None


def has_amalgam(d: AmalgamationDiagram, C: ClassSpec, strong: bool = False) -> bool:
    """Whether :func:`find_amalgam` would succeed; cheaper, since wedge parts are decided separately."""
    _require_class_sig(d, C)
    key = (d.A, d.B1, d.B2, d.e1.map, d.e2.map)
    if strong:
        return _completable(C, *key, ())
    b1_only = [x for x in range(d.B1.size) if x not in d.e1.map]
    b2_only = [y for y in range(d.B2.size) if y not in d.e2.map]
    return any(_completable(C, *key, tuple(sorted(m.items()))) for m in _matchings(b1_only, b2_only))


def _diagram_ok(args) -> bool:
    C, d, strong = args
    return has_amalgam(d, C, strong=strong)


def _check(prop: str, C: ClassSpec, k: int, strong: bool, empty_only: bool, workers: int) -> CheckResult:
    if k < 1:
        raise ValueError("size bound must be >= 1")
    diagrams = list(iter_diagrams(C, k, empty_only))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(_diagram_ok, [(C, d, strong) for d in diagrams], chunksize=8))
    else:
        verdicts = (_diagram_ok((C, d, strong)) for d in diagrams)
    for count, (d, ok) in enumerate(zip(diagrams, verdicts), 1):
        if not ok:
            return CheckResult(prop, k, False, d, count)
    return CheckResult(prop, k, True, None, len(diagrams))


def check_sap(C: ClassSpec, k: int, workers: int = 1) -> CheckResult:
    """Strong amalgamation for every diagram with |B1|, |B2| <= k."""
    return _check("SAP", C, k, True, False, workers)


def check_ap(C: ClassSpec, k: int, workers: int = 1) -> CheckResult:
    """Amalgamation (points outside A may be identified) for |B1|, |B2| <= k."""
    return _check("AP", C, k, False, False, workers)


def check_jep(C: ClassSpec, k: int, workers: int = 1) -> CheckResult:
    """Joint embedding: amalgamation over the empty structure, |B1|, |B2| <= k."""
    return _check("JEP", C, k, False, True, workers)


# -- injective homomorphisms ---------------------------------------------------------

def injectivize(h: Sequence[int], F: Structure, M: Structure, C: ClassSpec) -> tuple[Structure, tuple[int, ...]]:
    """Turn a homomorphism ``h: F -> M`` into an injective one into a larger member of ``C``.

    While ``h`` identifies two points u < v (the lexicographically least such
    pair), let p = h(u).  Amalgamate two copies of the current target over the
    target minus p (first strong amalgam in deterministic order); the target
    sits inside the amalgam as the first copy, and u is re-mapped to the copy
    of p in the second.  Every related tuple of F contains at most one point
    sent to p, so the new map is still a homomorphism, and its range grows by one.

    Returns the final target and map; the original ``M`` is the substructure
    on its own element numbers.
    """
    h = tuple(h)
    if len(h) != F.size:
        raise PreconditionError(f"map has {len(h)} entries, F has {F.size} elements")
    for S, label in ((F, "F"), (M, "M")):
        if not has_injective_relations(S):
            raise PreconditionError(f"{label} has a relation tuple with a repeated entry; relations must be injective")
    if F.sig != M.sig or M.sig != C.sig:
        raise SignatureMismatchError("F, M and the class must share one signature")
    if not is_homomorphism(h, F, M):
        raise PreconditionError("the given map is not a homomorphism F -> M")
    if not membership(C, M):
        raise PreconditionError("M is not a member of the class")

    target = M
    while len(set(h)) < len(h):
        u, v = next((u, v) for u, v in itertools.combinations(range(len(h)), 2) if h[u] == h[v])
        p = h[u]
        A, inc = substructure(target, [x for x in target.domain if x != p])
        d = AmalgamationDiagram(A, target, target, inc, inc)
        am = find_amalgam(d, C, strong=True)
        if am is None:
            raise AmalgamationError(
                f"no strong amalgam in the class duplicating element {p} (size cap {target.size + 1})", d)
        target = am.C
        h = tuple(am.f2(p) if w == u else am.f1(h[w]) for w in range(len(h)))
    return target, h
