"""Partition arrows C -> (B)^A_r over embeddings.

Colour the embeddings of A into C.  Each embedding f of B into C gives the
set S_f = {f∘e : e an embedding of A into B}.  The arrow holds iff every
r-colouring is constant on some S_f.  We decide it by searching for a bad
colouring, one under which no S_f is constant.  That is a not-all-equal
hypergraph colouring with hyperedges S_f.

Empty and singleton sets S_f are constant under every colouring.  So the arrow
holds as soon as some copy of B has at most one copy of A, and fails outright
(every colouring is bad) when B does not embed into C.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .classes import ClassSpec, enumerate_members, membership
from .errors import PreconditionError, SignatureMismatchError
from .formula import Formula, expand_by_formula, is_strict_linear_order
from .structures import Embedding, Structure, embedding_maps


@dataclass(frozen=True)
class ArrowInstance:
    A: Structure
    B: Structure
    C: Structure
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("number of colours must be >= 1")
        if not (self.A.sig == self.B.sig == self.C.sig):
            raise SignatureMismatchError("A, B and C must share one signature")


@dataclass(frozen=True)
class ArrowCertificate:
    holds: bool
    coloring: tuple[int, ...] | None = None
    exhausted: bool = False

    @property
    def verdict(self) -> str:
        return "ARROW" if self.holds else "NOT-ARROW"


@dataclass(frozen=True)
class _Copies:
    a_into_c: list[tuple[int, ...]]
    b_into_c: list[tuple[int, ...]]
    sets: list[tuple[int, ...]]


def _copies(inst: ArrowInstance) -> _Copies:
    ac = embedding_maps(inst.A, inst.C)
    bc = embedding_maps(inst.B, inst.C)
    ab = embedding_maps(inst.A, inst.B)
    index = {m: i for i, m in enumerate(ac)}
    sets = [tuple(sorted({index[tuple(f[x] for x in e)] for e in ab})) for f in bc]
    return _Copies(ac, bc, sets)


def _bad_coloring(n: int, edges: list[tuple[int, ...]], r: int, static: bool) -> tuple[int, ...] | None:
    """An r-colouring of range(n) leaving no edge monochromatic, or None.

    Only colours up to one above the largest used so far are tried, which
    removes colour-permutation symmetry.  ``static`` assigns variables in index
    order, so the first solution is the lexicographically least one; otherwise
    the next variable comes from the edge with the fewest unassigned entries
    that is not yet two-coloured.
    """
    color = [-1] * n
    var_edges: list[list[int]] = [[] for _ in range(n)]
    for k, e in enumerate(edges):
        for v in e:
            var_edges[v].append(k)
    size = [len(e) for e in edges]
    unassigned = list(size)
    cnt = [[0] * r for _ in edges]
    distinct = [0] * len(edges)
    order = list(range(n))

    def pick(pos: int):
        if static:
            return order[pos] if pos < n else None
        best = None
        for k, e in enumerate(edges):
            if distinct[k] < 2 and unassigned[k] and (best is None or unassigned[k] < unassigned[best]):
                best = k
        if best is None:
            return None
        return next(v for v in edges[best] if color[v] < 0)

    def allowed(v: int, c: int) -> bool:
        return not any(unassigned[k] == 1 and cnt[k][c] == size[k] - 1 for k in var_edges[v])

    def search(pos: int, maxused: int) -> bool:
        v = pick(pos)
        if v is None:
            return True
        for c in range(min(r, maxused + 2)):
            if not allowed(v, c):
                continue
            color[v] = c
            for k in var_edges[v]:
                unassigned[k] -= 1
                if cnt[k][c] == 0:
                    distinct[k] += 1
                cnt[k][c] += 1
            if search(pos + 1, max(maxused, c)):
                return True
            for k in var_edges[v]:
                unassigned[k] += 1
                cnt[k][c] -= 1
                if cnt[k][c] == 0:
                    distinct[k] -= 1
            color[v] = -1
        return False

    if not search(0, -1):
        return None
    return tuple(max(c, 0) for c in color)


def check_arrow(inst: ArrowInstance, canonical_certificate: bool = False) -> ArrowCertificate:
    """Decide C -> (B)^A_r; a failing verdict carries a bad colouring of Emb(A, C).

    The colouring is indexed like ``enumerate_embeddings(A, C)``.  With
    ``canonical_certificate`` the lexicographically least bad colouring is returned.
    """
    cp = _copies(inst)
    n = len(cp.a_into_c)
    if not cp.b_into_c:
        return ArrowCertificate(False, (0,) * n)
    if any(len(s) <= 1 for s in cp.sets):
        return ArrowCertificate(True)
    edges = sorted(set(cp.sets))
    bad = _bad_coloring(n, edges, inst.r, static=canonical_certificate)
    if bad is None:
        return ArrowCertificate(True, None, exhausted=True)
    return ArrowCertificate(False, bad)


def _check_coloring(inst: ArrowInstance, chi: Sequence[int], n: int):
    if len(chi) != n:
        raise ValueError(f"colouring has {len(chi)} entries, there are {n} embeddings of A into C")
    if any(not (isinstance(c, int) and 0 <= c < inst.r) for c in chi):
        raise ValueError(f"colours must be integers in 0..{inst.r - 1}")


def find_mono_copy(inst: ArrowInstance, chi: Sequence[int]) -> Embedding | None:
    """First embedding of B (in enumeration order) on whose copies of A ``chi`` is constant."""
    cp = _copies(inst)
    _check_coloring(inst, chi, len(cp.a_into_c))
    for f, s in zip(cp.b_into_c, cp.sets):
        if len({chi[i] for i in s}) <= 1:
            return Embedding(inst.B, inst.C, f)
    return None


def validate_certificate(inst: ArrowInstance, cert: ArrowCertificate) -> bool:
    """Re-check a failing certificate by scanning every copy of B directly."""
    if cert.holds or cert.coloring is None:
        return False
    try:
        return find_mono_copy(inst, cert.coloring) is None
    except ValueError:
        return False


def search_witness(C: ClassSpec, A: Structure, B: Structure, r: int, max_size: int) -> Structure | None:
    """First member of ``C`` (by size, then canonical order) that arrows B from A with r colours."""
    if not membership(C, A) or not membership(C, B):
        raise PreconditionError("A and B must be members of the class")
    if max_size < B.size:
        raise ValueError("max_size must be at least |B|")
    for n in range(B.size, max_size + 1):
        for S in enumerate_members(C, n):
            if check_arrow(ArrowInstance(A, B, S, r)).holds:
                return S
    return None


@dataclass(frozen=True)
class TransferReport:
    plain: ArrowCertificate
    expanded: ArrowCertificate
    a_embeddings_equal: bool
    b_embeddings_equal: bool

    @property
    def agree(self) -> bool:
        return self.plain.holds == self.expanded.holds

    @property
    def ok(self) -> bool:
        return self.agree and self.a_embeddings_equal and self.b_embeddings_equal


def transfer_check(A: Structure, B: Structure, C: Structure, phi: Formula, name: str, r: int) -> TransferReport:
    """Compare the arrow before and after expanding A, B, C by the order ``phi`` defines.

    Embeddings preserve quantifier-free formulas, so the embeddings of A into C
    are exactly those of the expansions, and the two verdicts must coincide.
    """
    expanded = []
    for S, label in ((A, "A"), (B, "B"), (C, "C")):
        X = expand_by_formula(S, phi, name)
        if not is_strict_linear_order(X, name):
            raise PreconditionError(f"the formula does not define a strict linear order on {label}")
        expanded.append(X)
    A2, B2, C2 = expanded
    plain = check_arrow(ArrowInstance(A, B, C, r))
    exp = check_arrow(ArrowInstance(A2, B2, C2, r))
    return TransferReport(
        plain, exp,
        set(embedding_maps(A, C)) == set(embedding_maps(A2, C2)),
        set(embedding_maps(B, C)) == set(embedding_maps(B2, C2)),
    )
