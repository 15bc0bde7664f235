"""Full product of two structures with disjoint signatures.

The domain of ``full_product(G1, G2)`` is the set of pairs (a, b) flattened
row-major: pair (a, b) is element ``a * G2.size + b``.  A symbol of ``G1``
holds of a tuple of pairs iff it holds of the first coordinates in ``G1``,
whatever the second coordinates are; symbols of ``G2`` read second
coordinates.  Factors may have different domain sizes.
"""
from __future__ import annotations

import itertools
from typing import Iterable

from .errors import SignatureMismatchError
from .structures import Structure, is_isomorphic, reduct, substructure


def pair_index(a: int, b: int, right_size: int) -> int:
    return a * right_size + b


def index_pair(i: int, right_size: int) -> tuple[int, int]:
    return divmod(i, right_size)


def full_product(G1: Structure, G2: Structure) -> Structure:
    clash = set(G1.sig.names) & set(G2.sig.names)
    if clash:
        raise SignatureMismatchError(f"factors share symbols {sorted(clash)}")
    n1, n2 = G1.size, G2.size
    rels = {}
    for name, arity in G1.sig:
        rels[name] = [tuple(a * n2 + b for a, b in zip(t, bs))
                      for t in G1.rels[name] for bs in itertools.product(range(n2), repeat=arity)]
    for name, arity in G2.sig:
        rels[name] = [tuple(a * n2 + b for a, b in zip(as_, t))
                      for t in G2.rels[name] for as_ in itertools.product(range(n1), repeat=arity)]
    return Structure(G1.sig.union(G2.sig), n1 * n2, rels)


def diagonal(G1: Structure, G2: Structure) -> Structure:
    """Substructure of the product induced by the pairs (d, d); factors must have equal size."""
    if G1.size != G2.size:
        raise ValueError("the diagonal needs factors on the same domain")
    n = G1.size
    return substructure(full_product(G1, G2), [pair_index(d, d, n) for d in range(n)])[0]


def diagonal_check(G: Structure, sigma: Iterable[str], tau: Iterable[str]) -> bool:
    """Split ``G`` into its sigma- and tau-reducts and test whether the diagonal of their product is G."""
    sigma, tau = set(sigma), set(tau)
    if sigma & tau:
        raise SignatureMismatchError(f"sigma and tau overlap on {sorted(sigma & tau)}")
    if sigma | tau != set(G.sig.names):
        raise SignatureMismatchError("sigma and tau must together cover the signature")
    return is_isomorphic(diagonal(reduct(G, sigma), reduct(G, tau)), G)
