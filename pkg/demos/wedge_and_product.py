"""
Combining classes and structures
================================

``wedge`` puts two classes on one domain with disjoint symbols.  The full
product puts two structures on pairs.  The diagonal of the product of a
structure's two reducts gives the structure back.
"""
import random

from ramseykit import automorphisms, full_product, is_isomorphic, linear_order, ordered_graph
from ramseykit.amalgamation import check_sap
from ramseykit.classes import (GRAPHS, LO, POSETS_LINEXT, enumerate_members, membership, random_member,
                               rename_symbols, wedge)
from ramseykit.product import diagonal, diagonal_check, index_pair
from ramseykit.structures import reduct

rng = random.Random(0)

# ordered graphs: any order together with any graph on the same points
ordered_graphs = wedge(LO, GRAPHS)
print("ordered graphs by size:", [len(enumerate_members(ordered_graphs, n)) for n in range(5)])

# both parts have strong amalgamation, and so does the wedge
two_posets = wedge(POSETS_LINEXT, rename_symbols(LO, "o"))
print(two_posets.sig, "->", check_sap(two_posets, 2).report())

# a product of two orders on 2 and 3 points
P = full_product(linear_order([1, 0], "a"), linear_order([0, 1, 2], "b"))
for i in range(P.size):
    above = [j for j in range(P.size) if P.holds("a", i, j)]
    print(f"{i} = {index_pair(i, 3)}: a-above it: {above}")

# orders on each factor leave the product rigid
print("automorphisms of the product:", len(automorphisms(P)))

# split a random ordered graph into its order and its edges, multiply, read the diagonal
G = random_member(ordered_graphs, 5, rng)
D = diagonal(reduct(G, {"<"}), reduct(G, {"E"}))
print("diagonal is the original:", D == G, is_isomorphic(D, G), diagonal_check(G, {"<"}, {"E"}))

# the empty split works too: one side is a bare set
print("empty sigma:", diagonal_check(ordered_graph(3, [(0, 1)]), set(), {"<", "E"}))
print("is the original a member?", membership(ordered_graphs, G))
