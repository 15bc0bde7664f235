"""
Making homomorphisms injective, and moving arrows across an expansion
=====================================================================

A homomorphism may squash points together.  If the class has strong
amalgamation, duplicating the squashed point inside a bigger member
pulls them apart again.

Separately: expanding every structure by an order defined from its own
relations changes nothing about which maps are embeddings, so the arrow
verdict cannot change either.
"""
from ramseykit import (chain, graph, is_homomorphism, parse_formula, parse_structure, render_structure,
                       transfer_check)
from ramseykit.amalgamation import injectivize
from ramseykit.classes import GRAPHS, LO, enumerate_members, permutations_class

# a path 0-1-2 mapped onto a single edge, folding the ends together
path = graph(3, [(0, 1), (1, 2)])
edge = graph(2, [(0, 1)])
h = (0, 1, 0)
print("folded map is a homomorphism:", is_homomorphism(h, path, edge))

M, h2 = injectivize(h, path, edge, GRAPHS)
print("new map:", h2)
print(render_structure(M))

# in a chain, two incomparable points can be sent to one point
two_points = parse_structure("signature: </2\nsize: 2\n<:\n")
M, h2 = injectivize((0, 0), two_points, chain(1), LO)
print("LO target grows to", M.size, "points, map", h2)

# the order of a chain, redefined from itself, or reversed
for phi in ("<(x,y)", "<(y,x)"):
    rep = transfer_check(chain(2), chain(3), chain(6), parse_formula(phi), "o", 2)
    print(f"{phi:>8}: plain {rep.plain.verdict}, expanded {rep.expanded.verdict}, same embeddings {rep.ok}")

# permutations carry two orders; define the new one from the first
perms = permutations_class()
A = enumerate_members(perms, 2)[0]
for B in enumerate_members(perms, 3):
    C = enumerate_members(perms, 4)[-1]
    rep = transfer_check(A, B, C, parse_formula("a.<(x,y)"), "o", 2)
    print("perm B", sorted(B.rels["b.<"]), "->", rep.plain.verdict, "/", rep.expanded.verdict)
