"""
Gluing structures: amalgams and bounded checks
==============================================

Two chains share a point.  Where does the rest of each go?  The strong
amalgams answer that, and bounded checks run the question over every
small diagram of a class.
"""
from ramseykit import AmalgamationDiagram, chain, complete_graph, graph, render_structure
from ramseykit.amalgamation import check_ap, check_jep, check_sap, find_strong_amalgams, free_amalgam
from ramseykit.classes import GRAPHS, LO, POSETS_LINEXT, TOURNAMENTS, kn_free, permutations_class

# A is one point, sitting at the bottom of a 2-chain on both sides
d = AmalgamationDiagram.from_maps(chain(1), chain(2), chain(2), (0,), (0,))
for am in find_strong_amalgams(d, LO):
    print("order on the glued 3 points:", sorted(am.C.rels["<"]), "| B2 lands at", am.f2.map)

# the free amalgam adds nothing across, so it only works for classes without totality
edge = complete_graph(2)
d = AmalgamationDiagram.from_maps(graph(1, []), edge, edge, (0,), (0,))
print(render_structure(free_amalgam(d).C))

# two edges through a shared point: an edge between the far ends is the only way to
# make a triangle, so triangle-free graphs keep one completion and graphs keep two
print("graph completions:", len(find_strong_amalgams(d, GRAPHS)))
print("triangle-free completions:", len(find_strong_amalgams(d, kn_free(3))))

# bounded checks enumerate every diagram up to isomorphism
for name, C in [("LO", LO), ("perm", permutations_class()), ("Graph", GRAPHS), ("Tournament", TOURNAMENTS),
                ("F(3)", kn_free(3)), ("PLE", POSETS_LINEXT)]:
    res = check_sap(C, 3)
    print(f"{name:>10}: {res.report()} ({res.diagrams_checked} diagrams)")

print(check_ap(GRAPHS, 3).report())
print(check_jep(TOURNAMENTS, 4).report())
