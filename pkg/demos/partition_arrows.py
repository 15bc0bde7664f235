"""
Partition arrows on chains and ordered graphs
=============================================

Colour the pairs of a chain with two colours and look for a monochromatic
3-chain.  Six points force one, five do not.
"""
from pathlib import Path

from ramseykit import (ArrowInstance, chain, check_arrow, enumerate_embeddings, find_mono_copy, parse_structure,
                       search_witness, validate_certificate)
from ramseykit.classes import LO, parse_class_spec, render_class_spec

DATA = Path(__file__).parent / "data"


def load(name):
    return parse_structure((DATA / f"{name}.txt").read_text(), source=name)


chain2, chain3, chain5, chain6 = (load(f"chain{n}") for n in (2, 3, 5, 6))

# six points: every colouring of the 15 pairs has a monochromatic triple
cert = check_arrow(ArrowInstance(chain2, chain3, chain6, 2))
print("6-chain:", cert.verdict, "| search exhausted:", cert.exhausted)

# five points: the search hands back a colouring with no monochromatic triple
inst = ArrowInstance(chain2, chain3, chain5, 2)
cert = check_arrow(inst)
print("5-chain:", cert.verdict)
for e, c in zip(enumerate_embeddings(chain2, chain5), cert.coloring):
    print("  pair", e.map, "-> colour", c)
print("certificate re-checks:", validate_certificate(inst, cert))

# colour each pair of the 6-chain by the parity of its smaller point
inst = ArrowInstance(chain2, chain3, chain6, 2)
chi = [e.map[0] % 2 for e in enumerate_embeddings(chain2, chain6)]
print("parity colouring, first monochromatic 3-chain:", find_mono_copy(inst, chi).map)

# the same threshold for ordered cliques
oK2, oK3, oK5, oK6 = (load(f"ordered_K{n}") for n in (2, 3, 5, 6))
for C in (oK5, oK6):
    print(f"ordered K{C.size}:", check_arrow(ArrowInstance(oK2, oK3, C, 2)).verdict)

# scan a class for the least arrowing member
print("least witness in LO:", search_witness(LO, chain2, chain3, 2, 8).size, "points")

# pairs into 4-chains need 18 points, far past this bound
print("4-chain witness within 8 points:", search_witness(LO, chain2, chain(4), 2, 8))

# ordered cliques are found the same way, just more slowly (several seconds)
ordered_graphs = parse_class_spec("wedge(LO,G)")
W = search_witness(ordered_graphs, oK2, oK3, 2, 6)
print(render_class_spec(ordered_graphs), "witness:", W.size, "points,", len(W.rels["E"]) // 2, "edges")
