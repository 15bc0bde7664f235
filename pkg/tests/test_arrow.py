import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ramseykit import (ArrowInstance, PreconditionError, SignatureMismatchError, chain, check_arrow,
                       complete_graph, embeds, enumerate_embeddings, find_mono_copy, graph, is_isomorphic,
                       ordered_graph, parse_formula, search_witness, transfer_check, validate_certificate)
from ramseykit.arrow import ArrowCertificate
from ramseykit.classes import GRAPHS, LO, enumerate_members, permutations_class, wedge
from ramseykit.structures import Signature, Structure, embedding_maps

from oracles import brute_arrow, brute_embeddings

ORDERED_GRAPHS = wedge(LO, GRAPHS)


def ordered_clique(n):
    return ordered_graph(n, itertools.combinations(range(n), 2))


def is_bad(inst, chi):
    """Independent re-check: no copy of B sees a single colour."""
    ac = brute_embeddings(inst.A, inst.C)
    idx = {f: i for i, f in enumerate(ac)}
    ab = brute_embeddings(inst.A, inst.B)
    return all(len({chi[idx[tuple(g[x] for x in e)]] for e in ab}) > 1
               for g in brute_embeddings(inst.B, inst.C))


class TestCheckArrow:
    @pytest.mark.parametrize("n, expected", [(5, False), (6, True)])
    def test_chains_at_the_threshold(self, n, expected):
        inst = ArrowInstance(chain(2), chain(3), chain(n), 2)
        assert brute_arrow(inst.A, inst.B, inst.C, 2)[0] == expected
        cert = check_arrow(inst)
        assert cert.holds == expected
        if not expected:
            assert len(cert.coloring) == 10 and validate_certificate(inst, cert) and is_bad(inst, cert.coloring)
        else:
            assert cert.exhausted

    @pytest.mark.parametrize("n, expected", [(5, False), (6, True)])
    def test_ordered_cliques(self, n, expected):
        inst = ArrowInstance(ordered_clique(2), ordered_clique(3), ordered_clique(n), 2)
        assert brute_arrow(inst.A, inst.B, inst.C, 2)[0] == expected
        cert = check_arrow(inst)
        assert cert.holds == expected
        assert expected or validate_certificate(inst, cert)

    def test_canonical_certificate_is_least_bad_colouring(self):
        for n in (4, 5):
            inst = ArrowInstance(chain(2), chain(3), chain(n), 2)
            holds, first_bad = brute_arrow(inst.A, inst.B, inst.C, 2)
            cert = check_arrow(inst, canonical_certificate=True)
            assert cert.holds == holds and cert.coloring == first_bad

    def test_deterministic(self):
        inst = ArrowInstance(chain(2), chain(3), chain(5), 2)
        assert check_arrow(inst) == check_arrow(ArrowInstance(chain(2), chain(3), chain(5), 2))

    def test_instance_validation(self):
        with pytest.raises(ValueError):
            ArrowInstance(chain(1), chain(2), chain(3), 0)
        with pytest.raises(SignatureMismatchError):
            ArrowInstance(chain(1), complete_graph(2), chain(3), 2)

    def test_one_colour(self):
        for A, B, C in [(chain(2), chain(3), chain(3)), (graph(1, []), complete_graph(3), complete_graph(4)),
                        (ordered_clique(2), ordered_graph(3, [(0, 1)]), ordered_graph(4, [(0, 1), (2, 3)]))]:
            assert check_arrow(ArrowInstance(A, B, C, 1)).holds

    @pytest.mark.parametrize("r", [1, 2, 3, 5])
    def test_rigid_self_arrow(self, r):
        for S in enumerate_members(ORDERED_GRAPHS, 3) + [chain(4)]:
            assert check_arrow(ArrowInstance(S, S, S, r)).holds


class TestConventions:
    def test_b_missing_from_c(self):
        inst = ArrowInstance(chain(2), chain(4), chain(3), 2)
        cert = check_arrow(inst)
        assert not cert.holds and cert.coloring == (0, 0, 0)
        assert validate_certificate(inst, cert)

    def test_a_missing_from_b(self):
        E = graph(2, [])
        assert check_arrow(ArrowInstance(E, complete_graph(3), complete_graph(4), 2)).holds

    def test_a_missing_from_c(self):
        A = ordered_graph(2, [])
        assert check_arrow(ArrowInstance(A, ordered_clique(2), ordered_clique(3), 2)).holds

    def test_empty_a(self):
        empty = Structure(LO.sig, 0)
        assert check_arrow(ArrowInstance(empty, chain(2), chain(3), 4)).holds


class TestFindMonoCopy:
    def test_constant_colouring_returns_first_copy(self):
        inst = ArrowInstance(chain(2), chain(3), chain(5), 2)
        f = find_mono_copy(inst, [1] * 10)
        assert f.map == (0, 1, 2)

    def test_certificate_colouring_has_none(self):
        inst = ArrowInstance(chain(2), chain(3), chain(5), 2)
        assert find_mono_copy(inst, check_arrow(inst).coloring) is None

    def test_first_element_parity(self):
        inst = ArrowInstance(chain(2), chain(3), chain(6), 2)
        chi = [e.map[0] % 2 for e in enumerate_embeddings(inst.A, inst.C)]
        f = find_mono_copy(inst, chi)
        pairs = {e: c for e, c in zip(brute_embeddings(inst.A, inst.C), chi)}
        expected = next(g for g in brute_embeddings(inst.B, inst.C)
                        if len({pairs[(g[a], g[b])] for a, b in [(0, 1), (0, 2), (1, 2)]}) == 1)
        assert f.map == expected == (0, 2, 3)

    @pytest.mark.parametrize("chi", [[0] * 9, [0] * 9 + [2], [0] * 9 + [-1], [0] * 9 + [0.5]])
    def test_bad_colourings(self, chi):
        with pytest.raises(ValueError):
            find_mono_copy(ArrowInstance(chain(2), chain(3), chain(5), 2), chi)

    def test_validate_rejects_non_certificates(self):
        inst = ArrowInstance(chain(2), chain(3), chain(5), 2)
        assert not validate_certificate(inst, ArrowCertificate(False, (0,) * 10))
        assert not validate_certificate(inst, ArrowCertificate(False, (0,) * 3))
        assert not validate_certificate(inst, ArrowCertificate(True))


CHAIN_CASES = [(a, b, r) for a in (1, 2) for b in (2, 3) for r in (1, 2, 3) if a <= b]


class TestMonotonicity:
    @pytest.mark.parametrize("a, b, r", CHAIN_CASES)
    def test_in_c(self, a, b, r):
        verdicts = [check_arrow(ArrowInstance(chain(a), chain(b), chain(n), r)).holds for n in range(b, 8)]
        assert verdicts == sorted(verdicts)

    @pytest.mark.parametrize("a, b", sorted({(a, b) for a, b, _ in CHAIN_CASES}))
    def test_in_r(self, a, b):
        for n in range(b, 8):
            verdicts = [check_arrow(ArrowInstance(chain(a), chain(b), chain(n), r)).holds for r in range(1, 5)]
            assert verdicts == sorted(verdicts, reverse=True)

    def test_chain_thresholds(self):
        # points need n >= r(b-1)+1 by pigeonhole; pairs into triangles need 6 with two colours
        def least(a, b, r):
            return next(n for n in range(b, 8) if check_arrow(ArrowInstance(chain(a), chain(b), chain(n), r)).holds)
        assert least(1, 3, 2) == 5 and least(1, 2, 3) == 4 and least(2, 3, 2) == 6

    def test_in_c_for_ordered_graphs(self):
        members = [S for n in range(2, 6) for S in enumerate_members(ORDERED_GRAPHS, n)]
        # colouring points with no monochromatic edge is a proper 2-colouring
        A, B = ordered_graph(1, []), ordered_clique(2)
        holding = [C for C in members if check_arrow(ArrowInstance(A, B, C, 2)).holds]
        assert 0 < len(holding) < len(members)
        for C in holding:
            for D in members:
                if D.size == C.size + 1 and embeds(C, D):
                    assert check_arrow(ArrowInstance(A, B, D, 2)).holds


@st.composite
def small_instances(draw):
    def member(n):
        return draw(st.sampled_from(enumerate_members(ORDERED_GRAPHS, n)))
    a = draw(st.integers(0, 2))
    b = draw(st.integers(a, 3))
    c = draw(st.integers(b, 5))
    return ArrowInstance(member(a), member(b), member(c), draw(st.integers(1, 3)))


@settings(max_examples=120)
@given(small_instances())
def test_agrees_with_brute_force(inst):
    if len(embedding_maps(inst.A, inst.C)) > 10:
        return
    holds, _ = brute_arrow(inst.A, inst.B, inst.C, inst.r)
    cert = check_arrow(inst)
    assert cert.holds == holds
    if not holds:
        assert validate_certificate(inst, cert) and is_bad(inst, cert.coloring)


class TestSearchWitness:
    def test_pairs_into_triangles(self):
        W = search_witness(LO, chain(2), chain(3), 2, 8)
        assert W is not None and is_isomorphic(W, chain(6))

    @pytest.mark.slow
    def test_ordered_cliques(self):
        W = search_witness(ORDERED_GRAPHS, ordered_clique(2), ordered_clique(3), 2, 6)
        assert W is not None and is_isomorphic(W, ordered_clique(6))

    def test_bound_too_small(self):
        assert search_witness(LO, chain(2), chain(4), 2, 8) is None

    def test_points(self):
        W = search_witness(GRAPHS, graph(1, []), complete_graph(2), 2, 5)
        assert is_isomorphic(W, complete_graph(3))

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            search_witness(GRAPHS, graph(1, []), Structure(GRAPHS.sig, 2, {"E": [(0, 1)]}), 2, 4)
        with pytest.raises(ValueError):
            search_witness(LO, chain(1), chain(3), 2, 2)


class TestTransfer:
    def test_order_redefined_from_itself(self):
        rep = transfer_check(chain(2), chain(3), chain(5), parse_formula("<(x,y)"), "o", 2)
        assert rep.ok and not rep.plain.holds and not rep.expanded.holds

    def test_permutations(self):
        perms = permutations_class()
        phi = parse_formula("a.<(x,y)")
        A = enumerate_members(perms, 2)[0]
        for B in enumerate_members(perms, 3):
            for C in enumerate_members(perms, 4):
                rep = transfer_check(A, B, C, phi, "o", 2)
                assert rep.ok

    def test_reversed_order(self):
        rep = transfer_check(chain(2), chain(3), chain(6), parse_formula("<(y,x)"), "o", 2)
        assert rep.ok and rep.plain.holds

    def test_not_an_order(self):
        with pytest.raises(PreconditionError):
            transfer_check(graph(2, []), complete_graph(2), complete_graph(3), parse_formula("E(x,y)"), "o", 2)

    def test_name_taken(self):
        with pytest.raises(PreconditionError):
            transfer_check(chain(2), chain(3), chain(4), parse_formula("<(x,y)"), "<", 2)

    def test_order_from_a_tournament_plus_order(self):
        sig = Signature((("<", 2), ("A", 2)))
        C = Structure(sig, 3, {"<": chain(3).rels["<"], "A": [(0, 1), (2, 1), (0, 2)]})
        rep = transfer_check(Structure(sig, 1), Structure(sig, 2, {"<": [(0, 1)], "A": [(1, 0)]}), C,
                             parse_formula("<(x,y) & !(x=y)"), "o", 2)
        assert rep.ok
