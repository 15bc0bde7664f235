import itertools
import random
import warnings

import pytest
from hypothesis import given, strategies as st

from ramseykit import ParseError, SignatureMismatchError, chain, complete_graph, reduct
from ramseykit.classes import (GRAPHS, LO, POSETS_LINEXT, TOURNAMENTS, enumerate_labeled_members,
                               enumerate_members, forget, forget_witness, kn_free, membership,
                               parse_class_spec, permutations_class, random_member, rename_symbols,
                               render_class_spec, wedge)
from ramseykit.structures import Signature, Structure, canonical_form, substructure

from oracles import all_structures, brute_isomorphic, naive_labeled, naive_member, naive_types
from strategies import structures

PERM = permutations_class()
ORDERED_GRAPHS = wedge(LO, GRAPHS)
BUILTINS = [LO, GRAPHS, TOURNAMENTS, kn_free(3), kn_free(4), POSETS_LINEXT]
COMPOSITES = [PERM, ORDERED_GRAPHS, wedge(LO, kn_free(3)), wedge(TOURNAMENTS, rename_symbols(GRAPHS, "g")),
              forget(POSETS_LINEXT, {"lt"}), forget(PERM, {"b.<"}), forget(ORDERED_GRAPHS, {"<"})]


def two_orders(first, second):
    return Structure(PERM.sig, len(first), {
        "a.<": chain(len(first), "a.<").relabel(first).rels["a.<"],
        "b.<": chain(len(second), "b.<").relabel(second).rels["b.<"],
    })


class TestMembership:
    def test_examples(self):
        assert membership(LO, chain(3))
        assert not membership(kn_free(3), complete_graph(3))
        assert membership(PERM, two_orders([0, 1, 2], [2, 0, 1]))

    def test_signature_mismatch(self):
        with pytest.raises(SignatureMismatchError):
            membership(LO, complete_graph(2))

    def test_builtins_match_naive_predicates(self):
        for c in BUILTINS:
            for n in range(4):
                labelled = set(enumerate_labeled_members(c, n))
                assert labelled == set(naive_labeled(c, n)), c

    @given(structures(Signature((("E", 2),)), max_size=4))
    def test_graph_like_predicates_on_arbitrary_relations(self, S):
        for c in (GRAPHS, kn_free(3)):
            assert membership(c, S) == naive_member(c, S)
        T = Structure(TOURNAMENTS.sig, S.size, {"A": S.rels["E"]})
        assert membership(TOURNAMENTS, T) == naive_member(TOURNAMENTS, T)
        L = Structure(LO.sig, S.size, {"<": S.rels["E"]})
        assert membership(LO, L) == naive_member(LO, L)

    def test_loops_are_rejected(self):
        loop = Structure(GRAPHS.sig, 1, {"E": [(0, 0)]})
        assert not membership(GRAPHS, loop)
        assert not membership(LO, Structure(LO.sig, 1, {"<": [(0, 0)]}))


class TestWedge:
    def test_examples(self):
        assert ORDERED_GRAPHS.sig == Signature((("<", 2), ("E", 2)))
        assert PERM.sig.names == ("a.<", "b.<")
        with pytest.raises(SignatureMismatchError):
            wedge(GRAPHS, GRAPHS)

    @given(structures(Signature((("<", 2), ("E", 2))), max_size=4))
    def test_reduct_law(self, S):
        for c in (ORDERED_GRAPHS, wedge(LO, kn_free(3))):
            assert membership(c, S) == (membership(c.left, reduct(S, c.left.sig.names))
                                        and membership(c.right, reduct(S, c.right.sig.names)))

    def test_reduct_law_on_sampled_members(self):
        rng = random.Random(11)
        for _ in range(200):
            n = rng.randint(0, 5)
            a, b = random_member(LO, n, rng), random_member(GRAPHS, n, rng)
            S = Structure(ORDERED_GRAPHS.sig, n, {**a.rels, **b.rels})
            assert membership(ORDERED_GRAPHS, S)


class TestRename:
    def test_examples(self):
        assert rename_symbols(LO, "a").sig == Signature((("a.<", 2),))
        with pytest.raises(ValueError):
            rename_symbols(LO, "")

    def test_membership_preserved(self):
        for c in BUILTINS + [PERM]:
            renamed = rename_symbols(c, "p")
            for n in range(4):
                for S in enumerate_members(c, n):
                    moved = Structure(renamed.sig, n, {f"p.{k}": v for k, v in S.rels.items()})
                    assert membership(renamed, moved)

    def test_forget_is_renamed_too(self):
        c = rename_symbols(forget(POSETS_LINEXT, {"lt"}), "q")
        assert c.sig.names == ("q.prec",) and c.dropped == {"q.lt"}


class TestForget:
    def test_unknown_symbol(self):
        with pytest.raises(SignatureMismatchError):
            forget(LO, {"E"})

    @pytest.mark.parametrize("c", [forget(POSETS_LINEXT, {"lt"}), forget(POSETS_LINEXT, {"prec"}),
                                   forget(PERM, {"a.<"}), forget(ORDERED_GRAPHS, {"<"}),
                                   forget(wedge(LO, kn_free(3)), {"E"})], ids=render_class_spec)
    def test_expansion_law_against_all_interpretations(self, c):
        # the oracle tries all 2^(n*n) relations for the dropped symbol
        for n in range(4):
            for S in all_structures(c.sig, n, loops=n <= 2):
                assert membership(c, S) == naive_member(c, S)

    def test_witness_is_an_inner_member(self):
        c = forget(POSETS_LINEXT, {"lt"})
        for S in enumerate_members(c, 4):
            W = forget_witness(c, S)
            assert W is not None and membership(POSETS_LINEXT, W) and reduct(W, {"prec"}) == S
        cyc = Structure(c.sig, 3, {"prec": [(0, 1), (1, 2), (2, 0)]})
        assert forget_witness(c, cyc) is None

    def test_forgetting_one_of_two_orders_gives_orders(self):
        assert [S.size for S in enumerate_members(forget(PERM, {"b.<"}), 4)] == [4]


class TestEnumeration:
    def test_examples(self):
        assert len(enumerate_members(LO, 3)) == 1
        assert len(enumerate_members(GRAPHS, 3)) == 4
        assert len(enumerate_members(PERM, 2)) == 2

    @pytest.mark.parametrize("c, n", [(GRAPHS, 4), (TOURNAMENTS, 4), (kn_free(3), 4), (POSETS_LINEXT, 3),
                                      (PERM, 3), (ORDERED_GRAPHS, 3), (forget(POSETS_LINEXT, {"lt"}), 3)],
                             ids=str)
    def test_counts_match_brute_force(self, c, n):
        assert len(enumerate_members(c, n)) == len(naive_types(c, n))

    def test_known_counts(self):
        assert [len(enumerate_members(GRAPHS, n)) for n in range(6)] == [1, 1, 2, 4, 11, 34]
        assert [len(enumerate_members(TOURNAMENTS, n)) for n in range(6)] == [1, 1, 1, 2, 4, 12]
        assert [len(enumerate_members(forget(POSETS_LINEXT, {"lt"}), n)) for n in range(5)] == [1, 1, 2, 5, 16]
        assert [len(enumerate_members(PERM, n)) for n in range(5)] == [1, 1, 2, 6, 24]
        assert [len(enumerate_members(ORDERED_GRAPHS, n)) for n in range(5)] == [1, 1, 2, 8, 64]

    @pytest.mark.parametrize("c", BUILTINS + COMPOSITES, ids=str)
    def test_closed_and_pairwise_non_isomorphic(self, c):
        for n in range(5):
            ms = enumerate_members(c, n)
            assert all(membership(c, S) for S in ms)
            assert len({canonical_form(S) for S in ms}) == len(ms)
            assert [canonical_form(S) for S in ms] == sorted(canonical_form(S) for S in ms)
            if n <= 3:
                assert not any(brute_isomorphic(A, B) for A, B in itertools.combinations(ms, 2))

    @pytest.mark.parametrize("c", BUILTINS + COMPOSITES, ids=str)
    def test_every_labelled_member_is_represented(self, c):
        for n in range(4):
            codes = {canonical_form(S) for S in enumerate_members(c, n)}
            assert {canonical_form(S) for S in enumerate_labeled_members(c, n)} == codes

    def test_deterministic(self):
        assert enumerate_members(PERM, 4) == enumerate_members(permutations_class(), 4)

    @pytest.mark.parametrize("c", BUILTINS + COMPOSITES, ids=str)
    def test_hereditary(self, c):
        for n in range(5):
            for S in enumerate_members(c, n):
                for k in range(n + 1):
                    for sub in itertools.combinations(range(n), k):
                        assert membership(c, substructure(S, sub)[0])

    def test_random_member(self):
        rng = random.Random(3)
        for c in BUILTINS + COMPOSITES:
            for n in range(6):
                assert membership(c, random_member(c, n, rng))


class TestKnFree:
    def test_two_warns(self):
        with pytest.warns(UserWarning):
            kn_free(2)

    def test_below_two_rejected(self):
        with pytest.raises(ValueError):
            kn_free(1)

    def test_three_is_quiet(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            kn_free(3)

    def test_triangle_free_counts(self):
        assert [len(enumerate_members(kn_free(3), n)) for n in range(6)] == [1, 1, 2, 3, 7, 14]


class TestDSL:
    @pytest.mark.parametrize("text, expected", [
        ("LO", LO), ("G", GRAPHS), ("Graph", GRAPHS), ("T", TOURNAMENTS), ("F(3)", kn_free(3)),
        ("PLE", POSETS_LINEXT), ("perm", PERM),
        ('wedge( rename(LO,"a") , rename(LO,"b") )', PERM),
        ("wedge(LO,G)", ORDERED_GRAPHS),
        ("forget(PLE,{lt})", forget(POSETS_LINEXT, {"lt"})),
        ('forget(perm,{a.<, b.<})', forget(PERM, {"a.<", "b.<"})),
    ])
    def test_parse(self, text, expected):
        assert parse_class_spec(text) == expected

    @pytest.mark.parametrize("text, pos", [
        ("wedge(G,G)", 0), ("X", 0), ("wedge(LO,", 9), ("F(x)", 2), ("LO G", 3), ("rename(LO,a)", 10),
        ("forget(LO,{E})", 0), ("LO$", 2),
    ])
    def test_errors_carry_position(self, text, pos):
        with pytest.raises(ParseError) as info:
            parse_class_spec(text)
        assert info.value.pos == pos

    @pytest.mark.parametrize("c", BUILTINS + COMPOSITES, ids=str)
    def test_render_round_trip(self, c):
        assert parse_class_spec(render_class_spec(c)) == c


@given(st.integers(0, 6), st.integers(0, 2 ** 32))
def test_random_members_of_ordered_classes(n, seed):
    rng = random.Random(seed)
    for c in (PERM, ORDERED_GRAPHS, POSETS_LINEXT):
        assert membership(c, random_member(c, n, rng))
