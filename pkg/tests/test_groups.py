import pytest

from gamegraphs.core import Game, Permutation, circulant, relabel, restrict, reverse
from gamegraphs.errors import (
    BadAction,
    BadPrime,
    EvenOrder,
    ExtraAutomorphisms,
    NotGameSubset,
    NotPairSubset,
    NotSubgroup,
)
from gamegraphs.groups import (
    FiniteGroup,
    GameSubset,
    cyclic_action_subgame,
    cyclic_group,
    direct_product,
    double_cosets,
    enumerate_game_subsets,
    euler_phi,
    group_automorphisms,
    group_game,
    h_invariant_subsets,
    is_fermat_square_free,
    isomorphic_subset_family,
    lex_factorization_check,
    multiplication_map,
    orbit_subgame,
    pair_game_subsets,
    parse_group,
    parse_subset,
    quadratic_residue_subset,
    quotient_game,
    semidirect_cyclic,
    serialize_group,
    serialize_subset,
    subgroup_group,
    translation_perms,
    units,
)
from gamegraphs.morph import are_isomorphic, automorphisms


class TestConstructors:
    def test_z7(self):
        G = cyclic_group(7)
        assert G.m == 7 and G.mult(3, 5) == 1 and G.inverse(2) == 5

    def test_product_z3_z3(self):
        G = direct_product(cyclic_group(3), cyclic_group(3))
        assert G.m == 9
        assert all(G.element_order(x) in (1, 3) for x in range(9))

    def test_semidirect_21_nonabelian(self):
        G = semidirect_cyclic(3, 7, 2)
        assert G.m == 21
        assert any(G.mult(a, b) != G.mult(b, a) for a in range(21) for b in range(21))

    def test_semidirect_bad_action(self):
        with pytest.raises(BadAction):
            semidirect_cyclic(3, 7, 3)  # 3^3 = 27 = 6 mod 7

    def test_group_text_round_trip(self):
        G = semidirect_cyclic(3, 7, 2)
        assert parse_group(serialize_group(G)) == G


class TestArithmetic:
    def test_phi_values(self):
        assert euler_phi(7) == 6
        assert euler_phi(9) == 6
        assert euler_phi(1) == 1
        assert euler_phi(21) == 12

    def test_units(self):
        assert units(9) == (1, 2, 4, 5, 7, 8)

    def test_fermat_square_free(self):
        assert is_fermat_square_free(15)  # 3 * 5
        assert is_fermat_square_free(3) and is_fermat_square_free(5)
        assert not is_fermat_square_free(9)
        assert not is_fermat_square_free(21)
        assert not is_fermat_square_free(25)
        assert not is_fermat_square_free(27)


class TestGameSubsets:
    def test_counts(self):
        assert len(enumerate_game_subsets(cyclic_group(3))) == 2
        assert len(enumerate_game_subsets(cyclic_group(7))) == 8
        assert len(enumerate_game_subsets(cyclic_group(9))) == 16

    def test_even_order_rejected(self):
        with pytest.raises(EvenOrder):
            enumerate_game_subsets(FiniteGroup([[(i + j) % 4 for j in range(4)] for i in range(4)]))

    def test_validation(self):
        z7 = cyclic_group(7)
        with pytest.raises(NotGameSubset):
            GameSubset(z7, [0, 1, 2])
        with pytest.raises(NotGameSubset):
            GameSubset(z7, [1, 6, 2])

    def test_subset_text_round_trip(self):
        z9 = cyclic_group(9)
        A = GameSubset(z9, [1, 3, 4, 7])
        assert parse_subset(serialize_subset(A), z9) == A


class TestGroupGame:
    def test_circulant_equalities(self, g5, g7i, g7ii):
        z5, z7 = cyclic_group(5), cyclic_group(7)
        assert group_game(z5, GameSubset(z5, [1, 2])) == g5
        assert group_game(z7, GameSubset(z7, [1, 2, 3])) == g7i
        assert group_game(z7, GameSubset(z7, [1, 2, 4])) == g7ii

    def test_translations_are_automorphisms(self):
        G = direct_product(cyclic_group(3), cyclic_group(3))
        A = enumerate_game_subsets(G)[5]
        g = group_game(G, A)
        for t in translation_perms(G):
            assert relabel(g, t) == g

    def test_reverse_is_inverse_subset(self):
        z9 = cyclic_group(9)
        A = GameSubset(z9, [1, 3, 4, 7])
        assert reverse(group_game(z9, A)) == group_game(z9, A.inverse_subset())

    def test_translation_invariant_iff_group_game(self):
        z7 = cyclic_group(7)
        for A in enumerate_game_subsets(z7):
            g = group_game(z7, A)
            assert g.out_set(0) == A.elements()  # A is recovered as Pi(e)
        # a relabeled circulant is generally not translation-invariant
        g = circulant(7, (1, 2, 3))
        bad = relabel(g, Permutation([0, 2, 1, 3, 4, 5, 6]))
        assert any(relabel(bad, t) != bad for t in translation_perms(z7))

    def test_restriction_to_subgroup(self):
        z9 = cyclic_group(9)
        A = GameSubset(z9, [1, 3, 4, 7])
        g = group_game(z9, A)
        sub, _ = restrict(g, [0, 3, 6])
        Hgrp, hlist = subgroup_group(z9, [0, 3, 6])
        inner = GameSubset(Hgrp, [hlist.index(3)])
        assert sub == group_game(Hgrp, inner)


class TestGroupAutomorphisms:
    def test_z7_units(self):
        ga = group_automorphisms(cyclic_group(7))
        assert ga.order == 6
        assert multiplication_map(7, 3) in set(ga.perms)

    def test_z3(self):
        assert group_automorphisms(cyclic_group(3)).order == 2

    def test_z3xz3_gl23(self):
        assert group_automorphisms(direct_product(cyclic_group(3), cyclic_group(3))).order == 48


class TestIsomorphicSubsetFamily:
    def test_z7_type1_family_of_six(self):
        z7 = cyclic_group(7)
        fam = isomorphic_subset_family(z7, GameSubset(z7, [1, 2, 3]))
        assert len(fam) == 6
        base = group_game(z7, GameSubset(z7, [1, 2, 3]))
        for A in fam:
            assert are_isomorphic(group_game(z7, A), base) is not None

    def test_g7ii_has_extra_automorphisms(self):
        z7 = cyclic_group(7)
        with pytest.raises(ExtraAutomorphisms):
            isomorphic_subset_family(z7, GameSubset(z7, [1, 2, 4]))

    def test_z9_type1_family_of_six(self):
        z9 = cyclic_group(9)
        fam = isomorphic_subset_family(z9, GameSubset(z9, [1, 2, 3, 4]))
        assert len(fam) == 6


class TestHInvariantSubsets:
    def test_z9_order3_subgroup(self):
        H = [multiplication_map(9, a) for a in (1, 4, 7)]
        subs = h_invariant_subsets(cyclic_group(9), H)
        masks = {s.mask for s in subs}
        assert len(subs) == 4
        assert sum(1 << x for x in (1, 4, 7, 3)) in masks
        assert sum(1 << x for x in (1, 4, 7, 6)) in masks

    def test_z7_qr_subgroup(self):
        H = [multiplication_map(7, a) for a in (1, 2, 4)]
        subs = h_invariant_subsets(cyclic_group(7), H)
        assert {s.mask for s in subs} == {
            sum(1 << x for x in (1, 2, 4)),
            sum(1 << x for x in (3, 5, 6)),
        }

    def test_trivial_subgroup_gives_all(self):
        H = [Permutation.identity(7)]
        assert len(h_invariant_subsets(cyclic_group(7), H)) == 8


class TestQuadraticResidues:
    def test_examples(self):
        assert quadratic_residue_subset(7).elements() == (1, 2, 4)
        assert quadratic_residue_subset(11).elements() == (1, 3, 4, 5, 9)

    def test_bad_primes(self):
        with pytest.raises(BadPrime):
            quadratic_residue_subset(5)
        with pytest.raises(BadPrime):
            quadratic_residue_subset(9)

    def test_neighborhood_subgames(self):
        # restrictions to both neighborhoods of any vertex are subgames
        # isomorphic to one cyclic group game (here p = 7 and 11)
        for p in (7, 11):
            A = quadratic_residue_subset(p)
            g = group_game(A.group, A)
            m = (p - 1) // 2
            ref = None
            for v in range(p):
                for side in (g.out_set(v), g.in_set(v)):
                    sub, _ = restrict(g, side)
                    assert isinstance(sub, Game)
                    if ref is None:
                        ref = sub
                    assert are_isomorphic(sub, ref) is not None
            # and that common subgame is a cyclic group game
            z = cyclic_group(m)
            hit = any(
                are_isomorphic(ref, group_game(z, B)) is not None
                for B in enumerate_game_subsets(z)
            )
            assert hit


class TestDoubleCosets:
    def test_z9(self):
        dc = double_cosets(cyclic_group(9), [0, 3, 6])
        assert dc.blocks == ((0, 3, 6), (1, 4, 7), (2, 5, 8))
        assert dc.inverse_block[1] == 2 and dc.inverse_block[2] == 1

    def test_trivial_subgroup(self):
        dc = double_cosets(cyclic_group(5), [0])
        assert len(dc.blocks) == 5

    def test_z21_subgroup_of_order_3(self):
        dc = double_cosets(cyclic_group(21), [0, 7, 14])
        assert len(dc.blocks) == 7

    def test_nonabelian_double_cosets_can_be_fat(self):
        G = semidirect_cyclic(3, 7, 2)
        H = [x * 7 for x in range(3)]  # the acting Z3, elements (x, 0)
        dc = double_cosets(G, H)
        sizes = sorted(len(b) for b in dc.blocks)
        assert sizes[0] == 3 and sum(sizes) == 21

    def test_not_subgroup(self):
        with pytest.raises(NotSubgroup):
            double_cosets(cyclic_group(9), [0, 3, 5])


class TestPairGameSubsets:
    def test_z9_has_four(self):
        subs = pair_game_subsets(cyclic_group(9), [0, 3, 6])
        assert len(subs) == 4
        masks = {s.mask for s in subs}
        assert sum(1 << x for x in (1, 4, 7, 3)) in masks

    def test_z3xz3_sixteen_total(self):
        G = direct_product(cyclic_group(3), cyclic_group(3))
        subgroups = []
        for x in range(1, 9):
            H = tuple(sorted({0, x, G.mult(x, x)}))
            if H not in subgroups:
                subgroups.append(H)
        assert len(subgroups) == 4
        seen = set()
        for H in subgroups:
            subs = pair_game_subsets(G, H)
            assert len(subs) == 4
            seen.update(s.mask for s in subs)
        assert len(seen) == 16  # every game subset of Z3 x Z3 is a pair subset

    def test_trivial_subgroup_gives_all(self):
        z7 = cyclic_group(7)
        assert len(pair_game_subsets(z7, [0])) == 8


class TestQuotientGame:
    def test_z9_three_cycle_of_three_cycles(self, c3):
        z9 = cyclic_group(9)
        A = GameSubset(z9, [1, 3, 4, 7])
        q, cosets, proj = quotient_game(z9, [0, 3, 6], A)
        assert q.p == 3 and q == c3
        assert cosets == [(0, 3, 6), (1, 4, 7), (2, 5, 8)]
        # projection is a morphism
        g = group_game(z9, A)
        from gamegraphs.morph import check_projection

        rep = check_projection(proj, g, q)
        assert rep.is_morphism and rep.fibers_are_games

    def test_trivial_subgroup_returns_game_itself(self):
        z7 = cyclic_group(7)
        A = GameSubset(z7, [1, 2, 4])
        q, _, _ = quotient_game(z7, [0], A)
        assert q == group_game(z7, A)

    def test_normal_quotient_equals_base_game(self):
        # Z15 with the order-5 kernel {0,3,...,12} projecting onto Z3:
        # A = A0 union pullback(B) makes the quotient literally Gamma[B]
        z15 = cyclic_group(15)
        A0 = [3, 6]  # a game subset of the kernel (= {1,2} of Z5 under j -> 3j)
        pullback = [x for x in range(1, 15) if x % 3 == 1]
        A = GameSubset(z15, A0 + pullback)
        q, cosets, _ = quotient_game(z15, [0, 3, 6, 9, 12], A)
        z3 = cyclic_group(3)
        assert q == group_game(z3, GameSubset(z3, [1]))

    def test_not_pair_subset(self):
        z9 = cyclic_group(9)
        with pytest.raises(NotPairSubset):
            quotient_game(z9, [0, 3, 6], GameSubset(z9, [1, 2, 3, 4]))


class TestLexFactorization:
    def test_z9_type3(self):
        z9 = cyclic_group(9)
        A = GameSubset(z9, [1, 3, 4, 7])
        w = lex_factorization_check(z9, [0, 3, 6], A)
        assert len(w) == 9  # verified inside

    def test_all_z3xz3_subsets_factor(self):
        G = direct_product(cyclic_group(3), cyclic_group(3))
        for A in enumerate_game_subsets(G):
            hit = False
            for x in range(1, 9):
                H = sorted({0, x, G.mult(x, x)})
                try:
                    lex_factorization_check(G, H, A)
                    hit = True
                    break
                except NotPairSubset:
                    continue
            assert hit

    def test_trivial_subgroup_identity_witness(self):
        z7 = cyclic_group(7)
        A = GameSubset(z7, [1, 2, 4])
        w = lex_factorization_check(z7, [0], A)
        assert w == Permutation.identity(7)


class TestOrbitSubgame:
    def test_full_translation_action(self, g7i):
        z7 = cyclic_group(7)
        action = translation_perms(z7)
        rep = orbit_subgame(g7i, z7, action, 0)
        assert rep.orbit == tuple(range(7))
        assert rep.restriction == g7i
        assert relabel(rep.quotient, rep.witness) == g7i

    def test_type3_automorphism_orbit(self, g7iii):
        # Aut(G7III) = multiplications by 1, 2, 4 with 0 fixed
        xi = Permutation([(2 * i) % 7 for i in range(7)])
        assert relabel(g7iii, xi) == g7iii
        rep = cyclic_action_subgame(g7iii, xi, 1)
        assert rep.orbit == (1, 2, 4)
        assert rep.restriction.p == 3

    def test_cyclic_automorphism_cycle_gives_cyclic_game(self, g7ii):
        # a translation of the circulant: its 7-cycle orbit carries a cyclic group game
        xi = Permutation([(i + 1) % 7 for i in range(7)])
        rep = cyclic_action_subgame(g7ii, xi, 0)
        assert rep.restriction == g7ii
        z7 = cyclic_group(7)
        ok = any(
            rep.quotient == group_game(z7, B) for B in enumerate_game_subsets(z7)
        )
        assert ok


class TestActionFacts:
    def test_free_odd_action_fixing_half_set_is_identity(self):
        # a free odd-order action fixing a half-size set must be trivial
        z7 = cyclic_group(7)
        for A in enumerate_game_subsets(z7):
            for t in range(1, 7):
                shifted = {z7.mult(t, a) for a in A.elements()}
                assert shifted != set(A.elements())

    def test_orbit_count_parity(self):
        # an odd-order group acting on an odd set leaves an odd orbit count
        G = cyclic_group(9)
        acts = translation_perms(G)
        for H_elems in ([0], [0, 3, 6], list(range(9))):
            orbits = set()
            for x in range(9):
                orbits.add(frozenset(acts[h](x) for h in H_elems))
            assert len(orbits) % 2 == 1

    def test_pointgame_score_characterization(self):
        # prime sizes up to 11: an element of A scoring n-1 inside Gamma[A]|A
        # pins A to a multiplicative image of the initial segment
        for p in (5, 7, 11):
            n = (p - 1) // 2
            zp = cyclic_group(p)
            initial = frozenset(range(1, n + 1))
            for A in enumerate_game_subsets(zp):
                g = group_game(zp, A)
                sub, idx = restrict(g, A.elements())
                for e in A.elements():
                    if sub.out_degree(idx[e]) == n - 1:
                        image = frozenset((e * x) % p for x in initial)
                        assert image == frozenset(A.elements())
