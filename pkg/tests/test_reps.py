import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_gl, random_lambda_rep, random_two_vertex_rep
from qvl.families import (family_a, family_a_prime_commuting, family_b,
                          family_lambda)
from qvl.linalg import GF, Matrix, QQ
from qvl.reps import (Morphism, Representation, cokernel, direct_sum,
                      gl_action, hom_basis, is_monomorphism, simple_module)

F2 = GF(2)
F3 = GF(3)
F5 = GF(5)


def lambda2_reps():
    pres = family_lambda(2)
    one = Representation(pres, F2, {0: 1}, {"e": Matrix(F2, 1, 1, [[0]])})
    two = Representation(pres, F2, {0: 2},
                         {"e": Matrix(F2, 2, 2, [[0, 1], [0, 0]])})
    return pres, one, two


class TestEvaluation:
    def test_trivial_path_is_identity(self):
        pres, one, two = lambda2_reps()
        p = pres.quiver.trivial_path(0)
        assert two.evaluate_path(p) == Matrix.identity(F2, 2)

    def test_loop_square_vanishes(self):
        pres, one, two = lambda2_reps()
        p = pres.quiver.path(["e", "e"])
        assert two.evaluate_path(p).is_zero()

    def test_crossing_path_through_zero_loop(self):
        pres = family_a(1, 2, 1)
        rep = Representation(pres, F5, {0: 1, 1: 1}, {
            "e0": Matrix(F5, 1, 1, [[0]]),
            "e1": Matrix(F5, 1, 1, [[0]]),
            "a1": Matrix(F5, 1, 1, [[3]]),
        })
        path = pres.quiver.path(["e0", "a1"])
        assert rep.evaluate_path(path).is_zero()

    def test_validity_examples(self):
        pres, one, two = lambda2_reps()
        assert one.is_valid() and two.is_valid()
        bad = Representation(family_lambda(2), QQ, {0: 1},
                             {"e": Matrix(QQ, 1, 1, [[1]])})
        assert not bad.is_valid()

    def test_corner_relation_evaluation(self):
        pres = family_b(1, 2)
        rep = Representation(pres, F5, {0: 1, 1: 1}, {
            "e0": Matrix(F5, 1, 1, [[0]]),
            "e1": Matrix(F5, 1, 1, [[0]]),
            "a1": Matrix(F5, 1, 1, [[0]]),
        })
        rep5 = Representation(pres, F5, rep.dims, dict(rep.mats))
        assert rep5.is_valid()

    def test_shape_mismatch_rejected(self):
        pres = family_lambda(2)
        with pytest.raises(ValueError):
            Representation(pres, F2, {0: 2}, {"e": Matrix(F2, 1, 1, [[0]])})


class TestHomBasis:
    def test_simple_endomorphisms(self):
        pres = family_a(1, 2, 1)
        s0 = simple_module(pres, F2, 0)
        assert len(hom_basis(s0, s0)) == 1

    def test_big_to_small(self):
        pres, one, two = lambda2_reps()
        basis = hom_basis(two, one)
        assert len(basis) == 1
        assert basis[0].maps[0] == Matrix(F2, 1, 2, [[0, 1]])

    def test_small_to_big(self):
        pres, one, two = lambda2_reps()
        basis = hom_basis(one, two)
        assert len(basis) == 1
        assert basis[0].maps[0] == Matrix(F2, 2, 1, [[1], [0]])

    def test_basis_elements_intertwine(self):
        rng = random.Random(8)
        pres = family_a_prime_commuting(2)
        v = random_two_vertex_rep(pres, F3, 2, 2, rng)
        w = random_two_vertex_rep(pres, F3, 2, 1, rng)
        for mor in hom_basis(v, w):
            assert mor.intertwines()

    def test_brute_force_oracle_f2(self):
        # enumerate all 1x2 candidates directly
        pres, one, two = lambda2_reps()
        count = 0
        for a in (0, 1):
            for b in (0, 1):
                f = Morphism(two, one, {0: Matrix(F2, 1, 2, [[a, b]])})
                if f.intertwines():
                    count += 1
        assert count == 2 ** len(hom_basis(two, one))

    def test_span_contains_supplied_homomorphism(self):
        pres, one, two = lambda2_reps()
        f = Morphism(one, two, {0: Matrix(F2, 2, 1, [[1], [0]])})
        assert f.intertwines()
        basis = hom_basis(one, two)
        assert any(mor == f for mor in basis)

    def test_span_contains_polynomials_in_the_loop(self):
        # p(V) commutes with V, so it is an endomorphism the basis must span
        rng = random.Random(21)
        pres = family_lambda(3)
        from qvl.linalg import random_nilpotent
        v = random_nilpotent(F5, 3, 3, rng)
        rep = Representation(pres, F5, {0: 3}, {"e": v})
        endo = Matrix.identity(F5, 3).scale(2) + v.scale(3) + (v @ v)
        basis = hom_basis(rep, rep)
        vecs = [[m.maps[0][i, j] for i in range(3) for j in range(3)]
                for m in basis]
        target = [endo[i, j] for i in range(3) for j in range(3)]
        stacked = Matrix(F5, len(vecs) + 1, 9, vecs + [target])
        assert stacked.rank() == Matrix(F5, len(vecs), 9, vecs).rank()


class TestMonomorphism:
    def test_identity_is_mono(self):
        pres, one, two = lambda2_reps()
        ident = Morphism(two, two, {0: Matrix.identity(F2, 2)})
        assert is_monomorphism(ident)

    def test_zero_from_nonzero_is_not(self):
        pres, one, two = lambda2_reps()
        zero = Morphism(one, two, {0: Matrix.zeros(F2, 2, 1)})
        assert not is_monomorphism(zero)

    def test_column_embedding_is_mono(self):
        pres, one, two = lambda2_reps()
        f = hom_basis(one, two)[0]
        assert is_monomorphism(f)

    def test_non_homomorphism_raises(self):
        pres, one, two = lambda2_reps()
        junk = Morphism(two, one, {0: Matrix(F2, 1, 2, [[1, 0]])})
        with pytest.raises(ValueError):
            is_monomorphism(junk)

    def test_composition(self):
        pres, one, two = lambda2_reps()
        into = hom_basis(one, two)[0]
        onto = hom_basis(two, one)[0]
        around = onto.compose(into)
        assert around.source == one and around.target == one
        assert around.maps[0] == onto.maps[0] @ into.maps[0]
        with pytest.raises(ValueError):
            into.compose(into)


class TestGlAction:
    def test_identity_acts_trivially(self):
        pres, one, two = lambda2_reps()
        g = {0: Matrix.identity(F2, 2)}
        assert gl_action(g, two) == two

    def test_swap_conjugation(self):
        pres, one, two = lambda2_reps()
        g = {0: Matrix(F2, 2, 2, [[0, 1], [1, 0]])}
        moved = gl_action(g, two)
        assert moved.mats["e"] == Matrix(F2, 2, 2, [[0, 0], [1, 0]])
        assert moved.is_valid()

    def test_one_dim_scaling(self):
        pres = family_a(1, 2, 1)
        rep = Representation(pres, F5, {0: 1, 1: 1}, {
            "e0": Matrix(F5, 1, 1, [[0]]),
            "e1": Matrix(F5, 1, 1, [[0]]),
            "a1": Matrix(F5, 1, 1, [[1]]),
        })
        g = {0: Matrix(F5, 1, 1, [[2]]), 1: Matrix(F5, 1, 1, [[3]])}
        moved = gl_action(g, rep)
        # loops stay zero; the arrow scales by 2/3
        assert moved.mats["e0"].is_zero() and moved.mats["e1"].is_zero()
        assert moved.mats["a1"][0, 0] == F5.div(2, 3)

    def test_singular_rejected(self):
        pres, one, two = lambda2_reps()
        with pytest.raises(ZeroDivisionError):
            gl_action({0: Matrix.zeros(F2, 2, 2)}, two)

    def test_missing_vertex_rejected(self):
        pres, one, two = lambda2_reps()
        with pytest.raises(ValueError):
            gl_action({}, two)

    @settings(max_examples=25, deadline=None, derandomize=True)
    @given(st.integers(0, 10**6))
    def test_action_properties(self, seed):
        rng = random.Random(seed)
        pres = family_a_prime_commuting(2)
        rep = random_two_vertex_rep(pres, F3, 2, 2, rng)
        g = random_gl(F3, rep.dims, rng)
        h = random_gl(F3, rep.dims, rng)
        moved = gl_action(g, rep)
        assert moved.is_valid()
        gh = {x: g[x] @ h[x] for x in g}
        assert gl_action(g, gl_action(h, rep)) == gl_action(gh, rep)
        # Hom dimension is an isomorphism invariant
        other = random_two_vertex_rep(pres, F3, 1, 2, rng)
        assert len(hom_basis(moved, other)) == len(hom_basis(rep, other))


class TestSimpleAndSums:
    def test_simple_dimensions(self):
        pres = family_a(1, 2, 1)
        s0 = simple_module(pres, F2, 0)
        s1 = simple_module(pres, F2, 1)
        assert s0.dims == {0: 1, 1: 0}
        assert s1.dims == {0: 0, 1: 1}
        assert s0.is_valid() and s1.is_valid()

    def test_simples_valid_for_all_families(self):
        for pres in (family_a(2, 3, 2), family_a_prime_commuting(3),
                     family_b(1, 4)):
            for x in pres.quiver.vertices:
                assert simple_module(pres, F3, x).is_valid()

    def test_direct_sum_of_simples(self):
        pres = family_a(1, 2, 1)
        both = direct_sum(simple_module(pres, F2, 0),
                          simple_module(pres, F2, 1))
        assert both.dims == {0: 1, 1: 1}
        assert both.mats["a1"].is_zero()
        assert both.is_valid()

    def test_sum_with_zero_module(self):
        pres, one, two = lambda2_reps()
        zero = Representation.zero(pres, F2, {0: 0})
        assert direct_sum(two, zero).mats["e"] == two.mats["e"]

    def test_matches_zero_block_extension(self):
        from qvl.extensions import build_extension, zero_blocks
        pres, one, two = lambda2_reps()
        blocks = zero_blocks(pres, F2, two.dims, one.dims)
        middle, _, _ = build_extension(one, two, blocks)
        assert middle == direct_sum(two, one)


class TestCokernel:
    def test_identity_has_zero_cokernel(self):
        pres, one, two = lambda2_reps()
        ident = Morphism(two, two, {0: Matrix.identity(F2, 2)})
        quo, proj = cokernel(ident)
        assert quo.total_dim() == 0

    def test_embedding_cokernel(self):
        pres, one, two = lambda2_reps()
        f = hom_basis(one, two)[0]  # basis column (1,0)^T
        quo, proj = cokernel(f)
        assert quo.dims == {0: 1}
        assert quo.mats["e"].is_zero()
        assert quo.is_valid()
        assert (proj.maps[0] @ f.maps[0]).is_zero()
        assert proj.maps[0].rank() == 1

    def test_non_mono_rejected(self):
        pres, one, two = lambda2_reps()
        zero = Morphism(one, two, {0: Matrix.zeros(F2, 2, 1)})
        with pytest.raises(ValueError):
            cokernel(zero)

    @settings(max_examples=20, deadline=None, derandomize=True)
    @given(st.integers(0, 10**6))
    def test_rank_bookkeeping(self, seed):
        rng = random.Random(seed)
        pres = family_lambda(2)
        small = random_lambda_rep(2, F5, 1, rng)
        big = random_lambda_rep(2, F5, 3, rng)
        monos = [m for m in _hom_combos(small, big) if _is_mono(m)]
        if not monos:
            return
        mor = monos[0]
        quo, proj = cokernel(mor)
        assert proj.intertwines()
        assert quo.is_valid()
        for x in big.pres.quiver.vertices:
            assert (proj.maps[x] @ mor.maps[x]).is_zero()
            assert proj.maps[x].rank() == big.dims[x] - small.dims[x]

    def test_block_inclusion_recovers_quotient(self):
        from qvl.extensions import build_extension
        pres, one, two = lambda2_reps()
        blocks = {"e": Matrix(F2, 2, 1, [[1], [0]])}
        middle, incl, proj = build_extension(one, two, blocks)
        quo, cproj = cokernel(incl)
        assert quo.dims == one.dims
        assert quo.mats["e"] == one.mats["e"]


def _hom_combos(src, dst):
    import itertools
    basis = hom_basis(src, dst)
    field = src.field
    for coeffs in itertools.product(field.elements(), repeat=len(basis)):
        maps = {}
        for x in src.pres.quiver.vertices:
            acc = Matrix.zeros(field, dst.dims[x], src.dims[x])
            for c, mor in zip(coeffs, basis):
                if c:
                    acc = acc + mor.maps[x].scale(c)
            maps[x] = acc
        yield Morphism(src, dst, maps)


def _is_mono(mor):
    return all(mor.maps[x].rank() == mor.source.dims[x]
               for x in mor.source.pres.quiver.vertices)
