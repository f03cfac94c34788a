"""Module vectors, the algebra-valued inner product and orthogonal sampling."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cstar_jensen as cj
from cstar_jensen.errors import InvalidMode, ShapeError, SpaceMismatch

from support import SHAPES, random_element, seeds


def oracle_inner(x, y):
    """Plain double loop over coordinates and blocks."""
    shape = x.space.algebra
    blocks = [np.zeros((d, d), dtype=complex) for d in shape.block_dims]
    for xc, yc in zip(x.coords, y.coords):
        for k in range(len(blocks)):
            a = np.asarray(xc.blocks[k])
            b = np.asarray(yc.blocks[k])
            blocks[k] = blocks[k] + a @ b.conj().T
    return cj.AlgebraElement(shape, blocks)


@st.composite
def space_and_seed(draw):
    shape = cj.AlgebraShape(draw(st.sampled_from(SHAPES)))
    rank = draw(st.integers(min_value=1, max_value=4))
    return cj.ModuleSpace(shape, rank), draw(seeds())


class TestInnerProduct:
    @given(space_and_seed())
    def test_matches_loop_oracle(self, case):
        space, seed = case
        rng = np.random.default_rng(seed)
        x = cj.sample_vector(space, rng)
        y = cj.sample_vector(space, rng)
        assert cj.residual(cj.inner_product(x, y), oracle_inner(x, y)) < 1e-14

    @given(space_and_seed())
    def test_hermitian_symmetry(self, case):
        space, seed = case
        rng = np.random.default_rng(seed)
        x = cj.sample_vector(space, rng)
        y = cj.sample_vector(space, rng)
        lhs = cj.inner_product(x, y)
        rhs = cj.adjoint(cj.inner_product(y, x))
        assert cj.residual(lhs, rhs) < 1e-14

    @given(space_and_seed())
    def test_self_pairing_positive(self, case):
        space, seed = case
        x = cj.sample_vector(space, np.random.default_rng(seed))
        gram = cj.inner_product(x, x)
        lo, _ = cj.spectrum_bounds(gram)
        assert lo >= -1e-12

    def test_zero_iff_zero_vector(self):
        space = cj.ModuleSpace(cj.AlgebraShape((2, 1)), 3)
        assert cj.module_norm(space.zero()) == 0.0
        assert cj.module_norm(space.basis_vector(1)) == pytest.approx(1.0, abs=1e-15)

    @given(space_and_seed())
    def test_first_slot_action(self, case):
        # <b.x, y> = b <x, y> and <x, b.y> = <x, y> b*
        space, seed = case
        rng = np.random.default_rng(seed)
        b = random_element(space.algebra, rng)
        x = cj.sample_vector(space, rng)
        y = cj.sample_vector(space, rng)
        lhs = cj.inner_product(cj.act(b, x), y)
        rhs = cj.mul(b, cj.inner_product(x, y))
        assert cj.residual(lhs, rhs) < 1e-12
        lhs = cj.inner_product(x, cj.act(b, y))
        rhs = cj.mul(cj.inner_product(x, y), cj.adjoint(b))
        assert cj.residual(lhs, rhs) < 1e-12

    @given(space_and_seed())
    def test_cauchy_schwarz(self, case):
        space, seed = case
        rng = np.random.default_rng(seed)
        x = cj.sample_vector(space, rng)
        y = cj.sample_vector(space, rng)
        bound = cj.module_norm(x) * cj.module_norm(y)
        assert cj.cstar_norm(cj.inner_product(x, y)) <= bound * (1.0 + 1e-12)


class TestAction:
    @given(space_and_seed())
    def test_action_multiplicative(self, case):
        space, seed = case
        rng = np.random.default_rng(seed)
        a = random_element(space.algebra, rng)
        b = random_element(space.algebra, rng)
        x = cj.sample_vector(space, rng)
        lhs = cj.act(cj.mul(a, b), x)
        rhs = cj.act(a, cj.act(b, x))
        assert cj.vec_residual(lhs, rhs) < 1e-12

    @given(space_and_seed())
    def test_unit_acts_trivially(self, case):
        space, seed = case
        x = cj.sample_vector(space, np.random.default_rng(seed))
        assert cj.vec_residual(cj.act(cj.unit(space.algebra), x), x) == 0.0

    @given(space_and_seed())
    def test_action_distributes(self, case):
        space, seed = case
        rng = np.random.default_rng(seed)
        b = random_element(space.algebra, rng)
        x = cj.sample_vector(space, rng)
        y = cj.sample_vector(space, rng)
        lhs = cj.act(b, cj.vec_add(x, y))
        rhs = cj.vec_add(cj.act(b, x), cj.act(b, y))
        assert cj.vec_residual(lhs, rhs) < 1e-13

    def test_wrong_algebra_rejected(self):
        space = cj.ModuleSpace(cj.AlgebraShape((2,)), 2)
        b = cj.unit(cj.AlgebraShape((1, 1)))
        with pytest.raises((ShapeError, SpaceMismatch)):
            cj.act(b, space.zero())


class TestSampling:
    def test_deterministic_in_seed(self):
        space = cj.ModuleSpace(cj.AlgebraShape((2, 1)), 3)
        x1 = cj.sample_vector(space, [5, 1])
        x2 = cj.sample_vector(space, [5, 1])
        x3 = cj.sample_vector(space, [5, 2])
        assert cj.vec_residual(x1, x2) == 0.0
        assert cj.vec_residual(x1, x3) > 0.0

    def test_mean_square_norm(self):
        # complex standard normal coordinate: E |x|^2 = 2
        space = cj.ModuleSpace(cj.AlgebraShape((1,)), 1)
        rng = np.random.default_rng(99)
        total = 0.0
        n = 4000
        for _ in range(n):
            x = cj.sample_vector(space, rng)
            total += cj.cstar_norm(cj.inner_product(x, x))
        assert total / n == pytest.approx(2.0, rel=0.1)


class TestOrthogonalSamplers:
    def make_space(self):
        return cj.ModuleSpace(cj.AlgebraShape((2, 1)), 4)

    def test_disjoint_pairs_exactly_orthogonal(self):
        space = self.make_space()
        sampler = cj.disjoint_support_sampler(space, [0, 1], [2, 3])
        for i, (x, y) in enumerate(cj.orthogonal_pairs(sampler, 25, [3])):
            assert cj.cstar_norm(cj.inner_product(x, y)) == 0.0
            assert cj.module_norm(x) > 0.0 and cj.module_norm(y) > 0.0

    def test_disjoint_rejects_overlap(self):
        space = self.make_space()
        with pytest.raises(InvalidMode):
            cj.disjoint_support_sampler(space, [0, 1], [1, 2])

    def test_disjoint_rejects_out_of_range(self):
        space = self.make_space()
        with pytest.raises(InvalidMode):
            cj.disjoint_support_sampler(space, [0], [4])

    def test_disjoint_rejects_empty_side(self):
        space = self.make_space()
        with pytest.raises(InvalidMode):
            cj.disjoint_support_sampler(space, [], [1])

    def test_pair_image_orthogonal_within_tol(self):
        pair = cj.interleave_pair(0.25, 8)
        sampler = cj.pair_image_sampler(pair)
        for x, y in cj.orthogonal_pairs(sampler, 25, [11]):
            assert cj.is_orthogonal(x, y)

    def test_explicit_cycles_in_order(self):
        space = self.make_space()
        pairs = [
            (space.basis_vector(0), space.basis_vector(1)),
            (space.basis_vector(2), space.basis_vector(3)),
        ]
        sampler = cj.explicit_sampler(space, pairs)
        drawn = list(cj.orthogonal_pairs(sampler, 5, [0]))
        assert cj.vec_residual(drawn[0][0], pairs[0][0]) == 0.0
        assert cj.vec_residual(drawn[1][0], pairs[1][0]) == 0.0
        assert cj.vec_residual(drawn[4][0], pairs[0][0]) == 0.0

    def test_explicit_rejects_foreign_vectors(self):
        space = self.make_space()
        other = cj.ModuleSpace(space.algebra, 2)
        with pytest.raises(InvalidMode):
            cj.explicit_sampler(space, [(other.zero(), other.zero())])

    def test_sampler_streams_are_reproducible(self):
        space = self.make_space()
        sampler = cj.disjoint_support_sampler(space, [0, 2], [1, 3])
        first = list(cj.orthogonal_pairs(sampler, 10, [7, 7]))
        second = list(cj.orthogonal_pairs(sampler, 10, [7, 7]))
        for (x1, y1), (x2, y2) in zip(first, second):
            assert cj.vec_residual(x1, x2) == 0.0
            assert cj.vec_residual(y1, y2) == 0.0


class TestVectorSerialization:
    @given(space_and_seed())
    def test_roundtrip(self, case):
        space, seed = case
        x = cj.sample_vector(space, np.random.default_rng(seed))
        back = cj.vector_from_obj(x.to_obj(), space)
        assert cj.vec_residual(back, x) == 0.0

    def test_rank_mismatch(self):
        space = cj.ModuleSpace(cj.AlgebraShape((1,)), 2)
        other = cj.ModuleSpace(cj.AlgebraShape((1,)), 3)
        with pytest.raises(SpaceMismatch):
            cj.vector_from_obj(space.zero().to_obj(), other)
