import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import EXAMPLE_EVM, EXAMPLE_GMM, pc_matrices, random_pc, weight_vectors
from pcrank import (
    PriorityVector,
    ShapeError,
    beta_grid,
    build_matrix,
    chebyshev,
    comp_lower_matrices,
    comp_matrices,
    comp_max_matrices,
    comp_upper_matrices,
    comp_vectors,
    compatibility,
    evm,
    gmm,
    induced_matrix,
    kendall_distance,
    koczkodaj_ki,
    manhattan,
)

A2 = build_matrix([2], 2)
B2 = build_matrix([4], 2)


@st.composite
def matrix_pairs(draw, min_n=2, max_n=7):
    n = draw(st.integers(min_n, max_n))
    a = draw(pc_matrices(min_n=n, max_n=n))
    b = draw(pc_matrices(min_n=n, max_n=n))
    return a, b


@st.composite
def vector_pairs(draw, min_n=2, max_n=8):
    n = draw(st.integers(min_n, max_n))
    return PriorityVector(draw(weight_vectors(n=n))), PriorityVector(draw(weight_vectors(n=n)))


class TestMatrixCompatibility:
    @given(pc_matrices())
    def test_identical(self, C):
        rep = compatibility(C, C)
        for v in (rep.comp, rep.comp_lower, rep.comp_upper, rep.comp_max):
            assert v == pytest.approx(1.0, abs=1e-12)

    def test_two_by_two(self):
        # (1/4)(1 + 2/4 + 4/2 + 1)
        assert comp_matrices(A2, B2) == pytest.approx(1.125, abs=1e-15)
        assert comp_upper_matrices(A2, B2) == pytest.approx(2.0, abs=1e-15)
        assert comp_lower_matrices(A2, B2) == pytest.approx(0.5, abs=1e-15)
        assert comp_max_matrices(A2, B2) == pytest.approx(2.0, abs=1e-15)

    def test_example_vs_induced_gmm(self, example_matrix):
        other = induced_matrix(gmm(example_matrix))
        expect = oracles.compat_loops(example_matrix.entries.tolist(), other.entries.tolist())
        rep = compatibility(example_matrix, other)
        got = (rep.comp, rep.comp_lower, rep.comp_upper, rep.comp_max)
        np.testing.assert_allclose(got, expect, rtol=1e-13)

    @given(matrix_pairs())
    def test_matches_loop_oracle(self, pair):
        a, b = pair
        rep = compatibility(a, b)
        expect = oracles.compat_loops(a.entries.tolist(), b.entries.tolist())
        np.testing.assert_allclose((rep.comp, rep.comp_lower, rep.comp_upper, rep.comp_max),
                                   expect, rtol=1e-12)

    @settings(max_examples=300)
    @given(matrix_pairs())
    def test_ordering_remark(self, pair):
        rep = compatibility(*pair)
        assert rep.ordered(1e-12)
        assert rep.comp >= 1 - 1e-12
        assert rep.comp_lower <= 1 + 1e-12 <= rep.comp_upper + 2e-12

    @given(st.floats(1e-4, 1e4), st.floats(1e-4, 1e4))
    def test_two_by_two_lower_is_reciprocal_of_upper(self, x, y):
        rep = compatibility(build_matrix([x], 2), build_matrix([y], 2))
        assert rep.comp_lower == pytest.approx(1 / rep.comp_upper, rel=1e-15)
        assert rep.comp_max == pytest.approx(rep.comp_upper, rel=1e-15)

    def test_shape_mismatch(self, example_matrix):
        for fn in (comp_matrices, comp_upper_matrices, comp_lower_matrices, comp_max_matrices):
            with pytest.raises(ShapeError):
                fn(example_matrix, A2)

    def test_random_five_by_five(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            a, b = random_pc(rng, 5), random_pc(rng, 5)
            assert comp_upper_matrices(a, b) >= comp_matrices(a, b)
            assert comp_lower_matrices(a, b) <= comp_matrices(a, b)


class TestVectors:
    def test_beta_equal_vectors(self):
        w = PriorityVector([0.2, 0.3, 0.5])
        np.testing.assert_allclose(beta_grid(w, w).values, np.ones((3, 3)), rtol=1e-15)

    def test_beta_direct(self):
        g = beta_grid(PriorityVector([2 / 3, 1 / 3]), PriorityVector([0.5, 0.5]))
        np.testing.assert_allclose(g.values, [[1, 2], [0.5, 1]], rtol=1e-15)

    @given(vector_pairs())
    def test_beta_reciprocal(self, pair):
        b = beta_grid(*pair).values
        np.testing.assert_allclose(b * b.T, 1.0, rtol=1e-12)
        np.testing.assert_array_equal(np.diag(b), 1.0)

    def test_comp_vectors_equal(self):
        w = PriorityVector([0.1, 0.6, 0.3])
        rep = comp_vectors(w, w)
        assert (rep.comp, rep.comp_lower, rep.comp_upper, rep.comp_max) == pytest.approx((1, 1, 1, 1))

    def test_comp_vectors_two(self):
        rep = comp_vectors(PriorityVector([2 / 3, 1 / 3]), PriorityVector([0.5, 0.5]))
        assert rep.comp == pytest.approx(1.125, abs=1e-15)

    @given(vector_pairs())
    def test_beta_route_equals_matrix_route(self, pair):
        comp_vectors(*pair, cross_check=True)

    @given(vector_pairs(), st.floats(1e-3, 1e3))
    def test_scale_invariant(self, pair, alpha):
        w1, w2 = pair
        a = comp_vectors(w1, w2)
        b = comp_vectors(PriorityVector(alpha * w1.weights), w2)
        assert b.comp == pytest.approx(a.comp, rel=1e-12)
        assert b.comp_max == pytest.approx(a.comp_max, rel=1e-12)

    def test_worked_example_within_bound_chain(self, example_matrix):
        ki, _ = koczkodaj_ki(example_matrix)
        k2 = (1 - ki) ** 2
        rep = comp_vectors(evm(example_matrix).weights, gmm(example_matrix), cross_check=True)
        assert k2 <= rep.comp_lower <= rep.comp <= rep.comp_upper <= rep.comp_max <= 1 / k2

    def test_length_mismatch(self):
        a, b = PriorityVector([1, 1]), PriorityVector([1, 1, 1])
        for fn in (beta_grid, comp_vectors, manhattan, chebyshev, kendall_distance):
            with pytest.raises(ShapeError):
                fn(a, b)


class TestDistances:
    def test_identical(self):
        w = PriorityVector([0.2, 0.8])
        assert manhattan(w, w) == 0 and chebyshev(w, w) == 0 and kendall_distance(w, w) == 0

    def test_near_extremes(self):
        a, b = PriorityVector([0.999, 0.001]), PriorityVector([0.001, 0.999])
        assert manhattan(a, b) == pytest.approx(1.996, abs=1e-12)

    def test_printed_vectors(self):
        # printed vectors as given: |diffs| = .012 .006 .004 .003
        a, b = np.array(EXAMPLE_EVM), np.array(EXAMPLE_GMM)
        assert manhattan(a, b) == pytest.approx(0.025, abs=1e-12)
        assert chebyshev(a, b) == pytest.approx(0.012, abs=1e-12)
        assert kendall_distance(a, b) == 0

    @pytest.mark.parametrize("n", [2, 3, 6, 9])
    def test_kendall_reversed(self, n):
        asc = PriorityVector(np.arange(1, n + 1))
        desc = PriorityVector(np.arange(n, 0, -1))
        assert kendall_distance(asc, desc) == n * (n - 1) // 2

    @given(vector_pairs(min_n=2, max_n=7))
    def test_kendall_matches_pair_count(self, pair):
        w1, w2 = pair
        a, b = w1.weights, w2.weights
        n = len(a)
        key = lambda w, i: (-w[i], i)  # noqa: E731
        disc = sum(
            (key(a, i) < key(a, j)) != (key(b, i) < key(b, j))
            for i in range(n) for j in range(i + 1, n)
        )
        assert kendall_distance(w1, w2) == disc

    def test_kendall_ties_broken_by_index(self):
        assert kendall_distance(PriorityVector([1, 1, 2]), PriorityVector([1, 2, 2])) == 2

    @given(vector_pairs())
    def test_chebyshev_le_manhattan(self, pair):
        assert chebyshev(*pair) <= manhattan(*pair) + 1e-15
        assert 0 <= manhattan(*pair) <= 2

    @given(st.integers(2, 7).flatmap(lambda n: st.tuples(*[weight_vectors(n=n)] * 3)))
    def test_metric_axioms(self, triple):
        x, y, z = (PriorityVector(v) for v in triple)
        for d in (manhattan, chebyshev):
            assert d(x, y) == pytest.approx(d(y, x), abs=1e-15)
            assert d(x, z) <= d(x, y) + d(y, z) + 1e-15
