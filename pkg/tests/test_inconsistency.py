import time
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import pc_matrices, random_pc, weight_vectors
from pcrank import (
    DEFAULT_RI,
    DomainError,
    RILookupError,
    RITable,
    Triad,
    build_matrix,
    consistency_ratio,
    estimate_ri,
    induced_matrix,
    inconsistency_report,
    is_consistent,
    koczkodaj_ki,
    koczkodaj_local,
    saaty_ci,
)
from pcrank.inconsistency import parse_ri_table
from pcrank.montecarlo import GeneratorConfig, generate_matrix

EXAMPLE_EXACT = [
    [F(1), F(1, 2), F(2), F(5)],
    [F(2), F(1), F(4), F(4)],
    [F(1, 2), F(1, 4), F(1), F(5)],
    [F(1, 5), F(1, 4), F(1, 5), F(1)],
]


class TestCI:
    @given(weight_vectors(min_n=2, max_n=9))
    def test_consistent_zero(self, w):
        assert abs(saaty_ci(induced_matrix(w))) <= 1e-9

    def test_worked_example_against_oracle(self, example_matrix):
        lam, _ = oracles.principal_eigenpair(example_matrix.entries.tolist())
        assert saaty_ci(example_matrix) == pytest.approx((lam - 4) / 3, abs=1e-8)

    def test_all_ones(self):
        assert saaty_ci(build_matrix([1] * 6, 4)) == 0.0

    @given(pc_matrices(min_n=2))
    def test_nonnegative(self, C):
        assert saaty_ci(C) >= -1e-9

    def test_ci_identity(self, example_matrix):
        rep = inconsistency_report(example_matrix)
        assert rep.ci == pytest.approx((rep.lambda_max - 4) / 3, abs=1e-12)


class TestCR:
    def test_consistent_five(self):
        C = induced_matrix([5, 4, 3, 2, 1])
        assert abs(consistency_ratio(C, RITable({5: 0.37}))) <= 1e-9

    def test_arithmetic(self, example_matrix):
        ci = saaty_ci(example_matrix)
        assert consistency_ratio(example_matrix, RITable({4: 0.9})) == pytest.approx(ci / 0.9, rel=1e-12)
        assert 0.06 / 0.9 == pytest.approx(0.0667, abs=1e-4)

    def test_missing_order(self):
        C = induced_matrix(np.arange(1, 12))
        with pytest.raises(RILookupError):
            consistency_ratio(C, DEFAULT_RI)

    def test_default_table(self):
        assert dict(DEFAULT_RI.values) == {3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32,
                                           8: 1.41, 9: 1.45, 10: 1.49}

    def test_table_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            RITable({3: 0.0})

    def test_parse_table(self):
        t = parse_ri_table("# mine\n3 = 0.52\n4=0.89  # note\n\n")
        assert t[3] == 0.52 and t[4] == 0.89 and 5 not in t

    def test_parse_table_garbage(self):
        with pytest.raises(DomainError):
            parse_ri_table("three = 0.5")


class TestEstimateRI:
    def test_sanity_band(self):
        assert 0.5 <= estimate_ri(3, 100_000, seed=7) <= 0.6

    def test_single_sample_is_that_matrix(self):
        # reproduce the single draw independently from the same generator
        from pcrank.inconsistency import SAATY_SCALE
        rng = np.random.default_rng(11)
        u = np.array(SAATY_SCALE)[rng.integers(0, 17, size=(1, 3))][0]
        assert estimate_ri(3, 1, seed=11) == pytest.approx(saaty_ci(build_matrix(u, 3)), abs=1e-12)

    def test_deterministic(self):
        assert estimate_ri(4, 500, 3) == estimate_ri(4, 500, 3)

    def test_order_two_rejected(self):
        with pytest.raises(DomainError):
            estimate_ri(2, 10, 0)


class TestKoczkodaj:
    def test_local_consistent(self):
        C = induced_matrix([0.4, 0.35, 0.25])
        assert koczkodaj_local(C, 0, 1, 2) == pytest.approx(0.0, abs=1e-15)

    def test_local_direct(self):
        # c_13 = 2, c_12 = 1, c_23 = 1
        C = build_matrix([1, 2, 1], 3)
        assert koczkodaj_local(C, 0, 1, 2) == 0.5

    def test_local_example_triad(self, example_matrix):
        # c14 = 5, c12 c24 = 2 -> min(|1 - 5/2|, |1 - 2/5|)
        assert koczkodaj_local(example_matrix, 0, 1, 3) == pytest.approx(0.6, abs=1e-15)

    @pytest.mark.parametrize("idx", [(0, 0, 1), (0, 1, 4), (-1, 1, 2)])
    def test_local_bad_indices(self, example_matrix, idx):
        with pytest.raises(DomainError):
            koczkodaj_local(example_matrix, *idx)

    def test_ki_worked_example_exhaustive(self, example_matrix):
        exact, arg = oracles.ki_exact(EXAMPLE_EXACT)
        ki, triad = koczkodaj_ki(example_matrix)
        assert exact == F(4, 5) and arg == (1, 2, 3)
        assert ki == pytest.approx(float(exact), abs=1e-15)
        assert triad.indices == arg

    def test_ki_consistent(self):
        ki, triad = koczkodaj_ki(induced_matrix([0.1, 0.2, 0.3, 0.4]))
        assert ki <= 1e-15
        assert isinstance(triad, Triad)

    def test_single_triad(self):
        ki, triad = koczkodaj_ki(build_matrix([1, 2, 1], 3))
        assert (ki, triad.indices) == (0.5, (0, 1, 2))

    def test_order_two_rejected(self):
        with pytest.raises(DomainError):
            koczkodaj_ki(build_matrix([3], 2))

    def test_tie_break_lexicographic(self):
        ki, triad = koczkodaj_ki(build_matrix([1] * 6, 4))
        assert triad.indices == (0, 1, 2)

    @settings(max_examples=300)
    @given(pc_matrices(min_n=3, max_n=6))
    def test_unordered_equals_ordered_enumeration(self, C):
        ki, triad = koczkodaj_ki(C)
        assert ki == pytest.approx(oracles.ki_ordered(C.entries.tolist()), abs=1e-12)
        assert koczkodaj_local(C, *triad.indices) == ki

    @given(pc_matrices(min_n=3, max_log=30))
    def test_range(self, C):
        ki, _ = koczkodaj_ki(C)
        assert 0 <= ki < 1

    @given(pc_matrices(min_n=3, max_n=7), st.randoms())
    def test_permutation_invariance(self, C, rnd):
        perm = list(range(C.n))
        rnd.shuffle(perm)
        P = C.permuted(perm)
        assert koczkodaj_ki(P)[0] == pytest.approx(koczkodaj_ki(C)[0], abs=1e-12)
        assert saaty_ci(P) == pytest.approx(saaty_ci(C), abs=1e-10)

    def test_large_order_fast(self):
        C = random_pc(np.random.default_rng(0), 50)
        t0 = time.perf_counter()
        ki, _ = koczkodaj_ki(C)
        assert time.perf_counter() - t0 < 1.0
        assert 0 < ki < 1


def _generated_corpus():
    rng = np.random.default_rng(2024)
    for t in range(300):
        n = 3 + t % 5
        d = 1.0 if t % 3 == 0 else float(rng.uniform(1.1, 10))
        yield generate_matrix(GeneratorConfig(n=n, d=d), int(rng.integers(2**32)))


def test_zero_index_iff_consistent_on_generated():
    for C in _generated_corpus():
        ki, _ = koczkodaj_ki(C)
        assert (ki <= 1e-9) == is_consistent(C, 1e-9)
        assert (abs(saaty_ci(C)) <= 1e-9) == is_consistent(C, 1e-7)


def test_report_order_two(example_matrix):
    rep = inconsistency_report(build_matrix([4], 2))
    assert rep.ki is None and rep.worst_triad is None and rep.cr is None and rep.ci == 0
    rep = inconsistency_report(example_matrix)
    assert rep.acceptable == (rep.cr <= 0.1)
