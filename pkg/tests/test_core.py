import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mopls.core import (
    EvaluationArchive,
    MemoryAttributes,
    dominates,
    non_dominated_sort,
    non_dominated_subset,
)
from mopls.errors import DimensionError, EvaluationError
from tests.conftest import brute_force_fronts, brute_force_nondominated

objvec = arrays(np.float64, 3, elements=st.floats(-10, 10, allow_nan=False))


class TestDominates:
    def test_strict_improvement(self):
        assert dominates((1, 2), (2, 3))

    def test_equal_vectors_never_dominate(self):
        assert not dominates((1, 2), (1, 2))

    def test_incomparable_pair(self):
        assert not dominates((1, 3), (3, 1))

    def test_weak_dominance(self):
        assert dominates((1, 2), (1, 3))

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            dominates((1, 2), (1, 2, 3))

    @given(objvec, objvec)
    def test_antisymmetry(self, a, b):
        assert not (dominates(a, b) and dominates(b, a))

    @given(objvec, objvec, objvec)
    def test_transitivity(self, a, b, c):
        if dominates(a, b) and dominates(b, c):
            assert dominates(a, c)


class TestNonDominatedSubset:
    def test_basic(self):
        idx = non_dominated_subset([(1, 2), (2, 1), (3, 3)])
        assert set(idx) == {0, 1}

    def test_empty(self):
        assert non_dominated_subset([]).size == 0

    def test_singleton(self):
        assert set(non_dominated_subset([(5, 5)])) == {0}

    def test_duplicates_of_nondominated_all_retained(self):
        idx = non_dominated_subset([(1, 2), (1, 2), (2, 1), (5, 5)])
        assert set(idx) == {0, 1, 2}

    @pytest.mark.parametrize("k", [2, 3])
    def test_matches_brute_force(self, rng, k):
        for _ in range(30):
            n = rng.integers(1, 200)
            Y = np.round(rng.random((n, k)), 2)  # coarse grid forces ties
            got = set(non_dominated_subset(Y))
            want = set(brute_force_nondominated(Y))
            assert got == want


class TestNonDominatedSort:
    def test_example(self):
        fronts = non_dominated_sort([(1, 2), (2, 1), (3, 3), (4, 4)])
        assert [set(f) for f in fronts] == [{0, 1}, {2}, {3}]

    def test_mutually_nondominated_single_front(self):
        fronts = non_dominated_sort([(1, 5), (2, 4), (3, 3), (5, 1)])
        assert len(fronts) == 1

    def test_chain_gives_singletons(self):
        pts = [(i, i) for i in range(5)]
        fronts = non_dominated_sort(pts)
        assert [list(f) for f in fronts] == [[0], [1], [2], [3], [4]]

    def test_fronts_partition_indices(self, rng):
        Y = rng.random((60, 2))
        fronts = non_dominated_sort(Y)
        flat = np.concatenate(fronts)
        assert sorted(flat) == list(range(60))

    def test_each_point_dominated_by_previous_front(self, rng):
        Y = np.round(rng.random((50, 3)), 1)
        fronts = non_dominated_sort(Y)
        for t in range(1, len(fronts)):
            for i in fronts[t]:
                assert any(
                    np.all(Y[j] <= Y[i]) and np.any(Y[j] < Y[i]) for j in fronts[t - 1]
                )

    def test_matches_brute_force_peeling(self, rng):
        Y = rng.random((40, 2))
        got = [set(f) for f in non_dominated_sort(Y)]
        want = [set(f) for f in brute_force_fronts(Y)]
        assert got == want

    def test_early_termination(self, rng):
        Y = rng.random((100, 2))
        fronts = non_dominated_sort(Y, stop_after=10)
        covered = sum(len(f) for f in fronts)
        assert covered >= 10
        assert covered - len(fronts[-1]) < 10


class TestArchive:
    def test_add_and_ids(self):
        a = EvaluationArchive(d=2, k=2)
        p0 = a.add([0.1, 0.2], [1.0, 2.0], radius=0.2)
        p1 = a.add([0.3, 0.4], [2.0, 1.0], radius=0.2)
        assert (p0.id, p1.id) == (0, 1)
        assert a.decisions().shape == (2, 2)

    def test_rejects_nonfinite_objectives(self):
        a = EvaluationArchive(d=1, k=2)
        with pytest.raises(EvaluationError):
            a.add([0.5], [np.nan, 1.0], radius=0.2)

    def test_rejects_out_of_cube_decision(self):
        a = EvaluationArchive(d=1, k=1)
        with pytest.raises(ValueError):
            a.add([1.5], [0.0], radius=0.2)

    def test_pareto_and_tabu_invariants(self, rng):
        a = EvaluationArchive(d=2, k=2)
        for _ in range(30):
            a.add(rng.random(2), rng.random(2), radius=0.2)
        a.recompute_pareto()
        a.set_tabu(3, tenure=5)
        a.check_invariants()
        a.clear_tabu(3)
        a.check_invariants()

    def test_memory_attributes_validation(self):
        with pytest.raises(ValueError):
            MemoryAttributes(radius=0.0)
        with pytest.raises(ValueError):
            MemoryAttributes(radius=0.1, failure_count=-1)
