import numpy as np
import pytest

from mopls.sampling import latin_hypercube, make_rng


class TestLatinHypercube:
    def test_stratification_every_dimension(self):
        for seed in range(20):
            n, d = 8, 3
            X = latin_hypercube(n, d, make_rng(seed, 0))
            for j in range(d):
                strata = np.floor(X[:, j] * n).astype(int)
                assert sorted(strata) == list(range(n))

    def test_quartile_example(self):
        X = latin_hypercube(4, 2, make_rng(7, 0))
        for j in range(2):
            assert sorted(np.floor(X[:, j] * 4).astype(int)) == [0, 1, 2, 3]

    def test_single_point_in_unit_cube(self):
        X = latin_hypercube(1, 5, make_rng(0, 0))
        assert X.shape == (1, 5)
        assert np.all((X >= 0) & (X < 1))

    def test_deterministic_for_fixed_seed(self):
        a = latin_hypercube(6, 4, make_rng(42, 0))
        b = latin_hypercube(6, 4, make_rng(42, 0))
        np.testing.assert_array_equal(a, b)

    def test_marginal_uniformity(self):
        # Mean over many designs converges to 0.5 per dimension.
        rng = make_rng(3, 0)
        means = np.mean(
            [latin_hypercube(8, 2, rng).mean(axis=0) for _ in range(10_000)], axis=0
        )
        np.testing.assert_allclose(means, 0.5, atol=0.02)

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            latin_hypercube(0, 2, make_rng(0, 0))


class TestRngStreams:
    def test_same_key_reproduces(self):
        a = make_rng(9, 1, 2).random(5)
        b = make_rng(9, 1, 2).random(5)
        np.testing.assert_array_equal(a, b)

    def test_distinct_streams_differ(self):
        a = make_rng(9, 1).random(5)
        b = make_rng(9, 2).random(5)
        assert not np.array_equal(a, b)
