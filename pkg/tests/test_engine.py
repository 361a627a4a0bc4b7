import numpy as np
import pytest

from mopls import engine
from mopls.core import EvaluationArchive
from mopls.errors import SelectionStarvationError
from mopls.executor import BatchEvaluator
from mopls.problems import make_problem
from mopls.sampling import make_rng


def small_params(**overrides):
    kwargs = dict(total_evals=400, init_evals=18, population=4)
    kwargs.update(overrides)
    return engine.EngineParams(**kwargs)


def archive_with(decisions, objectives, radius=0.2):
    decisions = np.asarray(decisions, dtype=float)
    objectives = np.asarray(objectives, dtype=float)
    arch = EvaluationArchive(decisions.shape[1], objectives.shape[1])
    for x, y in zip(decisions, objectives):
        arch.add(x, y, radius=radius)
    arch.recompute_pareto()
    return arch


class TestParams:
    def test_default_init_evals(self):
        assert engine.default_init_evals(8) == 18
        assert engine.default_init_evals(16) == 34
        assert engine.default_init_evals(24) == 50

    def test_budget_must_exceed_init(self):
        with pytest.raises(ValueError):
            engine.EngineParams(total_evals=18, init_evals=18, population=4)

    def test_population_positive(self):
        with pytest.raises(ValueError):
            engine.EngineParams(total_evals=100, init_evals=18, population=0)


class TestDistanceThreshold:
    def test_linear_midpoint(self):
        p = small_params(total_evals=400, init_evals=18)
        assert engine.d_thresh(209, p) == pytest.approx(0.5)

    def test_one_at_start(self):
        p = small_params()
        assert engine.d_thresh(18, p) == pytest.approx(1.0)

    def test_zero_at_budget(self):
        p = small_params()
        assert engine.d_thresh(400, p) == pytest.approx(0.0)

    def test_clamped_beyond_budget(self):
        p = small_params()
        assert engine.d_thresh(500, p) == 0.0
        assert engine.d_thresh(0, p) == 1.0


class TestCenterSelection:
    # Three mutually distant points; A and B on the Pareto front with equal
    # hypervolume contributions (tie broken toward the lower ordinal), C behind.
    X3 = [[0.1, 0.1], [0.9, 0.9], [0.5, 0.5]]

    def test_top_two_nondominated(self):
        arch = archive_with(self.X3, [[1, 2], [2, 1], [3, 3]])
        sel = engine.select_centers(arch, small_params(population=2), 18, (4.0, 4.0))
        assert sel.indices == [0, 1]

    def test_tie_breaks_to_lower_ordinal(self):
        arch = archive_with(self.X3, [[1, 2], [2, 1], [3, 3]])
        sel = engine.select_centers(arch, small_params(population=1), 18, (4.0, 4.0))
        assert sel.indices == [0]

    def test_tabu_point_skipped(self):
        arch = archive_with(self.X3, [[1, 2], [2, 1], [3, 3]])
        arch.set_tabu(1, 5)
        sel = engine.select_centers(arch, small_params(population=2), 18, (4.0, 4.0))
        assert sel.indices == [0, 2]

    def test_radius_rule_skips_nearby(self):
        # B sits 0.05 from A, inside A's ball (0.2 * d_thresh(18) = 0.2),
        # so the third-ranked C is promoted.
        X = [[0.50, 0.50], [0.55, 0.50], [0.90, 0.90]]
        Y = [[1, 2], [2, 1], [1.5, 1.5]]
        arch = archive_with(X, Y)
        sel = engine.select_centers(arch, small_params(population=2), 18, (4.0, 4.0))
        assert sel.indices == [0, 2]

    def test_radius_rule_fades_with_budget(self):
        # Same geometry at m = total_evals: d_thresh = 0, no exclusion.
        X = [[0.50, 0.50], [0.55, 0.50], [0.90, 0.90]]
        Y = [[1, 2], [2, 1], [1.5, 1.5]]
        arch = archive_with(X, Y)
        p = small_params(population=2, total_evals=400)
        sel = engine.select_centers(arch, p, 400, (4.0, 4.0))
        assert sel.indices == [0, 1]

    def test_small_pool_cycles_with_repeats(self):
        arch = archive_with([[0.1, 0.1], [0.9, 0.9]], [[1, 2], [2, 1]])
        arch.set_tabu(1, 5)
        sel = engine.select_centers(arch, small_params(population=3), 18, (4.0, 4.0))
        assert sel.indices == [0, 0, 0]

    def test_all_tabu_raises(self):
        arch = archive_with([[0.1, 0.1]], [[1, 1]])
        arch.set_tabu(0, 5)
        with pytest.raises(SelectionStarvationError):
            engine.select_centers(arch, small_params(population=1), 18, (4.0, 4.0))


class TestCandidatesAndMutation:
    def test_candidate_count_and_bounds(self):
        center = np.full(3, 0.5)
        cands = engine.generate_candidates(center, 0.2, make_rng(0, 7), 3, 500)
        assert cands.shape == (1500, 3)
        assert np.all((cands >= 0) & (cands <= 1))

    def test_candidates_deterministic(self):
        center = np.full(4, 0.3)
        a = engine.generate_candidates(center, 0.1, make_rng(5, 1), 4, 100)
        b = engine.generate_candidates(center, 0.1, make_rng(5, 1), 4, 100)
        np.testing.assert_array_equal(a, b)

    def test_candidates_concentrate_near_center(self):
        center = np.full(2, 0.5)
        cands = engine.generate_candidates(center, 0.01, make_rng(2, 0), 2, 500)
        d = np.linalg.norm(cands - center, axis=1)
        assert np.median(d) < 0.1

    def test_mutate_stays_in_bounds(self):
        rng = make_rng(11, 0)
        for _ in range(100):
            out = engine.mutate(np.array([0.0, 1.0, 0.5]), rng)
            assert np.all((out >= 0) & (out <= 1))

    def test_mutate_changes_at_least_one_coordinate_usually(self):
        # Uniform mutation draws a fresh coordinate; Gaussian can land on the
        # clip boundary it started at, so check across many draws.
        rng = make_rng(13, 0)
        center = np.full(6, 0.5)
        changed = sum(np.any(engine.mutate(center, rng) != center) for _ in range(50))
        assert changed >= 45

    def test_mutate_deterministic(self):
        a = engine.mutate(np.full(5, 0.4), make_rng(3, 2))
        b = engine.mutate(np.full(5, 0.4), make_rng(3, 2))
        np.testing.assert_array_equal(a, b)


class TestWorkerSearch:
    def test_returns_valid_decision_vector(self, rng):
        X = rng.random((30, 4))
        Y = np.array([[x[0], 1 - x[0] + x[1:].sum()] for x in X])
        from mopls.core import non_dominated_subset

        pareto = Y[non_dominated_subset(Y)]
        p = small_params(population=2, n_cand_factor=50)
        for i in range(5):
            x = engine.worker_search(
                X[0], 0.2, X, Y, pareto, np.array([11.0, 11.0]), p, make_rng(0, 1, 1, i)
            )
            assert x.shape == (4,)
            assert np.all((x >= 0) & (x <= 1))

    def test_deterministic_per_stream(self, rng):
        X = rng.random((25, 3))
        Y = rng.random((25, 2))
        from mopls.core import non_dominated_subset

        pareto = Y[non_dominated_subset(Y)]
        p = small_params(n_cand_factor=50)
        args = (X[2], 0.2, X, Y, pareto, np.array([11.0, 11.0]), p)
        a = engine.worker_search(*args, make_rng(7, 1, 3, 0))
        b = engine.worker_search(*args, make_rng(7, 1, 3, 0))
        np.testing.assert_array_equal(a, b)


class TestMemoryUpdate:
    REF = np.array([4.0, 4.0])

    def params(self):
        return small_params(population=1)

    def test_failure_halves_radius(self):
        arch = archive_with([[0.5, 0.5]], [[1.0, 1.0]])
        sel = engine.CenterSelection([0])
        new = [(np.array([0.6, 0.6]), np.array([2.0, 2.0]))]  # dominated, HI = 0
        engine.update_memory_archive(
            arch, sel, new, arch.pareto_objectives(), self.REF, self.params()
        )
        mem = arch.points[0].memory
        assert mem.radius == pytest.approx(0.1)
        assert mem.failure_count == 1

    def test_success_leaves_memory_untouched(self):
        arch = archive_with([[0.5, 0.5]], [[1.0, 1.0]])
        sel = engine.CenterSelection([0])
        new = [(np.array([0.4, 0.4]), np.array([0.5, 0.5]))]  # dominates, HI > 0
        engine.update_memory_archive(
            arch, sel, new, arch.pareto_objectives(), self.REF, self.params()
        )
        mem = arch.points[0].memory
        assert mem.radius == pytest.approx(0.2)
        assert mem.failure_count == 0

    def test_halving_trace_then_tabu_then_release(self):
        arch = archive_with([[0.5, 0.5]], [[1.0, 1.0]])
        sel = engine.CenterSelection([0])

        # Record every radius value the memory attribute passes through,
        # including the transient one between the two update phases.
        radius_log = []

        class Recording(type(arch.points[0].memory)):
            def __setattr__(self, name, value):
                if name == "radius":
                    radius_log.append(value)
                super().__setattr__(name, value)

        arch.points[0].memory = Recording(radius=0.2)
        radius_log.clear()

        # Four consecutive zero-improvement batches from the same center.
        for step in range(4):
            dummy = (np.full(2, 0.6), np.array([2.0 + step, 2.0 + step]))
            engine.update_memory_archive(
                arch, sel, [dummy], arch.pareto_objectives(), self.REF, self.params()
            )
            if step < 3:
                assert arch.points[0].memory.failure_count == step + 1
                assert 0 not in arch.tabu_ids
        # The fourth halving reaches 0.0125 and pushes the failure count to 4
        # (> threshold 3); the same update then moves the point into the tabu
        # list with tenure 5 and resets its memory.
        assert radius_log == pytest.approx([0.1, 0.05, 0.025, 0.0125, 0.2])
        mem = arch.points[0].memory
        assert 0 in arch.tabu_ids
        assert mem.tabu_count == 5
        assert mem.radius == pytest.approx(0.2)
        assert mem.failure_count == 0
        # Five further updates (other parents) tick the tenure down to release.
        for step in range(5):
            assert 0 in arch.tabu_ids
            dummy = (np.full(2, 0.7), np.array([3.0 + step, 3.0 + step]))
            engine.update_memory_archive(
                arch,
                engine.CenterSelection([1]),
                [dummy],
                arch.pareto_objectives(),
                self.REF,
                self.params(),
            )
        assert 0 not in arch.tabu_ids
        assert arch.points[0].memory.tabu_count == 0

    def test_batch_measured_against_fixed_front(self):
        # Both new points improve on the pre-batch front even though the
        # second is dominated by the first: neither counts as a failure.
        arch = archive_with([[0.2, 0.2], [0.8, 0.8]], [[1.0, 3.0], [3.0, 1.0]])
        sel = engine.CenterSelection([0, 1])
        before = arch.pareto_objectives()
        new = [
            (np.array([0.3, 0.3]), np.array([0.5, 0.5])),
            (np.array([0.7, 0.7]), np.array([0.6, 0.6])),
        ]
        engine.update_memory_archive(
            arch, sel, new, before, self.REF, small_params(population=2)
        )
        assert arch.points[0].memory.failure_count == 0
        assert arch.points[1].memory.failure_count == 0

    def test_new_points_admitted_and_pareto_refreshed(self):
        arch = archive_with([[0.5, 0.5]], [[1.0, 1.0]])
        sel = engine.CenterSelection([0])
        new = [(np.array([0.4, 0.4]), np.array([0.5, 0.5]))]
        ids = engine.update_memory_archive(
            arch, sel, new, arch.pareto_objectives(), self.REF, self.params()
        )
        assert ids == [1]
        assert len(arch) == 2
        assert arch.pareto_ids == {1}
        arch.check_invariants()

    def test_batch_size_mismatch_rejected(self):
        arch = archive_with([[0.5, 0.5]], [[1.0, 1.0]])
        with pytest.raises(ValueError):
            engine.update_memory_archive(
                arch,
                engine.CenterSelection([0, 0]),
                [(np.full(2, 0.5), np.array([1.0, 1.0]))],
                arch.pareto_objectives(),
                self.REF,
                self.params(),
            )


class TestRun:
    def run_small(self, seed=0, workers=None, **overrides):
        problem = make_problem("zdt1", 4)
        kwargs = dict(
            total_evals=30,
            init_evals=10,
            population=2,
            n_cand_factor=50,
        )
        kwargs.update(overrides)
        params = engine.EngineParams(**kwargs)
        evaluator = BatchEvaluator(problem, workers=workers)
        return engine.run(problem, params, seed, evaluator), evaluator

    def test_budget_consumed_exactly(self):
        result, evaluator = self.run_small()
        assert result.evaluations == 30
        assert evaluator.total_evaluations == 30
        assert result.iterations == 10

    def test_wall_budget_limits_iterations(self):
        problem = make_problem("zdt1", 4)
        params = engine.EngineParams(
            total_evals=10_000, init_evals=10, population=2, n_cand_factor=50
        )
        evaluator = BatchEvaluator(problem)
        result = engine.run(problem, params, 0, evaluator, wall_budget=5)
        assert result.iterations == 5
        assert result.evaluations == 10 + 5 * 2

    def test_trace_shape(self):
        result, _ = self.run_small()
        assert [row.iteration for row in result.trace] == list(range(1, 11))
        for row in result.trace:
            assert len(row.new_ids) == 2
            assert row.hv >= 0
            assert row.radii[0] <= row.radii[1] <= row.radii[2]

    def test_deterministic_across_worker_pools(self):
        a, _ = self.run_small(seed=3, workers=1)
        b, _ = self.run_small(seed=3, workers=4)
        np.testing.assert_array_equal(a.pareto_objectives, b.pareto_objectives)
        assert [r.new_ids for r in a.trace] == [r.new_ids for r in b.trace]
        assert [r.hv for r in a.trace] == [r.hv for r in b.trace]

    def test_seeds_differ(self):
        a, _ = self.run_small(seed=0)
        b, _ = self.run_small(seed=1)
        assert a.trace[-1].hv != b.trace[-1].hv

    def test_hypervolume_never_decreases(self):
        result, _ = self.run_small(seed=5)
        hvs = [row.hv for row in result.trace]
        assert all(b >= a - 1e-12 for a, b in zip(hvs, hvs[1:]))

    def test_coverage_reported_when_ideal_known(self):
        problem = make_problem("zdt1", 4)
        from mopls.hypervolume import hv_exact

        star = hv_exact(problem.pareto_front_sampler(1000), problem.reporting_ref)
        params = engine.EngineParams(
            total_evals=30, init_evals=10, population=2, n_cand_factor=50
        )
        result = engine.run(problem, params, 0, BatchEvaluator(problem), hv_star=star)
        assert all(row.hc is not None for row in result.trace)
        assert result.trace[-1].hc > 0

    def test_archive_invariants_after_run(self):
        result, _ = self.run_small(seed=2)
        result.archive.check_invariants()
