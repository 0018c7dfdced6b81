import numpy as np
import pytest

from easense.hyperspace import HyperSpace, ParamSpec, preset
from easense.sampling import (
    MorrisPlan,
    SobolPlan,
    load_plan,
    morris_lhs_sample,
    morris_sample,
    save_plan,
    sobol_sample,
)


def _unit_space(k):
    return HyperSpace(tuple(ParamSpec(f"x{i}", "continuous", 0, 1) for i in range(k)))


class TestMorrisCounts:
    @pytest.mark.parametrize("name,r,total", [("cmaes", 50, 300), ("de", 50, 400),
                                              ("nsga3", 20, 140), ("moead", 20, 160)])
    def test_total_points(self, name, r, total):
        plan = morris_sample(preset(name), r, 10, seed=0)
        assert plan.n_points == total
        assert plan.points().shape == (total, plan.k)

    def test_minimal_trajectory(self):
        plan = morris_sample(_unit_space(1), 1, 10, seed=0)
        t = plan.trajectories[0]
        assert t.points.shape == (2, 1)
        assert abs(t.points[1, 0] - t.points[0, 0]) == pytest.approx(plan.delta)

    def test_r_must_be_positive(self):
        with pytest.raises(ValueError):
            morris_sample(_unit_space(2), 0, 10, seed=0)


class TestTrajectoryStructure:
    @pytest.mark.parametrize("fn", [morris_sample, morris_lhs_sample])
    def test_step_property_fuzz(self, fn):
        rng = np.random.default_rng(11)
        for k in range(1, 11):
            space = _unit_space(k)
            for p in (2, 4, 10):
                plan = fn(space, 6, p, seed=int(rng.integers(10 ** 6)))
                for t in plan.trajectories:
                    diffs = np.diff(t.points, axis=0)
                    moved = np.abs(diffs) > 1e-15
                    assert (moved.sum(axis=1) == 1).all()
                    assert np.allclose(np.abs(diffs).max(axis=1), plan.delta, atol=1e-12)
                    assert sorted(t.moved_dim.tolist()) == list(range(k))
                    assert set(t.delta_signs.tolist()) <= {-1, 1}
                    # every point on the grid, inside the cube
                    scaled = t.points * (p - 1)
                    assert np.allclose(scaled, np.round(scaled), atol=1e-9)
                    assert t.points.min() >= 0 and t.points.max() <= 1

    def test_moved_dim_matches_points(self):
        plan = morris_sample(_unit_space(5), 10, 10, seed=5)
        for t in plan.trajectories:
            for j in range(5):
                d = t.moved_dim[j]
                diff = t.points[j + 1] - t.points[j]
                assert diff[d] == pytest.approx(t.delta_signs[j] * plan.delta)


class TestSeeding:
    @pytest.mark.parametrize("fn", [morris_sample, morris_lhs_sample])
    def test_bit_identical_morris(self, fn):
        a = fn(preset("de"), 12, 10, seed=99)
        b = fn(preset("de"), 12, 10, seed=99)
        assert np.array_equal(a.points(), b.points())
        c = fn(preset("de"), 12, 10, seed=100)
        assert not np.array_equal(a.points(), c.points())

    def test_bit_identical_sobol(self):
        a = sobol_sample(preset("cmaes"), 64, seed=7)
        b = sobol_sample(preset("cmaes"), 64, seed=7)
        assert np.array_equal(a.points(), b.points())


class TestMorrisLhs:
    def test_marginal_property_r_equals_p(self):
        # one start per grid cell per dimension
        for k in (1, 3):
            plan = morris_lhs_sample(_unit_space(k), 10, 10, seed=21)
            starts = np.vstack([t.points[0] for t in plan.trajectories])
            for d in range(k):
                idx = np.round(starts[:, d] * 9).astype(int)
                assert sorted(idx.tolist()) == list(range(10))

    def test_strata_recycle(self):
        plan = morris_lhs_sample(_unit_space(1), 20, 10, seed=22)
        starts = np.array([t.points[0, 0] for t in plan.trajectories])
        idx = np.round(starts * 9).astype(int)
        assert all(np.count_nonzero(idx == lvl) == 2 for lvl in range(10))

    def test_sample_counts(self):
        assert morris_lhs_sample(preset("nsga3"), 20, 10, 0).n_points == 140
        assert morris_lhs_sample(preset("moead"), 20, 10, 0).n_points == 160


class TestSobol:
    def test_column_swap_rule(self):
        plan = sobol_sample(_unit_space(4), 32, seed=3)
        for i, Ci in enumerate(plan.C):
            assert np.array_equal(Ci[:, i], plan.A[:, i])
            other = [j for j in range(4) if j != i]
            assert np.array_equal(Ci[:, other], plan.B[:, other])

    @pytest.mark.parametrize("name,N,total", [("cmaes", 100, 700), ("de", 100, 900),
                                              ("nsga3", 30, 240), ("moead", 30, 270)])
    def test_total_points(self, name, N, total):
        assert sobol_sample(preset(name), N, seed=0).n_points == total

    def test_block_layout(self):
        plan = sobol_sample(_unit_space(3), 16, seed=1)
        pts = plan.points()
        N = plan.N
        assert np.array_equal(pts[:N], plan.A)
        assert np.array_equal(pts[N:2 * N], plan.B)
        assert np.array_equal(pts[2 * N:3 * N], plan.C[0])

    def test_low_discrepancy_switch(self):
        plan = sobol_sample(_unit_space(3), 16, seed=1, low_discrepancy=True)
        assert plan.low_discrepancy
        assert plan.points().min() >= 0 and plan.points().max() <= 1

    def test_n_too_small(self):
        with pytest.raises(ValueError):
            sobol_sample(_unit_space(2), 1, seed=0)

    def test_unit_range(self):
        plan = sobol_sample(_unit_space(5), 200, seed=8)
        pts = plan.points()
        assert pts.min() >= 0.0 and pts.max() <= 1.0


class TestManifests:
    def test_morris_round_trip(self, tmp_path):
        plan = morris_lhs_sample(preset("de"), 8, 10, seed=4)
        path = tmp_path / "plan.json"
        save_plan(plan, path)
        loaded = load_plan(path)
        assert isinstance(loaded, MorrisPlan)
        assert loaded.method == "morris_lhs"
        assert np.array_equal(loaded.points(), plan.points())
        assert loaded.delta == plan.delta

    def test_sobol_round_trip(self, tmp_path):
        plan = sobol_sample(preset("moead"), 16, seed=5)
        path = tmp_path / "plan.json"
        save_plan(plan, path)
        loaded = load_plan(path)
        assert isinstance(loaded, SobolPlan)
        assert np.array_equal(loaded.points(), plan.points())
