import numpy as np
import pytest

from easense.hyperspace import HyperSpace, ParamSpec
from easense.indices import (
    DegenerateModelError,
    EEMatrix,
    NonFiniteOutputError,
    build_report,
    ee_matrix,
    elementary_effects,
    morris_mu_sigma,
    morris_report,
    sobol_indices,
)
from easense.sampling import Trajectory, morris_sample, sobol_sample

A_ISH, B_ISH = 7.0, 0.1


def _unit_space(k):
    return HyperSpace(tuple(ParamSpec(f"x{i}", "continuous", 0, 1) for i in range(k)))


def _ishigami(X):
    return (np.sin(X[:, 0]) + A_ISH * np.sin(X[:, 1]) ** 2
            + B_ISH * X[:, 2] ** 4 * np.sin(X[:, 0]))


def _ishigami_oracle():
    # closed-form variance decomposition of the Ishigami function
    V = A_ISH ** 2 / 8 + B_ISH * np.pi ** 4 / 5 + B_ISH ** 2 * np.pi ** 8 / 18 + 0.5
    S1 = 0.5 * (1 + B_ISH * np.pi ** 4 / 5) ** 2 / V
    S2 = (A_ISH ** 2 / 8) / V
    ST3 = (B_ISH ** 2 * np.pi ** 8 * 8 / 225) / V
    return np.array([S1, S2, 0.0]), ST3


def _apply_f(plan, f):
    Y = f(plan.points())
    k = plan.k
    return [Y[t * (k + 1):(t + 1) * (k + 1)] for t in range(plan.r)]


class TestElementaryEffects:
    def test_linear_model_exact(self):
        plan = morris_sample(_unit_space(2), 50, 10, seed=1)
        outputs = _apply_f(plan, lambda X: 3 * X[:, 0] + X[:, 1])
        ee = ee_matrix(plan.trajectories, outputs, plan.delta)
        stats = morris_mu_sigma(ee)
        assert stats.mu == pytest.approx([3.0, 1.0], abs=1e-12)
        assert stats.sigma == pytest.approx([0.0, 0.0], abs=1e-12)

    def test_constant_model(self):
        plan = morris_sample(_unit_space(3), 5, 4, seed=2)
        outputs = _apply_f(plan, lambda X: np.full(X.shape[0], 2.5))
        ee = ee_matrix(plan.trajectories, outputs, plan.delta)
        assert np.allclose(ee.values, 0.0)

    def test_product_model_hand_quotient(self):
        # f = x1 * x2; stepping x1 by +delta at x2 = 1/3 gives EE_1 = 1/3
        delta = 0.5
        traj = Trajectory(
            points=np.array([[0.0, 1 / 3], [0.5, 1 / 3], [0.5, 1 / 3 + 0.5]]),
            moved_dim=np.array([0, 1]),
            delta_signs=np.array([1, 1]),
        )
        y = traj.points[:, 0] * traj.points[:, 1]
        ee = elementary_effects(traj, y, delta)
        assert ee[0] == pytest.approx(1 / 3)
        assert ee[1] == pytest.approx(0.5)

    def test_sign_folding_gives_forward_quotient(self):
        # a backward step on a linear model still reports the +delta slope
        traj = Trajectory(
            points=np.array([[1.0, 0.0], [0.5, 0.0], [0.5, 0.5]]),
            moved_dim=np.array([0, 1]),
            delta_signs=np.array([-1, 1]),
        )
        y = 3 * traj.points[:, 0] + traj.points[:, 1]
        ee = elementary_effects(traj, y, 0.5)
        assert ee == pytest.approx([3.0, 1.0])

    def test_nonfinite_output_rejected(self):
        plan = morris_sample(_unit_space(2), 1, 4, seed=0)
        y = np.array([0.0, np.nan, 1.0])
        with pytest.raises(NonFiniteOutputError):
            elementary_effects(plan.trajectories[0], y, plan.delta)

    def test_drop_rule_tallies(self):
        plan = morris_sample(_unit_space(2), 4, 4, seed=3)
        outputs = _apply_f(plan, lambda X: X.sum(axis=1))
        outputs[1] = outputs[1].copy()
        outputs[1][0] = np.inf
        ee = ee_matrix(plan.trajectories, outputs, plan.delta)
        assert ee.r == 3
        assert ee.dropped == 1

    def test_all_dropped_raises(self):
        plan = morris_sample(_unit_space(2), 2, 4, seed=4)
        bad = [np.full(3, np.nan)] * 2
        with pytest.raises(NonFiniteOutputError):
            ee_matrix(plan.trajectories, bad, plan.delta)


class TestMorrisMuSigma:
    def test_two_point_column(self):
        stats = morris_mu_sigma(EEMatrix(np.array([[2.0], [-2.0]])))
        assert stats.mu[0] == 0.0
        assert stats.sigma[0] == pytest.approx(2.0 * np.sqrt(2.0))
        assert stats.mu_star[0] == 2.0

    def test_single_trajectory_sigma_absent(self):
        stats = morris_mu_sigma(EEMatrix(np.array([[1.0, 2.0]])))
        assert stats.sigma is None
        assert stats.mu == pytest.approx([1.0, 2.0])

    def test_report_needs_two_trajectories(self):
        with pytest.raises(ValueError):
            morris_report("morris", ("a", "b"), EEMatrix(np.array([[1.0, 2.0]])))


class TestSobolIndices:
    def _estimate(self, N, seed, jansen=False):
        space = HyperSpace(tuple(
            ParamSpec(f"x{i}", "continuous", -np.pi, np.pi) for i in range(3)))
        plan = sobol_sample(space, N, seed=seed)
        X = -np.pi + plan.points() * 2 * np.pi
        Y = _ishigami(X)
        n = plan.N
        return sobol_indices(Y[:n], Y[n:2 * n],
                             [Y[(2 + i) * n:(3 + i) * n] for i in range(3)],
                             jansen=jansen)

    def test_ishigami_first_order(self):
        S_true, ST3_true = _ishigami_oracle()
        res = self._estimate(2 ** 13, seed=0)
        assert res.S == pytest.approx(S_true, abs=0.05)
        assert res.ST[2] == pytest.approx(ST3_true, abs=0.05)

    def test_additive_model_no_interaction(self):
        space = _unit_space(3)
        plan = sobol_sample(space, 2 ** 12, seed=1)
        Y = plan.points().sum(axis=1)
        N = plan.N
        res = sobol_indices(Y[:N], Y[N:2 * N],
                            [Y[(2 + i) * N:(3 + i) * N] for i in range(3)])
        assert np.abs(res.ST - res.S).max() < 0.05

    def test_constant_model_degenerate(self):
        N = 64
        y = np.ones(N)
        with pytest.raises(DegenerateModelError):
            sobol_indices(y, y, [y, y])

    def test_consistency_monotone_in_N(self):
        S_true, _ = _ishigami_oracle()
        medians = []
        for e in range(8, 15):
            errs = []
            for seed in range(31):
                res = self._estimate(2 ** e, seed=seed)
                errs.append(np.abs(res.S - S_true).mean())
            medians.append(np.median(errs))
        assert all(b <= a for a, b in zip(medians, medians[1:]))

    def test_total_minus_first_nonnegative_within_noise(self):
        res = self._estimate(2 ** 11, seed=5)
        assert (res.ST - res.S).min() > -0.05

    def test_clamped_copies(self):
        res = self._estimate(2 ** 10, seed=6)
        assert res.S_clamped.min() >= 0.0 and res.S_clamped.max() <= 1.0
        assert res.ST_clamped.min() >= 0.0 and res.ST_clamped.max() <= 1.0

    def test_row_drop_keeps_estimators_paired(self):
        S_true, _ = _ishigami_oracle()
        space = HyperSpace(tuple(
            ParamSpec(f"x{i}", "continuous", -np.pi, np.pi) for i in range(3)))
        plan = sobol_sample(space, 2 ** 12, seed=7)
        X = -np.pi + plan.points() * 2 * np.pi
        Y = _ishigami(X)
        N = plan.N
        yC = [Y[(2 + i) * N:(3 + i) * N].copy() for i in range(3)]
        yC[1][:40] = np.nan  # 40 failed cells in one block
        res = sobol_indices(Y[:N], Y[N:2 * N], yC)
        assert res.dropped_rows == 40
        assert res.S == pytest.approx(S_true, abs=0.06)

    def test_jansen_cross_check(self):
        saltelli = self._estimate(2 ** 13, seed=2)
        jansen = self._estimate(2 ** 13, seed=2, jansen=True)
        assert jansen.S == pytest.approx(saltelli.S, abs=0.05)
        assert jansen.ST == pytest.approx(saltelli.ST, abs=0.05)


class TestBuildReport:
    def test_minmax_and_ranking(self):
        rep = build_report("morris", ("p0", "p1"), [3.0, 1.0], [0.0, 0.0])
        assert rep.direct_norm == pytest.approx([1.0, 0.0])
        assert rep.interaction_norm == pytest.approx([0.0, 0.0])
        assert rep.ranking == (0, 1)

    def test_single_param_all_equal_rule(self):
        rep = build_report("sobol", ("only",), [0.7], [0.2])
        assert rep.direct_norm == pytest.approx([0.0])
        assert rep.interaction_norm == pytest.approx([0.0])

    def test_tie_broken_by_param_order(self):
        rep = build_report("morris", ("a", "b"), [0.2, 0.8], [0.8, 0.2])
        assert rep.ranking == (0, 1)

    def test_ranking_invariant_under_positive_affine(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            k = int(rng.integers(2, 8))
            direct = rng.normal(size=k)
            inter = rng.normal(size=k)
            base = build_report("morris", tuple(f"p{i}" for i in range(k)),
                                direct, inter)
            a = float(rng.uniform(0.1, 10))
            b = float(rng.normal())
            moved = build_report("morris", base.param_names,
                                 a * direct + b, a * inter + b)
            assert moved.ranking == base.ranking

    def test_gap_recorded(self):
        rep = build_report("sobol", ("a", "b"), [0.3, 0.1], [0.5, 0.4])
        assert rep.gap == pytest.approx([0.2, 0.3])

    def test_nonfinite_rejected(self):
        with pytest.raises(NonFiniteOutputError):
            build_report("morris", ("a",), [np.nan], [0.0])

    def test_json_serialization(self):
        import json

        rep = build_report("sobol", ("a", "b"), [0.3, 0.1], [0.5, 0.4],
                           extras={"dropped_rows": 2})
        payload = json.loads(json.dumps(rep.to_dict()))
        assert payload["method"] == "sobol"
        assert payload["ranking"] == list(rep.ranking)
        assert payload["extras"]["dropped_rows"] == 2

    def test_csv_rows_schema(self):
        rep = build_report("morris", ("a", "b"), [3.0, 1.0], [0.0, 1.0])
        rows = rep.to_rows()
        assert [r["param"] for r in rows] == ["a", "b"]
        assert set(rows[0]) == {"param", "direct", "interaction", "direct_norm",
                                "interaction_norm", "rank"}
        assert rows[0]["rank"] == 1
