import numpy as np
import pytest

from easense.problems import make_problem
from easense.soo_algorithms import (
    BudgetError,
    CmaesConfig,
    DeConfig,
    PopulationTooSmallError,
    _crossover_mask,
    _pick_distinct,
    de_donor,
    run_cmaes,
    run_de,
)

SPHERE10 = make_problem("sphere", n=10)


class TestDeDonor:
    def test_zero_difference(self):
        base = np.array([1.0, 2.0])
        v = de_donor(base, np.array([3.0, 3.0]), np.array([3.0, 3.0]), 0.7)
        assert np.array_equal(v, base)

    def test_hand_arithmetic(self):
        v = de_donor(np.zeros(2), np.array([1.0, 2.0]), np.array([0.0, 1.0]), 0.5)
        assert np.allclose(v, [0.5, 0.5])

    def test_beta_zero(self):
        base = np.array([2.0, -1.0])
        v = de_donor(base, np.array([5.0, 5.0]), np.array([-5.0, 0.0]), 0.0)
        assert np.array_equal(v, base)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            de_donor(np.zeros(2), np.zeros(3), np.zeros(3), 0.5)

    def test_population_too_small(self):
        rng = np.random.default_rng(0)
        with pytest.raises(PopulationTooSmallError):
            _pick_distinct(rng, 3, {0, 1, 2})


class TestCrossover:
    def test_at_least_one_donor_coordinate(self):
        rng = np.random.default_rng(1)
        for kind in ("bin", "exp"):
            for _ in range(300):
                mask = _crossover_mask(8, kind, 0.0, rng)
                assert mask.sum() >= 1

    def test_saturated_binomial_copies_everything(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            assert _crossover_mask(6, "bin", 1.0, rng).all()

    def test_exponential_run_is_contiguous_modulo_wrap(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            mask = _crossover_mask(10, "exp", 0.7, rng)
            idx = np.flatnonzero(mask)
            run_len = len(idx)
            starts = [s for s in idx
                      if all(mask[(s + o) % 10] for o in range(run_len))]
            assert starts, mask


class TestRunDe:
    def test_budget_law(self):
        for budget in (50, 137, 500):
            result = run_de(SPHERE10, DeConfig(lambda_=50), budget, seed=0)
            assert budget - 50 < result.evals_used <= budget

    def test_budget_exactly_lambda(self):
        result = run_de(SPHERE10, DeConfig(lambda_=50), 50, seed=1)
        assert result.generations == 0
        assert len(result.history) == 1
        assert result.evals_used == 50

    def test_budget_below_lambda(self):
        with pytest.raises(BudgetError):
            run_de(SPHERE10, DeConfig(lambda_=50), 49, seed=0)

    def test_generation_arithmetic(self):
        result = run_de(SPHERE10, DeConfig(lambda_=10), 10_000, seed=2)
        assert result.generations == 999
        assert result.evals_used == 10_000

    def test_determinism(self):
        a = run_de(SPHERE10, DeConfig(lambda_=20, b_type="best"), 2000, seed=3)
        b = run_de(SPHERE10, DeConfig(lambda_=20, b_type="best"), 2000, seed=3)
        assert a.best_value == b.best_value
        assert np.array_equal(a.history, b.history)
        assert np.array_equal(a.best_point, b.best_point)

    def test_monotone_history(self):
        result = run_de(SPHERE10, DeConfig(lambda_=15), 3000, seed=4)
        assert (np.diff(result.history) <= 0).all()

    @pytest.mark.parametrize("b_type", ["best", "target-to-best", "rand-to-best", "rand"])
    def test_all_variants_progress(self, b_type):
        result = run_de(SPHERE10, DeConfig(lambda_=30, b_type=b_type), 3000, seed=5)
        assert result.best_value < result.history[0]

    def test_smoke_oracle_short(self):
        values = [run_de(SPHERE10,
                         DeConfig(lambda_=50, b_type="target-to-best", crossover="bin"),
                         5000, seed=s).best_value for s in range(3)]
        assert np.median(values) < 1e-4

    def test_config_validation(self):
        with pytest.raises(ValueError):
            DeConfig(lambda_=5)
        with pytest.raises(ValueError):
            DeConfig(crossover="uniform")
        with pytest.raises(ValueError):
            DeConfig(beta_max=3.0)
        with pytest.raises(ValueError):
            DeConfig(b_type="donor")


class TestRunCmaes:
    def test_budget_law_and_generations(self):
        result = run_cmaes(SPHERE10, CmaesConfig(lambda_=10), 10_000, seed=0)
        assert result.generations == 1000
        assert result.evals_used == 10_000

    def test_budget_below_lambda(self):
        with pytest.raises(BudgetError):
            run_cmaes(SPHERE10, CmaesConfig(lambda_=50), 30, seed=0)

    def test_determinism(self):
        a = run_cmaes(SPHERE10, CmaesConfig(lambda_=20), 2000, seed=6)
        b = run_cmaes(SPHERE10, CmaesConfig(lambda_=20), 2000, seed=6)
        assert a.best_value == b.best_value
        assert np.array_equal(a.history, b.history)

    def test_monotone_history(self):
        result = run_cmaes(SPHERE10, CmaesConfig(lambda_=15), 3000, seed=7)
        assert (np.diff(result.history) <= 0).all()

    def test_mu_ratio_one_degenerate_case(self):
        result = run_cmaes(SPHERE10, CmaesConfig(lambda_=20, mu_lambda_ratio=1.0),
                           2000, seed=8)
        assert not result.failed
        assert np.isfinite(result.best_value)

    def test_alpha_mu_zero_disables_rank_mu(self):
        result = run_cmaes(SPHERE10, CmaesConfig(lambda_=20, alpha_mu=0.0), 2000, seed=9)
        assert np.isfinite(result.best_value)
        assert result.best_value < result.history[0]

    def test_sigma0_scale_rescales_step(self):
        on = run_cmaes(SPHERE10, CmaesConfig(lambda_=20, sigma0_scale=True), 1000, seed=10)
        off = run_cmaes(SPHERE10, CmaesConfig(lambda_=20, sigma0_scale=False), 1000, seed=10)
        assert on.best_value != off.best_value

    def test_smoke_oracle_short(self):
        values = [run_cmaes(SPHERE10, CmaesConfig(lambda_=50, sigma0=0.5),
                            5000, seed=s).best_value for s in range(3)]
        assert np.median(values) < 1e-5

    def test_best_point_matches_best_value(self):
        result = run_cmaes(SPHERE10, CmaesConfig(lambda_=20), 2000, seed=11)
        assert SPHERE10.evaluate(result.best_point) == pytest.approx(result.best_value)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            CmaesConfig(sigma0=5.0)
        with pytest.raises(ValueError):
            CmaesConfig(mu_lambda_ratio=0.05)
        with pytest.raises(ValueError):
            CmaesConfig(alpha_mu=-1.0)
