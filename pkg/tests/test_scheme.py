import math

import pytest

from sharpcount.engine import beta_for
from sharpcount.formula import CnfFormula, GuardError, brute_force_count, make_clause, random_kcnf
from sharpcount.scheme import (
    EXACT_MODE,
    SAMPLED_MODE,
    SchemeConfig,
    approximate_count,
    crossover_fraction,
    cutoff,
    sample_estimate,
    sample_size,
    sixteen_approx,
)


def F(n, *clauses):
    return CnfFormula(n, tuple(make_clause(c) for c in clauses))


class TestCutoff:
    def test_paper_beta3(self):
        beta = 0.3864
        f = crossover_fraction(beta)
        assert f == pytest.approx(0.38027, abs=1e-4)
        assert cutoff(3, beta, 100) == math.ceil(2 ** (f * 100))

    def test_saturation_floor(self):
        assert cutoff(3, 0.5, 1) >= 1

    def test_saturation_at_full_space(self):
        assert cutoff(3, 1e-9, 4) <= 16

    def test_growth_rates(self):
        # time exponent 1/(2-beta) reproduces the headline growth constants
        beta3 = 0.3864
        assert 1 / (2 - beta3) == pytest.approx(0.6197, abs=1e-4)
        assert 2 ** (1 / (2 - beta3)) == pytest.approx(1.5366, abs=2e-4)

    def test_crossover_balances_exponents(self):
        for beta in (0.3864, beta_for(4), 0.5, 0.7):
            f = crossover_fraction(beta)
            assert abs((beta + f * (1 - beta)) - (1 - f)) < 1e-12

    def test_rejects_bad_beta(self):
        with pytest.raises(ValueError):
            cutoff(3, 0.0, 10)
        with pytest.raises(ValueError):
            cutoff(3, 1.0, 10)


class TestSampleEstimate:
    def test_unsat_estimates_zero(self):
        f = F(4, [1], [-1])
        assert sample_estimate(f, 0.5, 4, 1) == 0.0

    def test_unbiased_mean(self):
        # E[X * 2^n / T] = #F = 8 for F = (x1) on n = 4
        f = F(4, [1])
        runs = 1000
        mean = sum(sample_estimate(f, 1.0, 4, seed) for seed in range(runs)) / runs
        assert mean == pytest.approx(8.0, abs=0.5)

    def test_within_factor_mostly(self):
        f = CnfFormula(10, ())  # #F = 1024
        hits = 0
        for seed in range(200):
            est = sample_estimate(f, 0.2, 512, seed)
            if 1024 * math.exp(-0.2) <= est <= 1024 * math.exp(0.2):
                hits += 1
        assert hits >= 150

    def test_sample_count_monotone_in_floor(self):
        assert sample_size(12, 0.2, 64) >= sample_size(12, 0.2, 128)

    def test_ceiling_guard(self):
        with pytest.raises(GuardError):
            sample_estimate(CnfFormula(30, ()), 0.01, 1, 0, sample_ceiling=1000)

    def test_epsilon_validation(self):
        with pytest.raises(ValueError):
            sample_estimate(CnfFormula(4, ()), 0.0, 2, 0)


class TestApproximateCount:
    def test_unsat_exact_zero(self):
        result = approximate_count(F(4, [1], [-1], [2, 3]), 3, 0.3, 0)
        assert result.mode == EXACT_MODE and result.estimate == 0.0

    def test_forced_sampled_path(self):
        # beta chosen so the cutoff lands at 5 < #F = 7
        cfg = SchemeConfig(k=3, beta=0.22)
        result = approximate_count(F(3, [1, 2, 3]), 3, 0.1, 2, cfg)
        assert cutoff(3, 0.22, 3) <= 7
        assert result.mode == SAMPLED_MODE
        assert result.estimate == pytest.approx(7.0, rel=0.3)
        assert result.sample_count is not None

    def test_exact_mode_matches_oracle(self):
        for seed in range(15):
            f = random_kcnf(11, 46, 3, seed)  # high density, few solutions
            result = approximate_count(f, 3, 0.2, seed)
            if result.mode == EXACT_MODE:
                assert result.estimate == brute_force_count(f)

    def test_statistical_contract(self):
        f = random_kcnf(13, 26, 3, 21)
        exact = brute_force_count(f)
        assert exact > 0
        good = 0
        for seed in range(60):
            est = approximate_count(f, 3, 0.2, seed).estimate
            if exact * math.exp(-0.2) <= est <= exact * math.exp(0.2):
                good += 1
        assert good >= 42  # 70% of 60

    def test_validation(self):
        with pytest.raises(ValueError):
            approximate_count(F(3, [1]), 2, 0.1, 0)
        with pytest.raises(ValueError):
            approximate_count(F(3, [1]), 3, -1.0, 0)


class TestSixteenApprox:
    def test_unsat(self):
        assert sixteen_approx(F(3, [1], [-1]), 3, 0, 1) == 0.0

    def test_mu_equals_n_exact(self):
        f = F(4, [1, 2])
        assert sixteen_approx(f, 3, 4, 3) == brute_force_count(f)

    def test_statistical(self):
        f = CnfFormula(10, ())  # #F = 1024
        good = 0
        for seed in range(100):
            est = sixteen_approx(f, 3, 2, seed)
            if 1024 / 16 <= est <= 1024 * 16:
                good += 1
        assert good >= 60
