"""蒙特卡罗模拟与随机占优检验测试"""
import math

import numpy as np
import pytest

from src.core.errors import SampleError, ValidationError
from src.core.montecarlo import (default_slack, empirical_loss_probability, fosd_check, resolve_bit_generator,
                                 simulate, simulate_many)
from src.core.roy import roy_exact_empirical
from src.models.cumulants import Horizon
from src.models.sample import EmpiricalSample, FosdVerdict, GeneratorSpec


class TestSimulate:

    def test_deterministic(self):
        spec = GeneratorSpec.shifted_gamma(3.0, 2.0, -1.0)
        first = simulate(spec, 20000, seed=42)
        second = simulate(spec, 20000, seed=42)
        assert np.array_equal(first.values, second.values)
        assert first.seed == 42
        assert first.generator == 'PCG64DXSM'
        assert not np.array_equal(first.values, simulate(spec, 20000, seed=43).values)

    def test_worker_count_does_not_matter(self):
        spec = GeneratorSpec.normal(0.0, 1.0)
        serial = simulate(spec, 50000, seed=9, chunk_size=10000, workers=1)
        threaded = simulate(spec, 50000, seed=9, chunk_size=10000, workers=4)
        assert np.array_equal(serial.values, threaded.values)

    def test_generator_choice(self):
        spec = GeneratorSpec.normal(0.0, 1.0)
        philox = simulate(spec, 5000, seed=3, generator='Philox')
        default = simulate(spec, 5000, seed=3)
        assert philox.generator == 'Philox'
        assert default.generator == 'PCG64DXSM'
        assert not np.array_equal(philox.values, default.values)
        assert np.array_equal(philox.values, simulate(spec, 5000, seed=3, generator='Philox').values)

    @pytest.mark.parametrize('name', ['NoSuchGenerator', 'Generator', 'SeedSequence'])
    def test_unknown_generator(self, name):
        with pytest.raises(ValidationError):
            resolve_bit_generator(name)
        with pytest.raises(ValidationError):
            simulate(GeneratorSpec.normal(0.0, 1.0), 10, seed=1, generator=name)

    def test_normal_moments(self):
        sample = simulate(GeneratorSpec.normal(0.5, 2.0), 100000, seed=1)
        assert sample.size == 100000
        assert sample.mean() == pytest.approx(0.5, abs=4 * 2.0 / math.sqrt(1e5))
        assert sample.std() == pytest.approx(2.0, rel=0.02)

    def test_normal_horizon(self):
        sample = simulate(GeneratorSpec.normal(0.0, 1.0, horizon=25), 100000, seed=2)
        assert sample.std() == pytest.approx(0.2, rel=0.02)

    def test_gamma_horizon(self):
        sample = simulate(GeneratorSpec.shifted_gamma(2.0, 1.0, 0.5, horizon=4), 100000, seed=3)
        assert sample.mean() == pytest.approx(2.5, abs=0.01)
        assert sample.std() == pytest.approx(math.sqrt(0.5), rel=0.02)

    def test_bonus_mean(self):
        sample = simulate(GeneratorSpec.bonus_mixture(0.0, 0.1, 0.2, 1.0, horizon=3), 100000, seed=4)
        assert sample.mean() == pytest.approx(0.2, abs=0.01)

    def test_resample(self):
        sample = simulate(GeneratorSpec.resample([-1.0, 1.0], horizon=4), 20000, seed=5)
        assert set(np.unique(sample.values)) <= {-1.0, -0.5, 0.0, 0.5, 1.0}
        assert sample.mean() == pytest.approx(0.0, abs=0.03)

    def test_common_random_numbers(self):
        base, bonus = simulate_many([GeneratorSpec.normal(0.001, 0.01),
                                     GeneratorSpec.bonus_mixture(0.001, 0.01, 0.05, 0.25)], 50000, seed=6)
        assert np.all(bonus.values >= base.values)
        assert np.any(bonus.values > base.values)

    @pytest.mark.parametrize('paths,seed', [(0, 1), (1.5, 1), (True, 1), (10, -1), (10, 2.5)])
    def test_invalid_arguments(self, paths, seed):
        with pytest.raises(ValidationError):
            simulate(GeneratorSpec.normal(0.0, 1.0), paths, seed)

    def test_invalid_specs(self):
        with pytest.raises(ValidationError):
            GeneratorSpec.normal(0.0, 0.0)
        with pytest.raises(ValidationError):
            GeneratorSpec.normal(0.0, 1.0, horizon=0)
        with pytest.raises(ValidationError):
            GeneratorSpec.bonus_mixture(0.0, 1.0, 1.5, 0.2)
        with pytest.raises(ValidationError):
            GeneratorSpec.resample([])

    @pytest.mark.slow
    def test_normal_criterion_matches_sharpe(self):
        sample = simulate(GeneratorSpec.normal(0.1, 1.0), 10 ** 7, seed=5)
        score = roy_exact_empirical(sample, Horizon(1, 0.0))
        assert abs(score.value - 0.1) <= 4 * score.diagnostics.standard_error


class TestLossProbability:

    def test_counts(self):
        sample = EmpiricalSample(np.arange(10.0))
        result = empirical_loss_probability(sample, 2.5)
        assert result.probability == 0.3
        assert result.standard_error == pytest.approx(math.sqrt(0.3 * 0.7 / 10))
        assert result.size == 10

    def test_inclusive(self):
        assert empirical_loss_probability(EmpiricalSample([1.0, 2.0]), 1.0).probability == 0.5

    def test_saturated_has_zero_error(self):
        result = empirical_loss_probability(EmpiricalSample([1.0, 2.0]), 0.0)
        assert result.probability == 0.0
        assert result.standard_error == 0.0

    def test_error_shrinks_with_size(self):
        small = empirical_loss_probability(simulate(GeneratorSpec.normal(0.0, 1.0), 10000, seed=8), 0.0)
        large = empirical_loss_probability(simulate(GeneratorSpec.normal(0.0, 1.0), 1000000, seed=8), 0.0)
        assert large.standard_error == pytest.approx(small.standard_error / 10, rel=0.05)


class TestFosd:

    def test_default_slack(self):
        assert default_slack(100, 400) == pytest.approx(0.2)
        assert default_slack(400, 100) == default_slack(100, 400)

    def test_shift(self):
        base = simulate(GeneratorSpec.normal(0.0, 1.0), 20000, seed=10)
        moved = EmpiricalSample(base.values + 0.5)
        assert fosd_check(moved, base) == FosdVerdict.A_DOMINATES
        assert fosd_check(base, moved) == FosdVerdict.B_DOMINATES

    def test_tie(self):
        sample = simulate(GeneratorSpec.normal(0.0, 1.0), 1000, seed=11)
        assert fosd_check(sample, EmpiricalSample(sample.values)) == FosdVerdict.TIE

    def test_incomparable(self):
        narrow = simulate(GeneratorSpec.normal(0.0, 1.0), 100000, seed=12)
        wide = simulate(GeneratorSpec.normal(0.0, 3.0), 100000, seed=13)
        assert fosd_check(narrow, wide, slack=0.01) == FosdVerdict.INCOMPARABLE

    def test_small_shift_within_slack(self):
        base = simulate(GeneratorSpec.normal(0.0, 1.0), 100, seed=14)
        moved = EmpiricalSample(base.values + 1e-3)
        assert fosd_check(moved, base) == FosdVerdict.A_DOMINATES

    def test_bonus_dominates_base(self):
        base, bonus = simulate_many([GeneratorSpec.normal(0.001, 0.01),
                                     GeneratorSpec.bonus_mixture(0.001, 0.01, 0.0001, 0.25)], 10 ** 6, seed=15)
        assert fosd_check(bonus, base) == FosdVerdict.A_DOMINATES

    def test_negative_slack(self):
        sample = EmpiricalSample([0.0, 1.0])
        with pytest.raises(ValidationError):
            fosd_check(sample, sample, slack=-0.1)


class TestSampleIO:

    def test_save_and_load(self, tmp_path):
        sample = simulate(GeneratorSpec.shifted_gamma(2.0), 1000, seed=16)
        path = sample.save_text(tmp_path / 'out' / 'sample.txt')
        loaded = EmpiricalSample.load_text(path, seed=16, generator='PCG64DXSM')
        assert np.array_equal(loaded.values, sample.values)
        assert loaded.seed == 16

    def test_load_missing(self, tmp_path):
        with pytest.raises(SampleError):
            EmpiricalSample.load_text(tmp_path / 'missing.txt')

    def test_rejects_bad_values(self):
        with pytest.raises(SampleError):
            EmpiricalSample([])
        with pytest.raises(SampleError):
            EmpiricalSample([0.0, math.nan])
