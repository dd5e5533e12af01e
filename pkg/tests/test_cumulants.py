"""累积量测试"""
import math

import numpy as np
import pytest

from src.core.cumulants import estimate_cumulants, gamma_cumulants, normal_cumulants, scale_to_horizon
from src.core.errors import MissingCumulantError, SampleError, ValidationError
from src.core.montecarlo import simulate
from src.models.cumulants import Cumulants, Horizon
from src.models.sample import EmpiricalSample, GeneratorSpec


class TestCumulantsModel:

    def test_realizability_bound(self):
        Cumulants(0.0, 1.0, (1.0, -1.0))
        with pytest.raises(ValidationError):
            Cumulants(0.0, 1.0, (2.0, 1.0))

    @pytest.mark.parametrize('volatility', [0.0, -1.0, math.inf, math.nan])
    def test_rejects_volatility(self, volatility):
        with pytest.raises(ValidationError):
            Cumulants(0.0, volatility)

    def test_too_many_orders(self):
        with pytest.raises(ValidationError):
            Cumulants(0.0, 1.0, (0.0,) * 6)

    def test_zeta_access(self):
        c = Cumulants(0.01, 0.02, (0.5, 1.0))
        assert c.max_order == 4
        assert c.zeta_at(4) == 1.0
        with pytest.raises(MissingCumulantError) as exc:
            c.zeta_at(5)
        assert exc.value.order == 5
        assert exc.value.available == 4

    def test_snr_and_dict(self):
        c = Cumulants(0.001, 0.01, (-1.0,))
        assert c.snr() == pytest.approx(0.1)
        assert c.snr(0.001) == 0.0
        assert Cumulants.from_dict(c.to_dict()) == c

    def test_horizon(self):
        h = Horizon(60, 0.0)
        assert h.c_statistic(Cumulants(0.07, 1.0)) == pytest.approx(math.sqrt(60) * 0.07)
        with pytest.raises(ValidationError):
            Horizon(0.0)
        total = Horizon.from_total_threshold(252, -0.252)
        assert total.disaster_rate == pytest.approx(-0.001)


class TestScaleToHorizon:

    def test_examples(self):
        assert scale_to_horizon(Cumulants(0.0, 1.0, (-1.0,)), 1).zeta_at(3) == -1.0
        assert scale_to_horizon(Cumulants(0.0, 1.0, (-1.0,)), 4).zeta_at(3) == pytest.approx(-0.5)
        scaled = scale_to_horizon(Cumulants(0.3, 2.0, (0.6, 2.0)), 60)
        assert scaled.mean == 0.0
        assert scaled.volatility == 1.0
        assert scaled.zeta_at(3) == pytest.approx(0.6 / math.sqrt(60))
        assert scaled.zeta_at(4) == pytest.approx(2.0 / 60)

    def test_composition(self):
        c = gamma_cumulants(3.0)
        twice = scale_to_horizon(scale_to_horizon(c, 5.0), 7.0)
        once = scale_to_horizon(c, 35.0)
        for a, b in zip(twice.zeta, once.zeta):
            assert a == pytest.approx(b, rel=1e-12)

    @pytest.mark.parametrize('n', [0.0, -2.0])
    def test_rejects_n(self, n):
        with pytest.raises(ValidationError):
            scale_to_horizon(Cumulants(0.0, 1.0), n)


class TestEstimate:

    def test_normal_sample(self, rng):
        n = 200_000
        c = estimate_cumulants(rng.normal(0.0, 1.0, n))
        assert abs(c.zeta_at(3)) < 4 * math.sqrt(6 / n)
        assert abs(c.zeta_at(4)) < 4 * math.sqrt(24 / n)

    def test_gamma_sample(self):
        sample = simulate(GeneratorSpec.shifted_gamma(4.0), 10 ** 6, seed=11)
        c = estimate_cumulants(sample)
        expected = gamma_cumulants(4.0)
        assert c.mean == pytest.approx(expected.mean, abs=0.01)
        assert c.volatility == pytest.approx(expected.volatility, rel=0.005)
        assert c.zeta_at(3) == pytest.approx(1.0, abs=0.03)
        assert c.zeta_at(4) == pytest.approx(1.5, abs=0.08)

    def test_affine_invariance(self, rng):
        x = rng.gamma(2.0, 1.0, 5000)
        base = estimate_cumulants(x, max_order=7)
        moved = estimate_cumulants(3.5 * x - 2.0, max_order=7)
        assert moved.mean == pytest.approx(3.5 * base.mean - 2.0)
        assert moved.volatility == pytest.approx(3.5 * base.volatility)
        for a, b in zip(base.zeta, moved.zeta):
            assert b == pytest.approx(a, abs=1e-10)

    def test_accepts_empirical_sample(self, rng):
        values = rng.normal(size=100)
        assert estimate_cumulants(EmpiricalSample(values)).mean == pytest.approx(values.mean())

    def test_too_short(self):
        with pytest.raises(SampleError):
            estimate_cumulants([0.1, 0.2, 0.3, 0.4], max_order=4)

    def test_constant(self):
        with pytest.raises(SampleError):
            estimate_cumulants([0.01] * 20)

    @pytest.mark.parametrize('order', [2, 8])
    def test_order_range(self, order):
        with pytest.raises(ValidationError):
            estimate_cumulants(np.arange(20.0), max_order=order)


class TestConstructors:

    def test_exponential(self):
        c = gamma_cumulants(1.0, 1.0, 0.0)
        assert c.mean == 1.0
        assert c.volatility == 1.0
        assert c.zeta_at(3) == pytest.approx(2.0)

    def test_gamma_shape4(self):
        c = gamma_cumulants(4.0)
        assert c.zeta_at(3) == pytest.approx(1.0)
        assert c.zeta_at(4) == pytest.approx(1.5)
        assert c.zeta_at(5) == pytest.approx(3.0)

    def test_shift(self):
        base = gamma_cumulants(2.5, 2.0)
        shifted = gamma_cumulants(2.5, 2.0, -base.mean)
        assert shifted.mean == pytest.approx(0.0, abs=1e-15)
        assert shifted.zeta == base.zeta

    def test_gamma_rejects(self):
        with pytest.raises(ValidationError):
            gamma_cumulants(0.0)
        with pytest.raises(ValidationError):
            gamma_cumulants(1.0, -1.0)

    def test_normal(self):
        c = normal_cumulants(0.01, 0.02)
        assert c.max_order == 7
        assert all(z == 0.0 for z in c.zeta)
