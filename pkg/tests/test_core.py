"""Unit conversions, shadowing constants and Gaussian-tail helpers."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import norm

from comp_coverage.core import (
    INV_SQRT_2PI,
    ConfigError,
    NetworkConfig,
    PowerW,
    dbm_to_watts,
    q_function,
    q_integral,
    shadow_scale,
    watts_to_dbm,
)


class TestPowerConversions:
    @pytest.mark.parametrize("dbm,watts", [(20.0, 0.1), (-100.0, 1e-13), (30.0, 1.0)])
    def test_definitional_values(self, dbm, watts):
        assert dbm_to_watts(dbm) == pytest.approx(watts, rel=1e-12)

    def test_round_trip(self):
        for p in np.linspace(-150.0, 50.0, 101):
            assert watts_to_dbm(dbm_to_watts(p)) == pytest.approx(p, rel=1e-12, abs=1e-12)

    def test_zero_and_neg_inf(self):
        assert dbm_to_watts(-math.inf) == 0.0
        assert watts_to_dbm(0.0) == -math.inf

    def test_invalid(self):
        with pytest.raises(ValueError):
            dbm_to_watts(math.nan)
        with pytest.raises(ValueError):
            watts_to_dbm(-1.0)
        with pytest.raises(ValueError):
            PowerW(-1e-3)

    def test_powerw_dbm(self):
        assert PowerW(0.1).dbm == pytest.approx(20.0, rel=1e-12)


class TestShadowScale:
    def test_no_shadowing(self):
        assert shadow_scale(0.0) == (0.0, 1.0)

    @pytest.mark.parametrize("sigma_l,sz,mf", [
        (4.0, 0.9210340372, 1.5282936458),
        (6.0, 1.3815510558, 2.5969603369),
    ])
    def test_reference_values(self, sigma_l, sz, mf):
        # frozen from the oracle: direct evaluation of (0.1 ln10 sigma_l)
        # and exp(sz^2/2) in double precision
        sz_exact = 0.1 * math.log(10.0) * sigma_l
        mf_exact = math.exp(0.5 * sz_exact**2)
        got_sz, got_mf = shadow_scale(sigma_l)
        assert got_sz == pytest.approx(sz_exact, rel=1e-15)
        assert got_mf == pytest.approx(mf_exact, rel=1e-15)
        assert got_sz == pytest.approx(sz, abs=1e-9)
        assert got_mf == pytest.approx(mf, abs=1e-9)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            shadow_scale(-0.1)


class TestQFunction:
    def test_special_points(self):
        assert q_function(0.0) == 0.5
        assert q_function(math.inf) == 0.0
        assert q_function(-math.inf) == 1.0

    def test_against_norm_sf(self):
        # independent reference: scipy's normal survival function
        for x in [-8.0, -3.0, -1.0, 0.0, 0.5, 1.0, 2.5, 6.0]:
            assert abs(q_function(x) - norm.sf(x)) <= 1e-12
        assert q_function(1.0) == pytest.approx(0.158655, abs=1e-6)

    def test_monotone_and_symmetric(self):
        xs = np.linspace(-6.0, 6.0, 201)
        vals = q_function(xs)
        assert np.all(np.diff(vals) < 0)
        assert np.all(np.abs(vals + q_function(-xs) - 1.0) <= 1e-12)

    def test_vectorized(self):
        out = q_function(np.array([0.0, math.inf]))
        assert out.shape == (2,)
        assert out[0] == 0.5 and out[1] == 0.0


class TestQIntegral:
    def test_zero_and_limit(self):
        assert q_integral(0.0) == 0.0
        assert q_integral(math.inf) == INV_SQRT_2PI
        assert q_integral(40.0) == pytest.approx(INV_SQRT_2PI, rel=1e-12)

    @pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0, 5.0])
    def test_against_quadrature(self, x):
        oracle, err = quad(q_function, 0.0, x, epsabs=1e-13)
        assert abs(q_integral(x) - oracle) <= 1e-10

    def test_unit_value(self):
        # frozen from the quadrature oracle above at x = 1
        assert q_integral(1.0) == pytest.approx(0.3156268, abs=1e-6)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            q_integral(-0.5)


class TestNetworkConfig:
    def test_defaults(self):
        cfg = NetworkConfig(d=500.0, n=2)
        assert cfg.reuse == 6 and cfg.tiers == 1 and cfg.m == 1
        assert cfg.tx_power_w == pytest.approx(0.1, rel=1e-12)
        assert cfg.noise_power_w == pytest.approx(1e-13, rel=1e-12)

    def test_baseline_defaults(self):
        assert NetworkConfig(d=500.0, n=1).reuse == 1
        assert NetworkConfig(d=500.0, n=1, reuse=7).reuse == 7

    def test_sigma_z_derived(self):
        cfg = NetworkConfig(d=500.0, n=2, sigma_l=4.0)
        sz, mf = shadow_scale(4.0)
        assert cfg.sigma_z == sz
        assert cfg.shadow_mean_factor == mf

    def test_density_identity(self):
        cfg = NetworkConfig(d=1234.5, n=3)
        assert cfg.bs_density * 1.5 * math.sqrt(3.0) * cfg.d**2 == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("kwargs", [
        {"d": -1.0, "n": 2},
        {"d": 500.0, "n": 4},
        {"d": 500.0, "n": 2, "alpha": 2.0},
        {"d": 500.0, "n": 2, "sigma_l": -1.0},
        {"d": 500.0, "n": 2, "m": 0},
        {"d": 500.0, "n": 2, "reuse": 3},
        {"d": 500.0, "n": 1, "reuse": 6},
        {"d": 500.0, "n": 2, "tiers": 3},
    ])
    def test_invariants_rejected(self, kwargs):
        with pytest.raises(ConfigError):
            NetworkConfig(**kwargs)
