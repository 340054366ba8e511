import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uclbandit.normal_quantile import (
    ALPHA_MAX,
    DomainError,
    QuantileBounds,
    bound_sweep,
    quantile_bounds,
    quantile_lower_bound,
    quantile_upper_bound,
    std_normal_cdf,
    std_normal_quantile,
    unscaled_upper_violations,
    upper_quantile,
)

mpmath.mp.dps = 60


def mp_upper_quantile(alpha):
    """High-precision Phi^{-1}(1 - alpha), solving erfc(x / sqrt 2) / 2 = alpha in the tail."""
    alpha = mpmath.mpf(alpha)
    f = lambda x: mpmath.erfc(x / mpmath.sqrt(2)) / 2 - alpha  # noqa: E731
    lo, hi = mpmath.mpf(-40), mpmath.mpf(40)
    for _ in range(200):
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


def mp_cdf(x):
    return float(mpmath.ncdf(x))


# frozen from the mpmath oracle above
Z_099 = 2.3263478740408408
Z_AT_T1 = 0.6999773509978507  # Phi^{-1}(1 - 1/sqrt(2 pi e))
Z_1E6 = 4.753424308822899


class TestCdf:
    def test_center(self):
        assert std_normal_cdf(0.0) == 0.5

    def test_upper_tail_saturates(self):
        assert abs(std_normal_cdf(8.0) - 1.0) <= 1e-12
        assert std_normal_cdf(8.0) <= 1.0

    def test_known_value(self):
        assert abs(std_normal_cdf(1.959964) - 0.975) < 1e-7

    @pytest.mark.parametrize("x", [-30.0, -8.5, -3.1, -0.2, 0.7, 2.5, 6.0])
    def test_against_oracle(self, x):
        assert abs(std_normal_cdf(x) - mp_cdf(x)) <= 1e-12

    @given(st.floats(-30, 30))
    def test_reflection(self, x):
        assert abs(std_normal_cdf(-x) - (1.0 - std_normal_cdf(x))) <= 1e-15


class TestQuantile:
    def test_median(self):
        assert std_normal_quantile(0.5) == 0.0

    def test_099(self):
        assert std_normal_quantile(0.99) == pytest.approx(Z_099, rel=1e-14)
        assert mp_upper_quantile(0.01) == pytest.approx(Z_099, rel=1e-15)

    def test_t1_credible_level(self):
        K = math.sqrt(2 * math.pi * math.e)
        assert upper_quantile(1 / K) == pytest.approx(Z_AT_T1, rel=1e-14)
        assert std_normal_quantile(1 - 1 / K) == pytest.approx(Z_AT_T1, rel=1e-13)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, math.nan])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            std_normal_quantile(p)

    def test_oracle_sweep(self):
        alphas = np.logspace(-300, math.log10(0.999), 300)
        for a in alphas:
            exact = mp_upper_quantile(a)
            assert abs(upper_quantile(a) - exact) <= 4e-15 * max(1.0, abs(exact)), a

    @given(st.floats(1e-10, 1 - 1e-10))
    def test_round_trip(self, p):
        assert abs(std_normal_cdf(std_normal_quantile(p)) - p) <= 1e-9

    @given(st.floats(1e-12, 0.5), st.floats(1e-12, 0.5))
    def test_increasing(self, p, q):
        if p < q:
            assert std_normal_quantile(p) < std_normal_quantile(q)

    @given(st.floats(1e-300, 0.5))
    def test_upper_is_negated_lower(self, a):
        assert upper_quantile(a) == -std_normal_quantile(a)


class TestSandwich:
    def test_alpha_001(self):
        assert quantile_upper_bound(0.01) == pytest.approx(2.36471, abs=1e-5)
        assert quantile_lower_bound(0.01) == pytest.approx(2.29075, abs=1e-5)
        assert quantile_lower_bound(0.01) < Z_099 < quantile_upper_bound(0.01)

    def test_alpha_1e6(self):
        assert upper_quantile(1e-6) == pytest.approx(Z_1E6, rel=1e-14)
        assert quantile_upper_bound(1e-6) >= Z_1E6
        assert quantile_upper_bound(1e-6) == pytest.approx(4.8429, abs=1e-4)
        assert quantile_lower_bound(1e-6) == pytest.approx(4.74394, abs=1e-5)

    def test_alpha_01_lower(self):
        assert quantile_lower_bound(0.1) < 1.2815515655446004

    def test_endpoint_is_domain_error(self):
        with pytest.raises(DomainError):
            quantile_upper_bound(ALPHA_MAX)
        with pytest.raises(DomainError):
            quantile_lower_bound(0.0)
        assert math.isfinite(quantile_upper_bound(ALPHA_MAX - 2e-12))

    def test_beta_below_minimum(self):
        with pytest.raises(DomainError):
            quantile_upper_bound(0.01, beta=1.0)

    def test_sweep_10k(self):
        sweep = bound_sweep(1e-12 * 1.0001, ALPHA_MAX - 2e-12, 10_000)
        assert len(sweep) == 10_000
        assert all(q.sandwich_ok for q in sweep)

    def test_bounds_record(self):
        q = quantile_bounds(0.05)
        assert isinstance(q, QuantileBounds)
        assert q.exact == upper_quantile(0.05)
        assert q.sandwich_ok

    def test_lower_bound_decreases_in_alpha(self):
        a = np.logspace(-11, math.log10(ALPHA_MAX - 1e-6), 2000)
        lo = [quantile_lower_bound(x) for x in a]
        assert np.all(np.diff(lo) < 0)

    def test_upper_bound_turns_at_inverse_k(self):
        # -x log x peaks at x = 1/e, i.e. alpha = 1/sqrt(2 pi e); beyond it the bound grows
        turn = 1.0 / math.sqrt(2 * math.pi * math.e)
        left = np.logspace(-11, math.log10(turn), 1000)
        right = np.linspace(turn, ALPHA_MAX - 1e-6, 1000)
        assert np.all(np.diff([quantile_upper_bound(x) for x in left]) < 0)
        assert np.all(np.diff([quantile_upper_bound(x) for x in right]) > 0)

    def test_unscaled_bound_fails_below_about_0034(self):
        a = np.logspace(-10, math.log10(ALPHA_MAX - 1e-6), 4000)
        bad = unscaled_upper_violations(a)
        assert 0.0338 < bad.max() < 0.0340
        assert np.array_equal(bad, a[a <= bad.max()])
