import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special, stats

from coskew.errors import DomainError, UnsupportedMarginalError
from coskew.marginals import (
    Marginal,
    exponential,
    laplace,
    norm_ppf,
    parse_marginal,
    standard_normal,
    student_t,
    uniform01,
)

# independent quantile oracles
NDTRI_075 = 0.6744897501960817  # scipy.special.ndtri(0.75)


class TestQuantile:
    def test_uniform_identity(self):
        assert uniform01().quantile(0.5) == 0.5
        assert uniform01().quantile(0.123) == 0.123

    def test_normal_median(self):
        assert standard_normal().quantile(0.5) == pytest.approx(0.0, abs=1e-15)

    def test_exponential_inverts_cdf(self):
        # 1 - exp(-x) = p at x = 1 for p = 1 - e^{-1}
        p = 1.0 - math.exp(-1.0)
        assert exponential(1.0).quantile(p) == pytest.approx(1.0, abs=1e-12)
        assert exponential(2.0).quantile(p) == pytest.approx(0.5, abs=1e-12)

    def test_normal_matches_ndtri(self):
        ps = np.concatenate([
            np.linspace(1e-9, 1 - 1e-9, 201),
            [1e-12, 1e-6, 0.02425, 0.5, 0.97575, 1 - 1e-6],
        ])
        got = norm_ppf(ps)
        want = special.ndtri(ps)
        err = np.abs(got - want) / np.maximum(np.abs(want), 1.0)
        assert np.max(err) < 1e-13

    def test_laplace_matches_scipy(self):
        ps = np.linspace(0.001, 0.999, 97)
        got = laplace().quantile(ps)
        want = stats.laplace.ppf(ps)
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_domain_errors(self, all_marginals):
        for m in all_marginals:
            for p in (0.0, 1.0, -0.1, 1.1):
                with pytest.raises(DomainError):
                    m.quantile(p)

    @pytest.mark.parametrize("token", ["normal", "uniform", "laplace", "t:5", "exp:1"])
    def test_strictly_increasing(self, token):
        m = parse_marginal(token)
        ps = np.linspace(1e-6, 1 - 1e-6, 500)
        qs = np.asarray(m.quantile(ps))
        assert np.all(np.diff(qs) > 0)


@pytest.mark.parametrize("token", ["normal", "uniform", "laplace", "t:5", "exp:1"])
@given(p=st.floats(min_value=1e-6, max_value=1 - 1e-6))
@settings(max_examples=60, deadline=None)
def test_cdf_quantile_roundtrip(token, p):
    m = parse_marginal(token)
    assert m.cdf(m.quantile(p)) == pytest.approx(p, abs=1e-10)


@pytest.mark.parametrize("token", ["normal", "uniform", "laplace", "t:5"])
@given(u=st.floats(min_value=1e-6, max_value=1 - 1e-6))
@settings(max_examples=60, deadline=None)
def test_symmetric_quantile_reflection(token, u):
    # F^{-1}(u) = -F^{-1}(1-u) around the mean, to the 1e-10 relative target
    m = parse_marginal(token)
    lhs = m.quantile(u) - m.mean
    rhs = -(m.quantile(1.0 - u) - m.mean)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)


class TestAbsStdQuantile:
    def test_zero_at_zero(self, symmetric_marginals):
        for m in symmetric_marginals:
            assert m.abs_std_quantile(0.0) == 0.0

    def test_uniform_closed_form(self):
        # |U - 1/2| / (1/sqrt(12)) is uniform on [0, sqrt(3)]
        m = uniform01()
        for u in (0.25, 0.5, 1 - 1e-9):
            assert m.abs_std_quantile(u) == pytest.approx(math.sqrt(3) * u, abs=1e-12)

    def test_normal_value(self):
        assert standard_normal().abs_std_quantile(0.5) == pytest.approx(
            NDTRI_075, abs=1e-12
        )

    def test_uniform_simulation_oracle(self, rng):
        m = uniform01()
        draws = np.abs(rng.random(10**6) - 0.5) / m.sd
        for u in (0.25, 0.5, 0.9):
            emp = np.quantile(draws, u)
            # se of an empirical quantile with density 1/sqrt(3)
            se = math.sqrt(3) * math.sqrt(u * (1 - u) / 10**6)
            assert abs(m.abs_std_quantile(u) - emp) < 4 * se

    def test_nondecreasing(self, symmetric_marginals):
        us = np.linspace(0.0, 1 - 1e-9, 300)
        for m in symmetric_marginals:
            vals = np.asarray(m.abs_std_quantile(us))
            assert np.all(np.diff(vals) >= 0)

    def test_rejects_asymmetric(self):
        with pytest.raises(UnsupportedMarginalError):
            exponential(1.0).abs_std_quantile(0.5)

    def test_tail_form_agrees(self, symmetric_marginals):
        # deeper tails than 1e-6 are exactly where the p-path loses precision
        # to the representation of 1 - q, which the tail form exists to avoid
        for m in symmetric_marginals:
            for q in (0.5, 1e-3, 1e-6):
                assert m.abs_std_tail_quantile(q) == pytest.approx(
                    m.abs_std_quantile(1.0 - q), rel=1e-9
                )


class TestMoments:
    # sd of the sample sd is sigma * sqrt((kurtosis - 1) / (4n))
    KURTOSIS = {"normal": 3.0, "uniform": 1.8, "laplace": 6.0, "t": 9.0, "exp": 9.0}

    @pytest.mark.parametrize("token", ["normal", "uniform", "laplace", "t:5", "exp:1"])
    def test_simulated_moments(self, token, rng):
        m = parse_marginal(token)
        n = 10**6
        x = np.asarray(m.quantile(rng.random(n) * (1 - 2e-12) + 1e-12))
        se_mean = m.sd / math.sqrt(n)
        assert abs(x.mean() - m.mean) < 4 * se_mean
        se_sd = m.sd * math.sqrt((self.KURTOSIS[m.family] - 1.0) / (4 * n))
        assert abs(x.std() - m.sd) < 4 * se_sd

    def test_symmetry_flags(self, all_marginals):
        assert [m.symmetric for m in all_marginals] == [True, True, True, True, False]


class TestConstruction:
    def test_t_requires_df_above_3(self):
        with pytest.raises(DomainError):
            student_t(3.0)
        with pytest.raises(DomainError):
            student_t(2.5)
        assert student_t(3.5).df == 3.5

    def test_exp_requires_positive_rate(self):
        with pytest.raises(DomainError):
            exponential(0.0)
        with pytest.raises(DomainError):
            exponential(-1.0)

    def test_parse_roundtrip(self):
        for token in ("normal", "uniform", "laplace", "t:5", "exp:1"):
            assert parse_marginal(token).token == token

    def test_parse_rejects_unknown(self):
        with pytest.raises(DomainError):
            parse_marginal("cauchy")

    def test_student_t_sd(self):
        assert student_t(5).sd == pytest.approx(math.sqrt(5.0 / 3.0), abs=1e-15)

    def test_unknown_family_rejected(self):
        with pytest.raises(DomainError):
            Marginal("weibull")
