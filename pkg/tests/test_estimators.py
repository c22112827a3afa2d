"""Finite-sample estimators: hand fixtures, large-sample limits, error paths."""

import numpy as np
import pytest

from confbias import (
    Dataset,
    EstimationError,
    PositivityError,
    Z95,
    bias_conditional,
    bias_msm,
    fit_conditional,
    fit_msm_ipw,
    sandwich_se,
)
from confbias.simulation import builtin_scenario, generate_dataset


def _dataset(a, y, lstar=None, l=None):
    a = np.asarray(a)
    n = a.shape[0]
    return Dataset(
        l=np.zeros(n, dtype=np.int8) if l is None else np.asarray(l),
        lstar=np.zeros(n, dtype=np.int8) if lstar is None else np.asarray(lstar),
        a=a,
        y=np.asarray(y, dtype=float),
    )


class TestFitConditional:
    def test_hand_unadjusted(self):
        # Group means 1 (control) and 4 (treated): slope 3, residuals +/-1,
        # s^2 = 4/2 = 2, Var(slope) = 2 * [inv([[4,2],[2,2]])]_11 = 2 * 1.
        data = _dataset(a=[0, 0, 1, 1], y=[0.0, 2.0, 3.0, 5.0])
        fit = fit_conditional(data, adjustment="none")
        assert fit.ate_hat == pytest.approx(3.0, abs=1e-12)
        assert fit.model_se == pytest.approx(np.sqrt(2.0), abs=1e-12)
        assert fit.ci_low == pytest.approx(3.0 - Z95 * np.sqrt(2.0), abs=1e-12)
        assert fit.ci_high == pytest.approx(3.0 + Z95 * np.sqrt(2.0), abs=1e-12)
        assert fit.estimator == "conditional"

    def test_noiseless_adjusted_recovers_beta(self):
        rng = np.random.default_rng(0)
        n = 400
        l = (rng.random(n) < 0.5).astype(np.int8)
        a = (rng.random(n) < np.where(l == 1, 0.7, 0.3)).astype(np.int8)
        y = 1.0 + 2.5 * a + 4.0 * l  # sigma -> 0
        data = _dataset(a=a, y=y, l=l, lstar=l)
        fit = fit_conditional(data, adjustment="l")
        assert fit.ate_hat == pytest.approx(2.5, abs=1e-10)

    def test_large_sample_proxy_adjustment_hits_formula(self):
        scenario = builtin_scenario(1, n=10**6, reps=2, seed=11)
        data = generate_dataset(scenario, 0)
        fit = fit_conditional(data, adjustment="lstar")
        expected = scenario.params.beta + bias_conditional(scenario.params)
        assert fit.ate_hat == pytest.approx(expected, abs=0.01)

    def test_rank_deficiency(self):
        data = _dataset(a=[1, 1, 1, 1], y=[1.0, 2.0, 3.0, 4.0])
        with pytest.raises(EstimationError):
            fit_conditional(data, adjustment="none")

    def test_ci_width_is_wald(self):
        rng = np.random.default_rng(1)
        n = 200
        a = (rng.random(n) < 0.5).astype(np.int8)
        y = a + rng.standard_normal(n)
        fit = fit_conditional(_dataset(a=a, y=y), adjustment="none")
        assert fit.ci_high - fit.ci_low == pytest.approx(2 * Z95 * fit.model_se, abs=1e-12)


class TestFitMsmIpw:
    def test_constant_weights_match_unadjusted_ols(self):
        # a and lstar empirically independent: the weight is constant within
        # arm, so the weighted slope is the plain difference of means.
        a = np.array([0, 0, 1, 1, 0, 0, 1, 1], dtype=np.int8)
        lstar = np.array([0, 1, 0, 1, 0, 1, 0, 1], dtype=np.int8)
        y = np.array([0.0, 2.0, 3.0, 5.0, 1.0, 1.5, 2.5, 4.0])
        data = _dataset(a=a, y=y, lstar=lstar)
        fit = fit_msm_ipw(data, adjustment="lstar")
        unadjusted = fit_conditional(data, adjustment="none")
        assert fit.ate_hat == pytest.approx(unadjusted.ate_hat, abs=1e-12)
        assert fit.weight_min == pytest.approx(2.0, abs=1e-12)
        assert fit.weight_max == pytest.approx(2.0, abs=1e-12)

    def test_large_sample_true_confounder(self):
        scenario = builtin_scenario(0, n=10**6, reps=2, seed=3)
        data = generate_dataset(scenario, 0)
        fit = fit_msm_ipw(data, adjustment="l")
        assert fit.ate_hat == pytest.approx(1.0, abs=0.01)

    def test_large_sample_proxy_hits_formula(self):
        scenario = builtin_scenario(2, n=10**6, reps=2, seed=12)
        data = generate_dataset(scenario, 0)
        fit = fit_msm_ipw(data, adjustment="lstar")
        expected = scenario.params.beta + bias_msm(scenario.params)
        assert fit.ate_hat == pytest.approx(expected, abs=0.01)
        assert expected == pytest.approx(1.14, abs=0.005)

    def test_weighted_treated_share_is_half(self):
        # With saturated weights fitted on the same data, the weighted mean
        # of A is exactly 1/2.
        rng = np.random.default_rng(5)
        n = 997
        lstar = (rng.random(n) < 0.4).astype(np.int8)
        a = (rng.random(n) < np.where(lstar == 1, 0.7, 0.2)).astype(np.int8)
        y = rng.standard_normal(n)
        data = _dataset(a=a, y=y, lstar=lstar)
        p1 = a[lstar == 1].mean()
        p0 = a[lstar == 0].mean()
        p = np.where(lstar == 1, p1, p0)
        weights = np.where(a == 1, 1 / p, 1 / (1 - p))
        assert (weights * a).sum() / weights.sum() == pytest.approx(0.5, abs=1e-12)
        fit_msm_ipw(data, adjustment="lstar")  # must run without error

    def test_positivity_error_names_stratum(self):
        a = np.array([1, 1, 0, 1], dtype=np.int8)
        lstar = np.array([1, 1, 0, 0], dtype=np.int8)
        data = _dataset(a=a, y=np.arange(4.0), lstar=lstar)
        with pytest.raises(PositivityError) as excinfo:
            fit_msm_ipw(data, adjustment="lstar")
        assert excinfo.value.stratum == 1
        assert excinfo.value.arm == 0

    def test_collapsibility_with_true_confounder(self):
        # Identity link, near-zero noise: conditional and weighted marginal
        # estimates agree, stratum by stratum.
        rng = np.random.default_rng(7)
        n = 2000
        l = (rng.random(n) < 0.5).astype(np.int8)
        a = (rng.random(n) < np.where(l == 1, 0.75, 0.5)).astype(np.int8)
        y = 1.0 + 1.0 * a + 2.0 * l + 1e-9 * rng.standard_normal(n)
        data = _dataset(a=a, y=y, l=l, lstar=l)
        cm = fit_conditional(data, adjustment="l")
        msm = fit_msm_ipw(data, adjustment="l")
        assert cm.ate_hat == pytest.approx(msm.ate_hat, abs=1e-7)
        assert cm.ate_hat == pytest.approx(1.0, abs=1e-6)


class TestSandwichSe:
    def test_unit_weights_equal_hc0(self):
        rng = np.random.default_rng(9)
        n = 150
        a = (rng.random(n) < 0.5).astype(float)
        design = np.column_stack([np.ones(n), a])
        y = 0.5 + a + rng.standard_normal(n)
        coef = np.linalg.solve(design.T @ design, design.T @ y)
        residuals = y - design @ coef
        # HC0 computed the long way
        bread_inv = np.linalg.inv(design.T @ design)
        meat = design.T @ (design * (residuals**2)[:, None])
        expected = np.sqrt((bread_inv @ meat @ bread_inv)[1, 1])
        got = sandwich_se(design, np.ones(n), residuals)
        assert got == pytest.approx(expected, abs=1e-12)

    def test_two_strata_hand_computation(self):
        # Tiny two-stratum fixture with known weights; sandwich recomputed
        # with explicit scalar loops, no linear algebra.
        a = np.array([0, 1, 0, 1, 1, 0], dtype=float)
        y = np.array([1.0, 2.0, 0.5, 3.0, 2.5, 1.5])
        w = np.array([2.0, 2.0, 1.5, 3.0, 3.0, 1.5])
        design = np.column_stack([np.ones(6), a])
        swx = [[0.0, 0.0], [0.0, 0.0]]
        swy = [0.0, 0.0]
        for i in range(6):
            x = [1.0, a[i]]
            for r in range(2):
                swy[r] += w[i] * x[r] * y[i]
                for c in range(2):
                    swx[r][c] += w[i] * x[r] * x[c]
        det = swx[0][0] * swx[1][1] - swx[0][1] * swx[1][0]
        inv = [[swx[1][1] / det, -swx[0][1] / det], [-swx[1][0] / det, swx[0][0] / det]]
        coef = [inv[0][0] * swy[0] + inv[0][1] * swy[1],
                inv[1][0] * swy[0] + inv[1][1] * swy[1]]
        resid = [y[i] - coef[0] - coef[1] * a[i] for i in range(6)]
        meat = [[0.0, 0.0], [0.0, 0.0]]
        for i in range(6):
            x = [1.0, a[i]]
            scale = (w[i] * resid[i]) ** 2
            for r in range(2):
                for c in range(2):
                    meat[r][c] += scale * x[r] * x[c]
        cov11 = sum(
            inv[1][i] * meat[i][j] * inv[j][1] for i in range(2) for j in range(2)
        )
        expected = cov11**0.5
        got = sandwich_se(design, w, np.array(resid))
        assert got == pytest.approx(expected, abs=1e-12)

    def test_conservative_at_scenario0(self):
        # Weighted-model SEs exceed the spread of the estimates when the
        # weights are estimated but treated as known.
        scenario = builtin_scenario(0, n=1000, reps=300, seed=21)
        estimates = []
        model_ses = []
        for index in range(scenario.reps):
            data = generate_dataset(scenario, index)
            fit = fit_msm_ipw(data, adjustment="lstar")
            estimates.append(fit.ate_hat)
            model_ses.append(fit.model_se)
        assert np.mean(model_ses) == pytest.approx(0.10, abs=0.01)
        assert np.std(estimates, ddof=1) == pytest.approx(0.07, abs=0.01)
        assert np.mean(model_ses) > np.std(estimates, ddof=1)


class TestDatasetValidation:
    def test_rejects_non_binary(self):
        with pytest.raises(EstimationError):
            Dataset(l=np.array([0, 2]), lstar=np.array([0, 1]),
                    a=np.array([0, 1]), y=np.array([0.0, 1.0]))

    def test_rejects_empty(self):
        with pytest.raises(EstimationError):
            Dataset(l=np.array([]), lstar=np.array([]), a=np.array([]), y=np.array([]))

    def test_rejects_length_mismatch(self):
        with pytest.raises(EstimationError):
            Dataset(l=np.array([0]), lstar=np.array([0, 1]),
                    a=np.array([0, 1]), y=np.array([0.0, 1.0]))
