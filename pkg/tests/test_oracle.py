"""Enumeration oracle: cell-table invariants and population regressions."""

import numpy as np
import pytest

from confbias import LatentParams, NonPositivityError, SingularDesignError
from confbias.oracle import _solve_pivoted, enumerate_cells, population_ipw_slope, population_ols

from conftest import random_valid_params

PARAMS = LatentParams(lam=0.5, pi0=0.9, pi1=0.45, p0=0.05, p1=0.9,
                      alpha=1.0, beta=1.0, gamma=2.0)


class TestEnumerateCells:
    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            cells = enumerate_cells(random_valid_params(rng))
            assert sum(c.prob for c in cells.cells) == pytest.approx(1.0, abs=1e-14)

    def test_perfect_proxy_independent_treatment(self):
        params = LatentParams(lam=0.5, pi0=0.5, pi1=0.5, p0=0.0, p1=1.0)
        cells = enumerate_cells(params)
        for cell in cells.cells:
            if cell.l != cell.lstar:
                assert cell.prob == 0.0
            else:
                assert cell.prob == pytest.approx(0.25, abs=1e-14)

    def test_marginals_match_direct_arithmetic(self):
        cells = enumerate_cells(PARAMS)
        assert cells.p_joint(lstar=1) == pytest.approx(0.475, abs=1e-14)
        params2 = LatentParams(lam=0.8, pi0=0.25, pi1=0.75, p0=0.05, p1=0.9,
                               alpha=1.0, beta=1.0, gamma=2.0)
        assert enumerate_cells(params2).p_joint(a=1) == pytest.approx(0.65, abs=1e-14)

    def test_outcome_means(self):
        cells = enumerate_cells(PARAMS)
        for cell in cells.cells:
            assert cell.ey == PARAMS.alpha + PARAMS.beta * cell.a + PARAMS.gamma * cell.l

    def test_setting_one_treats_from_proxy(self):
        params = LatentParams(lam=0.5, pi0=0.2, pi1=0.8, p0=0.05, p1=0.9)
        cells = enumerate_cells(params, setting=1)
        # P(A=1 | L*=1) is pi1 exactly under setting 1.
        assert cells.p_a_given(1, lstar=1) == pytest.approx(0.8, abs=1e-14)
        assert cells.p_a_given(1, lstar=0) == pytest.approx(0.2, abs=1e-14)

    def test_rejects_bad_setting(self):
        with pytest.raises(ValueError):
            enumerate_cells(PARAMS, setting=3)


class TestPopulationOls:
    def test_true_confounder_recovers_generative_coefficients(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            params = random_valid_params(rng)
            coef = population_ols(enumerate_cells(params), "l")
            assert coef.intercept == pytest.approx(params.alpha, abs=1e-10)
            assert coef.a == pytest.approx(params.beta, abs=1e-10)
            assert coef.lstar == pytest.approx(params.gamma, abs=1e-10)

    def test_proxy_regression_scenario1(self):
        # Treatment coefficient shifts by the conditional-model bias: 1 - 0.34.
        coef = population_ols(enumerate_cells(PARAMS), "lstar")
        assert coef.a == pytest.approx(0.66, abs=0.005)

    def test_interaction_a_coefficient_is_within_stratum_contrast(self):
        from confbias import phi

        rng = np.random.default_rng(9)
        for _ in range(100):
            params = random_valid_params(rng)
            coef = population_ols(enumerate_cells(params), "lstar", interaction=True)
            expected = params.beta + params.gamma * (
                phi(1, 0, params) - phi(0, 0, params)
            )
            assert abs(coef.a - expected) <= 1e-10

    def test_singular_design(self):
        # A perfect proxy never disagrees with L, so (1, A, L, A*L) on the
        # reachable cells is rank 4 but (1, A, L*) with lam degenerate is not.
        params = LatentParams(lam=0.0, pi0=0.5, pi1=0.5, p0=0.0, p1=1.0)
        with pytest.raises(SingularDesignError):
            population_ols(enumerate_cells(params), "l")

    def test_rejects_bad_covariate(self):
        with pytest.raises(ValueError):
            population_ols(enumerate_cells(PARAMS), "z")


class TestPopulationIpwSlope:
    def test_true_weights_recover_beta(self):
        rng = np.random.default_rng(15)
        for _ in range(200):
            params = random_valid_params(rng)
            slope = population_ipw_slope(enumerate_cells(params), "l")
            assert slope == pytest.approx(params.beta, abs=1e-12)

    def test_proxy_weights_scenario3(self, catalog):
        slope = population_ipw_slope(enumerate_cells(catalog["3"]), "lstar")
        assert slope == pytest.approx(1.29, abs=0.005)

    def test_setting_one_proxy_weights_unbiased(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            params = random_valid_params(rng)
            cells = enumerate_cells(params, setting=1)
            slope = population_ipw_slope(cells, "lstar")
            assert slope == pytest.approx(params.beta, abs=1e-10)

    def test_pseudo_population_identities(self):
        # Total weight 2 and weighted treatment mean 1/2, for either choice
        # of adjustment variable.
        rng = np.random.default_rng(19)
        for _ in range(100):
            params = random_valid_params(rng)
            cells = enumerate_cells(params)
            for weight_on in ("l", "lstar"):
                weights = []
                for cell in cells.cells:
                    if weight_on == "l":
                        p_arm = cells.p_a_given(cell.a, l=cell.l)
                    else:
                        p_arm = cells.p_a_given(cell.a, lstar=cell.lstar)
                    weights.append(cell.prob / p_arm)
                total = sum(weights)
                a_bar = sum(w * c.a for w, c in zip(weights, cells.cells)) / total
                assert total == pytest.approx(2.0, abs=1e-12)
                assert a_bar == pytest.approx(0.5, abs=1e-12)

    def test_non_positivity(self):
        params = LatentParams(lam=0.5, pi0=1.0, pi1=0.5, p0=0.05, p1=0.9)
        with pytest.raises(NonPositivityError):
            population_ipw_slope(enumerate_cells(params), "l")


class TestPivotedSolver:
    def test_matches_numpy(self):
        rng = np.random.default_rng(21)
        for size in (2, 3, 4):
            for _ in range(50):
                base = rng.normal(size=(size, size))
                matrix = base @ base.T + np.eye(size)  # symmetric positive definite
                rhs = rng.normal(size=size)
                mine = _solve_pivoted([list(row) for row in matrix], list(rhs))
                expected = np.linalg.solve(matrix, rhs)
                assert np.allclose(mine, expected, atol=1e-10)

    def test_requires_pivoting(self):
        # Leading zero pivot: naive elimination would divide by zero.
        matrix = [[0.0, 1.0], [1.0, 0.0]]
        assert _solve_pivoted(matrix, [2.0, 3.0]) == pytest.approx([3.0, 2.0])

    def test_singular_raises(self):
        with pytest.raises(SingularDesignError):
            _solve_pivoted([[1.0, 1.0], [1.0, 1.0]], [1.0, 1.0])
