"""Acceptance suite: one test per exit criterion, at the stated tolerances.

Each test prints one machine-greppable line ``ACCEPT <name>: PASS`` once its
assertions have held; a failed assertion leaves the line unprinted and the
test red.  Run with ``pytest tests/test_acceptance.py -v -s``.

Reference values for the five catalog scenarios (n=1000 block, 5000
replicates): two-decimal published results that the simulation must land
on.  Those targets are rounded to two decimals, so bias comparisons allow
the half-ulp of that rounding (0.005) on top of the Monte Carlo band;
against the unrounded closed forms the band alone applies.
"""

import time
import warnings
from dataclasses import replace

import numpy as np
import pytest

from confbias import (
    ALGEBRAIC_TOL,
    LatentParams,
    ORACLE_TOL,
    ObservedSummary,
    SensitivityConfig,
    bias_conditional,
    bias_msm,
    bias_pair,
    calibrate_gamma,
    enumerate_cells,
    fit_conditional,
    fit_msm_ipw,
    implied_observables,
    invert_observables,
    run_sensitivity,
)
from confbias.oracle import population_ipw_slope, population_ols
from confbias.simulation import builtin_scenario, generate_dataset, run_scenario

from conftest import (
    BP_STUDY_GAMMA,
    BP_STUDY_OBS,
    BP_STUDY_SEED,
    TABLE_BIAS_CM,
    TABLE_BIAS_MSM,
    random_valid_params,
)

SEED = 20260808
ROUNDING = 0.005  # half-width of the two-decimal targets

# n=1000 reference block: scenario -> (bias, mse, coverage, empse, model_se)
TABLE_MSM = {
    "0": (0.00, 0.00, 0.99, 0.07, 0.10),
    "1": (-0.42, 0.18, 0.03, 0.10, 0.11),
    "2": (0.14, 0.03, 0.67, 0.08, 0.09),
    "3": (0.29, 0.09, 0.08, 0.08, 0.09),
    "4": (0.15, 0.03, 0.68, 0.08, 0.10),
}
TABLE_CM = {
    "0": (0.00, 0.00, 0.95, 0.07, 0.07),
    "1": (-0.34, 0.12, 0.02, 0.09, 0.08),
    "2": (0.16, 0.03, 0.46, 0.08, 0.08),
    "3": (0.32, 0.11, 0.02, 0.08, 0.08),
    "4": (0.15, 0.03, 0.49, 0.08, 0.07),
}


def _accept(name: str, detail: str = "") -> None:
    print(f"ACCEPT {name}: PASS {detail}".rstrip())


def test_formula_column_reproduction(catalog):
    """Both closed forms hit the published two-decimal values, in under 1 ms."""
    for params in catalog.values():  # warm any lazy setup before timing
        bias_pair(params)
    start = time.perf_counter()
    results = {sid: bias_pair(params) for sid, params in catalog.items()}
    elapsed = time.perf_counter() - start
    for sid, pair in results.items():
        assert pair.bias_msm == pytest.approx(TABLE_BIAS_MSM[sid], abs=ROUNDING)
        assert pair.bias_cm == pytest.approx(TABLE_BIAS_CM[sid], abs=ROUNDING)
    assert elapsed < 1e-3, f"ten bias evaluations took {elapsed * 1e3:.3f} ms"
    _accept("formula-column", f"(10 values, {elapsed * 1e6:.0f} us)")


def test_oracle_equivalence():
    """10000 random vectors: closed forms equal oracle slopes to 1e-10."""
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(10_000):
        params = random_valid_params(rng)
        cells = enumerate_cells(params)
        gap_msm = abs(
            population_ipw_slope(cells, "lstar") - params.beta - bias_msm(params)
        )
        gap_cm = abs(
            population_ols(cells, "lstar").a - params.beta - bias_conditional(params)
        )
        worst = max(worst, gap_msm, gap_cm)
        assert gap_msm <= ORACLE_TOL
        assert gap_cm <= ORACLE_TOL
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"oracle sweep took {elapsed:.1f} s"
    _accept("oracle-equivalence", f"(worst gap {worst:.2e}, {elapsed:.1f} s)")


def _check_simulation_block(reps: int, workers: int = 4, mcse_bands: bool = False) -> None:
    # With 5000 replicates the fixed tolerances apply (empSE within 0.01,
    # coverage within 0.02); the 500-replicate smoke variant replaces them
    # with 3-MCSE bands, since its Monte Carlo noise alone exceeds them.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for sid in ("0", "1", "2", "3", "4"):
            scenario = builtin_scenario(sid, n=1000, reps=reps, seed=SEED)
            report = run_scenario(scenario, workers=workers)
            for row, table in (
                (report.msm_ipw, TABLE_MSM[sid]),
                (report.conditional, TABLE_CM[sid]),
            ):
                band = 3 * row.bias_mcse
                assert abs(row.bias - row.bias_formula) <= band, (
                    f"scenario {sid} {row.estimator}: bias {row.bias:.4f} vs "
                    f"formula {row.bias_formula:.4f} exceeds 3 MCSE {band:.4f}"
                )
                assert abs(row.bias - table[0]) <= band + ROUNDING
                if mcse_bands:
                    empse_tol = 3 * row.empse_mcse + ROUNDING
                    coverage_tol = 3 * row.coverage_mcse + ROUNDING
                else:
                    empse_tol = 0.01
                    coverage_tol = 0.02
                assert abs(row.empse - table[3]) <= empse_tol
                assert abs(row.coverage - table[2]) <= coverage_tol, (
                    f"scenario {sid} {row.estimator}: coverage {row.coverage:.3f} "
                    f"vs {table[2]:.2f}"
                )
            assert report.msm_ipw.model_se > report.msm_ipw.empse, (
                f"scenario {sid}: weighted-model SE not conservative"
            )
            # weighting never tightens the sampling spread below the
            # conditional model's, up to Monte Carlo noise
            assert report.msm_ipw.empse >= (
                report.conditional.empse - 3 * report.conditional.empse_mcse
            )


def test_simulation_reproduction_full():
    """Five scenarios, n=1000, 5000 replicates: all measures on target."""
    start = time.perf_counter()
    _check_simulation_block(reps=5000)
    elapsed = time.perf_counter() - start
    assert elapsed < 300.0
    _accept("simulation-full", f"(5 scenarios x 5000 reps, {elapsed:.0f} s)")


def test_simulation_reproduction_smoke():
    """Same checks at 500 replicates with 3-MCSE bands."""
    _check_simulation_block(reps=500, mcse_bands=True)
    _accept("simulation-smoke", "(5 scenarios x 500 reps, 3-MCSE bands)")


def test_null_bias_and_sign_agreement():
    """Each of the four null conditions kills the bias; signs never oppose."""
    rng = np.random.default_rng(SEED + 1)
    for condition in ("perfect-proxy", "no-confounder-effect", "no-treatment-link",
                      "degenerate-prevalence"):
        for _ in range(1000):
            base = random_valid_params(rng)
            if condition == "perfect-proxy":
                params = replace(base, p0=0.0, p1=1.0)
            elif condition == "no-confounder-effect":
                params = replace(base, gamma=0.0)
            elif condition == "no-treatment-link":
                params = replace(base, pi1=base.pi0)
            else:
                params = replace(base, lam=float(rng.integers(0, 2)))
            assert abs(bias_conditional(params)) <= ALGEBRAIC_TOL
            assert abs(bias_msm(params)) <= ALGEBRAIC_TOL
    for _ in range(10_000):
        pair = bias_pair(random_valid_params(rng))
        assert pair.bias_cm * pair.bias_msm >= -ALGEBRAIC_TOL
    _accept("null-bias-and-sign", "(4 x 1000 null draws, 10000 sign draws)")


def test_inversion_round_trip():
    """Recover (lam, pi0, pi1) to 1e-10 on 10000 interior draws; published check."""
    rng = np.random.default_rng(SEED + 2)
    for _ in range(10_000):
        params = random_valid_params(rng, min_p_gap=0.05)
        inverted = invert_observables(implied_observables(params), params.p0, params.p1)
        assert abs(inverted.lam - params.lam) <= ORACLE_TOL
        assert abs(inverted.pi0 - params.pi0) <= ORACLE_TOL
        assert abs(inverted.pi1 - params.pi1) <= ORACLE_TOL
    obs = ObservedSummary(**BP_STUDY_OBS)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        inverted = invert_observables(obs, 0.05, 0.95)
    assert inverted.lam == pytest.approx(0.8, abs=ALGEBRAIC_TOL)
    _accept("inversion-round-trip", "(10000 draws + published prevalence 0.8)")


def test_sensitivity_reproduction():
    """Calibrated-gamma fixture reproduces the published bias distribution.

    The confounder effect is NOT taken from any published source; it is
    calibrated here so the weighted-model mean bias equals -0.31, and the
    shape checks (median, interquartile range) then validate the sampling
    and inversion pipeline.  The calibration itself must be a unique root
    of a monotone objective and must match the frozen fixture value.
    """
    config = SensitivityConfig(
        obs=ObservedSummary(**BP_STUDY_OBS),
        sens_range=(0.90, 0.98),
        spec_range=(0.90, 0.98),
        gamma=1.0,
        draws=10_000,
        seed=BP_STUDY_SEED,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        # monotone objective with a unique root
        means = [
            run_sensitivity(replace(config, gamma=g)).msm.mean
            for g in (-12.0, -6.0, 0.0, 6.0)
        ]
        diffs = np.diff(means)
        assert (diffs > 0).all() or (diffs < 0).all(), "mean bias not monotone in gamma"

        gamma = calibrate_gamma(config, target_mean_bias=-0.31)
        assert gamma == pytest.approx(BP_STUDY_GAMMA, abs=0.02), (
            f"calibration drifted from frozen fixture: {gamma}"
        )

        report = run_sensitivity(replace(config, gamma=BP_STUDY_GAMMA))
    assert report.n_infeasible == 0
    assert report.msm.mean == pytest.approx(-0.31, abs=0.02)
    assert report.msm.median == pytest.approx(-0.30, abs=0.02)
    assert report.msm.q25 == pytest.approx(-0.40, abs=0.03)
    assert report.msm.q75 == pytest.approx(-0.20, abs=0.03)
    _accept(
        "sensitivity-reproduction",
        f"(gamma* {gamma:.4f}, mean {report.msm.mean:.3f}, "
        f"median {report.msm.median:.3f}, iqr [{report.msm.q25:.3f}, {report.msm.q75:.3f}])",
    )


def test_setting_one_unbiasedness():
    """Treatment assigned from the proxy: proxy adjustment removes all bias."""
    scenario = builtin_scenario(1, n=1000, reps=1000, seed=SEED, setting=1)
    report = run_scenario(scenario, workers=4)
    for row in report.rows:
        assert abs(row.bias) <= 3 * row.bias_mcse, (
            f"{row.estimator}: bias {row.bias:.4f} vs 3 MCSE {3 * row.bias_mcse:.4f}"
        )
    _accept(
        "setting-one-unbiasedness",
        f"(cm {report.conditional.bias:+.4f}, msm {report.msm_ipw.bias:+.4f})",
    )


def test_collapsibility_at_scale():
    """Adjusting for the true confounder: both estimators agree at n=1e6."""
    scenario = builtin_scenario(2, n=10**6, reps=2, seed=SEED)
    data = generate_dataset(scenario, 0)
    cm = fit_conditional(data, adjustment="l").ate_hat
    msm = fit_msm_ipw(data, adjustment="l").ate_hat
    assert abs(cm - msm) <= 0.005
    _accept("collapsibility", f"(|cm - msm| = {abs(cm - msm):.2e})")
