"""Sensitivity analysis: from observed summaries to a bias distribution.

An analyst who only sees the proxy confounder can estimate
(ell, omega, pi*_0, pi*_1) but not the misclassification probabilities.
The procedure here samples assumed (sensitivity, specificity) pairs
uniformly from user-supplied ranges, inverts the observable map at each
draw (:func:`confbias.formulas.invert_observables`), evaluates both bias
formulas with a supplied confounder-outcome effect, and summarizes the
resulting bias distributions.  Draws whose inverted parameters fall
outside [0, 1] are counted as infeasible and excluded from the summaries
rather than clamped, which would silently distort the distribution.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError, SensitivityAnalysisError
from .formulas import bias_conditional, bias_msm, invert_observables
from .params import LatentParams, ObservedSummary

__all__ = [
    "SensitivityConfig",
    "DrawResult",
    "BiasDistribution",
    "SensitivityReport",
    "AdjustedEstimate",
    "run_sensitivity",
    "adjusted_estimate",
    "calibrate_gamma",
    "config_from_dict",
    "report_summary_dict",
    "write_draws_csv",
]

GammaSpec = Union[float, Tuple[float, float]]


def _check_range(name: str, bounds: Tuple[float, float]) -> Tuple[float, float]:
    lo, hi = float(bounds[0]), float(bounds[1])
    if not 0.0 < lo <= hi <= 1.0:
        raise ValueError(f"{name} must satisfy 0 < low <= high <= 1, got {bounds!r}")
    return lo, hi


@dataclass(frozen=True)
class SensitivityConfig:
    """Inputs of one sensitivity analysis.

    ``gamma`` is the confounder-outcome effect in outcome units, either a
    single value or a (low, high) range to sample uniformly alongside the
    classification probabilities.
    """

    obs: ObservedSummary
    sens_range: Tuple[float, float]
    spec_range: Tuple[float, float]
    gamma: GammaSpec
    draws: int = 10_000
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "sens_range", _check_range("sens_range", self.sens_range))
        object.__setattr__(self, "spec_range", _check_range("spec_range", self.spec_range))
        if isinstance(self.gamma, (tuple, list)):
            lo, hi = float(self.gamma[0]), float(self.gamma[1])
            if not lo <= hi:
                raise ValueError(f"gamma range must be ordered, got {self.gamma!r}")
            object.__setattr__(self, "gamma", (lo, hi))
        else:
            object.__setattr__(self, "gamma", float(self.gamma))
        if self.draws < 1:
            raise ValueError(f"draws must be >= 1, got {self.draws}")


@dataclass(frozen=True)
class DrawResult:
    """One sampled assumption and its outcome (biases are None when infeasible)."""

    index: int
    sensitivity: float
    specificity: float
    p0: float
    p1: float
    gamma: float
    feasible: bool
    lam: Optional[float] = None
    pi0: Optional[float] = None
    pi1: Optional[float] = None
    bias_cm: Optional[float] = None
    bias_msm: Optional[float] = None


@dataclass(frozen=True)
class BiasDistribution:
    """Summary of one estimator's sampled bias values over the feasible draws."""

    estimator: str
    values: Tuple[float, ...]
    mean: float
    median: float
    q25: float
    q75: float
    bin_edges: Tuple[float, ...]
    bin_counts: Tuple[int, ...]


@dataclass(frozen=True)
class SensitivityReport:
    config: SensitivityConfig
    draws: Tuple[DrawResult, ...]
    cm: BiasDistribution
    msm: BiasDistribution
    n_feasible: int
    n_infeasible: int

    @property
    def proportion_infeasible(self) -> float:
        return self.n_infeasible / (self.n_feasible + self.n_infeasible)


def _summarize_distribution(estimator: str, values: Sequence[float]) -> BiasDistribution:
    arr = np.asarray(values, dtype=np.float64)
    counts, edges = np.histogram(arr, bins="fd" if arr.size > 1 else 1)
    return BiasDistribution(
        estimator=estimator,
        values=tuple(float(v) for v in arr),
        mean=float(arr.mean()),
        median=float(np.median(arr)),
        q25=float(np.percentile(arr, 25.0)),
        q75=float(np.percentile(arr, 75.0)),
        bin_edges=tuple(float(e) for e in edges),
        bin_counts=tuple(int(c) for c in counts),
    )


def run_sensitivity(config: SensitivityConfig) -> SensitivityReport:
    """Sample assumptions, invert, evaluate both biases, summarize.

    Deterministic given the config (the seed fixes the sampled
    sensitivities, specificities, and gamma values, in that draw order).

    Raises :class:`SensitivityAnalysisError` when no draw is feasible,
    i.e. the assumed ranges are incompatible with the observed summary.
    """
    rng = np.random.default_rng(config.seed)
    sens = rng.uniform(config.sens_range[0], config.sens_range[1], config.draws)
    spec = rng.uniform(config.spec_range[0], config.spec_range[1], config.draws)
    if isinstance(config.gamma, tuple):
        gammas = rng.uniform(config.gamma[0], config.gamma[1], config.draws)
    else:
        gammas = np.full(config.draws, config.gamma)

    draws = []
    cm_values = []
    msm_values = []
    for i in range(config.draws):
        p1 = float(sens[i])
        p0 = float(1.0 - spec[i])
        gamma = float(gammas[i])
        try:
            inverted = invert_observables(config.obs, p0, p1)
            params = LatentParams(
                lam=inverted.lam,
                pi0=inverted.pi0,
                pi1=inverted.pi1,
                p0=p0,
                p1=p1,
                gamma=gamma,
            )
            cm = bias_conditional(params)
            msm = bias_msm(params)
        except DomainError:
            draws.append(
                DrawResult(
                    index=i,
                    sensitivity=p1,
                    specificity=float(spec[i]),
                    p0=p0,
                    p1=p1,
                    gamma=gamma,
                    feasible=False,
                )
            )
            continue
        draws.append(
            DrawResult(
                index=i,
                sensitivity=p1,
                specificity=float(spec[i]),
                p0=p0,
                p1=p1,
                gamma=gamma,
                feasible=True,
                lam=inverted.lam,
                pi0=inverted.pi0,
                pi1=inverted.pi1,
                bias_cm=cm,
                bias_msm=msm,
            )
        )
        cm_values.append(cm)
        msm_values.append(msm)

    n_feasible = len(cm_values)
    if n_feasible == 0:
        raise SensitivityAnalysisError(
            f"all {config.draws} draws were infeasible: sensitivity range "
            f"{config.sens_range} and specificity range {config.spec_range} are "
            f"incompatible with the observed summary (ell={config.obs.ell!r})"
        )
    return SensitivityReport(
        config=config,
        draws=tuple(draws),
        cm=_summarize_distribution("conditional", cm_values),
        msm=_summarize_distribution("msm_ipw", msm_values),
        n_feasible=n_feasible,
        n_infeasible=config.draws - n_feasible,
    )


@dataclass(frozen=True)
class AdjustedEstimate:
    """Heuristic bias-corrected view of an observed ATE.

    Subtracting sampled-bias summaries from a point estimate ignores the
    estimate's own sampling error; the result is a plausibility range, not
    a confidence interval, hence the fixed ``note``.
    """

    ate_hat: float
    estimator: str
    mean_adjusted: float
    median_adjusted: float
    range_low: float
    range_high: float
    note: str = "heuristic: point estimate minus sampled-bias summaries"


def adjusted_estimate(
    ate_hat: float, report: SensitivityReport, estimator: str = "msm"
) -> AdjustedEstimate:
    """Subtract an estimator's bias summaries from an observed ATE."""
    if estimator not in ("msm", "cm"):
        raise ValueError(f"estimator must be 'msm' or 'cm', got {estimator!r}")
    dist = report.msm if estimator == "msm" else report.cm
    low, high = sorted((ate_hat - dist.q75, ate_hat - dist.q25))
    return AdjustedEstimate(
        ate_hat=ate_hat,
        estimator=estimator,
        mean_adjusted=ate_hat - dist.mean,
        median_adjusted=ate_hat - dist.median,
        range_low=low,
        range_high=high,
    )


def calibrate_gamma(
    config: SensitivityConfig,
    target_mean_bias: float,
    estimator: str = "msm",
    tol: float = 1e-10,
    max_iter: int = 60,
) -> float:
    """Find the gamma whose mean sampled bias equals ``target_mean_bias``.

    One-dimensional root search (secant steps with a bisection fallback)
    on gamma, holding the draw seed fixed so the objective is
    deterministic.  The mean bias is strictly monotone in gamma whenever
    the feasible draws carry any confounding signal, so the root is
    unique; a flat objective raises :class:`SensitivityAnalysisError`.
    """
    if estimator not in ("msm", "cm"):
        raise ValueError(f"estimator must be 'msm' or 'cm', got {estimator!r}")

    def mean_bias(gamma: float) -> float:
        report = run_sensitivity(replace(config, gamma=gamma))
        dist = report.msm if estimator == "msm" else report.cm
        return dist.mean

    g0, g1 = 0.0, 1.0
    f0 = mean_bias(g0) - target_mean_bias
    f1 = mean_bias(g1) - target_mean_bias
    if abs(f1 - f0) < 1e-15:
        raise SensitivityAnalysisError(
            "mean bias does not respond to gamma; nothing to calibrate"
        )
    for _ in range(max_iter):
        g2 = g1 - f1 * (g1 - g0) / (f1 - f0)
        if not np.isfinite(g2):
            g2 = 0.5 * (g0 + g1)
        f2 = mean_bias(g2) - target_mean_bias
        if abs(f2) <= tol:
            return float(g2)
        g0, f0, g1, f1 = g1, f1, g2, f2
    raise SensitivityAnalysisError(
        f"gamma calibration did not converge within {max_iter} iterations"
    )


def config_from_dict(payload: dict) -> SensitivityConfig:
    """Build a config from the JSON wire format.

    Expected shape::

        {"observables": {"ell": .., "omega": .., "pi_star0": .., "pi_star1": ..},
         "sens_range": [lo, hi], "spec_range": [lo, hi],
         "gamma": number | [lo, hi], "draws": int, "seed": int}
    """
    try:
        obs_payload = payload["observables"]
        obs = ObservedSummary(
            ell=float(obs_payload["ell"]),
            omega=float(obs_payload["omega"]),
            pi_star0=float(obs_payload["pi_star0"]),
            pi_star1=float(obs_payload["pi_star1"]),
        )
        gamma = payload["gamma"]
        if isinstance(gamma, (list, tuple)):
            gamma = (float(gamma[0]), float(gamma[1]))
        else:
            gamma = float(gamma)
        return SensitivityConfig(
            obs=obs,
            sens_range=tuple(float(v) for v in payload["sens_range"]),
            spec_range=tuple(float(v) for v in payload["spec_range"]),
            gamma=gamma,
            draws=int(payload.get("draws", 10_000)),
            seed=int(payload.get("seed", 0)),
        )
    except (KeyError, IndexError, TypeError) as exc:
        raise ValueError(f"malformed sensitivity config: {exc!r}") from exc


def _distribution_dict(dist: BiasDistribution) -> dict:
    return {
        "estimator": dist.estimator,
        "mean": dist.mean,
        "median": dist.median,
        "iqr": [dist.q25, dist.q75],
        "histogram": {"edges": list(dist.bin_edges), "counts": list(dist.bin_counts)},
        "n_values": len(dist.values),
    }


def report_summary_dict(report: SensitivityReport) -> dict:
    """JSON-ready summary (the raw draws travel separately as CSV)."""
    config = report.config
    return {
        "config": {
            "observables": {
                "ell": config.obs.ell,
                "omega": config.obs.omega,
                "pi_star0": config.obs.pi_star0,
                "pi_star1": config.obs.pi_star1,
            },
            "sens_range": list(config.sens_range),
            "spec_range": list(config.spec_range),
            "gamma": list(config.gamma) if isinstance(config.gamma, tuple) else config.gamma,
            "draws": config.draws,
            "seed": config.seed,
        },
        "cm": _distribution_dict(report.cm),
        "msm": _distribution_dict(report.msm),
        "n_feasible": report.n_feasible,
        "n_infeasible": report.n_infeasible,
        "proportion_infeasible": report.proportion_infeasible,
    }


def write_report_json(report: SensitivityReport, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report_summary_dict(report), handle, indent=2, sort_keys=True)
        handle.write("\n")


def write_draws_csv(report: SensitivityReport, path: str) -> None:
    """Raw draws, one row each, for external plotting."""
    fields = [
        "index",
        "sensitivity",
        "specificity",
        "p0",
        "p1",
        "gamma",
        "feasible",
        "lam",
        "pi0",
        "pi1",
        "bias_cm",
        "bias_msm",
    ]
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(fields)
        for draw in report.draws:
            writer.writerow(
                [
                    draw.index,
                    repr(draw.sensitivity),
                    repr(draw.specificity),
                    repr(draw.p0),
                    repr(draw.p1),
                    repr(draw.gamma),
                    int(draw.feasible),
                ]
                + [
                    "" if value is None else repr(value)
                    for value in (draw.lam, draw.pi0, draw.pi1, draw.bias_cm, draw.bias_msm)
                ]
            )
