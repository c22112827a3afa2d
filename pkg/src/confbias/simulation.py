"""Monte Carlo simulation harness.

Generates datasets from the generative model, fits both estimators per
replicate (each adjusting for the proxy), and summarizes performance:
bias, empirical SE, MSE, coverage of the 95% interval, and mean
model-based SE, each with its Monte Carlo standard error.  The
theoretical bias from :mod:`confbias.formulas` is attached for
comparison.

Replicates are mutually independent with their own deterministically
derived random substream, so reports are bit-identical for a given
(seed, scenario) regardless of how many workers run them.
"""

from __future__ import annotations

import configparser
import csv
import json
import warnings
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError
from .estimators import Dataset, FitResult, fit_conditional, fit_msm_ipw
from .formulas import bias_conditional, bias_msm
from .params import LatentParams

__all__ = [
    "Scenario",
    "PerformanceSummary",
    "SimulationReport",
    "load_scenario_catalog",
    "builtin_scenario",
    "generate_dataset",
    "run_scenario",
    "report_rows",
    "write_report_csv",
    "write_report_json",
]

_CATALOG_KEYS = {
    "p0": "p0",
    "p1": "p1",
    "lambda": "lam",
    "pi0": "pi0",
    "pi1": "pi1",
    "alpha": "alpha",
    "beta": "beta",
    "gamma": "gamma",
    "sigma": "sigma",
}


@dataclass(frozen=True)
class Scenario:
    """One simulation configuration.

    ``setting`` selects how treatment is assigned in the generated data:
    2 draws A from the true confounder, 1 draws it from the proxy (the
    regime where proxy adjustment is sufficient).
    """

    id: str
    params: LatentParams
    n: int
    reps: int
    seed: int = 0
    setting: int = 2

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.reps < 2:
            raise ValueError(f"reps must be >= 2, got {self.reps}")
        if self.setting not in (1, 2):
            raise ValueError(f"setting must be 1 or 2, got {self.setting}")


@dataclass(frozen=True)
class PerformanceSummary:
    """Performance of one estimator in one scenario, with Monte Carlo SEs."""

    estimator: str
    scenario_id: str
    n: int
    setting: int
    reps_requested: int
    reps_used: int
    reps_failed: int
    bias_formula: float
    bias: float
    bias_mcse: float
    empse: float
    empse_mcse: float
    mse: float
    mse_mcse: float
    coverage: float
    coverage_mcse: float
    model_se: float
    model_se_mcse: float


@dataclass(frozen=True)
class SimulationReport:
    """Both estimators' performance for one scenario."""

    scenario: Scenario
    conditional: PerformanceSummary
    msm_ipw: PerformanceSummary

    @property
    def rows(self) -> Tuple[PerformanceSummary, PerformanceSummary]:
        return (self.conditional, self.msm_ipw)


def load_scenario_catalog(path: Optional[str] = None) -> Dict[str, LatentParams]:
    """Parse a key/value scenario catalog into parameter vectors.

    Without ``path`` the packaged catalog of the five standard scenarios
    is loaded.  Malformed files raise :class:`configparser.Error` (which
    carries line information) or :class:`ValueError` naming the missing or
    unknown key.
    """
    parser = configparser.ConfigParser()
    if path is None:
        text = resources.files("confbias.data").joinpath("scenarios.ini").read_text()
        parser.read_string(text, source="scenarios.ini")
    else:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle, source=path)
    catalog: Dict[str, LatentParams] = {}
    for section in parser.sections():
        kwargs = {}
        for key, raw in parser.items(section):
            if key not in _CATALOG_KEYS:
                raise ValueError(
                    f"scenario {section!r}: unknown key {key!r} "
                    f"(expected one of {sorted(_CATALOG_KEYS)})"
                )
            try:
                kwargs[_CATALOG_KEYS[key]] = float(raw)
            except ValueError as exc:
                raise ValueError(
                    f"scenario {section!r}: key {key!r} is not a number: {raw!r}"
                ) from exc
        missing = {"p0", "p1", "lam", "pi0", "pi1"} - set(kwargs)
        if missing:
            raise ValueError(f"scenario {section!r}: missing keys {sorted(missing)}")
        catalog[section] = LatentParams(**kwargs)
    return catalog


def builtin_scenario(
    scenario_id: Union[int, str],
    n: int = 1000,
    reps: int = 5000,
    seed: int = 0,
    setting: int = 2,
) -> Scenario:
    """Look up a scenario from the packaged catalog and attach run options."""
    key = str(scenario_id)
    catalog = load_scenario_catalog()
    if key not in catalog:
        raise ValueError(f"unknown scenario {key!r}; catalog has {sorted(catalog)}")
    return Scenario(id=key, params=catalog[key], n=n, reps=reps, seed=seed, setting=setting)


def _substream(scenario: Scenario, replicate_index: int) -> np.random.Generator:
    # Counter-based derivation: the child stream is a pure function of
    # (master seed, scenario id hash, replicate index), independent of
    # execution order or worker count.
    id_hash = zlib.crc32(scenario.id.encode("utf-8"))
    seq = np.random.SeedSequence([scenario.seed, id_hash, replicate_index])
    return np.random.default_rng(seq)


def generate_dataset(scenario: Scenario, replicate_index: int) -> Dataset:
    """Draw one dataset of size ``scenario.n``, deterministic given (seed, index)."""
    rng = _substream(scenario, replicate_index)
    p = scenario.params
    n = scenario.n
    l = (rng.random(n) < p.lam).astype(np.int8)
    lstar = (rng.random(n) < np.where(l == 1, p.p1, p.p0)).astype(np.int8)
    treatment_source = l if scenario.setting == 2 else lstar
    a = (rng.random(n) < np.where(treatment_source == 1, p.pi1, p.pi0)).astype(np.int8)
    y = p.alpha + p.beta * a + p.gamma * l + p.sigma * rng.standard_normal(n)
    return Dataset(
        l=l,
        lstar=lstar,
        a=a,
        y=y,
        seed=scenario.seed,
        scenario_id=scenario.id,
        setting=scenario.setting,
        replicate=replicate_index,
    )


def _fit_replicate(
    scenario: Scenario, index: int
) -> Tuple[int, Optional[FitResult], Optional[FitResult]]:
    data = generate_dataset(scenario, index)
    try:
        cm = fit_conditional(data, adjustment="lstar")
    except DomainError:
        cm = None
    try:
        msm = fit_msm_ipw(data, adjustment="lstar")
    except DomainError:
        msm = None
    return index, cm, msm


def _summarize(
    estimator: str,
    scenario: Scenario,
    bias_formula: float,
    fits: Sequence[Optional[FitResult]],
) -> PerformanceSummary:
    used = [fit for fit in fits if fit is not None]
    failed = len(fits) - len(used)
    if failed:
        warnings.warn(
            f"scenario {scenario.id}: {failed} of {len(fits)} replicates failed for "
            f"{estimator} and were excluded from its summaries"
        )
    k = len(used)
    if k < 2:
        raise DomainError(
            f"scenario {scenario.id}: only {k} usable replicates for {estimator}"
        )
    beta = scenario.params.beta
    estimates = np.array([fit.ate_hat for fit in used])
    model_ses = np.array([fit.model_se for fit in used])
    covered = np.array(
        [fit.ci_low <= beta <= fit.ci_high for fit in used], dtype=np.float64
    )
    errors = estimates - beta
    bias = float(errors.mean())
    empse = float(estimates.std(ddof=1))
    squared = errors**2
    mse = float(squared.mean())
    coverage = float(covered.mean())
    model_se = float(model_ses.mean())
    return PerformanceSummary(
        estimator=estimator,
        scenario_id=scenario.id,
        n=scenario.n,
        setting=scenario.setting,
        reps_requested=scenario.reps,
        reps_used=k,
        reps_failed=failed,
        bias_formula=bias_formula,
        bias=bias,
        bias_mcse=float(empse / np.sqrt(k)),
        empse=empse,
        empse_mcse=float(empse / np.sqrt(2.0 * (k - 1))),
        mse=mse,
        mse_mcse=float(squared.std(ddof=1) / np.sqrt(k)),
        coverage=coverage,
        coverage_mcse=float(np.sqrt(coverage * (1.0 - coverage) / k)),
        model_se=model_se,
        model_se_mcse=float(model_ses.std(ddof=1) / np.sqrt(k)),
    )


def run_scenario(scenario: Scenario, workers: int = 1) -> SimulationReport:
    """Run all replicates of one scenario and summarize both estimators.

    ``workers`` only controls how replicates are executed; results are
    accumulated per replicate and reduced in index order, so the report is
    identical for any worker count.
    """
    indices = range(scenario.reps)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda i: _fit_replicate(scenario, i), indices))
    else:
        results = [_fit_replicate(scenario, i) for i in indices]
    results.sort(key=lambda item: item[0])
    cm_fits = [cm for _, cm, _ in results]
    msm_fits = [msm for _, _, msm in results]
    if scenario.setting == 2:
        formula_cm = bias_conditional(scenario.params)
        formula_msm = bias_msm(scenario.params)
    else:
        # Treatment assigned from the proxy: adjusting for the proxy blocks
        # the confounding path, so both estimators are unbiased.
        formula_cm = 0.0
        formula_msm = 0.0
    return SimulationReport(
        scenario=scenario,
        conditional=_summarize("conditional", scenario, formula_cm, cm_fits),
        msm_ipw=_summarize("msm_ipw", scenario, formula_msm, msm_fits),
    )


_ROW_FIELDS = [
    "estimator",
    "scenario_id",
    "n",
    "setting",
    "reps_requested",
    "reps_used",
    "reps_failed",
    "bias_formula",
    "bias",
    "bias_mcse",
    "empse",
    "empse_mcse",
    "mse",
    "mse_mcse",
    "coverage",
    "coverage_mcse",
    "model_se",
    "model_se_mcse",
]


def report_rows(reports: Sequence[SimulationReport]) -> List[dict]:
    """Flatten reports into one dict per (estimator, scenario, n)."""
    return [asdict(row) for report in reports for row in report.rows]


def write_report_csv(reports: Sequence[SimulationReport], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=_ROW_FIELDS)
        writer.writeheader()
        for row in report_rows(reports):
            writer.writerow({key: repr(v) if isinstance(v, float) else v for key, v in row.items()})


def write_report_json(reports: Sequence[SimulationReport], path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report_rows(reports), handle, indent=2, sort_keys=True)
        handle.write("\n")
