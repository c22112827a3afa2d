"""Finite-sample estimation of the average treatment effect.

Two estimators, mirroring the population quantities in
:mod:`confbias.formulas`:

* :func:`fit_conditional` - ordinary least squares of the outcome on
  treatment plus (optionally) an adjustment covariate, with classical
  homoskedastic standard errors;
* :func:`fit_msm_ipw` - a marginal model fit by weighted least squares of
  the outcome on treatment alone, each record weighted by one over the
  empirical probability of its observed treatment given the adjustment
  variable, with HC0 sandwich standard errors that treat the weights as
  known (and are therefore conservative).

The weight model is the saturated empirical frequency P(A=1 | Z=z); with a
single binary covariate this coincides with the logistic-regression MLE
and needs no optimizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import EstimationError, PositivityError

__all__ = ["Dataset", "FitResult", "fit_conditional", "fit_msm_ipw", "sandwich_se", "Z95"]

# 95% Wald normal quantile, fixed so confidence intervals are reproducible
# bit for bit across platforms.
Z95 = 1.959964


@dataclass
class Dataset:
    """Individual records (L, L*, A, Y) plus provenance metadata.

    ``l``, ``lstar`` and ``a`` must be strictly binary; ``y`` is the
    continuous outcome.  The provenance fields record how the data were
    generated (they do not affect any fit).
    """

    l: np.ndarray
    lstar: np.ndarray
    a: np.ndarray
    y: np.ndarray
    seed: Optional[int] = None
    scenario_id: Optional[str] = None
    setting: Optional[int] = None
    replicate: Optional[int] = None

    def __post_init__(self) -> None:
        self.l = np.asarray(self.l, dtype=np.int8)
        self.lstar = np.asarray(self.lstar, dtype=np.int8)
        self.a = np.asarray(self.a, dtype=np.int8)
        self.y = np.asarray(self.y, dtype=np.float64)
        n = self.y.shape[0]
        if n < 1:
            raise EstimationError("dataset must contain at least one record")
        for name in ("l", "lstar", "a"):
            col = getattr(self, name)
            if col.shape != (n,):
                raise EstimationError(f"column {name!r} has shape {col.shape}, expected ({n},)")
            if not np.isin(col, (0, 1)).all():
                raise EstimationError(f"column {name!r} must be strictly binary")
        if self.y.shape != (n,):
            raise EstimationError(f"column 'y' has shape {self.y.shape}, expected ({n},)")

    @property
    def n(self) -> int:
        return int(self.y.shape[0])


@dataclass(frozen=True)
class FitResult:
    """ATE estimate with model-based standard error and 95% Wald interval."""

    ate_hat: float
    model_se: float
    ci_low: float
    ci_high: float
    estimator: str
    adjustment: str
    weight_min: Optional[float] = None
    weight_max: Optional[float] = None
    weight_mean: Optional[float] = None


def _adjustment_column(data: Dataset, adjustment: str) -> Optional[np.ndarray]:
    if adjustment == "l":
        return data.l
    if adjustment == "lstar":
        return data.lstar
    if adjustment == "none":
        return None
    raise ValueError(f"adjustment must be 'l', 'lstar' or 'none', got {adjustment!r}")


def fit_conditional(data: Dataset, adjustment: str = "lstar") -> FitResult:
    """OLS of Y on (1, A[, Z]) with classical standard errors.

    The ATE estimate is the coefficient on A.  Raises
    :class:`EstimationError` when the design is rank deficient (for
    example, when every record has the same treatment) or when there are
    no residual degrees of freedom.
    """
    z = _adjustment_column(data, adjustment)
    columns = [np.ones(data.n), data.a.astype(np.float64)]
    if z is not None:
        columns.append(z.astype(np.float64))
    design = np.column_stack(columns)
    k = design.shape[1]
    xtx = design.T @ design
    if np.linalg.matrix_rank(xtx) < k:
        raise EstimationError("design matrix is rank deficient")
    if data.n <= k:
        raise EstimationError(
            f"need more than {k} records for standard errors, got {data.n}"
        )
    coef = np.linalg.solve(xtx, design.T @ data.y)
    residuals = data.y - design @ coef
    s2 = float(residuals @ residuals) / (data.n - k)
    se = float(np.sqrt(s2 * np.linalg.inv(xtx)[1, 1]))
    ate = float(coef[1])
    return FitResult(
        ate_hat=ate,
        model_se=se,
        ci_low=ate - Z95 * se,
        ci_high=ate + Z95 * se,
        estimator="conditional",
        adjustment=adjustment,
    )


def fit_msm_ipw(data: Dataset, adjustment: str = "lstar") -> FitResult:
    """Marginal model via inverse-probability-of-treatment weighting.

    Weights are ``1 / Phat(A_i | Z_i)`` with ``Phat`` the empirical
    treatment frequency within each stratum of the adjustment variable
    (the saturated weight model).  The ATE is the slope of the weighted
    regression of Y on A; its standard error is the HC0 sandwich with the
    weights treated as fixed.

    Raises :class:`PositivityError`, naming the offending stratum, when a
    stratum that occurs in the data is missing one of the two arms.
    """
    z = _adjustment_column(data, adjustment)
    if z is None:
        raise ValueError("fit_msm_ipw requires adjustment 'l' or 'lstar'")
    a = data.a.astype(np.float64)
    p_treated = np.empty(data.n)
    for value in (0, 1):
        mask = z == value
        count = int(mask.sum())
        if count == 0:
            continue
        treated = int(data.a[mask].sum())
        if treated == 0 or treated == count:
            missing_arm = 1 if treated == 0 else 0
            raise PositivityError(
                f"stratum {adjustment}={value} has no records with a={missing_arm}",
                stratum=value,
                arm=missing_arm,
            )
        p_treated[mask] = treated / count
    weights = np.where(data.a == 1, 1.0 / p_treated, 1.0 / (1.0 - p_treated))

    w_sum = float(weights.sum())
    a_bar = float((weights * a).sum()) / w_sum
    y_bar = float((weights * data.y).sum()) / w_sum
    a_centered = a - a_bar
    denom = float((weights * a_centered * a_centered).sum())
    if denom <= 0.0:
        raise EstimationError("weighted treatment variance is zero")
    ate = float((weights * (data.y - y_bar) * a_centered).sum()) / denom
    intercept = y_bar - ate * a_bar
    residuals = data.y - intercept - ate * a
    design = np.column_stack([np.ones(data.n), a])
    se = sandwich_se(design, weights, residuals)
    return FitResult(
        ate_hat=ate,
        model_se=se,
        ci_low=ate - Z95 * se,
        ci_high=ate + Z95 * se,
        estimator="msm_ipw",
        adjustment=adjustment,
        weight_min=float(weights.min()),
        weight_max=float(weights.max()),
        weight_mean=float(weights.mean()),
    )


def sandwich_se(
    design: np.ndarray, weights: np.ndarray, residuals: np.ndarray, coef_index: int = 1
) -> float:
    """HC0 sandwich standard error of one weighted-least-squares coefficient.

    Computes ``(X'WX)^-1 (sum_i w_i^2 e_i^2 x_i x_i') (X'WX)^-1`` and
    returns the square root of the requested diagonal entry.  With all
    weights equal to one this reduces to the ordinary HC0
    heteroskedasticity-robust OLS standard error.
    """
    design = np.asarray(design, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    residuals = np.asarray(residuals, dtype=np.float64)
    bread = design.T @ (design * weights[:, None])
    if np.linalg.matrix_rank(bread) < bread.shape[0]:
        raise EstimationError("weighted design matrix is singular")
    bread_inv = np.linalg.inv(bread)
    meat_scale = (weights * residuals) ** 2
    meat = design.T @ (design * meat_scale[:, None])
    cov = bread_inv @ meat @ bread_inv
    return float(np.sqrt(cov[coef_index, coef_index]))
