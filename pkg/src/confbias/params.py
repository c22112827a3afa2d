"""Domain types: generative parameters, observable summaries, result records.

The generative model is a point-treatment study with a binary treatment A,
a continuous outcome Y, and a single binary confounder L that is only
observed through a noisy proxy L* (non-differential misclassification):

    L  ~ Bernoulli(lam)
    L* | L = l ~ Bernoulli(p1 if l else p0)
    A  | L = l ~ Bernoulli(pi1 if l else pi0)
    Y  | A, L  ~ Normal(alpha + beta * A + gamma * L, sigma**2)

``p1`` is the sensitivity of the proxy and ``1 - p0`` its specificity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ParameterError

# Tolerances, stated once and reused everywhere: algebraic identities are
# checked to 1e-12, comparisons against the enumeration oracle (which
# accumulate more arithmetic) to 1e-10.
ALGEBRAIC_TOL = 1e-12
ORACLE_TOL = 1e-10


def _check_probability(name: str, value: float) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ParameterError(f"{name} must be a real number, got {value!r}")
    if not math.isfinite(value) or not 0.0 <= value <= 1.0:
        raise ParameterError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class LatentParams:
    """Full parameter vector of the generative model.

    Parameters
    ----------
    lam : float
        Confounder prevalence P(L=1).
    pi0, pi1 : float
        Treatment probabilities P(A=1 | L=0) and P(A=1 | L=1).
    p0, p1 : float
        Proxy misclassification probabilities P(L*=1 | L=0) (one minus
        specificity) and P(L*=1 | L=1) (sensitivity).
    alpha, beta, gamma : float
        Outcome-model intercept, treatment effect (the estimand), and
        confounder effect, in outcome units.
    sigma : float
        Outcome noise standard deviation, > 0.
    """

    lam: float
    pi0: float
    pi1: float
    p0: float
    p1: float
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    sigma: float = 1.0

    def __post_init__(self) -> None:
        for name in ("lam", "pi0", "pi1", "p0", "p1"):
            _check_probability(name, getattr(self, name))
        for name in ("alpha", "beta", "gamma", "sigma"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ParameterError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if self.sigma <= 0.0:
            raise ParameterError(f"sigma must be > 0, got {self.sigma!r}")


@dataclass(frozen=True)
class ObservedSummary:
    """Summary statistics estimable from data that omit the true confounder.

    ``ell`` is P(L*=1), ``omega`` is P(A=1), and ``pi_star0`` / ``pi_star1``
    are P(A=1 | L*=0) / P(A=1 | L*=1).  By the law of total probability a
    summary derived from one generative model satisfies
    ``omega == pi_star0 * (1 - ell) + pi_star1 * ell``; summaries keyed in
    from published (rounded) numbers may miss that identity, which is why it
    is not enforced at construction.  :meth:`omega_gap` measures the slack.
    """

    ell: float
    omega: float
    pi_star0: float
    pi_star1: float

    def __post_init__(self) -> None:
        for name in ("ell", "omega", "pi_star0", "pi_star1"):
            _check_probability(name, getattr(self, name))

    def omega_gap(self) -> float:
        """Absolute difference between ``omega`` and its reconstruction from (pi*, ell)."""
        return abs(self.omega - (self.pi_star0 * (1.0 - self.ell) + self.pi_star1 * self.ell))


@dataclass(frozen=True)
class BiasPair:
    """Bias of the treatment-effect estimator under both analysis models.

    ``bias_cm`` is the bias of the coefficient on A in the outcome
    regression on (1, A, L*); ``bias_msm`` that of the marginal model fit
    by inverse-probability-of-treatment weighting with weights built from
    L*.  The two never take strictly opposite signs.
    """

    bias_cm: float
    bias_msm: float


@dataclass(frozen=True)
class UCoefficients:
    """Population least-squares coefficients of A*L* on (1, A, L*)."""

    u0: float
    u_a: float
    u_lstar: float


@dataclass(frozen=True)
class ConditionalCoefficients:
    """Population coefficients of the outcome regression on the proxy.

    ``a_lstar`` is the A*L* interaction coefficient, or None for the
    main-effects-only model.
    """

    intercept: float
    a: float
    lstar: float
    a_lstar: Optional[float] = None
