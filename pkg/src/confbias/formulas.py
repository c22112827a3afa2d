"""Closed-form bias algebra for a misclassified binary confounder.

Everything in this module is exact probability algebra on
:class:`~confbias.params.LatentParams`; no data and no randomness.  The two
headline results are :func:`bias_conditional` and :func:`bias_msm`, the bias
of the average-treatment-effect estimator when the outcome regression,
respectively the inverse-probability-weighted marginal model, adjusts for
the proxy L* instead of the true confounder L.

Both biases share the same building blocks:

* ``phi(a, lstar)`` = P(L=1 | A=a, L*=lstar), a Bayes inversion of the
  generative model,
* the contrasts ``phi(1, s) - phi(0, s)`` for s in {0, 1}, which measure
  how much confounding leaks past the proxy within each proxy stratum,
* a stratum weight: the proxy prevalence ``ell`` for the weighted marginal
  model, and the regression projection coefficient ``u_a`` for the
  conditional model.

``bias = gamma * [contrast_0 * (1 - T) + contrast_1 * T]`` with T the
stratum weight.  The two models therefore always agree in sign, and they
agree in value exactly when ``u_a == ell``.

Writing ``u_a`` out as a ratio shows an equivalent form in which the weight
appears as ``ell`` times a bracketed fraction; the two are the same number
(the factor ``ell`` can be absorbed into the fraction's numerator), and the
enumeration oracle in :mod:`confbias.oracle` pins the value down either way.
"""

from __future__ import annotations

import warnings
from dataclasses import replace
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .errors import (
    ConditioningError,
    DegenerateObservableError,
    DegenerateParameterError,
    InfeasibleAssumptionError,
    NonPositivityError,
    ObservableConsistencyWarning,
    SingularDesignError,
)
from .params import (
    ALGEBRAIC_TOL,
    BiasPair,
    ConditionalCoefficients,
    LatentParams,
    ObservedSummary,
    UCoefficients,
)

__all__ = [
    "implied_observables",
    "phi",
    "phi_table",
    "u_coefficients",
    "bias_conditional",
    "bias_msm",
    "bias_pair",
    "implied_conditional_coefficients",
    "invert_observables",
    "InvertedParams",
    "bias_curve",
    "CurvePoint",
    "SWEEPABLE_PARAMETERS",
]


def implied_observables(params: LatentParams) -> ObservedSummary:
    """Marginalize the generative model down to what a proxy-only analyst sees.

    Returns the proxy prevalence ``ell = p0 (1-lam) + p1 lam``, the
    treatment prevalence ``omega = pi0 (1-lam) + pi1 lam`` and the
    stratum-specific treatment probabilities
    ``pi_star_s = P(A=1 | L*=s)`` obtained by averaging ``pi_l`` over
    P(L=l | L*=s).

    Raises
    ------
    DegenerateObservableError
        If the proxy is almost surely constant (``ell`` is 0 or 1), in
        which case conditioning on it is undefined.
    """
    lam, p0, p1 = params.lam, params.p0, params.p1
    ell = p0 * (1.0 - lam) + p1 * lam
    omega = params.pi0 * (1.0 - lam) + params.pi1 * lam
    if not 0.0 < ell < 1.0:
        raise DegenerateObservableError(
            f"P(L*=1) = {ell!r}; conditional treatment probabilities are undefined"
        )
    pi_star1 = (params.pi0 * p0 * (1.0 - lam) + params.pi1 * p1 * lam) / ell
    pi_star0 = (params.pi0 * (1.0 - p0) * (1.0 - lam) + params.pi1 * (1.0 - p1) * lam) / (1.0 - ell)
    return ObservedSummary(ell=ell, omega=omega, pi_star0=pi_star0, pi_star1=pi_star1)


def _check_binary(name: str, value: int) -> None:
    if value not in (0, 1):
        raise ValueError(f"{name} must be 0 or 1, got {value!r}")


def phi(a: int, lstar: int, params: LatentParams) -> float:
    """P(L=1 | A=a, L*=lstar) under the generative model.

    Bayes' rule against the joint cell probabilities gives

        phi = lam * P(A=a | L=1) * P(L*=lstar | L=1)
              / [ P(A=a | L*=lstar) * P(L*=lstar) ].

    Raises :class:`ConditioningError` when the conditioning event
    (A=a, L*=lstar) has probability zero.
    """
    _check_binary("a", a)
    _check_binary("lstar", lstar)
    obs = implied_observables(params)
    return _phi_cell(a, lstar, params, obs)


def _phi_cell(a: int, lstar: int, params: LatentParams, obs: ObservedSummary) -> float:
    pi_star = obs.pi_star1 if lstar else obs.pi_star0
    p_a_given_lstar = pi_star if a else 1.0 - pi_star
    p_lstar = obs.ell if lstar else 1.0 - obs.ell
    denom = p_a_given_lstar * p_lstar
    if denom <= 0.0:
        raise ConditioningError(
            f"P(A={a}, L*={lstar}) = 0; phi({a}, {lstar}) is undefined"
        )
    p_a_given_l1 = params.pi1 if a else 1.0 - params.pi1
    p_lstar_given_l1 = params.p1 if lstar else 1.0 - params.p1
    return params.lam * p_a_given_l1 * p_lstar_given_l1 / denom


def phi_table(params: LatentParams) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """All four values of :func:`phi`, indexed ``[a][lstar]``."""
    obs = implied_observables(params)
    return tuple(
        tuple(_phi_cell(a, lstar, params, obs) for lstar in (0, 1)) for a in (0, 1)
    )


def u_coefficients(params: LatentParams) -> UCoefficients:
    """Population least-squares coefficients of A*L* on (1, A, L*).

    The product A*L* is not linear in (A, L*); projecting it onto the
    main-effects span is what turns the interaction left out of the
    proxy outcome regression into bias on the treatment coefficient.
    The normal equations only need second moments of (A, L*), all of
    which have closed forms:

        Var(A)        = omega (1 - omega)
        Var(L*)       = ell (1 - ell)
        Cov(A, L*)    = (pi*_1 - pi*_0) Var(L*)
        Cov(AL*, L*)  = pi*_1 Var(L*)
        Cov(AL*, A)   = (pi*_1 ell / omega) Var(A)
        E[A L*]       = pi*_1 ell

    Raises :class:`SingularDesignError` when A or L* has zero variance or
    the 2x2 normal-equation determinant is not positive.
    """
    obs = implied_observables(params)
    var_a = obs.omega * (1.0 - obs.omega)
    var_lstar = obs.ell * (1.0 - obs.ell)
    if var_a <= ALGEBRAIC_TOL or var_lstar <= ALGEBRAIC_TOL:
        raise SingularDesignError(
            f"degenerate regressor variance: Var(A)={var_a!r}, Var(L*)={var_lstar!r}"
        )
    cov_a_lstar = (obs.pi_star1 - obs.pi_star0) * var_lstar
    cov_prod_lstar = obs.pi_star1 * var_lstar
    cov_prod_a = (obs.pi_star1 * obs.ell / obs.omega) * var_a
    det = var_a * var_lstar - cov_a_lstar * cov_a_lstar
    if det <= ALGEBRAIC_TOL:
        raise SingularDesignError(
            f"normal-equation determinant {det!r} is not positive; A and L* are collinear"
        )
    u_a = (var_lstar * cov_prod_a - cov_a_lstar * cov_prod_lstar) / det
    u_lstar = (var_a * cov_prod_lstar - cov_a_lstar * cov_prod_a) / det
    u0 = obs.pi_star1 * obs.ell - u_a * obs.omega - u_lstar * obs.ell
    return UCoefficients(u0=u0, u_a=u_a, u_lstar=u_lstar)


def _null_bias_shortcut(params: LatentParams) -> Optional[float]:
    """Exact-zero short-circuits, checked before any division can blow up.

    A prevalence of 0 or 1 makes some phi cells 0/0, but the bias is zero
    by a direct argument (the confounder is constant), so that case is
    answered first and exactly.  Treatment-probability degeneracy with a
    non-constant confounder is a positivity violation: the target estimand
    itself is undefined, so the bias is reported as an error, not a number.
    """
    if params.lam == 0.0 or params.lam == 1.0:
        return 0.0
    if params.pi0 in (0.0, 1.0) or params.pi1 in (0.0, 1.0):
        raise NonPositivityError(
            f"pi0={params.pi0!r}, pi1={params.pi1!r}: some confounder stratum is "
            "always or never treated, so the average treatment effect is undefined"
        )
    if params.gamma == 0.0:
        return 0.0
    if params.p0 == 0.0 and params.p1 == 1.0:
        return 0.0
    return None


def bias_conditional(params: LatentParams) -> float:
    """Bias of the treatment coefficient in the outcome regression on (1, A, L*).

    Equals ``gamma * [(phi(1,0)-phi(0,0)) (1 - u_a) + (phi(1,1)-phi(0,1)) u_a]``
    with ``u_a`` from :func:`u_coefficients`.
    """
    shortcut = _null_bias_shortcut(params)
    if shortcut is not None:
        return shortcut
    t = u_coefficients(params).u_a
    ph = phi_table(params)
    return params.gamma * ((ph[1][0] - ph[0][0]) * (1.0 - t) + (ph[1][1] - ph[0][1]) * t)


def bias_msm(params: LatentParams) -> float:
    """Bias of the marginal-model ATE fit with weights 1 / P(A | L*).

    Equals ``gamma * [(phi(1,0)-phi(0,0)) (1 - ell) + (phi(1,1)-phi(0,1)) ell]``.
    """
    shortcut = _null_bias_shortcut(params)
    if shortcut is not None:
        return shortcut
    obs = implied_observables(params)
    ph = tuple(
        tuple(_phi_cell(a, lstar, params, obs) for lstar in (0, 1)) for a in (0, 1)
    )
    return params.gamma * (
        (ph[1][0] - ph[0][0]) * (1.0 - obs.ell) + (ph[1][1] - ph[0][1]) * obs.ell
    )


def bias_pair(params: LatentParams) -> BiasPair:
    """Both biases for one parameter vector."""
    return BiasPair(bias_cm=bias_conditional(params), bias_msm=bias_msm(params))


def implied_conditional_coefficients(
    params: LatentParams, with_interaction: bool = False
) -> ConditionalCoefficients:
    """Population coefficients of the proxy outcome regression.

    With ``with_interaction=True`` the regression of Y on
    (1, A, L*, A*L*) is exact, because E[Y | A, L*] = alpha + beta A +
    gamma phi(A, L*) is saturated in the four (A, L*) cells:

        intercept     alpha + gamma phi(0,0)
        A             beta  + gamma (phi(1,0) - phi(0,0))
        L*            gamma (phi(0,1) - phi(0,0))
        A*L*          delta = gamma (phi(1,1) - phi(1,0) - phi(0,1) + phi(0,0))

    With ``with_interaction=False`` (what a proxy-only analyst typically
    fits) the interaction is projected onto the main effects, adding
    ``delta * (u0, u_a, u_lstar)`` to the three coefficients.
    """
    if params.p0 == 0.0 and params.p1 == 1.0:
        # Perfect classification: the proxy regression is the true model.
        interaction = 0.0 if with_interaction else None
        return ConditionalCoefficients(
            intercept=params.alpha, a=params.beta, lstar=params.gamma, a_lstar=interaction
        )
    ph = phi_table(params)
    gamma = params.gamma
    delta = gamma * (ph[1][1] - ph[1][0] - ph[0][1] + ph[0][0])
    intercept = params.alpha + gamma * ph[0][0]
    a_coef = params.beta + gamma * (ph[1][0] - ph[0][0])
    lstar_coef = gamma * (ph[0][1] - ph[0][0])
    if with_interaction:
        return ConditionalCoefficients(
            intercept=intercept, a=a_coef, lstar=lstar_coef, a_lstar=delta
        )
    u = u_coefficients(params)
    return ConditionalCoefficients(
        intercept=intercept + delta * u.u0,
        a=a_coef + delta * u.u_a,
        lstar=lstar_coef + delta * u.u_lstar,
        a_lstar=None,
    )


class InvertedParams(NamedTuple):
    """Latent parameters reconstructed from observables and an assumed (p0, p1)."""

    lam: float
    pi0: float
    pi1: float


# Published summaries are rounded to a couple of decimals, so omega can miss
# its reconstruction from (pi*, ell) by ~1e-2 without the data being wrong.
# Anything beyond 1e-9 in a summary that claims to be exact deserves a
# warning; rejecting outright would refuse every real-world rounded input.
_OMEGA_CONSISTENCY_TOL = 1e-9


def invert_observables(obs: ObservedSummary, p0: float, p1: float) -> InvertedParams:
    """Solve the observable map for (lam, pi0, pi1) given assumed (p0, p1).

    This inverts :func:`implied_observables` at a hypothesized sensitivity
    ``p1`` and one-minus-specificity ``p0``:

        lam  = (ell - p0) / (p1 - p0)
        pi1  = [pi*_1 ell (1 - p0) - pi*_0 (1 - ell) p0] / [lam (p1 - p0)]
        pi0  = [pi*_0 (1 - ell) - pi1 (1 - p1) lam] / [(1 - p0) (1 - lam)]

    All three observables ``ell``, ``pi_star0``, ``pi_star1`` are taken
    from ``obs`` as given; ``omega`` is only cross-checked against its
    reconstruction (a gap beyond 1e-9 earns an
    :class:`ObservableConsistencyWarning`, since exact summaries satisfy
    the identity while rounded published ones may not).

    Raises
    ------
    DegenerateParameterError
        If ``|p1 - p0| < 1e-12`` (the proxy carries no information).
    DegenerateObservableError
        If ``ell`` is 0 or 1.
    InfeasibleAssumptionError
        If any reconstructed parameter falls outside [0, 1], or the
        reconstruction is indeterminate because ``lam`` is 0 or 1.
    """
    for name, value in (("p0", p0), ("p1", p1)):
        if not 0.0 <= value <= 1.0:
            raise DegenerateParameterError(f"{name} must lie in [0, 1], got {value!r}")
    if abs(p1 - p0) < ALGEBRAIC_TOL:
        raise DegenerateParameterError(
            f"p1 = {p1!r} and p0 = {p0!r} coincide; L* is independent of L and "
            "the inversion is undefined"
        )
    if not 0.0 < obs.ell < 1.0:
        raise DegenerateObservableError(
            f"P(L*=1) = {obs.ell!r} is degenerate; nothing to invert"
        )
    gap = obs.omega_gap()
    if gap > _OMEGA_CONSISTENCY_TOL:
        warnings.warn(
            f"omega = {obs.omega!r} differs from pi_star0*(1-ell) + pi_star1*ell "
            f"by {gap:.3g}; treating the summary as rounded data",
            ObservableConsistencyWarning,
            stacklevel=2,
        )
    if p0 == 0.0 and p1 == 1.0:
        # Perfect classification: observables are the latent parameters.
        return InvertedParams(lam=obs.ell, pi0=obs.pi_star0, pi1=obs.pi_star1)

    lam = (obs.ell - p0) / (p1 - p0)
    if not 0.0 <= lam <= 1.0:
        raise InfeasibleAssumptionError(
            f"implied prevalence lam = {lam!r} falls outside [0, 1]; the assumed "
            f"(p0={p0!r}, p1={p1!r}) are incompatible with P(L*=1) = {obs.ell!r}"
        )
    if lam == 0.0 or lam == 1.0 or p0 == 1.0:
        raise InfeasibleAssumptionError(
            f"implied prevalence lam = {lam!r} (with p0 = {p0!r}) leaves a "
            "treatment probability unidentified"
        )
    pi1 = (obs.pi_star1 * obs.ell * (1.0 - p0) - obs.pi_star0 * (1.0 - obs.ell) * p0) / (
        lam * (p1 - p0)
    )
    if not 0.0 <= pi1 <= 1.0:
        raise InfeasibleAssumptionError(
            f"implied pi1 = {pi1!r} falls outside [0, 1] for assumed "
            f"(p0={p0!r}, p1={p1!r})"
        )
    pi0 = (obs.pi_star0 * (1.0 - obs.ell) - pi1 * (1.0 - p1) * lam) / (
        (1.0 - p0) * (1.0 - lam)
    )
    if not 0.0 <= pi0 <= 1.0:
        raise InfeasibleAssumptionError(
            f"implied pi0 = {pi0!r} falls outside [0, 1] for assumed "
            f"(p0={p0!r}, p1={p1!r})"
        )
    return InvertedParams(lam=lam, pi0=pi0, pi1=pi1)


class CurvePoint(NamedTuple):
    """One grid point of a bias sweep; ``pair`` is None where the bias is undefined."""

    value: float
    pair: Optional[BiasPair]


SWEEPABLE_PARAMETERS = ("lambda", "pi0", "pi1", "gamma", "p0", "p1")

_FIELD_BY_SWEEP_NAME = {
    "lambda": "lam",
    "pi0": "pi0",
    "pi1": "pi1",
    "gamma": "gamma",
    "p0": "p0",
    "p1": "p1",
}


def bias_curve(
    params: LatentParams, parameter: str, grid: Sequence[float]
) -> List[CurvePoint]:
    """Evaluate both bias formulas along a one-parameter sweep.

    Grid points where the bias is undefined (positivity violations at
    pi values of 0 or 1, degenerate proxies, singular designs) are kept in
    the output with ``pair=None`` so plots can show gaps or open points
    rather than silently dropping or interpolating them.

    ``parameter`` is one of :data:`SWEEPABLE_PARAMETERS`; grid values must
    lie in the parameter's domain ([0, 1] for probabilities).
    """
    if parameter not in _FIELD_BY_SWEEP_NAME:
        raise ValueError(
            f"unknown sweep parameter {parameter!r}; expected one of "
            f"{', '.join(SWEEPABLE_PARAMETERS)}"
        )
    field = _FIELD_BY_SWEEP_NAME[parameter]
    values = [float(v) for v in grid]
    if field != "gamma":
        for v in values:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"grid value {v!r} outside [0, 1] for {parameter}")
    points = []
    for v in values:
        candidate = replace(params, **{field: v})
        try:
            pair = bias_pair(candidate)
        except (
            NonPositivityError,
            ConditioningError,
            DegenerateObservableError,
            SingularDesignError,
        ):
            points.append(CurvePoint(value=v, pair=None))
        else:
            points.append(CurvePoint(value=v, pair=pair))
    return points
