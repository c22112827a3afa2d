"""Exception taxonomy shared by the library, the CLI, and the HTTP service.

Every statistical failure mode gets its own class so callers (and the two
front ends) can map it to a stable machine-readable code: the CLI exits
with status 2 for any :class:`DomainError`, the HTTP service answers 422
with ``error.code`` set to the class's ``code`` attribute.
"""


class DomainError(ValueError):
    """A request that parses fine but is statistically undefined."""

    code = "domain"


class ParameterError(DomainError):
    """A generative parameter lies outside its domain (e.g. probability > 1)."""

    code = "invalid_parameter"


class NonPositivityError(DomainError):
    """Some confounder stratum has treatment probability 0 or 1.

    The average treatment effect is undefined in that case, so the bias in
    its estimator is undefined too.
    """

    code = "non_positivity"


class ConditioningError(DomainError):
    """A conditional probability was requested given a zero-probability event."""

    code = "conditioning"


class DegenerateObservableError(DomainError):
    """The proxy confounder is almost surely constant, so its conditionals are undefined."""

    code = "degenerate_observable"


class SingularDesignError(DomainError):
    """The (population or sample) regression design is singular."""

    code = "singular_design"


class DegenerateParameterError(DomainError):
    """Sensitivity equals 1 minus specificity; the proxy carries no signal to invert."""

    code = "degenerate_parameter"


class InfeasibleAssumptionError(DomainError):
    """An assumed (sensitivity, specificity) pair is incompatible with the observed summary."""

    code = "infeasible_assumption"


class EstimationError(DomainError):
    """A finite-sample fit could not be carried out (rank deficiency and friends)."""

    code = "estimation"


class PositivityError(EstimationError):
    """A stratum of the adjustment variable is missing one treatment arm."""

    code = "positivity"

    def __init__(self, message, stratum=None, arm=None):
        super().__init__(message)
        self.stratum = stratum
        self.arm = arm


class SensitivityAnalysisError(DomainError):
    """No feasible draw survived a sensitivity analysis."""

    code = "analysis"


class ObservableConsistencyWarning(UserWarning):
    """Observed summaries are mutually inconsistent beyond rounding noise."""
