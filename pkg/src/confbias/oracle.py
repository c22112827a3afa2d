"""Exact population oracle: enumerate the joint law of (L, L*, A) and regress on it.

The generative model has only eight joint cells, so every population-level
quantity the closed forms in :mod:`confbias.formulas` claim to compute can
be recomputed here by brute force: attach E[Y | A, L] to each cell and run
(weighted) least squares with the cell probabilities as weights.  The
module is deliberately independent of :mod:`confbias.formulas` - it never
imports a bias formula - so the two can arbitrate each other.

Everything is exact expectation arithmetic; sample size never appears.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import NonPositivityError, SingularDesignError
from .params import ConditionalCoefficients, LatentParams

__all__ = ["Cell", "CellTable", "enumerate_cells", "population_ols", "population_ipw_slope"]

_SINGULARITY_TOL = 1e-12


@dataclass(frozen=True)
class Cell:
    """One joint configuration of (L, L*, A) with its probability and outcome mean."""

    l: int
    lstar: int
    a: int
    prob: float
    ey: float


@dataclass(frozen=True)
class CellTable:
    """The eight joint cells; probabilities sum to one."""

    cells: Tuple[Cell, ...]

    def p_joint(self, l: Optional[int] = None, lstar: Optional[int] = None,
                a: Optional[int] = None) -> float:
        """Marginal probability of the cells matching the given coordinates."""
        total = 0.0
        for cell in self.cells:
            if l is not None and cell.l != l:
                continue
            if lstar is not None and cell.lstar != lstar:
                continue
            if a is not None and cell.a != a:
                continue
            total += cell.prob
        return total

    def p_a_given(self, a: int, *, l: Optional[int] = None,
                  lstar: Optional[int] = None) -> float:
        """P(A=a | L=l) or P(A=a | L*=lstar), depending on which is given."""
        denom = self.p_joint(l=l, lstar=lstar)
        if denom <= 0.0:
            raise NonPositivityError(
                f"conditioning stratum (l={l}, lstar={lstar}) has probability 0"
            )
        return self.p_joint(l=l, lstar=lstar, a=a) / denom


def enumerate_cells(params: LatentParams, setting: int = 2) -> CellTable:
    """Build the exact joint distribution of (L, L*, A) plus E[Y | A, L].

    ``setting=2`` assigns treatment from the true confounder
    (A | L ~ Bernoulli(pi_L)); ``setting=1`` assigns it from the proxy
    (A | L* ~ Bernoulli(pi_{L*})), the regime in which adjusting for the
    proxy is enough.
    """
    if setting not in (1, 2):
        raise ValueError(f"setting must be 1 or 2, got {setting!r}")
    cells = []
    for l in (0, 1):
        p_l = params.lam if l else 1.0 - params.lam
        p_star1 = params.p1 if l else params.p0
        for lstar in (0, 1):
            p_lstar = p_star1 if lstar else 1.0 - p_star1
            source = l if setting == 2 else lstar
            p_treat = params.pi1 if source else params.pi0
            for a in (0, 1):
                p_a = p_treat if a else 1.0 - p_treat
                cells.append(
                    Cell(
                        l=l,
                        lstar=lstar,
                        a=a,
                        prob=p_l * p_lstar * p_a,
                        ey=params.alpha + params.beta * a + params.gamma * l,
                    )
                )
    return CellTable(cells=tuple(cells))


def _solve_pivoted(matrix: List[List[float]], rhs: List[float]) -> List[float]:
    """Gaussian elimination with partial pivoting on a system of order <= 4.

    Raises :class:`SingularDesignError` when the accumulated determinant
    falls below 1e-12 in absolute value.
    """
    n = len(rhs)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    det = 1.0
    for col in range(n):
        pivot_row = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if pivot_row != col:
            aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
            det = -det
        pivot = aug[col][col]
        det *= pivot
        if abs(det) < _SINGULARITY_TOL:
            raise SingularDesignError(
                f"normal equations are singular (|det| = {abs(det):.3g})"
            )
        for row in range(col + 1, n):
            factor = aug[row][col] / pivot
            if factor != 0.0:
                for k in range(col, n + 1):
                    aug[row][k] -= factor * aug[col][k]
    solution = [0.0] * n
    for row in range(n - 1, -1, -1):
        acc = aug[row][n]
        for k in range(row + 1, n):
            acc -= aug[row][k] * solution[k]
        solution[row] = acc / aug[row][row]
    return solution


def population_ols(
    cells: CellTable, covariate: str = "lstar", interaction: bool = False
) -> ConditionalCoefficients:
    """Population least squares of E[Y] on (1, A, Z[, A*Z]) with Z = L or L*.

    The cell probabilities act as weights in the normal equations, so the
    result is the coefficient vector the corresponding sample regression
    converges to.  Regressing on (1, A, L) returns the generative
    (alpha, beta, gamma) exactly.
    """
    if covariate not in ("l", "lstar"):
        raise ValueError(f"covariate must be 'l' or 'lstar', got {covariate!r}")
    rows = []
    for cell in cells.cells:
        z = cell.l if covariate == "l" else cell.lstar
        design = [1.0, float(cell.a), float(z)]
        if interaction:
            design.append(float(cell.a * z))
        rows.append((design, cell.prob, cell.ey))
    k = 4 if interaction else 3
    xtwx = [[0.0] * k for _ in range(k)]
    xtwy = [0.0] * k
    for design, w, ey in rows:
        for i in range(k):
            xtwy[i] += w * design[i] * ey
            for j in range(k):
                xtwx[i][j] += w * design[i] * design[j]
    coef = _solve_pivoted(xtwx, xtwy)
    return ConditionalCoefficients(
        intercept=coef[0],
        a=coef[1],
        lstar=coef[2],
        a_lstar=coef[3] if interaction else None,
    )


def population_ipw_slope(cells: CellTable, weight_on: str = "lstar") -> float:
    """Population slope of the weighted regression of Y on A.

    Each cell is weighted by ``prob / P(A=a | Z)`` with Z the adjustment
    variable; this is the exact-expectation analogue of inverse
    probability weighting.  Weighting on the true confounder returns the
    generative treatment effect; weighting on the proxy returns it plus
    the misclassification bias.

    Raises :class:`NonPositivityError` if a reachable stratum of Z gives
    some treatment arm probability 0.
    """
    if weight_on not in ("l", "lstar"):
        raise ValueError(f"weight_on must be 'l' or 'lstar', got {weight_on!r}")
    for stratum in (0, 1):
        kwargs = {weight_on: stratum}
        if cells.p_joint(**kwargs) <= 0.0:
            continue
        for arm in (0, 1):
            if cells.p_a_given(arm, **kwargs) <= 0.0:
                raise NonPositivityError(
                    f"P(A={arm} | {weight_on}={stratum}) = 0 on a reachable stratum"
                )
    weights = []
    for cell in cells.cells:
        if cell.prob == 0.0:
            weights.append(0.0)
            continue
        if weight_on == "l":
            p_arm = cells.p_a_given(cell.a, l=cell.l)
        else:
            p_arm = cells.p_a_given(cell.a, lstar=cell.lstar)
        weights.append(cell.prob / p_arm)
    total = sum(weights)
    a_bar = sum(w * cell.a for w, cell in zip(weights, cells.cells)) / total
    y_bar = sum(w * cell.ey for w, cell in zip(weights, cells.cells)) / total
    denom = sum(w * (cell.a - a_bar) ** 2 for w, cell in zip(weights, cells.cells))
    if denom <= _SINGULARITY_TOL:
        raise SingularDesignError("weighted treatment variance is zero")
    num = sum(
        w * (cell.ey - y_bar) * (cell.a - a_bar)
        for w, cell in zip(weights, cells.cells)
    )
    return num / denom
