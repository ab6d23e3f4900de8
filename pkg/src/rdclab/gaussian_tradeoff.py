"""Closed-form rate/distortion/classification tradeoffs for a scalar Gaussian.

The central reduction: for a jointly Gaussian reconstruction with squared
correlation t = theta2^2 / (var_x * var_xhat) and matched means,

    rate          I(X; X̂)  = -0.5 * ln(1 - t)          (increasing in t)
    distortion    min MSE   = var_x * (1 - t)           (optimal sigma_xhat)
    class. loss   h(S | X̂) = h(S) + 0.5 * ln(1 - rho^2 * t)   (decreasing in t)

so a distortion budget D demands t >= 1 - D/var_x, a classification budget C
demands t >= t_min(C) = (1 - e^{2(C - h(S))}) / rho^2, and a rate budget R
caps t at t_max(R) = 1 - e^{-2R}.

Two D(C, R) evaluators ship side by side:

  * ``dcr_distortion_printed`` transcribes the published three-case formula
    verbatim, including a middle case whose activation band contradicts the
    reduction above (in that band the classification budget demands more
    correlation than the rate budget allows, so the true problem is
    infeasible).  Nothing is corrected here.
  * ``dcr_distortion_oracle`` solves the problem by the reduction, and
    ``grid_oracle_rate`` re-checks the rate function by brute force over a
    reconstruction grid, bypassing any case analysis.

Disagreements between the two are tabulated by the CLI discrepancy report,
never papered over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from . import _kernels
from .errors import ParameterError
from .gaussian_model import GaussianPairSource, TradeoffPoint, differential_entropy

Status = Literal["feasible", "infeasible", "unbounded"]
Binding = Literal["distortion", "classification", "both", "none"]


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Outcome of a constrained tradeoff evaluation.

    ``value`` is the optimal rate (for rate solvers) or distortion (for
    distortion solvers) and is present exactly when ``status == "feasible"``.
    ``binding`` reports which budget is active at the optimum; for distortion
    solvers the "distortion" slot denotes the rate budget (the solution sits
    on the rate-limited fidelity floor).  ``branch`` carries the printed-case
    label used by the CSV/JSON emitters.
    """

    status: Status
    value: float | None = None
    binding: Binding | None = None
    branch: str | None = None

    def __post_init__(self) -> None:
        if (self.status == "feasible") != (self.value is not None):
            raise ParameterError("value must be present iff status is feasible")


@dataclass(frozen=True)
class ConstraintSet:
    """A non-empty collection of (distortion, classification-loss) pairs."""

    pairs: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if len(self.pairs) == 0:
            raise ParameterError("constraint set must be non-empty")
        for d, c in self.pairs:
            if d < 0.0 or math.isnan(d) or math.isnan(c):
                raise ParameterError(f"invalid constraint pair ({d}, {c})")


def c_min(src: GaussianPairSource) -> float:
    """Smallest achievable classification loss: 0.5*ln(1 - rho^2) + h(S).

    Returns -inf for a (flagged) perfectly correlated pair; equals h(S) when
    the label is independent of the source.
    """
    rho_sq = src.cov_xs**2 / (src.var_x * src.var_s)
    h_s = differential_entropy(src.var_s)
    if rho_sq >= 1.0:
        return -math.inf
    return 0.5 * math.log1p(-rho_sq) + h_s


def max_useful_rate(src: GaussianPairSource) -> float:
    """I(X; S) = -0.5*ln(1 - rho^2): the rate beyond which no further
    classification information about S exists in any reconstruction."""
    rho_sq = src.cov_xs**2 / (src.var_x * src.var_s)
    if rho_sq >= 1.0:
        return math.inf
    return -0.5 * math.log1p(-rho_sq)


def c_threshold(src: GaussianPairSource, rate: float) -> float:
    """Smallest classification loss reachable at a given rate budget.

    0.5*ln(1 - rho^2*(1 - e^{-2R})) + h(S); equals h(S) at R = 0 and falls
    monotonically to c_min as R grows.
    """
    if rate < 0.0 or math.isnan(rate):
        raise ParameterError(f"rate must be >= 0, got {rate}")
    rho_sq = src.cov_xs**2 / (src.var_x * src.var_s)
    h_s = differential_entropy(src.var_s)
    t_max = -math.expm1(-2.0 * rate)
    arg = 1.0 - rho_sq * t_max
    if arg <= 0.0:
        return -math.inf
    return 0.5 * math.log(arg) + h_s


def _t_required_by_classification(src: GaussianPairSource, c: float) -> float:
    """Minimum squared correlation t needed to push h(S|X̂) down to c."""
    h_s = differential_entropy(src.var_s)
    rho_sq = src.cov_xs**2 / (src.var_x * src.var_s)
    shortfall = -math.expm1(2.0 * (c - h_s))  # 1 - e^{2(C - h(S))}
    if shortfall <= 0.0:
        return 0.0
    if rho_sq == 0.0:
        return math.inf
    return shortfall / rho_sq


def rdc_rate(src: GaussianPairSource, d: float, c: float) -> FeasibilityVerdict:
    """Minimum rate meeting a distortion budget d and classification budget c.

    Infeasible below c_min; unbounded (infinite rate) at d = 0 or when the
    classification budget demands perfect correlation.
    """
    if d < 0.0 or math.isnan(d):
        raise ParameterError(f"distortion budget must be >= 0, got {d}")
    if c < c_min(src):
        return FeasibilityVerdict("infeasible", branch="infeasible")
    t_d = max(0.0, 1.0 - d / src.var_x) if d > 0.0 else 1.0
    t_c = _t_required_by_classification(src, c)
    t = max(t_d, t_c)
    if t >= 1.0:
        return FeasibilityVerdict("unbounded", branch="unbounded")
    if t == 0.0:
        return FeasibilityVerdict("feasible", 0.0, "none", branch="zero_rate")
    rate = -0.5 * math.log1p(-t)
    if t_d == t_c:
        binding: Binding = "both"
    elif t_d > t_c:
        binding = "distortion"
    else:
        binding = "classification"
    return FeasibilityVerdict("feasible", rate, binding, branch=binding)


def dcr_distortion_printed(
    src: GaussianPairSource, c: float, rate: float
) -> FeasibilityVerdict:
    """The published three-case D(C, R) formula, transcribed verbatim.

    Case 1 (C above the rate's classification threshold): var_x * e^{-2R}.
    Case 2 (c_min <= C <= threshold):
        var_x - (var_s * var_x^2 / theta1^2) * (1 - e^{2(C - h(S))}).
    Case 3 (C > h(S) and R > h(X)): 0.  Unreachable for a continuous source
    given the case ordering; transcribed anyway.

    The case-2 band is exactly where the independent oracle reports
    infeasibility; see the module docstring.
    """
    if rate < 0.0 or math.isnan(rate):
        raise ParameterError(f"rate must be >= 0, got {rate}")
    cmin = c_min(src)
    if c < cmin:
        return FeasibilityVerdict("infeasible", branch="infeasible")
    h_s = differential_entropy(src.var_s)
    thr = c_threshold(src, rate)
    if c > thr:
        return FeasibilityVerdict(
            "feasible", src.var_x * math.exp(-2.0 * rate), "distortion", branch="case1"
        )
    if cmin <= c <= thr:
        scale = src.var_s * src.var_x**2 / src.cov_xs**2
        value = src.var_x - scale * (-math.expm1(2.0 * (c - h_s)))
        return FeasibilityVerdict("feasible", value, "classification", branch="case2")
    # Printed case 3; dead code for continuous sources, kept for fidelity.
    if c > h_s and rate > differential_entropy(src.var_x):
        return FeasibilityVerdict("feasible", 0.0, "none", branch="case3")
    return FeasibilityVerdict("infeasible", branch="infeasible")


def dcr_distortion_oracle(
    src: GaussianPairSource, c: float, rate: float
) -> FeasibilityVerdict:
    """D(C, R) by the analytic reduction over the jointly Gaussian family.

    Feasible iff t_min(C) <= t_max(R) = 1 - e^{-2R}; the optimum then takes
    the full rate budget: D = var_x * (1 - t_max), sigma_xhat = sigma_x *
    sqrt(t_max), matched means.
    """
    if rate < 0.0 or math.isnan(rate):
        raise ParameterError(f"rate must be >= 0, got {rate}")
    t_min = _t_required_by_classification(src, c)
    t_max = -math.expm1(-2.0 * rate)
    if t_min > t_max:
        return FeasibilityVerdict("infeasible", branch="infeasible")
    # var_x*(1 - t_max), written so the case-1 agreement with the printed
    # formula is bitwise.
    value = src.var_x * math.exp(-2.0 * rate)
    binding: Binding = "both" if t_min == t_max else "distortion"
    return FeasibilityVerdict("feasible", value, binding, branch="case1")


def grid_oracle_rate(
    src: GaussianPairSource,
    d: float,
    c: float,
    n_sigma: int = 400,
    n_theta: int = 400,
) -> FeasibilityVerdict:
    """Brute-force R(D, C) over a reconstruction grid; no case analysis.

    Sweeps sigma_xhat over (0, 3*sigma_x] and theta2 over
    [-sigma_x*sigma_xhat, +sigma_x*sigma_xhat] (the zero column is always
    included so the constant decoder is represented exactly), keeps grid
    points meeting both budgets, and minimises the mutual information over
    the survivors.
    """
    if n_sigma < 16 or n_theta < 16:
        raise ParameterError("grid resolution must be at least 16 per axis")
    if d < 0.0 or math.isnan(d):
        raise ParameterError(f"distortion budget must be >= 0, got {d}")
    rho_sq = src.cov_xs**2 / (src.var_x * src.var_s)
    h_s = differential_entropy(src.var_s)
    found, rate, mse, ce = _kernels.grid_rate_scan(
        src.var_x, h_s, rho_sq, d, c, n_sigma, n_theta
    )
    if not found:
        return FeasibilityVerdict("infeasible", branch="infeasible")
    if math.isinf(rate):
        return FeasibilityVerdict("unbounded", branch="unbounded")
    # Which budget sits close to its bound at the winning grid point.
    d_tight = (d - mse) <= 2e-2 * max(d, src.var_x)
    c_tight = (c - ce) <= 2e-2 * max(abs(c), 1.0)
    if d_tight and c_tight:
        binding: Binding = "both"
    elif d_tight:
        binding = "distortion"
    elif c_tight:
        binding = "classification"
    else:
        binding = "none"
    return FeasibilityVerdict("feasible", rate, binding, branch="grid")


def boundary_curve(
    src: GaussianPairSource, rate: float, n_points: int
) -> list[TradeoffPoint]:
    """Sample the printed lower-boundary curve at a fixed rate.

    C runs uniformly over the half-open interval [c_min, c_threshold(rate));
    D follows the printed case-2 expression.  Empty when the interval is
    empty (rate 0 or an uncorrelated label).
    """
    if n_points < 2:
        raise ParameterError("n_points must be >= 2")
    if rate < 0.0 or math.isnan(rate):
        raise ParameterError(f"rate must be >= 0, got {rate}")
    if rate == 0.0:
        return []  # no boundary below the trivial point at zero rate
    lo = c_min(src)
    hi = c_threshold(src, rate)
    if not (hi > lo) or math.isinf(lo):
        return []
    h_s = differential_entropy(src.var_s)
    scale = src.var_s * src.var_x**2 / src.cov_xs**2
    points = []
    for i in range(n_points):
        ci = lo + (hi - lo) * i / n_points
        di = src.var_x - scale * (-math.expm1(2.0 * (ci - h_s)))
        points.append(TradeoffPoint(rate=rate, distortion=max(di, 0.0), closs=ci))
    return points
