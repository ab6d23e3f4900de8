"""Finite-alphabet machinery: MMSE reduction, transport, and region bounds.

All quantities are grounded in the fully specified joint
p(s, x, z, x̂) = p(x, s) * p(z|x) * p(x̂|z), so every conditional entropy and
distortion is well defined and computable by exact enumeration.  The
achievability outer bound checked here is

    D >= E[(X - X̃)^2] + W2^2(p_X̃, p_X̂),      X̃ = E[X | Z],

whose two ingredients each come with an independent second route: the MSE
splits exactly (Pythagorean identity) as E[(X-X̂)^2] = E[(X-X̃)^2] +
E[(X̃-X̂)^2], and the quantile-coupling transport cost is cross-checked by a
linear program over the transportation polytope.

Entropies are in nats.  Reconstruction alphabets default to the MMSE support
joined with the source alphabet; callers may supply custom real supports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import linprog
from scipy.stats import norm

from . import _kernels
from .errors import InfeasibleBudgetError, ParameterError, SizeGuardError

_STOCHASTIC_TOL = 1e-12
_MAX_LP_SUPPORT = 64
_MAX_ALPHABET = 6
_MAX_LEVELS = 12
_MAX_DECODER_COMBOS = 2_000_000


@dataclass(frozen=True)
class DiscreteDistribution:
    """Atoms on the real line: strictly increasing support, probs summing to 1."""

    support: np.ndarray
    probs: np.ndarray

    def __post_init__(self) -> None:
        support = np.asarray(self.support, dtype=np.float64)
        probs = np.asarray(self.probs, dtype=np.float64)
        if support.ndim != 1 or probs.shape != support.shape:
            raise ParameterError("support and probs must be 1-D and equal length")
        if support.size == 0:
            raise ParameterError("distribution must have at least one atom")
        if np.any(np.diff(support) <= 0.0):
            raise ParameterError("support must be strictly increasing")
        if np.any(probs < 0.0) or abs(float(probs.sum()) - 1.0) > 1e-9:
            raise ParameterError("probs must be nonnegative and sum to 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)
        support.flags.writeable = False
        probs.flags.writeable = False

    def mean(self) -> float:
        return float(self.support @ self.probs)

    def variance(self) -> float:
        m = self.mean()
        return float(((self.support - m) ** 2) @ self.probs)


@dataclass(frozen=True)
class DiscreteSource:
    """Joint pmf of a real-valued X and a finite label S.

    ``pmf[i, j] = P(X = x_values[i], S = j)``.  ``s_values`` optionally gives
    numeric label values (defaults to 0..s_size-1) so Cov(X, S) is defined.
    """

    x_values: np.ndarray
    s_size: int
    pmf: np.ndarray
    s_values: np.ndarray | None = None

    def __post_init__(self) -> None:
        xv = np.asarray(self.x_values, dtype=np.float64)
        pmf = np.asarray(self.pmf, dtype=np.float64)
        if xv.ndim != 1 or np.any(np.diff(xv) <= 0.0):
            raise ParameterError("x_values must be 1-D and strictly increasing")
        if self.s_size < 2:
            raise ParameterError("s_size must be >= 2")
        if pmf.shape != (xv.size, self.s_size):
            raise ParameterError(
                f"pmf must have shape {(xv.size, self.s_size)}, got {pmf.shape}"
            )
        if np.any(pmf < 0.0) or abs(float(pmf.sum()) - 1.0) > _STOCHASTIC_TOL:
            raise ParameterError("pmf must be nonnegative and sum to 1")
        sv = self.s_values
        sv = np.arange(self.s_size, dtype=np.float64) if sv is None else np.asarray(
            sv, dtype=np.float64
        )
        if sv.shape != (self.s_size,):
            raise ParameterError("s_values must have length s_size")
        object.__setattr__(self, "x_values", xv)
        object.__setattr__(self, "pmf", pmf)
        object.__setattr__(self, "s_values", sv)
        for arr in (xv, pmf, sv):
            arr.flags.writeable = False

    @property
    def p_x(self) -> np.ndarray:
        return self.pmf.sum(axis=1)

    @property
    def p_s(self) -> np.ndarray:
        return self.pmf.sum(axis=0)

    def mean_x(self) -> float:
        return float(self.x_values @ self.p_x)

    def var_x(self) -> float:
        m = self.mean_x()
        return float(((self.x_values - m) ** 2) @ self.p_x)

    def cov_xs(self) -> float:
        mx = self.mean_x()
        ms = float(self.s_values @ self.p_s)
        return float(
            (self.x_values - mx) @ self.pmf @ (self.s_values - ms)
        )


@dataclass(frozen=True)
class Channel:
    """Row-stochastic matrix: rows index inputs, each row a probability vector."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=np.float64)
        if mat.ndim != 2 or mat.shape[0] == 0 or mat.shape[1] == 0:
            raise ParameterError("channel matrix must be 2-D and non-empty")
        if np.any(mat < 0.0):
            raise ParameterError("channel entries must be nonnegative")
        if np.any(np.abs(mat.sum(axis=1) - 1.0) > _STOCHASTIC_TOL):
            raise ParameterError("channel rows must each sum to 1")
        object.__setattr__(self, "matrix", mat)
        mat.flags.writeable = False

    @property
    def n_in(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_out(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class MMSEReduction:
    """Conditional-mean decode of an encoder: estimator, its law, and residual."""

    estimator: dict[int, float]
    p_xtilde: DiscreteDistribution
    residual: float


@dataclass(frozen=True)
class CMinSolution:
    """Outcome of the minimum-classification-loss search under an MSE budget."""

    feasible: bool
    c_min: float | None = None
    decoder: Channel | None = None
    p_xhat: DiscreteDistribution | None = None


@dataclass(frozen=True)
class OuterBoundReport:
    d: float
    c: float
    rhs: float
    holds: bool
    residual: float
    w2_term: float


def _check_encoder(src: DiscreteSource, encoder: Channel) -> None:
    if encoder.n_in != src.x_values.size:
        raise ParameterError(
            f"encoder has {encoder.n_in} input rows, source alphabet has "
            f"{src.x_values.size}"
        )


def joint_zs(src: DiscreteSource, encoder: Channel) -> np.ndarray:
    """Joint p(z, s) induced by the source and encoder, shape (n_z, s_size)."""
    _check_encoder(src, encoder)
    return encoder.matrix.T @ src.pmf


def mutual_info_xz(src: DiscreteSource, encoder: Channel) -> float:
    """I(X; Z) of the encoder in nats, by exact enumeration."""
    _check_encoder(src, encoder)
    p_x = src.p_x
    p_z = p_x @ encoder.matrix
    joint = p_x[:, None] * encoder.matrix
    with np.errstate(divide="ignore", invalid="ignore"):
        term = joint * (np.log(joint) - np.log(p_x[:, None]) - np.log(p_z[None, :]))
    term[joint <= 0.0] = 0.0
    return float(term.sum())


def mmse_reduction(src: DiscreteSource, encoder: Channel) -> MMSEReduction:
    """E[X | Z = z] per reachable z, the law of X̃, and E[(X - X̃)^2].

    Unreachable z symbols (zero marginal probability) are dropped; estimator
    values that coincide exactly are merged into one atom of p_X̃.
    """
    _check_encoder(src, encoder)
    p_x = src.p_x
    p_z = p_x @ encoder.matrix
    estimator: dict[int, float] = {}
    mass: dict[float, float] = {}
    residual = 0.0
    for z in range(encoder.n_out):
        if p_z[z] <= 0.0:
            continue
        w = p_x * encoder.matrix[:, z]
        m = float(w @ src.x_values) / p_z[z]
        estimator[z] = m
        mass[m] = mass.get(m, 0.0) + float(p_z[z])
        residual += float(w @ (src.x_values - m) ** 2)
    values = np.array(sorted(mass), dtype=np.float64)
    probs = np.array([mass[v] for v in values], dtype=np.float64)
    probs = probs / probs.sum()
    return MMSEReduction(
        estimator=estimator,
        p_xtilde=DiscreteDistribution(values, probs),
        residual=residual,
    )


def cond_entropy_discrete(joint: np.ndarray) -> float:
    """H(S | W) in nats from a joint table ``joint[s, w] = P(S=s, W=w)``.

    Conditions on the second axis; 0*log(0) is 0.
    """
    j = np.asarray(joint, dtype=np.float64)
    if j.ndim != 2:
        raise ParameterError("joint must be 2-D")
    if np.any(j < 0.0) or abs(float(j.sum()) - 1.0) > 1e-9:
        raise ParameterError("joint must be nonnegative and sum to 1")
    p_w = j.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        term = j * (np.log(p_w)[None, :] - np.log(j))
    term[j <= 0.0] = 0.0
    return float(term.sum())


def w2_squared_quantile(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Squared transport cost of the monotone (quantile) coupling."""
    return _kernels.w2_quantile_pairs(p.support, p.probs, q.support, q.probs)


def w2_squared_lp(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Exact transportation LP over the coupling polytope (HiGHS simplex).

    Independent oracle for ``w2_squared_quantile``; supports up to 64 atoms
    per marginal.
    """
    n, m = p.support.size, q.support.size
    if n > _MAX_LP_SUPPORT or m > _MAX_LP_SUPPORT:
        raise SizeGuardError(f"LP oracle limited to {_MAX_LP_SUPPORT} atoms")
    cost = (p.support[:, None] - q.support[None, :]) ** 2
    a_eq = np.zeros((n + m - 1, n * m))
    b_eq = np.zeros(n + m - 1)
    for i in range(n):
        a_eq[i, i * m : (i + 1) * m] = 1.0
        b_eq[i] = p.probs[i]
    for jcol in range(m - 1):  # last column constraint is redundant
        a_eq[n + jcol, jcol::m] = 1.0
        b_eq[n + jcol] = q.probs[jcol]
    res = linprog(cost.ravel(), A_eq=a_eq, b_eq=b_eq, bounds=(0.0, None), method="highs")
    if not res.success:  # pragma: no cover - transportation LPs are always feasible
        raise RuntimeError(f"transportation LP failed: {res.message}")
    return float(res.fun)


def default_xhat_values(src: DiscreteSource, encoder: Channel) -> np.ndarray:
    """MMSE-support atoms joined with the source alphabet, sorted."""
    red = mmse_reduction(src, encoder)
    merged = np.union1d(red.p_xtilde.support, src.x_values)
    return merged


def deterministic_decoder(
    targets: dict[int, float], n_z: int, xhat_values: np.ndarray
) -> Channel:
    """One-hot decoder sending z to targets[z]; unreachable rows go to atom 0."""
    vals = np.asarray(xhat_values, dtype=np.float64)
    mat = np.zeros((n_z, vals.size))
    for z in range(n_z):
        if z in targets:
            hits = np.nonzero(vals == targets[z])[0]
            if hits.size != 1:
                raise ParameterError(
                    f"target {targets[z]} for z={z} not a unique alphabet atom"
                )
            mat[z, hits[0]] = 1.0
        else:
            mat[z, 0] = 1.0
    return Channel(mat)


def _marginal_xhat(
    src: DiscreteSource, encoder: Channel, decoder: Channel
) -> np.ndarray:
    return src.p_x @ encoder.matrix @ decoder.matrix


def outer_bound_check(
    src: DiscreteSource,
    encoder: Channel,
    decoder: Channel,
    xhat_values: np.ndarray | None = None,
    tol: float = 1e-12,
) -> OuterBoundReport:
    """Exact check of D >= residual + W2^2(p_X̃, p_X̂) for one decoder.

    The joint over (S, X, Z, X̂) is enumerated exactly; D is the achieved
    MSE, C the achieved H(S | X̂).
    """
    _check_encoder(src, encoder)
    vals = (
        default_xhat_values(src, encoder)
        if xhat_values is None
        else np.asarray(xhat_values, dtype=np.float64)
    )
    if decoder.n_in != encoder.n_out or decoder.n_out != vals.size:
        raise ParameterError("decoder shape does not match encoder/alphabet")
    red = mmse_reduction(src, encoder)
    through = encoder.matrix @ decoder.matrix  # p(x̂ | x), shape (n_x, n_k)
    sq = (src.x_values[:, None] - vals[None, :]) ** 2
    d = float((src.p_x[:, None] * through * sq).sum())
    joint_sk = src.pmf.T @ through  # (n_s, n_k)
    c = cond_entropy_discrete(joint_sk)
    p_xhat = _marginal_xhat(src, encoder, decoder)
    w2 = _kernels.w2_quantile_pairs(
        red.p_xtilde.support, red.p_xtilde.probs, vals, p_xhat
    )
    rhs = red.residual + w2
    return OuterBoundReport(
        d=d, c=c, rhs=rhs, holds=bool(d >= rhs - tol), residual=red.residual, w2_term=w2
    )


def extreme_point_a(src: DiscreteSource, encoder: Channel) -> tuple[float, float]:
    """Minimum-distortion corner: (E[(X - X̃)^2], H(S | X̃))."""
    red = mmse_reduction(src, encoder)
    b = joint_zs(src, encoder)  # (n_z, n_s)
    groups: dict[float, np.ndarray] = {}
    for z, value in red.estimator.items():
        groups[value] = groups.get(value, 0.0) + b[z]
    joint = np.stack([groups[v] for v in sorted(groups)], axis=1)  # (n_s, n_groups)
    return red.residual, cond_entropy_discrete(joint)


@lru_cache(maxsize=None)
def _simplex_grid(levels: int, m: int) -> np.ndarray:
    """All probability rows whose entries are multiples of 1/levels.

    Rows are returned in lexicographic order of their composition tuples.
    """

    def compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    rows = np.array(list(compositions(levels, m)), dtype=np.float64)
    rows /= levels
    rows.flags.writeable = False
    return rows


def _enumeration_arrays(
    src: DiscreteSource, encoder: Channel, levels: int, vals: np.ndarray
):
    rows = _simplex_grid(levels, int(vals.size))
    n_z = encoder.n_out
    combos = rows.shape[0] ** n_z
    if combos > _MAX_DECODER_COMBOS:
        raise SizeGuardError(
            f"{combos} decoder combinations exceed the enumeration cap "
            f"({_MAX_DECODER_COMBOS})"
        )
    sq = (src.x_values[:, None] - vals[None, :]) ** 2
    a = encoder.matrix.T @ (src.p_x[:, None] * sq)  # (n_z, n_k)
    row_d = np.ascontiguousarray(a @ rows.T)  # (n_z, n_rows)
    b = joint_zs(src, encoder)  # (n_z, n_s)
    return rows, row_d, b


def _decode_combo(flat: int, n_rows: int, n_z: int) -> list[int]:
    idx = []
    for _ in range(n_z):
        idx.append(flat % n_rows)
        flat //= n_rows
    return idx[::-1]


def c_min_solver(
    src: DiscreteSource,
    encoder: Channel,
    d_budget: float,
    levels: int,
    xhat_values: np.ndarray | None = None,
) -> CMinSolution:
    """Grid search for the decoder minimising H(S | X̂) within an MSE budget.

    Decoder rows range over the simplex grid with entries in multiples of
    1/levels; ties break toward the lexicographically first decoder.
    """
    if levels < 3:
        raise ParameterError("levels must be >= 3")
    _check_encoder(src, encoder)
    vals = (
        default_xhat_values(src, encoder)
        if xhat_values is None
        else np.asarray(xhat_values, dtype=np.float64)
    )
    rows, row_d, b = _enumeration_arrays(src, encoder, levels, vals)
    flat, best_c = _kernels.cmin_scan(rows, encoder.n_out, row_d, b, float(d_budget))
    if flat < 0:
        return CMinSolution(feasible=False)
    idx = _decode_combo(flat, rows.shape[0], encoder.n_out)
    decoder = Channel(rows[idx])
    p_xhat = _marginal_xhat(src, encoder, decoder)
    return CMinSolution(
        feasible=True,
        c_min=best_c,
        decoder=decoder,
        p_xhat=DiscreteDistribution(vals, p_xhat),
    )


def extreme_point_b(
    src: DiscreteSource,
    encoder: Channel,
    d_budget: float,
    levels: int,
    xhat_values: np.ndarray | None = None,
) -> tuple[float, float]:
    """Minimum-classification-loss corner:
    (residual + W2^2(p_X̃, p_X̂_at_c_min), C_min)."""
    sol = c_min_solver(src, encoder, d_budget, levels, xhat_values)
    if not sol.feasible:
        raise InfeasibleBudgetError(
            f"no grid decoder meets the distortion budget {d_budget}"
        )
    red = mmse_reduction(src, encoder)
    w2 = w2_squared_quantile(red.p_xtilde, sol.p_xhat)
    return red.residual + w2, sol.c_min


def region_approx(
    src: DiscreteSource,
    encoder: Channel,
    levels: int,
    xhat_values: np.ndarray | None = None,
) -> list[tuple[float, float]]:
    """Pareto-minimal (D, C) frontier over the enumerated decoder grid."""
    if levels < 1:
        raise ParameterError("levels must be >= 1")
    _check_encoder(src, encoder)
    if (
        src.x_values.size > _MAX_ALPHABET
        or src.s_size > _MAX_ALPHABET
        or encoder.n_out > _MAX_ALPHABET
        or levels > _MAX_LEVELS
    ):
        raise SizeGuardError(
            f"alphabets are limited to {_MAX_ALPHABET} symbols and levels to "
            f"{_MAX_LEVELS} for exact enumeration"
        )
    vals = (
        default_xhat_values(src, encoder)
        if xhat_values is None
        else np.asarray(xhat_values, dtype=np.float64)
    )
    rows, row_d, b = _enumeration_arrays(src, encoder, levels, vals)
    d_all, c_all = _kernels.dc_scan(rows, encoder.n_out, row_d, b)
    pairs = np.unique(np.column_stack([d_all, c_all]), axis=0)  # lexsorted rows
    frontier: list[tuple[float, float]] = []
    best_c = math.inf
    for d, c in pairs:
        if c < best_c:
            frontier.append((float(d), float(c)))
            best_c = c
    return frontier


def outer_bound_sweep(
    src: DiscreteSource,
    encoder: Channel,
    levels: int,
    xhat_values: np.ndarray | None = None,
    tol: float = 1e-12,
) -> tuple[int, float, int]:
    """Outer-bound check across every enumerated decoder.

    Returns (violations, min_slack, decoders_checked) where slack is
    D - residual - W2^2(p_X̃, p_X̂).
    """
    _check_encoder(src, encoder)
    vals = (
        default_xhat_values(src, encoder)
        if xhat_values is None
        else np.asarray(xhat_values, dtype=np.float64)
    )
    rows, row_d, b = _enumeration_arrays(src, encoder, levels, vals)
    red = mmse_reduction(src, encoder)
    # p_X̃ expressed on the common alphabet so both marginals share a support.
    p_xt = np.zeros(vals.size)
    for value, prob in zip(red.p_xtilde.support, red.p_xtilde.probs):
        hits = np.nonzero(vals == value)[0]
        if hits.size != 1:
            raise ParameterError(
                "xhat alphabet must contain every MMSE atom for the sweep"
            )
        p_xt[hits[0]] = prob
    p_z = src.p_x @ encoder.matrix
    violations, min_slack = _kernels.outer_scan(
        rows, encoder.n_out, row_d, p_z, vals, p_xt, red.residual, tol
    )
    return violations, min_slack, rows.shape[0] ** encoder.n_out


def discretize_gaussian(mu: float, var: float, n: int = 10_000) -> DiscreteDistribution:
    """Equal-mass quantile-midpoint discretisation of N(mu, var)."""
    if var < 0.0:
        raise ParameterError("variance must be >= 0")
    if n < 1:
        raise ParameterError("n must be >= 1")
    if var == 0.0:
        return DiscreteDistribution(np.array([mu]), np.array([1.0]))
    q = (np.arange(n) + 0.5) / n
    support = mu + math.sqrt(var) * norm.ppf(q)
    probs = np.full(n, 1.0 / n)
    return DiscreteDistribution(support, probs)
