"""Estimation for the ECR model: maximum likelihood, Cox-Snell
bias-corrected maximum likelihood, and the percentile-based estimator,
plus the expected-information stack those corrections are built from.

The likelihood factorizes through the kernel u_i = 1 - lam/s_i with
s_i = sqrt(lam^2 + x_i^2):

    l(beta, lam) = n log(beta lam) + sum log x_i - 3 sum log s_i
                   + (beta - 1) sum log u_i

For fixed lam the shape score vanishes at beta(lam) = -n / sum log u_i,
so fitting reduces to a one-dimensional search over the scale: a golden
section pass on the profile log-likelihood followed by bisection on the
profile score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from scipy.special import erfc, ndtri

from .data import Dataset
from .ecr import Params, _log_kernel

__all__ = [
    "FitResult",
    "FitError",
    "InfoMatrix",
    "ThirdCumulants",
    "FisherDerivatives",
    "log_likelihood",
    "score",
    "profile_beta",
    "profile_log_likelihood",
    "profile_score",
    "fit_ml",
    "fit_cr",
    "fit_cs_ml",
    "fit_pb",
    "fisher_info",
    "fisher_info_inverse",
    "asymptotic_std_errors",
    "fisher_derivatives",
    "third_cumulants",
    "cox_snell_bias",
    "cox_snell_bias_generic",
    "bias_known_lambda",
    "bias_known_beta",
    "cr_bias",
    "cs_correctable",
    "confidence_intervals",
    "lr_test_cr",
    "pb_objective",
    "pb_gradient",
]

_MAX_ITER = 200
_SCORE_TOL = 1e-10  # |profile score| < tol * n declares stationarity
_STEP_TOL = 1e-12  # relative bracket width below which iteration stops
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class FitError(RuntimeError):
    """Estimation failed; ``best`` carries the best fit seen, if any."""

    def __init__(self, message: str, best: "FitResult | None" = None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class FitResult:
    """Point estimates plus fit diagnostics.

    ``method`` is one of "ml", "csml", "pb". ``std_errors`` comes from
    the inverse expected information (None for the percentile method,
    which has no published asymptotic covariance). For "csml",
    ``bias_applied`` holds the subtracted second-order bias and
    ``params`` equals the ML estimate minus that bias. ``correctable``
    is False only when a requested Cox-Snell correction would have left
    the parameter space, in which case the plain ML fit is carried.
    """

    params: Params
    std_errors: tuple[float, float] | None
    loglik: float
    method: str
    iterations: int
    converged: bool
    n: int
    bias_applied: tuple[float, float] | None = None
    correctable: bool = True


# ---------------------------------------------------------------------------
# Likelihood pieces


def _sums(x: np.ndarray, lam: float) -> tuple[float, float, float, float]:
    """Return (sum log s, sum log u, sum 1/s, lam * sum 1/s^2).

    sum log u is strictly negative for positive data; it can underflow
    to zero only when lam is many orders of magnitude below every
    observation, which the fitters never probe.
    """
    s = np.hypot(lam, x)
    log_u = _log_kernel(x, lam)
    sum_log_u = float(np.sum(log_u))
    if sum_log_u >= 0.0:
        raise ValueError(f"scale {lam!r} is too small relative to the data")
    return (
        float(np.sum(np.log(s))),
        sum_log_u,
        float(np.sum(1.0 / s)),
        float(lam * np.sum(1.0 / (s * s))),
    )


def log_likelihood(data: Dataset, p: Params) -> float:
    x = data.values
    sum_log_s, sum_log_u, _, _ = _sums(x, p.lam)
    return (
        data.n * math.log(p.beta * p.lam)
        + float(np.sum(np.log(x)))
        - 3.0 * sum_log_s
        + (p.beta - 1.0) * sum_log_u
    )


def score(data: Dataset, p: Params) -> tuple[float, float]:
    """Analytic gradient of the log-likelihood, (d/dbeta, d/dlam)."""
    n = data.n
    _, sum_log_u, sum_inv_s, lam_sum_inv_s2 = _sums(data.values, p.lam)
    u_beta = n / p.beta + sum_log_u
    u_lam = n / p.lam + (1.0 - p.beta) * sum_inv_s - (p.beta + 2.0) * lam_sum_inv_s2
    return u_beta, u_lam


def profile_beta(data: Dataset, lam: float) -> float:
    """Exact shape estimate at fixed scale: beta(lam) = -n / sum log u_i."""
    _, sum_log_u, _, _ = _sums(data.values, lam)
    return -data.n / sum_log_u


def profile_log_likelihood(data: Dataset, lam: float) -> float:
    x = data.values
    n = data.n
    sum_log_s, sum_log_u, _, _ = _sums(x, lam)
    return (
        n * (math.log(-n * lam / sum_log_u) - 1.0)
        + float(np.sum(np.log(x)))
        - 3.0 * sum_log_s
        - sum_log_u
    )


def profile_score(data: Dataset, lam: float) -> float:
    """d/dlam of the profile log-likelihood."""
    n = data.n
    _, sum_log_u, sum_inv_s, lam_sum_inv_s2 = _sums(data.values, lam)
    ratio = n / sum_log_u
    return n / lam + (1.0 + ratio) * sum_inv_s - (2.0 - ratio) * lam_sum_inv_s2


# ---------------------------------------------------------------------------
# Maximum likelihood


def _golden_max(f, lo: float, hi: float, rel_tol: float, max_iter: int):
    """Golden-section maximization on [lo, hi]; returns (x, iterations)."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    it = 2
    while it < max_iter and (b - a) > rel_tol * abs(a + b) * 0.5:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        it += 1
    x = c if fc > fd else d
    return x, it, (a, b)


def fit_ml(data: Dataset, init: Params | None = None) -> FitResult:
    """Maximum likelihood via the profile in the scale parameter.

    A geometric grid brackets the profile maximum, golden section
    narrows it, and bisection on the profile score polishes the root.
    Standard errors are the square roots of the diagonal of the inverse
    expected information divided by n.
    """
    x = data.values
    n = data.n
    if n < 2 or float(np.min(x)) == float(np.max(x)):
        raise FitError("need at least two distinct observations to fit")

    center = init.lam if init is not None else float(np.median(x)) / math.sqrt(3.0)
    grid = center * 4.0 ** np.arange(-20.0, 21.0)
    values = [profile_log_likelihood(data, lam) for lam in grid]
    k = int(np.argmax(values))
    iterations = grid.size
    if k == 0 or k == grid.size - 1:
        side = "(shape -> inf, scale -> 0)" if k == 0 else "(scale -> inf)"
        raise FitError(
            f"no interior likelihood maximum: the profile increases toward the {side} boundary",
            best=_ml_result(data, float(grid[k]), iterations, False),
        )

    # Golden section only seeds the score bracket; near the optimum the
    # profile is flat at double precision while the score still carries
    # full resolution through its root.
    lam0, golden_iters, _ = _golden_max(
        lambda lam: profile_log_likelihood(data, lam),
        float(grid[k - 1]),
        float(grid[k + 1]),
        1e-6,
        _MAX_ITER,
    )
    iterations += golden_iters

    # The profile score runs -/+/- in lam, the maximum being the second
    # root. Golden section puts lam0 within ~1e-6 of it, so shrinking
    # offsets toward lam0 finds a sign bracket without stepping into the
    # dip left of the maximum.
    lo = hi = lam0
    offsets = [1e-3 * 0.25**k for k in range(20)]
    for offset in offsets:
        iterations += 1
        if profile_score(data, lam0 * (1.0 - offset)) > 0.0:
            lo = lam0 * (1.0 - offset)
            break
    for offset in offsets:
        iterations += 1
        if profile_score(data, lam0 * (1.0 + offset)) < 0.0:
            hi = lam0 * (1.0 + offset)
            break
    if not (lo < lam0 < hi):
        raise FitError(
            "profile score has no bracketed root near the profile maximum",
            best=_ml_result(data, lam0, iterations, False),
        )
    for _ in range(_MAX_ITER):
        iterations += 1
        mid = 0.5 * (lo + hi)
        if profile_score(data, mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if (hi - lo) <= _STEP_TOL * mid:
            break
    lam = 0.5 * (lo + hi)

    # Stationary but not the global optimum: the likelihood can still be
    # higher at the scale -> 0 boundary (the family degenerates to an
    # inverse-exponential limit there, where no interior MLE exists).
    if profile_log_likelihood(data, float(grid[0])) > profile_log_likelihood(data, lam):
        raise FitError(
            "no interior likelihood maximum: the (shape -> inf, scale -> 0) "
            "boundary dominates the stationary point",
            best=_ml_result(data, lam, iterations, False),
        )

    converged = bool(
        abs(profile_score(data, lam)) < _SCORE_TOL * n or (hi - lo) <= _STEP_TOL * lam
    )
    result = _ml_result(data, lam, iterations, converged)
    if not converged:
        raise FitError("profile search did not converge", best=result)
    return result


def _ml_result(data: Dataset, lam: float, iterations: int, converged: bool) -> FitResult:
    params = Params(profile_beta(data, lam), lam)
    return FitResult(
        params=params,
        std_errors=asymptotic_std_errors(params, data.n),
        loglik=log_likelihood(data, params),
        method="ml",
        iterations=iterations,
        converged=converged,
        n=data.n,
    )


def fit_cr(data: Dataset) -> FitResult:
    """ML fit of the CR submodel (shape pinned at 1).

    The scale score n/lam - 3 lam sum 1/s^2 is monotone, so the root is
    bracketed and bisected directly. The shape entry of ``std_errors``
    is 0 because beta is not estimated.
    """
    x = data.values
    n = data.n

    def g(lam: float) -> float:
        s2 = lam * lam + x * x
        return n / lam - 3.0 * lam * float(np.sum(1.0 / s2))

    lo = float(np.min(x)) * 1e-6
    hi = float(np.max(x)) * 1e3
    if not (g(lo) > 0.0 > g(hi)):
        raise FitError("CR scale score has no bracketed root")
    iterations = 0
    for _ in range(_MAX_ITER):
        iterations += 1
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if (hi - lo) <= _STEP_TOL * mid:
            break
    lam = 0.5 * (lo + hi)
    params = Params(1.0, lam)
    # Expected information for the single scale parameter: 4n/(5 lam^2).
    se = lam / math.sqrt(0.8 * n)
    return FitResult(
        params=params,
        std_errors=(0.0, se),
        loglik=log_likelihood(data, params),
        method="ml",
        iterations=iterations,
        converged=True,
        n=n,
    )


# ---------------------------------------------------------------------------
# Expected information and its derivatives


@dataclass(frozen=True)
class InfoMatrix:
    """Per-observation expected information K = -(1/n) [kappa_ij].

    ``entries`` is the symmetric 2x2 matrix ordered (beta, lam);
    ``cumulants`` holds the matching cumulant-scale matrix (the expected
    second derivatives [kappa_ij] for the information, or their inverse
    for the inverse information).
    """

    entries: np.ndarray
    n: int
    cumulants: np.ndarray


def _kappa_entries(p: Params, n: int) -> tuple[float, float, float]:
    b, lam = p.beta, p.lam
    kbb = -n / b**2
    kbl = (n / lam) * (2.0 / (b + 2.0) - 3.0 / (b + 1.0))
    kll = (n / lam**2) * (18.0 / (b + 2.0) - 36.0 / (b + 3.0) + 16.0 / (b + 4.0) - 1.0)
    return kbb, kbl, kll


def fisher_info(p: Params, n: int) -> InfoMatrix:
    """Expected information with entries

    kappa_bb = -n/beta^2,
    kappa_bl = (n/lam) (2/(beta+2) - 3/(beta+1)),
    kappa_ll = (n/lam^2) (18/(beta+2) - 36/(beta+3) + 16/(beta+4) - 1),

    packaged as K = -(1/n)[kappa].
    """
    kbb, kbl, kll = _kappa_entries(p, n)
    cumulants = np.array([[kbb, kbl], [kbl, kll]])
    return InfoMatrix(entries=-cumulants / n, n=n, cumulants=cumulants)


def fisher_info_inverse(p: Params, n: int) -> InfoMatrix:
    """Closed-form inverse of :func:`fisher_info`.

    With q(beta) = beta^3 - 7 beta^2 + 10 beta + 72 (positive on the
    whole parameter space):

        (K^-1)_bb =  beta^2 (beta+1)^2 (beta+2)(beta^2+11 beta+36) / q
        (K^-1)_bl = -lam beta (beta+1)(beta+2)(beta+3)(beta+4)^2 / q
        (K^-1)_ll =  lam^2 (beta+1)^2 (beta+2)^2 (beta+3)(beta+4) / (beta q)
    """
    b, lam = p.beta, p.lam
    q = b**3 - 7.0 * b**2 + 10.0 * b + 72.0
    inv_bb = b**2 * (b + 1.0) ** 2 * (b + 2.0) * (b**2 + 11.0 * b + 36.0) / q
    inv_bl = -lam * b * (b + 1.0) * (b + 2.0) * (b + 3.0) * (b + 4.0) ** 2 / q
    inv_ll = lam**2 * (b + 1.0) ** 2 * (b + 2.0) ** 2 * (b + 3.0) * (b + 4.0) / (b * q)
    entries = np.array([[inv_bb, inv_bl], [inv_bl, inv_ll]])
    return InfoMatrix(entries=entries, n=n, cumulants=-entries / n)


def asymptotic_std_errors(p: Params, n: int) -> tuple[float, float]:
    """sqrt(diag(K^-1)/n): large-sample standard errors at ``p``."""
    inv = fisher_info_inverse(p, n).entries
    return (math.sqrt(inv[0, 0] / n), math.sqrt(inv[1, 1] / n))


class FisherDerivatives(NamedTuple):
    """First derivatives of the expected second-derivative entries."""

    kbb_dbeta: float
    kbb_dlam: float
    kbl_dbeta: float
    kbl_dlam: float
    kll_dbeta: float
    kll_dlam: float


def fisher_derivatives(p: Params, n: int) -> FisherDerivatives:
    b, lam = p.beta, p.lam
    return FisherDerivatives(
        kbb_dbeta=2.0 * n / b**3,
        kbb_dlam=0.0,
        kbl_dbeta=(n / lam) * (3.0 / (b + 1.0) ** 2 - 2.0 / (b + 2.0) ** 2),
        kbl_dlam=(n / lam**2) * (3.0 / (b + 1.0) - 2.0 / (b + 2.0)),
        kll_dbeta=(2.0 * n / lam**2)
        * (18.0 / (b + 3.0) ** 2 - 8.0 / (b + 4.0) ** 2 - 9.0 / (b + 2.0) ** 2),
        kll_dlam=(2.0 * n / lam**3)
        * (1.0 - 18.0 / (b + 2.0) + 36.0 / (b + 3.0) - 16.0 / (b + 4.0)),
    )


@dataclass(frozen=True)
class ThirdCumulants:
    """Expected third derivatives of the log-likelihood; kbbl is 0 exactly."""

    kbbb: float
    kbbl: float
    kbll: float
    klll: float


def third_cumulants(p: Params, n: int) -> ThirdCumulants:
    b, lam = p.beta, p.lam
    return ThirdCumulants(
        kbbb=2.0 * n / b**3,
        kbbl=0.0,
        kbll=(n / lam**2)
        * (9.0 / (b + 1.0) - 28.0 / (b + 2.0) + 27.0 / (b + 3.0) - 8.0 / (b + 4.0)),
        klll=(2.0 * n / lam**3)
        * (
            1.0
            - 81.0 / (b + 2.0)
            + 378.0 / (b + 3.0)
            - 606.0 / (b + 4.0)
            + 405.0 / (b + 5.0)
            - 96.0 / (b + 6.0)
        ),
    )


# ---------------------------------------------------------------------------
# Cox-Snell second-order bias


def cox_snell_bias(p: Params, n: int) -> tuple[float, float]:
    """Closed-form second-order biases of the two ML estimators.

    Rational functions of beta (the scale bias carries a lam prefactor);
    :func:`cox_snell_bias_generic` rebuilds the same numbers from the
    inverse information, its derivatives, and the third cumulants.
    """
    b, lam = p.beta, p.lam
    q = b**3 - 7.0 * b**2 + 10.0 * b + 72.0
    bias_b = (
        b**3
        + 13.0 * b**2
        + 122.0 * b
        + 380.0
        - 699840.0 / (19321.0 * (b + 5.0))
        + 96000.0 / (361.0 * (b + 6.0))
        + 432.0 * (4085783.0 * b**2 - 8192586.0 * b - 40352456.0) / (2641.0 * q**2)
        - 12.0
        * (70740551.0 * b**2 + 3809213278.0 * b - 35831044156.0)
        / (6974881.0 * q)
    ) / n
    bias_l = (
        lam
        * (
            8.0 * b
            + 86.0
            + 49.0 / (270.0 * b)
            - 1679616.0 / (96605.0 * (b + 5.0))
            + 80000.0 / (1083.0 * (b + 6.0))
            - 8.0 * (84037561.0 * b**2 + 21509105.0 * b - 393761162.0) / (7923.0 * q**2)
            + (356431397749.0 * b**2 - 158970444943.0 * b - 4636191041858.0)
            / (376643574.0 * q)
        )
        / n
    )
    return bias_b, bias_l


def cox_snell_bias_generic(p: Params, n: int) -> tuple[float, float]:
    """Generic cumulant-based bias sum

        bias_i = sum_{r,s,t} kappa^{i r} kappa^{s t}
                 (d kappa_{r s}/d theta_t - kappa_{r s t}/2),

    assembled from the inverse information, the information derivatives,
    and the third cumulants. Used as an internal oracle for the closed
    forms above.
    """
    kbb, kbl, kll = _kappa_entries(p, n)
    kinv = np.linalg.inv(np.array([[kbb, kbl], [kbl, kll]]))
    d = fisher_derivatives(p, n)
    deriv = np.empty((2, 2, 2))
    deriv[0, 0] = (d.kbb_dbeta, d.kbb_dlam)
    deriv[0, 1] = deriv[1, 0] = (d.kbl_dbeta, d.kbl_dlam)
    deriv[1, 1] = (d.kll_dbeta, d.kll_dlam)
    t = third_cumulants(p, n)
    third = np.empty((2, 2, 2))
    third[0, 0, 0] = t.kbbb
    third[0, 0, 1] = third[0, 1, 0] = third[1, 0, 0] = t.kbbl
    third[0, 1, 1] = third[1, 0, 1] = third[1, 1, 0] = t.kbll
    third[1, 1, 1] = t.klll
    inner = deriv - 0.5 * third
    bias = np.einsum("ir,st,rst->i", kinv, kinv, inner)
    return float(bias[0]), float(bias[1])


def bias_known_lambda(beta_hat: float, n: int) -> float:
    """Second-order shape bias when the scale is known: beta_hat / n."""
    if beta_hat <= 0:
        raise ValueError("beta_hat must be positive")
    return beta_hat / n


def bias_known_beta(lambda_hat: float, beta0: float, n: int) -> float:
    """Second-order scale bias when the shape is pinned at beta0:

    (lam/n) * [(b+2)(b+3)(b+4) / (b (b+5)(b+6))]
            * [(b^4 + 24 b^3 + 216 b^2 + 761 b + 294) / (b^2 + 11 b + 36)^2].
    """
    if lambda_hat <= 0 or beta0 <= 0:
        raise ValueError("lambda_hat and beta0 must be positive")
    b = beta0
    factor = (b + 2.0) * (b + 3.0) * (b + 4.0) / (b * (b + 5.0) * (b + 6.0))
    ratio = (b**4 + 24.0 * b**3 + 216.0 * b**2 + 761.0 * b + 294.0) / (
        b**2 + 11.0 * b + 36.0
    ) ** 2
    return lambda_hat / n * factor * ratio


def cr_bias(lambda_hat: float, n: int) -> float:
    """Second-order scale bias of the CR (beta = 1) ML estimator: 45 lam / (56 n)."""
    if lambda_hat <= 0:
        raise ValueError("lambda_hat must be positive")
    return 45.0 * lambda_hat / (56.0 * n)


def cs_correctable(n: int, beta_hat: float) -> bool:
    """Whether the Cox-Snell correction stays inside the parameter space.

    Both corrected estimates are positive multiples of conditions that
    involve only (n, beta_hat), so correctability never depends on the
    fitted scale.
    """
    bias_b, bias_l_unit = cox_snell_bias(Params(beta_hat, 1.0), n)
    return beta_hat - bias_b > 0.0 and 1.0 - bias_l_unit > 0.0


def fit_cs_ml(data: Dataset) -> FitResult:
    """Cox-Snell bias-corrected maximum likelihood.

    Runs :func:`fit_ml` and subtracts the closed-form second-order bias
    evaluated at the estimate. When either corrected parameter would be
    non-positive the outcome is flagged ``correctable=False`` and the
    uncorrected ML fit is returned.
    """
    ml = fit_ml(data)
    bias = cox_snell_bias(ml.params, data.n)
    beta_c = ml.params.beta - bias[0]
    lam_c = ml.params.lam - bias[1]
    if beta_c <= 0.0 or lam_c <= 0.0:
        return replace(ml, correctable=False)
    params = Params(beta_c, lam_c)
    return FitResult(
        params=params,
        std_errors=asymptotic_std_errors(params, data.n),
        loglik=log_likelihood(data, params),
        method="csml",
        iterations=ml.iterations,
        converged=ml.converged,
        n=data.n,
        bias_applied=bias,
    )


# ---------------------------------------------------------------------------
# Percentile-based estimation


def _pb_pieces(beta: float, xs: np.ndarray, ps: np.ndarray):
    """Sorted-sample sums behind the percentile objective derivatives."""
    w = ps ** (1.0 / beta)
    one_minus = 1.0 - w
    log_p = np.log(ps)
    d_shape_quad = float(np.sum(w * log_p / one_minus**3))
    d_shape_cross = float(np.sum(xs * log_p / one_minus**2 * np.sqrt(w / (2.0 - w))))
    cross = -float(np.sum(xs * np.sqrt((2.0 - w) * w) / one_minus))
    quad = xs.size - float(np.sum(1.0 / one_minus**2))
    return d_shape_quad, d_shape_cross, cross, quad


def pb_objective(data: Dataset, p: Params) -> float:
    """Sum of squared distances between sample and model percentiles,
    with mean-rank positions p_i = i/(n+1)."""
    xs = data.sorted_values
    n = data.n
    ps = np.arange(1, n + 1) / (n + 1.0)
    w = ps ** (1.0 / p.beta)
    model = p.lam * np.sqrt((2.0 - w) * w) / (1.0 - w)
    return float(np.sum((model - xs) ** 2))


def pb_gradient(data: Dataset, p: Params) -> tuple[float, float]:
    """Analytic gradient of :func:`pb_objective`."""
    xs = data.sorted_values
    ps = np.arange(1, data.n + 1) / (data.n + 1.0)
    t6, t7, t8, t9 = _pb_pieces(p.beta, xs, ps)
    d_beta = 2.0 * p.lam / p.beta**2 * (t7 - p.lam * t6)
    d_lam = 2.0 * (t8 - p.lam * t9)
    return d_beta, d_lam


def fit_pb(data: Dataset) -> FitResult:
    """Percentile-based estimation.

    Both stationarity conditions give a scale estimate that is closed
    in the shape: lam1 = t7/t6 and lam2 = t8/t9. The shape solves
    t6 t8 = t7 t9, located by sign change on a logarithmic grid over
    [1e-3, 1e3] and bisection; with several candidate roots the one with
    the smallest objective wins. If no sign change exists, the profile
    objective (with lam2 substituted) is minimized by golden section.
    """
    xs = data.sorted_values
    n = data.n
    if n < 2 or xs[0] == xs[-1]:
        raise FitError("need at least two distinct observations to fit")
    ps = np.arange(1, n + 1) / (n + 1.0)

    def root_fn(beta: float) -> float:
        t6, t7, t8, t9 = _pb_pieces(beta, xs, ps)
        return t6 * t8 - t7 * t9

    def lam2(beta: float) -> float:
        _, _, t8, t9 = _pb_pieces(beta, xs, ps)
        return t8 / t9

    def objective(beta: float) -> float:
        lam = lam2(beta)
        if not (math.isfinite(lam) and lam > 0.0):
            return math.inf
        return pb_objective(data, Params(beta, lam))

    grid = np.logspace(-3.0, 3.0, 241)
    vals = np.array([root_fn(b) for b in grid])
    iterations = grid.size

    candidates: list[tuple[float, float]] = []
    sign_change = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    for k in sign_change:
        lo, hi = float(grid[k]), float(grid[k + 1])
        f_lo = vals[k]
        for _ in range(_MAX_ITER):
            iterations += 1
            mid = math.sqrt(lo * hi)
            f_mid = root_fn(mid)
            if f_mid == 0.0:
                lo = hi = mid
                break
            if (f_mid > 0) == (f_lo > 0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
            if (hi - lo) <= _STEP_TOL * hi:
                break
        beta = math.sqrt(lo * hi)
        candidates.append((objective(beta), beta))

    if not candidates:
        k = int(np.argmin([objective(b) for b in grid]))
        iterations += grid.size
        if k == 0 or k == grid.size - 1:
            raise FitError("percentile objective has no interior minimum")
        beta, golden_iters, _ = _golden_max(
            lambda b: -objective(b), float(grid[k - 1]), float(grid[k + 1]),
            _STEP_TOL, _MAX_ITER,
        )
        iterations += golden_iters
        candidates.append((objective(beta), beta))

    _, beta = min(candidates)
    lam = lam2(beta)
    if lam <= 0.0 or not math.isfinite(lam):
        raise FitError("percentile scale estimate left the parameter space")
    params = Params(beta, lam)
    return FitResult(
        params=params,
        std_errors=None,
        loglik=log_likelihood(data, params),
        method="pb",
        iterations=iterations,
        converged=True,
        n=n,
    )


# ---------------------------------------------------------------------------
# Intervals and tests


def confidence_intervals(
    fit: FitResult, level: float
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Wald intervals theta_i +/- z_(1+level)/2 * se_i, floored at 0."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level!r}")
    if fit.std_errors is None:
        raise ValueError("fit carries no standard errors")
    z = float(ndtri(0.5 * (1.0 + level)))
    out = []
    for est, se in zip((fit.params.beta, fit.params.lam), fit.std_errors):
        out.append((max(0.0, est - z * se), est + z * se))
    return out[0], out[1]


def lr_test_cr(data: Dataset) -> tuple[float, float]:
    """Likelihood-ratio test of the CR submodel (shape = 1) inside ECR.

    Returns (statistic, p-value); the statistic is 2(l_ECR - l_CR) and
    the p-value is the chi-square(1) upper tail, computed through the
    complementary error function.
    """
    full = fit_ml(data)
    nested = fit_cr(data)
    stat = max(0.0, 2.0 * (full.loglik - nested.loglik))
    p_value = float(erfc(math.sqrt(stat / 2.0)))
    return stat, p_value
