"""Special-function kernel backing the closed-form moment expressions.

Everything here is real-valued, pure and deterministic. All series share
one truncation policy: summation stops once the running term is below
``SeriesControl.rel_tol`` relative to the partial sum for three
consecutive terms, which keeps alternating series from stopping on an
accidentally tiny term. Series evaluators can report how many terms they
consumed via ``full_output=True``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

__all__ = [
    "EULER_GAMMA",
    "SeriesControl",
    "DEFAULT_CONTROL",
    "ConvergenceError",
    "log_gamma",
    "gamma_fn",
    "beta_fn",
    "digamma",
    "gauss_2f1",
    "appell_f1",
    "lerch_phi_half",
]

EULER_GAMMA = 0.5772156649015328606065120900824024

_HALF_LOG_TWO_PI = 0.9189385332046727417803297364056176

# Lanczos approximation, g = 7, 9 coefficients; ~1e-13 relative accuracy
# on the positive real axis, which is the whole supported domain.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# B_{2k}/(2k) coefficients of the digamma asymptotic series, k = 1..8.
_DIGAMMA_TAIL_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
)
_DIGAMMA_SWITCH = 6.0

# Above this x the Appell double series degrades and the integral
# representation is integrated numerically instead.
_F1_QUAD_SWITCH = 0.95

_TINY = 1e-300


class ConvergenceError(ArithmeticError):
    """A series failed to settle within its term budget."""

    def __init__(self, message: str, partial: float, terms: int):
        super().__init__(f"{message} (partial sum {partial!r} after {terms} terms)")
        self.partial = partial
        self.terms = terms


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for series summation.

    ``rel_tol`` is the relative term tolerance and must lie in
    (0, 1e-6); ``max_terms`` caps the number of summed terms and must be
    at least 100.
    """

    rel_tol: float = 1e-14
    max_terms: int = 10_000

    def __post_init__(self) -> None:
        if not 0.0 < self.rel_tol < 1e-6:
            raise ValueError(f"rel_tol must be in (0, 1e-6), got {self.rel_tol!r}")
        if self.max_terms < 100:
            raise ValueError(f"max_terms must be >= 100, got {self.max_terms!r}")


DEFAULT_CONTROL = SeriesControl()


def _require_positive(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"{name} must be a positive finite real, got {x!r}")
    return x


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0, via the Lanczos approximation (g=7, 9 terms)."""
    x = _require_positive("x", x)
    xm1 = x - 1.0
    acc = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        acc += _LANCZOS_COEFFS[i] / (xm1 + i)
    t = xm1 + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (xm1 + 0.5) * math.log(t) - t + math.log(acc)


def gamma_fn(x: float) -> float:
    """Gamma(x) = exp(log_gamma(x)) for x > 0."""
    return math.exp(log_gamma(x))


def beta_fn(a: float, b: float) -> float:
    """B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b), evaluated in log space."""
    a = _require_positive("a", a)
    b = _require_positive("b", b)
    return math.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b))


def digamma(x: float) -> float:
    """psi(x) = d/dx ln Gamma(x) for x > 0.

    Upward recurrence pushes the argument to at least 6, where the
    Bernoulli asymptotic series is accurate to ~1e-14.
    """
    x = _require_positive("x", x)
    value = 0.0
    while x < _DIGAMMA_SWITCH:
        value -= 1.0 / x
        x += 1.0
    inv_sq = 1.0 / (x * x)
    tail = 0.0
    power = inv_sq
    for coeff in _DIGAMMA_TAIL_COEFFS:
        tail += coeff * power
        power *= inv_sq
    return value + math.log(x) - 0.5 / x - tail


def gauss_2f1(
    a: float,
    b: float,
    c: float,
    z: float,
    control: SeriesControl | None = None,
    full_output: bool = False,
):
    """Gauss hypergeometric 2F1(a, b; c; z) for z in [0, 1).

    Sums sum_{n>=0} (a)_n (b)_n / (c)_n * z^n / n! with terms built by
    recurrence. Only the real series domain needed by the moment
    formulas is supported; there is no analytic continuation.
    """
    ctl = control if control is not None else DEFAULT_CONTROL
    if c <= 0.0 and c == math.floor(c):
        raise ValueError(f"c must not be a non-positive integer, got {c!r}")
    if not 0.0 <= z < 1.0:
        raise ValueError(f"z must lie in [0, 1), got {z!r}")
    total = 1.0
    term = 1.0
    settled = 0
    for n in range(1, ctl.max_terms + 1):
        term *= (a + n - 1.0) * (b + n - 1.0) / ((c + n - 1.0) * n) * z
        total += term
        if abs(term) <= ctl.rel_tol * abs(total):
            settled += 1
            if settled >= 3:
                return (total, n) if full_output else total
        else:
            settled = 0
    raise ConvergenceError("gauss_2f1 series did not converge", total, ctl.max_terms)


def appell_f1(
    a: float,
    b1: float,
    b2: float,
    c: float,
    x: float,
    y: float,
    control: SeriesControl | None = None,
    full_output: bool = False,
):
    """Appell F1(a; b1, b2; c; x, y) for |x| < 1, |y| < 1 with a > 0, c > a.

    The double series sum_{m,n} (a)_{m+n} (b1)_m (b2)_n /
    [(c)_{m+n} m! n!] x^m y^n is summed row-by-row in m. For x above
    0.95 the series converges too slowly and the one-dimensional
    integral representation

        F1 = 1/B(a, c-a) * int_0^1 t^{a-1} (1-t)^{c-a-1}
                                   (1-xt)^{-b1} (1-yt)^{-b2} dt

    is evaluated by adaptive quadrature instead. ``full_output=True``
    returns ``(value, rows)`` where ``rows`` is the number of summed
    series rows (0 on the quadrature path).
    """
    ctl = control if control is not None else DEFAULT_CONTROL
    a = float(a)
    if a <= 0.0:
        raise ValueError(f"a must be positive, got {a!r}")
    if c - a <= 0.0:
        raise ValueError(f"c - a must be positive, got c={c!r}, a={a!r}")
    if abs(x) >= 1.0 or abs(y) >= 1.0:
        raise ValueError(f"x and y must lie in (-1, 1), got x={x!r}, y={y!r}")
    if x > _F1_QUAD_SWITCH:
        value = _appell_f1_quad(a, b1, b2, c, x, y)
        return (value, 0) if full_output else value

    total = 0.0
    row_lead = 1.0  # (a)_m (b1)_m / ((c)_m m!) x^m at n = 0
    settled = 0
    for m in range(ctl.max_terms):
        term = row_lead
        row_sum = term
        inner_ok = False
        for n in range(1, ctl.max_terms + 1):
            term *= (a + m + n - 1.0) * (b2 + n - 1.0) / ((c + m + n - 1.0) * n) * y
            row_sum += term
            if abs(term) <= ctl.rel_tol * (abs(row_sum) + _TINY):
                inner_ok = True
                break
        if not inner_ok:
            raise ConvergenceError(
                "appell_f1 inner series did not converge", total + row_sum, m
            )
        total += row_sum
        if abs(row_sum) <= ctl.rel_tol * (abs(total) + _TINY):
            settled += 1
            if settled >= 3:
                return (total, m + 1) if full_output else total
        else:
            settled = 0
        row_lead *= (a + m) * (b1 + m) / ((c + m) * (m + 1.0)) * x
    raise ConvergenceError("appell_f1 series did not converge", total, ctl.max_terms)


def _appell_f1_quad(a: float, b1: float, b2: float, c: float, x: float, y: float) -> float:
    def integrand(t: float) -> float:
        return (
            t ** (a - 1.0)
            * (1.0 - t) ** (c - a - 1.0)
            * (1.0 - x * t) ** (-b1)
            * (1.0 - y * t) ** (-b2)
        )

    # full_output=1 also silences the subdivision warning; the endpoint
    # behavior is integrable for every in-scope parameter combination.
    out = quad(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-11, limit=500, full_output=1)
    integral = out[0]
    log_norm = log_gamma(c) - log_gamma(a) - log_gamma(c - a)
    return integral * math.exp(log_norm)


def lerch_phi_half(
    s: float,
    a: float,
    control: SeriesControl | None = None,
    full_output: bool = False,
):
    """Lerch transcendent Phi(1/2; s, a) = sum_{n>=0} 2^{-n} / (n+a)^s, a > 0.

    Specialized to argument 1/2, the only case the log-moment needs;
    convergence is geometric.
    """
    ctl = control if control is not None else DEFAULT_CONTROL
    a = _require_positive("a", a)
    total = 0.0
    power = 1.0
    settled = 0
    for n in range(ctl.max_terms):
        term = power / (n + a) ** s
        total += term
        power *= 0.5
        if abs(term) <= ctl.rel_tol * (abs(total) + _TINY):
            settled += 1
            if settled >= 3:
                return (total, n + 1) if full_output else total
        else:
            settled = 0
    raise ConvergenceError("lerch_phi_half series did not converge", total, ctl.max_terms)
