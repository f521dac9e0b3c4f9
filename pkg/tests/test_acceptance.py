"""Acceptance suite: every exit criterion as one test, each printing a
PASS line when it holds. Reference values are pinned from the published
application study this package reproduces.

Criterion 1b is expected to fail and is left red on purpose: the pinned
reference standard errors cannot be produced by the model's information
matrix at the optimum (see the assertion message for the full analysis).
"""

import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

from ecrlab.data import describe
from ecrlab.ecr import (
    MomentExistenceError,
    Params,
    ZeroLimitKind,
    cdf,
    incomplete_moment,
    log_moment,
    mode,
    order_stat_moment,
    pdf,
    pdf_zero_limit,
    pwm,
    quantile,
    raw_moment,
    sample,
    tail_ratio,
)
from ecrlab.gof import fit_comparison_models
from ecrlab.inference import (
    bias_known_beta,
    cox_snell_bias,
    cox_snell_bias_generic,
    cr_bias,
    fisher_derivatives,
    fisher_info,
    fisher_info_inverse,
    fit_ml,
    lr_test_cr,
)
from ecrlab.sim import StudyConfig, run_convergence_study, run_grid_study, summaries_to_csv
from ecrlab.specfun import (
    appell_f1,
    digamma,
    gauss_2f1,
    lerch_phi_half,
    log_gamma,
)

# Reference rows pinned from the application study:
# model -> (W*, A*, KS, AIC, CAIC, BIC, HQIC)
REFERENCE_GOF = {
    "ecr": (0.039, 0.286, 0.057, 764.612, 764.803, 768.992, 766.343),
    "cr": (0.213, 1.254, 0.132, 785.023, 785.085, 787.212, 785.888),
    "weibull": (0.114, 0.689, 0.118, 767.444, 767.635, 771.824, 769.175),
    "gamma": (0.195, 1.172, 0.159, 772.658, 772.849, 777.037, 774.389),
    "lognormal": (0.102, 0.579, 0.089, 764.915, 765.105, 769.294, 766.645),
    "ee": (0.210, 1.261, 0.168, 773.709, 773.900, 778.088, 775.440),
}

ORACLE_GRID = [
    Params(beta, lam)
    for beta in (0.3, 0.5, 0.8, 1.0, 1.5, 2.5, 4.0, 6.0, 8.0, 10.0)
    for lam in (0.5, 80.0)
]


def _passed(criterion: str, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: PASS ({detail})")


def _moment_oracle(p, r, s=0, t=0, upper=1.0, log_weight=False):
    """Quadrature of int x^r F^s (1-F)^t f dx through u = 1 - lam/sqrt(lam^2+x^2)."""

    def integrand(u):
        x = p.lam * math.sqrt(u * (2.0 - u)) / (1.0 - u)
        weight = math.log(x) if log_weight else x**r
        return weight * (u**p.beta) ** s * (1.0 - u**p.beta) ** t * p.beta * u ** (p.beta - 1.0)

    value, _ = quad(integrand, 0.0, upper, epsabs=1e-13, epsrel=1e-11, limit=400)
    return value


def test_criterion_1a_application_estimates(heart_data):
    start = time.perf_counter()
    fit = fit_ml(heart_data)
    elapsed = time.perf_counter() - start
    assert fit.params.beta == pytest.approx(0.38669, rel=1e-3)
    assert fit.params.lam == pytest.approx(80.68399, rel=1e-3)
    assert elapsed < 1.0
    _passed("1a", f"beta={fit.params.beta:.5f}, lambda={fit.params.lam:.5f}, {elapsed*1e3:.1f} ms")


def test_criterion_1b_reference_standard_errors(heart_data):
    fit = fit_ml(heart_data)
    assert fit.std_errors == pytest.approx((0.04002, 11.70962), rel=1e-3), (
        "The pinned reference standard errors (0.04002, 11.70962) cannot be "
        "reproduced from this model's information matrix at the reported "
        "optimum. Inverting the expected information gives "
        f"{tuple(round(s, 5) for s in fit.std_errors)}; the observed "
        "information gives (0.0739, 23.04); sandwich and outer-product "
        "variants give (0.0637, 21.14) and (0.0881, 26.50). The reference "
        "value 0.44792 for the one-parameter submodel scale likewise falls "
        "7.5x below that submodel's information bound of 3.3705, so the "
        "reference error column itself is inconsistent with the model. The "
        "package reports errors from the inverse expected information, "
        "whose entries are Monte Carlo verified. See the decisions ledger "
        "for the full analysis."
    )
    _passed("1b", "reference standard errors reproduced")


def test_criterion_2_gof_reproduction(heart_data):
    fits = {f.model.name: f.report for f in fit_comparison_models(heart_data)}
    assert set(fits) == set(REFERENCE_GOF)
    for name, (wstar, astar, ks, aic, caic, bic, hqic) in REFERENCE_GOF.items():
        report = fits[name]
        assert report.wstar == pytest.approx(wstar, abs=5e-3), name
        assert report.astar == pytest.approx(astar, abs=5e-3), name
        assert report.ks == pytest.approx(ks, abs=5e-3), name
        assert report.aic == pytest.approx(aic, abs=0.02), name
        assert report.caic == pytest.approx(caic, abs=0.02), name
        assert report.bic == pytest.approx(bic, abs=0.02), name
        assert report.hqic == pytest.approx(hqic, abs=0.02), name
    ecr = fits["ecr"]
    for name, report in fits.items():
        if name == "ecr":
            continue
        for field in ("wstar", "astar", "ks", "aic", "caic", "bic", "hqic"):
            assert getattr(ecr, field) < getattr(report, field), (name, field)
    _passed("2", "all six model rows within tolerance; best model first on all seven statistics")


def test_criterion_3_likelihood_ratio(heart_data):
    stat, p_value = lr_test_cr(heart_data)
    assert p_value < 1e-5
    _passed("3", f"statistic={stat:.3f}, p={p_value:.2e}")


def test_criterion_4_descriptive_statistics(heart_data):
    stats = describe(heart_data)
    assert stats.mean == pytest.approx(143.70, abs=0.02)
    assert stats.median == pytest.approx(58.50, abs=0.005)
    assert stats.variance == pytest.approx(64506.42, abs=0.01)
    assert stats.minimum == 1.0
    assert stats.maximum == 1386.0
    # the moment (plug-in) convention is the one matching the reference
    # shape values; the adjusted convention does not
    assert stats.skewness_moment == pytest.approx(3.104648, abs=1e-4)
    assert stats.kurtosis_moment == pytest.approx(13.00242, abs=1e-4)
    assert abs(stats.skewness_adjusted - 3.104648) > 1e-4
    _passed("4", "location/spread at printed precision; moment convention matches shape values")


def test_criterion_5_closed_forms_against_oracles():
    start = time.perf_counter()
    for p in ORACLE_GRID:
        assert raw_moment(0.5, p) == pytest.approx(_moment_oracle(p, 0.5), rel=1e-7)
        assert raw_moment(-0.5, p) == pytest.approx(_moment_oracle(p, -0.5), rel=1e-7)
        assert pwm(1, 0.3, 2, p) == pytest.approx(_moment_oracle(p, 0.3, s=1, t=2), rel=1e-7)
        x0 = 2.0 * p.lam
        s0 = math.hypot(p.lam, x0)
        u0 = x0 * x0 / (s0 * (s0 + p.lam))
        assert incomplete_moment(0.5, x0, p) == pytest.approx(
            _moment_oracle(p, 0.5, upper=u0), rel=1e-7
        )
        assert log_moment(p) == pytest.approx(_moment_oracle(p, 0.0, log_weight=True), rel=1e-7)

        def order_stat_oracle(i, n, r):
            from ecrlab.specfun import beta_fn

            def integrand(u):
                x = p.lam * math.sqrt(u * (2.0 - u)) / (1.0 - u)
                return (
                    x**r * u ** (i * p.beta - 1.0) * (1.0 - u**p.beta) ** (n - i)
                    * p.beta / beta_fn(float(i), float(n - i + 1))
                )

            value, _ = quad(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-11, limit=400)
            return value

        assert order_stat_moment(2, 4, 0.4, p) == pytest.approx(
            order_stat_oracle(2, 4, 0.4), rel=1e-7
        )

        # existence windows are enforced at both ends
        with pytest.raises(MomentExistenceError):
            raw_moment(1.0, p)
        with pytest.raises(MomentExistenceError):
            raw_moment(-2.0 * p.beta, p)
        with pytest.raises(MomentExistenceError):
            order_stat_moment(1, 3, 1.0, p)
        with pytest.raises(MomentExistenceError):
            incomplete_moment(-2.0 * p.beta, p.lam, p)
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    _passed("5", f"5 moment families x {len(ORACLE_GRID)} grid points in {elapsed:.1f} s")


def test_criterion_6_information_stack(rng):
    for _ in range(50):
        p = Params(rng.uniform(0.1, 8.0), rng.uniform(0.1, 50.0))
        n = int(rng.integers(5, 400))
        k = fisher_info(p, n)
        k_inv = fisher_info_inverse(p, n)
        assert np.allclose(k.entries @ k_inv.entries, np.eye(2), atol=1e-10)
        closed = cox_snell_bias(p, n)
        generic = cox_snell_bias_generic(p, n)
        assert closed[0] == pytest.approx(generic[0], rel=1e-9)
        assert closed[1] == pytest.approx(generic[1], rel=1e-9)

    p = Params(0.7, 2.5)
    n = 9
    d = fisher_derivatives(p, n)
    h = 1e-6

    def kappa(beta, lam):
        return fisher_info(Params(beta, lam), n).cumulants

    for (i, j), db, dl in (((0, 0), d.kbb_dbeta, d.kbb_dlam),
                           ((0, 1), d.kbl_dbeta, d.kbl_dlam),
                           ((1, 1), d.kll_dbeta, d.kll_dlam)):
        fd_b = (kappa(p.beta + h, p.lam)[i, j] - kappa(p.beta - h, p.lam)[i, j]) / (2 * h)
        fd_l = (kappa(p.beta, p.lam + h)[i, j] - kappa(p.beta, p.lam - h)[i, j]) / (2 * h)
        assert db == pytest.approx(fd_b, rel=1e-7, abs=1e-10)
        assert dl == pytest.approx(fd_l, rel=1e-7, abs=1e-10)

    assert cr_bias(3.7, 25) == 45.0 * 3.7 / (56.0 * 25)
    assert bias_known_beta(3.7, 1.0, 25) == pytest.approx(cr_bias(3.7, 25), rel=1e-13)
    _passed("6", "inverse, derivatives, and both bias routes consistent")


def test_criterion_7_special_functions(rng):
    for _ in range(20):
        a = rng.uniform(0.05, 0.95)
        c = rng.uniform(0.2, 5.0)
        lhs = gauss_2f1(a, 1.0 - a, c, 0.5)
        rhs = math.exp(
            log_gamma(c / 2.0) + log_gamma((1.0 + c) / 2.0)
            - log_gamma((a + c) / 2.0) - log_gamma((1.0 + c - a) / 2.0)
        )
        assert lhs == pytest.approx(rhs, rel=1e-10)

    assert appell_f1(1.2, 0.7, -0.3, 2.2, 0.0, 0.0) == 1.0
    for x in (0.2, 0.6, 0.9):
        assert appell_f1(1.2, 0.7, -0.3, 2.2, x, 0.0) == pytest.approx(
            gauss_2f1(1.2, 0.7, 2.2, x), rel=1e-12
        )
    assert lerch_phi_half(1.0, 1.0) == pytest.approx(2.0 * math.log(2.0), rel=1e-12)
    for x in (0.1, 0.5, 1.0, 3.0, 10.0):
        assert digamma(x + 1.0) - digamma(x) == pytest.approx(1.0 / x, rel=1e-12)
    _passed("7", "summation theorem, reductions, and recurrences hold")


def test_criterion_8_simulation_properties():
    start = time.perf_counter()
    truth = Params(0.5, 0.6)

    shrink = run_convergence_study(
        StudyConfig(truth, (20, 200), 500, ("ml",), master_seed=2024)
    )
    bias = {(r.n, r.parameter): abs(r.mean_bias) for r in shrink}
    assert bias[(200, "beta")] < bias[(20, "beta")]
    assert bias[(200, "lambda")] < bias[(20, "lambda")]

    corrected = run_convergence_study(
        StudyConfig(truth, (50,), 500, ("ml", "csml"), master_seed=2025)
    )
    beta_bias = {r.estimator: abs(r.mean_bias) for r in corrected if r.parameter == "beta"}
    assert beta_bias["csml"] < beta_bias["ml"]

    spread_cfg = StudyConfig(truth, (100,), 500, ("ml", "pb"), master_seed=2026)
    spread = run_convergence_study(spread_cfg)
    ssd = {(r.estimator, r.parameter): r.ssd for r in spread}
    assert ssd[("pb", "lambda")] > ssd[("ml", "lambda")]

    invariance = run_grid_study(
        StudyConfig(
            Params(1.0, 1.0), (100,), 500, ("ml",), master_seed=2027,
            grid=((1.0,), (0.5, 5.0)),
        )
    )
    rows = {r.lambda_true: r for r in invariance if r.parameter == "lambda"}
    gap = abs(rows[0.5].relative_bias - rows[5.0].relative_bias)
    spread_se = math.hypot(
        rows[0.5].relative_ssd / math.sqrt(rows[0.5].successes),
        rows[5.0].relative_ssd / math.sqrt(rows[5.0].successes),
    )
    assert gap <= 2.0 * spread_se

    serial = summaries_to_csv(run_convergence_study(spread_cfg, workers=1))
    parallel = summaries_to_csv(run_convergence_study(spread_cfg, workers=2))
    assert serial == parallel

    elapsed = time.perf_counter() - start
    assert elapsed < 300.0
    _passed("8", f"bias decay, correction gain, spread ordering, scale invariance, "
                 f"parallel determinism in {elapsed:.0f} s")


def test_criterion_9_distribution_core(rng):
    p = Params(0.4, 80.0)
    for q in (1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-6):
        assert cdf(quantile(q, p), p) == pytest.approx(q, rel=1e-9, abs=1e-12)

    grid_p = Params(0.8, 2.0)
    for x in np.geomspace(0.01 * grid_p.lam, 100.0 * grid_p.lam, 20):
        h = 1e-6 * x
        derivative = (cdf(x + h, grid_p) - cdf(x - h, grid_p)) / (2.0 * h)
        assert pdf(x, grid_p) == pytest.approx(derivative, rel=1e-5)

    assert pdf_zero_limit(Params(0.3, 1.0)).kind is ZeroLimitKind.INFINITE
    finite = pdf_zero_limit(Params(0.5, 1.0))
    assert finite.kind is ZeroLimitKind.FINITE
    assert finite.value == pytest.approx(math.sqrt(2.0) / 2.0, rel=1e-14)
    assert pdf_zero_limit(Params(1.0, 1.0)).kind is ZeroLimitKind.ZERO

    phi = (math.sqrt(5.0) - 1.0) / 2.0
    for beta in (0.6, 1.0, 2.0, 5.0):
        pb = Params(beta, 3.0)
        a, b = 1e-6 * pb.lam, 50.0 * pb.lam
        c, d = b - phi * (b - a), a + phi * (b - a)
        fc, fd = pdf(c, pb), pdf(d, pb)
        while (b - a) > 1e-10 * pb.lam:
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - phi * (b - a)
                fc = pdf(c, pb)
            else:
                a, c, fc = c, d, fd
                d = a + phi * (b - a)
                fd = pdf(d, pb)
        assert mode(pb) == pytest.approx(0.5 * (a + b), rel=1e-6)

    for c in (0.5, 2.0, 3.0):
        assert tail_ratio(c, 1e6, Params(0.7, 1.0)) == pytest.approx(1.0 / c, abs=1e-4)

    n = 100_000
    draws = np.sort(sample(n, Params(0.5, 0.6), seed=99))
    u = cdf(draws, Params(0.5, 0.6))
    i = np.arange(1, n + 1)
    ks = float(np.max(np.maximum(i / n - u, u - (i - 1) / n)))
    assert ks < 1.63 / math.sqrt(n)
    _passed("9", "round trips, density consistency, limits, mode, tail index, sampler")
