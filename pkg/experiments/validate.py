"""experiments/validate.py — Invariant and oracle suite.

Quick mode runs the closed-form checks only; the full suite adds the
Monte Carlo oracles.  Every check is isolated: an exception marks that check
failed and the suite carries on.
"""

from __future__ import annotations

import logging
import math
from typing import Any, Callable, List, Tuple

import numpy as np
from scipy import integrate, stats

from analysis.bound import alpha_for_epsilon, epsilon_monte_carlo, epsilon_quadrature, sufficient_sample_size
from analysis.chi2 import chi2_cdf, chi2_pdf, wilson_hilferty_cdf
from channel.ofdm import (
    ChannelScenario,
    OfdmConfig,
    PdpKind,
    PdpSpec,
    freq_correlation,
    observe_ls,
    pdp_powers,
    sample_channels,
)
from estimators.base import LsIdentity, apply_estimator
from estimators.linear import (
    LinearEstimator,
    LinearWeights,
    apply_linear,
    lmmse_mse_theoretical,
    lmmse_weights,
    robust_lmmse_weights,
    train_linear,
)
from estimators.mlp import MlpHyper, MlpParams, identity_mlp, init_mlp, mlp_loss_and_gradients, train_mlp
from experiments.base import BaseRunner, Check, RunResult, check
from experiments.dataset import TrainingSet, generate_training_set, partition_symbol
from experiments.evaluation import evaluate_many, evaluate_per_realization_lmmse, scaled_mse_difference
from experiments.lemma_check import run_lemma_check
from experiments.rng import Stream, make_rng

logger = logging.getLogger(__name__)

QUICK = "trivial"
FULL = "derived"


def max_gradient_error(params: MlpParams, x: np.ndarray, t: np.ndarray, step: float = 1e-5) -> float:
    """Largest relative gap between backprop and central-difference gradients."""
    _, grads = mlp_loss_and_gradients(params, x, t)
    worst = 0.0
    for array, grad in zip(params.arrays(), grads.arrays()):
        numeric = np.zeros_like(array)
        for idx in np.ndindex(array.shape):
            saved = array[idx]
            array[idx] = saved + step
            plus, _ = mlp_loss_and_gradients(params, x, t)
            array[idx] = saved - step
            minus, _ = mlp_loss_and_gradients(params, x, t)
            array[idx] = saved
            numeric[idx] = (plus - minus) / (2.0 * step)
        scale = max(np.max(np.abs(grad)), np.max(np.abs(numeric)), 1e-12)
        worst = max(worst, float(np.max(np.abs(grad - numeric)) / scale))
    return worst


# ---------------------------------------------------------------------------
# Closed-form checks
# ---------------------------------------------------------------------------

def _pdp_normalized(seed: int) -> Check:
    specs = [PdpSpec(kind, tau) for kind in PdpKind for tau in (0, 1, 2, 16, 64)]
    worst = max(abs(pdp_powers(s).sum() - 1.0) for s in specs)
    return check("PDP powers sum to one", worst < 1e-12, f"max error {worst:.1e}")


def _correlation_structure(seed: int) -> Check:
    cfg = OfdmConfig(16, 4)
    flat = freq_correlation(PdpSpec(PdpKind.EXPONENTIAL, 0), cfg)
    r = freq_correlation(PdpSpec(PdpKind.EXPONENTIAL, 2), cfg)
    ok = (
        np.allclose(flat, 1.0)
        and np.all(np.diag(r) == 1.0)
        and np.max(np.abs(r - r.conj().T)) < 1e-12
        and np.linalg.eigvalsh(r).min() >= -1e-9
    )
    return check("correlation Hermitian PSD with unit diagonal", ok)


def _noiseless_observation(seed: int) -> Check:
    rng = make_rng(seed, Stream.ORACLE, 1)
    cfr = sample_channels(PdpSpec(PdpKind.EXPONENTIAL, 2), OfdmConfig(16, 4), 8, rng)
    return check("LS observation is exact without noise", np.array_equal(observe_ls(cfr, 0.0, rng), cfr))


def _scalar_wiener(seed: int) -> Check:
    w = lmmse_weights(np.array([[1.0]]), 1.0).matrix[0, 0]
    mse = lmmse_mse_theoretical(np.array([[1.0]]), 1.0)
    return check("scalar Wiener gain and MSE are 1/2", abs(w - 0.5) < 1e-15 and abs(mse - 0.5) < 1e-15)


def _noiseless_wiener(seed: int) -> Check:
    r = 0.5 * np.eye(4) + 0.5 * np.ones((4, 4))
    w = lmmse_weights(r, 1e-9).matrix
    err = float(np.max(np.abs(w - np.eye(4))))
    return check("LMMSE tends to identity as noise vanishes", err < 1e-6, f"{err:.1e}")


def _chi2_closed_forms(seed: int) -> Check:
    ok = (
        abs(chi2_pdf(0.0, 2) - 0.5) < 1e-15
        and chi2_pdf(0.0, 4) == 0.0
        and abs(chi2_cdf(2.0, 2) - (1.0 - math.exp(-1.0))) < 1e-12
        and chi2_cdf(0.0, 7) == 0.0
    )
    return check("chi-square closed forms", ok)


def _epsilon_half(seed: int) -> Check:
    errors = [abs(epsilon_quadrature(k, 0.0) - 0.5) for k in (2, 20, 200, 2000, 20000)]
    return check("epsilon(kappa, 0) = 1/2", max(errors) < 1e-6, f"max error {max(errors):.1e}")


def _alpha_anchor(seed: int) -> Check:
    alpha = alpha_for_epsilon(1200, 0.05)
    return check("alpha(1200, 0.05) in [0.08, 0.12]", 0.08 <= alpha <= 0.12, f"{alpha:.4f}")


def _sufficient_size(seed: int) -> Check:
    size = sufficient_sample_size(0.1, 0.05)
    return check("sufficient size for alpha=0.1 in [540, 660]", 540 <= size <= 660, f"M={size}")


def _linear_application(seed: int) -> Check:
    rng = make_rng(seed, Stream.ORACLE, 2)
    h = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    ok = (
        np.array_equal(apply_linear(LinearWeights(np.eye(4)), h), h)
        and np.array_equal(apply_linear(LinearWeights(np.zeros((4, 4))), h), np.zeros(4))
        and np.array_equal(apply_estimator(LsIdentity(4), h), h)
    )
    return check("identity, zero and LS estimators", ok)


def _identity_network(seed: int) -> Check:
    rng = make_rng(seed, Stream.ORACLE, 3)
    h = (rng.uniform(-0.7, 0.7, (16, 3)) + 1j * rng.uniform(-0.7, 0.7, (16, 3)))
    err = float(np.max(np.abs(identity_mlp(3).apply(h) - h)))
    return check("identity network reproduces its input", err < 1e-10, f"{err:.1e}")


def _scaled_difference(seed: int) -> Check:
    ok = scaled_mse_difference(0.1, 0.1) == 0.0 and abs(scaled_mse_difference(0.11, 0.10) - 0.1) < 1e-12
    return check("scaled MSE difference arithmetic", ok)


def _partition(seed: int) -> Check:
    cfg = OfdmConfig(512, 480)
    blocks = partition_symbol(cfg, 60)
    ok = len(blocks) == 8 and all(len(b) == 60 for b in blocks) and np.array_equal(
        np.concatenate(blocks), cfg.indices
    )
    return check("K=480 splits into 8 blocks of 60", ok)


def _noiseless_training(seed: int) -> Check:
    cfg = OfdmConfig(16, 4)
    scenario = ChannelScenario.stationary(PdpSpec(PdpKind.EXPONENTIAL, 4), math.inf)
    training = generate_training_set(scenario, cfg, 64, make_rng(seed, Stream.TRAIN, 99))
    err = float(np.max(np.abs(train_linear(training).matrix - np.eye(4))))
    return check("noiseless training yields identity weights", err < 1e-8, f"{err:.1e}")


def _gradient(seed: int) -> Check:
    rng = make_rng(seed, Stream.ORACLE, 4)
    params = init_mlp(2, MlpHyper(), rng)
    params.b1[:] = rng.normal(0, 0.1, params.b1.shape)
    params.b2[:] = rng.normal(0, 0.1, params.b2.shape)
    x = rng.standard_normal((3, 4))
    t = rng.standard_normal((3, 4))
    err = max_gradient_error(params, x, t)
    return check("backprop matches central differences", err < 1e-4, f"{err:.1e}")


# ---------------------------------------------------------------------------
# Monte Carlo oracles
# ---------------------------------------------------------------------------

def _epsilon_grid(seed: int) -> Check:
    worst = 0.0
    for i, kappa in enumerate((20, 100, 200, 1000, 2000)):
        for j, alpha in enumerate((0.0, 0.05, 0.1, 0.3, 1.0)):
            est, se = epsilon_monte_carlo(kappa, alpha, 10**6, make_rng(seed, Stream.ORACLE, 10, i, j))
            worst = max(worst, abs(est - epsilon_quadrature(kappa, alpha)) / se)
    return check("epsilon quadrature agrees with sampling", worst <= 3.0, f"max |z| = {worst:.2f}")


def _wilson_hilferty(seed: int) -> Check:
    worst = 0.0
    for kappa in (1000, 5000, 20000):
        x = kappa + np.array([-2.0, -1.0, 0.0, 1.0, 2.0]) * math.sqrt(2.0 * kappa)
        worst = max(worst, float(np.max(np.abs(chi2_cdf(x, kappa) - wilson_hilferty_cdf(x, kappa)))))
    return check("chi2 CDF agrees with Wilson-Hilferty", worst < 1e-4, f"{worst:.1e}")


def _cdf_integrates_pdf(seed: int) -> Check:
    rng = make_rng(seed, Stream.ORACLE, 11)
    worst = 0.0
    for _ in range(20):
        kappa = int(rng.integers(1, 10_001)) * 2
        x = float(rng.uniform(max(0.0, kappa - 3 * math.sqrt(2 * kappa)), kappa + 3 * math.sqrt(2 * kappa)))
        lo = max(0.0, kappa - 40 * math.sqrt(2 * kappa))
        area, _ = integrate.quad(chi2_pdf, lo, x, args=(kappa,), limit=200, epsabs=1e-10)
        worst = max(worst, abs(area - chi2_cdf(x, kappa)))
    return check("chi2 CDF equals the integral of the density", worst < 1e-6, f"{worst:.1e}")


def _covariance(seed: int) -> Check:
    cfg = OfdmConfig(16, 4)
    spec = PdpSpec(PdpKind.EXPONENTIAL, 2)
    cfr = sample_channels(spec, cfg, 10**6, make_rng(seed, Stream.ORACLE, 12))
    empirical = cfr.T @ cfr.conj() / cfr.shape[0]
    err = float(np.linalg.norm(empirical - freq_correlation(spec, cfg)))
    return check("sampled covariance matches correlation", err < 0.01, f"Frobenius {err:.4f}")


def _wiener_oracle(seed: int) -> Check:
    details, ok = [], True
    for i, (k, sigma2) in enumerate((k, s) for k in (4, 8) for s in (0.1, 1.0, 10.0)):
        cfg = OfdmConfig(16, k)
        pdp = PdpSpec(PdpKind.EXPONENTIAL, 2)
        snr = -10.0 * math.log10(sigma2)
        scenario = ChannelScenario.stationary(pdp, snr)
        r = freq_correlation(pdp, cfg)
        theory = lmmse_mse_theoretical(r, scenario.sigma2)
        reports = evaluate_many(
            {"lmmse": LinearEstimator(lmmse_weights(r, scenario.sigma2)), "ls": LsIdentity(k)},
            scenario, cfg, 100_000, make_rng(seed, Stream.ORACLE, 13, i),
        )
        lm, ls = reports["lmmse"], reports["ls"]
        ok &= abs(lm.mse - theory) <= 3 * lm.mse_std_error
        ok &= abs(ls.mse - scenario.sigma2) <= 3 * ls.mse_std_error
        details.append(f"K={k},s2={sigma2:g}:{lm.mse:.4g}/{theory:.4g}")
    return check("Monte Carlo LMMSE and LS MSE match theory", ok, "; ".join(details))


def _training_convergence(seed: int) -> Check:
    cfg = OfdmConfig(16, 4)
    scenario = ChannelScenario.stationary(PdpSpec(PdpKind.EXPONENTIAL, 2), 10.0)
    target = lmmse_weights(freq_correlation(scenario.pdp, cfg), scenario.sigma2).matrix
    dist = []
    for size in (1_000, 100_000):
        training = generate_training_set(scenario, cfg, size, make_rng(seed, Stream.TRAIN, 14, size))
        dist.append(float(np.linalg.norm(train_linear(training).matrix - target)))
    return check("trained weights approach the Wiener weights", dist[1] < dist[0],
                 f"{dist[0]:.4f} -> {dist[1]:.4f}")


def _quasi_mismatch(seed: int) -> Check:
    cfg = OfdmConfig(64, 60)
    scenario = ChannelScenario.quasi_stationary(tuple(range(1, 17)), 10.0)
    robust = evaluate_many(
        {"robust": LinearEstimator(robust_lmmse_weights(16, cfg, scenario.sigma2))},
        scenario, cfg, 20_000, make_rng(seed, Stream.ORACLE, 15),
    )["robust"]
    genie = evaluate_per_realization_lmmse(scenario, cfg, 20_000, make_rng(seed, Stream.ORACLE, 15))
    return check(
        "robust LMMSE pays a mismatch penalty",
        robust.mse >= genie.mse - 3 * (robust.mse_std_error + genie.mse_std_error),
        f"{robust.mse:.4g} vs {genie.mse:.4g}",
    )


def _tau_uniformity(seed: int) -> Check:
    cfg = OfdmConfig(64, 60)
    scenario = ChannelScenario.quasi_stationary(tuple(range(1, 17)), 10.0)
    training = generate_training_set(scenario, cfg, 100_000, make_rng(seed, Stream.TRAIN, 16))
    counts = np.bincount(training.taus, minlength=17)[1:]
    p = stats.chisquare(counts).pvalue
    return check("per-realization delays are uniform", p >= 0.01, f"p={p:.3f}")


def _memorization(seed: int) -> Check:
    rng = make_rng(seed, Stream.ORACLE, 17)
    x = (rng.standard_normal((10, 4)) + 1j * rng.standard_normal((10, 4))) / math.sqrt(2)
    y = (rng.standard_normal((10, 4)) + 1j * rng.standard_normal((10, 4))) / math.sqrt(2)
    hyper = MlpHyper(batch_size=10, learning_rate=1e-2, max_epochs=2000, patience=2001)
    net = train_mlp(TrainingSet(x, y), hyper, make_rng(seed, Stream.INIT, 17))
    return check("MLP memorizes a 10-sample set", net.final_loss < 1e-3, f"loss {net.final_loss:.2e}")


def _lemma(seed: int) -> Check:
    result = run_lemma_check(seed=seed)
    return check("training loss follows chi-square", result.checks_passed, result.checks[0].detail)


CHECKS: List[Tuple[str, Callable[[int], Check]]] = [
    (QUICK, _pdp_normalized),
    (QUICK, _correlation_structure),
    (QUICK, _noiseless_observation),
    (QUICK, _scalar_wiener),
    (QUICK, _noiseless_wiener),
    (QUICK, _chi2_closed_forms),
    (QUICK, _epsilon_half),
    (QUICK, _alpha_anchor),
    (QUICK, _sufficient_size),
    (QUICK, _linear_application),
    (QUICK, _identity_network),
    (QUICK, _scaled_difference),
    (QUICK, _partition),
    (QUICK, _noiseless_training),
    (QUICK, _gradient),
    (FULL, _epsilon_grid),
    (FULL, _wilson_hilferty),
    (FULL, _cdf_integrates_pdf),
    (FULL, _covariance),
    (FULL, _wiener_oracle),
    (FULL, _training_convergence),
    (FULL, _quasi_mismatch),
    (FULL, _tau_uniformity),
    (FULL, _memorization),
    (FULL, _lemma),
]


def run_validate(quick: bool = False, seed: int = 1) -> RunResult:
    rows, checks = [], []
    for tier, fn in CHECKS:
        if quick and tier != QUICK:
            continue
        try:
            outcome = fn(seed)
        except Exception as exc:
            logger.exception("Check %s raised", fn.__name__)
            outcome = check(fn.__name__.strip("_").replace("_", " "), False, f"{type(exc).__name__}: {exc}")
        if not outcome.passed:
            logger.warning("%s", outcome)
        checks.append(outcome)
        rows.append([outcome.name, tier, outcome.passed, outcome.detail])
    return RunResult(
        success=True,
        name="validate",
        header=["check", "tier", "passed", "detail"],
        rows=rows,
        checks=checks,
        metadata={"quick": quick, "seed": seed, "checks": len(rows)},
    )


class ValidateRunner(BaseRunner):
    name = "validate"
    description = "Invariant and oracle suite"
    options = ("quick", "seed")

    def run(self, **kwargs: Any) -> RunResult:
        return run_validate(**kwargs)
