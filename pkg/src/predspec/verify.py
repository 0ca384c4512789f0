"""Self-contained identity checks wiring the estimators to the oracle.

These are the checks behind ``predspec verify``: exact unbiasedness of the
completed periodogram under the generating model, agreement of the two
independent expectation routes, and agreement of the closed-form extension
transform with brute-force prediction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arfit import ArmaModel, arma_expand
from .complete import predictive_dft_matrix
from .core import FrequencyGrid, TimeSeries, tukey_taper
from .estimators import default_rise
from .oracle import (
    expected_quadratic,
    fejer_expected_periodogram,
    predictive_dft_bruteforce,
)
from .simulation import builtin_models

__all__ = ["CheckResult", "unbiasedness_report", "oracle_report", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.error < self.tol


def _dft_vector(n: int, w: float, weights: np.ndarray | None = None) -> np.ndarray:
    e = np.exp(1j * np.arange(1, n + 1) * w) / np.sqrt(n)
    return e if weights is None else e * weights


def unbiasedness_report(
    lams=(0.7, 0.9, 0.95), sizes=(8, 20, 50), tol: float = 1e-9
) -> list:
    """Exact-expectation checks for completed periodograms under AR(2) truth.

    For each root modulus and sample size, the expectation of the completed
    periodogram (plain and tapered) at every Fourier frequency is computed by
    covariance algebra and compared with the true spectral density, which it
    must match to near machine precision.
    """
    results = []
    for lam in lams:
        model = builtin_models("m1", lam)
        for n in sizes:
            expansion = arma_expand(model, M=n + 8)
            cov = expansion.autocov
            grid = FrequencyGrid.fourier(n)
            freqs = grid.frequencies
            f = model.density(freqs)
            D = predictive_dft_matrix(model.pure_ar(), n, grid)
            taper = tukey_taper(n, default_rise(n))
            err_plain = 0.0
            err_tapered = 0.0
            for i, w in enumerate(freqs):
                e = _dft_vector(n, w)
                v = e + D[:, i]
                mean, _ = expected_quadratic(v, e, cov)
                err_plain = max(err_plain, abs(mean - f[i]) / f[i])
                ht = _dft_vector(n, w, taper.weights)
                mean_t, _ = expected_quadratic(v, ht, cov)
                err_tapered = max(err_tapered, abs(mean_t - f[i]) / f[i])
            results.append(
                CheckResult(f"unbiasedness plain lam={lam} n={n}", err_plain, tol)
            )
            results.append(
                CheckResult(f"unbiasedness tapered lam={lam} n={n}", err_tapered, tol)
            )
    return results


def oracle_report(tol_closure: float = 1e-6, tol_extension: float = 1e-8) -> list:
    """Cross-checks between independent oracle routes.

    Expectation closure: the covariance trace form of E[|DFT|^2] must agree
    with the kernel-convolution form on the shipped models.  Extension
    agreement: the closed-form predictive DFT must match brute-force
    prediction over a long horizon.
    """
    results = []
    models = {
        "m1(0.9)": builtin_models("m1", 0.9),
        "m2": builtin_models("m2"),
    }
    for name, model in models.items():
        expansion = arma_expand(model, M=600)
        cov = expansion.autocov
        for n in (8, 20, 50):
            freqs = FrequencyGrid.fourier(n).frequencies
            f_true = model.density
            err = 0.0
            for w in freqs:
                e = _dft_vector(n, w)
                mean, _ = expected_quadratic(e, e, cov)
                reference = fejer_expected_periodogram(f_true, n, float(w))
                err = max(err, abs(mean.real - reference) / reference)
            results.append(CheckResult(f"expectation closure {name} n={n}", err, tol_closure))

    rng = np.random.default_rng(20260822)
    for coeffs in ([0.6], [-0.5], [0.5, -0.3], [1.2, -0.5]):
        model = ArmaModel(coeffs, [], 1.0)
        n = 12
        expansion = arma_expand(model, M=n + 2 * 200)
        ts = TimeSeries(rng.standard_normal(n))
        grid = FrequencyGrid.fourier(n)
        closed = ts.values @ predictive_dft_matrix(model.pure_ar(), n, grid)
        brute = predictive_dft_bruteforce(ts, expansion.autocov, grid, horizon=200)
        err = float(np.max(np.abs(closed - brute)))
        label = ",".join(repr(a) for a in coeffs)
        results.append(
            CheckResult(f"extension closed-vs-brute ar[{label}]", err, tol_extension)
        )
    return results


def run_suite(which: str = "all") -> list:
    if which == "unbiasedness":
        return unbiasedness_report()
    if which == "oracle":
        return oracle_report()
    if which == "all":
        return unbiasedness_report() + oracle_report()
    raise ValueError(f"unknown verify suite {which!r}")
