"""Exact-expectation and brute-force reference computations.

Everything here is an independent check on the production estimators:
predictor weights come from dense positive-definite solves (not the fast
recursions), extension transforms from literally summing predicted values
over a long horizon, and expectations from Gaussian moment algebra on
covariance matrices.  Test suites compare the production closed forms
against these.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import CovarianceSequence, FrequencyGrid, TimeSeries
from .exceptions import DomainError, NumericalError

__all__ = [
    "PredictorCoefficients",
    "finite_predictor_coeffs",
    "predictive_dft_bruteforce",
    "expected_quadratic",
    "fejer_expected_periodogram",
]


@dataclass(frozen=True)
class PredictorCoefficients:
    """Weights of the best linear predictor of x[tau] from x[1..n]."""

    target_index: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if w.ndim != 1 or w.size < 1:
            raise DomainError("predictor weights must be a non-empty 1-d array")


def _toeplitz_cholesky(cov: CovarianceSequence, n: int):
    r = cov.toeplitz(n)
    try:
        return scipy.linalg.cho_factor(r, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError("covariance matrix is not positive definite") from exc


def finite_predictor_coeffs(cov: CovarianceSequence, n: int, tau: int) -> PredictorCoefficients:
    """Best-linear-predictor weights for x[tau] given x[1..n], tau outside 1..n.

    Solves the dense normal equations R_n w = (c(tau-1), ..., c(tau-n))'
    by a positive-definite factorization; no recursive shortcut is shared
    with the estimation code this serves as a reference for.
    """
    if n < 1:
        raise DomainError("window length must be >= 1")
    if 1 <= tau <= n:
        raise DomainError("prediction target must lie outside the observed window 1..n")
    needed = max(abs(tau - 1), abs(tau - n))
    if cov.max_lag < needed:
        raise DomainError(
            f"covariance sequence holds lags 0..{cov.max_lag}, need 0..{needed}"
        )
    factor = _toeplitz_cholesky(cov, n)
    rhs = cov.lags[np.abs(tau - np.arange(1, n + 1))]
    weights = scipy.linalg.cho_solve(factor, rhs)
    return PredictorCoefficients(target_index=tau, weights=weights)


def predictive_dft_bruteforce(
    ts: TimeSeries,
    cov: CovarianceSequence,
    grid: FrequencyGrid,
    horizon: int = 200,
    tail_tol: float = 1e-8,
) -> np.ndarray:
    """Extension transform by direct summation of predicted values.

    Backcasts x[tau] for tau = 0, -1, ..., 1-H and forecasts for
    tau = n+1, ..., n+H, sums n**-0.5 * xhat[tau] * exp(1j*tau*w), and
    verifies stability by recomputing at horizon 2H; a sup-norm change above
    `tail_tol` raises, since it means the horizon truncation is visible.
    Needs covariance lags up to n + 2*horizon - 1.
    """
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    n = ts.n
    needed = n + 2 * horizon - 1
    if cov.max_lag < needed:
        raise DomainError(
            f"covariance sequence holds lags 0..{cov.max_lag}, need 0..{needed}"
        )
    factor = _toeplitz_cholesky(cov, n)
    x = ts.values
    w = grid.frequencies
    c = cov.lags

    def one_sided(taus: np.ndarray) -> np.ndarray:
        # lag matrix: |tau - t| for t = 1..n, one column per tau
        lag_idx = np.abs(taus[None, :] - np.arange(1, n + 1)[:, None])
        weights = scipy.linalg.cho_solve(factor, c[lag_idx])
        xhat = x @ weights
        return (xhat @ np.exp(1j * np.outer(taus, w))) / np.sqrt(n)

    def transform(h: int) -> np.ndarray:
        back = one_sided(np.arange(1 - h, 1)[::-1])
        fwd = one_sided(np.arange(n + 1, n + h + 1))
        return back + fwd

    doubled = transform(2 * horizon)
    if np.max(np.abs(doubled - transform(horizon))) > tail_tol:
        raise NumericalError(
            "extension tail did not stabilize when the horizon doubled; "
            "increase the horizon or check the model's mixing"
        )
    return doubled


def expected_quadratic(v: np.ndarray, w: np.ndarray, cov: CovarianceSequence):
    """Exact Gaussian mean and variance of (v'x) * conj(w'x).

    x is the mean-zero process with the given autocovariances observed at
    t = 1..n (n inferred from the vector length).  The mean is the trace
    identity conj(w)' R_n v; the variance expands the fourth moment by
    Gaussian pairings, so the fourth-cumulant term is absent:

        var = (conj(v)'Rv) * (conj(w)'Rw) + |v'Rw|**2.

    Returns (mean, variance) with mean complex and variance real.
    """
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if v.ndim != 1 or w.ndim != 1 or v.size != w.size or v.size < 1:
        raise DomainError("linear-form vectors must be 1-d and of equal length")
    n = v.size
    if cov.max_lag < n - 1:
        raise DomainError(
            f"covariance sequence holds lags 0..{cov.max_lag}, need 0..{n - 1}"
        )
    _toeplitz_cholesky(cov, n)  # positive-definiteness gate
    r = cov.toeplitz(n)
    rv = r @ v
    rw = r @ w
    mean = complex(np.conj(w) @ rv)
    var = float((np.conj(v) @ rv).real * (np.conj(w) @ rw).real + abs(v @ rw) ** 2)
    return mean, var


def fejer_expected_periodogram(
    density, n: int, omega: float, quadrature_points: int = 4096
) -> float:
    """E[|DFT|**2] at omega via kernel smoothing of the true density.

    The expectation of the regular periodogram is the circular convolution of
    f with the order-n Fejer kernel F_n(u) = sin(n*u/2)**2 / (n*sin(u/2)**2),
    F_n(0) = n.  Midpoint quadrature on a 2*pi-periodic analytic integrand
    converges spectrally, so a few thousand points give ~machine accuracy.
    """
    if n < 1:
        raise DomainError("series length must be >= 1")
    if quadrature_points < 256:
        raise DomainError("quadrature needs at least 256 points")
    lam = 2.0 * np.pi * (np.arange(quadrature_points) + 0.5) / quadrature_points
    u = omega - lam
    s = np.sin(u / 2.0)
    tiny = np.abs(s) < 1e-12
    s_safe = np.where(tiny, 1.0, s)
    kernel = np.where(tiny, float(n), (np.sin(n * u / 2.0) / s_safe) ** 2 / n)
    f = np.asarray(density(lam), dtype=float)
    if np.any(~np.isfinite(f)):
        raise NumericalError("density evaluated non-finite on the quadrature grid")
    return float(np.mean(kernel * f))
