"""Autoregressive model types, Yule-Walker fitting, order selection, and
ARMA series expansions.

The autoregressive convention everywhere is
``x[t] = sum_{j=1..p} a[j] * x[t-j] + e[t]`` with transfer polynomial
``a(w) = 1 - sum_j a[j] * exp(-1j*j*w)`` and spectral density
``f(w) = sigma2 / |a(w)|**2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CovarianceSequence, FrequencyGrid, TimeSeries, sample_autocov
from .exceptions import DomainError, NumericalError

__all__ = [
    "ArModel",
    "ArmaModel",
    "OrderSelection",
    "ArmaExpansion",
    "levinson_durbin",
    "yule_walker_fit",
    "aic_select",
    "ar_spectral",
    "arma_expand",
]

# Stationarity margin: recursion-polynomial roots must have modulus below this.
_CAUSAL_RADIUS = 1.0 - 1e-10


def _recursion_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots u of u**p - a1*u**(p-1) - ... - ap; inverses of the zeros of a(z)."""
    return np.roots(np.concatenate(([1.0], -np.asarray(coeffs, dtype=float))))


@dataclass(frozen=True)
class ArModel:
    """Causal AR(p) model: coefficients a[1..p] and innovation variance."""

    coeffs: np.ndarray
    sigma2: float

    def __post_init__(self):
        a = np.array(self.coeffs, dtype=float)
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)
        if a.ndim != 1:
            raise DomainError("AR coefficients must be a 1-d array")
        if not np.all(np.isfinite(a)):
            raise DomainError("AR coefficients must be finite")
        if not (np.isfinite(self.sigma2) and self.sigma2 > 0.0):
            raise DomainError("innovation variance must be positive and finite")
        if a.size and np.max(np.abs(_recursion_roots(a))) >= _CAUSAL_RADIUS:
            raise DomainError("AR model is not causal (root on or inside the unit circle)")

    @property
    def p(self) -> int:
        return self.coeffs.size

    def transfer(self, freqs: np.ndarray) -> np.ndarray:
        """a(w) = 1 - sum_j a[j] exp(-1j*j*w)."""
        w = np.asarray(freqs, dtype=float)
        if self.p == 0:
            return np.ones(w.shape, dtype=complex)
        j = np.arange(1, self.p + 1)
        return 1.0 - np.exp(-1j * np.multiply.outer(w, j)) @ self.coeffs

    def density(self, freqs: np.ndarray) -> np.ndarray:
        aw = self.transfer(freqs)
        return self.sigma2 / (aw.real**2 + aw.imag**2)


@dataclass(frozen=True)
class ArmaModel:
    """Causal ARMA(P, Q): x[t] = sum ar[i] x[t-i] + e[t] + sum ma[j] e[t-j].

    The AR polynomial must have all roots strictly outside the unit circle;
    the MA polynomial may touch the circle (strict invertibility is demanded
    only where an AR-series expansion is requested).
    """

    ar: np.ndarray
    ma: np.ndarray
    sigma2: float

    def __post_init__(self):
        for name in ("ar", "ma"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
            if arr.ndim != 1 or not np.all(np.isfinite(arr)):
                raise DomainError(f"{name} coefficients must be a finite 1-d array")
        if not (np.isfinite(self.sigma2) and self.sigma2 > 0.0):
            raise DomainError("innovation variance must be positive and finite")
        if self.ar.size and np.max(np.abs(_recursion_roots(self.ar))) >= _CAUSAL_RADIUS:
            raise DomainError("AR part is not causal")
        if self.ma.size:
            # roots of u**q * psi(1/u): inverses of the MA polynomial's zeros
            inv = np.roots(np.concatenate(([1.0], self.ma)))
            if inv.size and np.max(np.abs(inv)) > 1.0 + 1e-10:
                raise DomainError("MA polynomial root strictly inside the unit circle")

    @property
    def p(self) -> int:
        return self.ar.size

    @property
    def q(self) -> int:
        return self.ma.size

    def ar_polynomial(self, freqs: np.ndarray) -> np.ndarray:
        w = np.asarray(freqs, dtype=float)
        if self.p == 0:
            return np.ones(w.shape, dtype=complex)
        j = np.arange(1, self.p + 1)
        return 1.0 - np.exp(-1j * np.multiply.outer(w, j)) @ self.ar

    def ma_polynomial(self, freqs: np.ndarray) -> np.ndarray:
        w = np.asarray(freqs, dtype=float)
        if self.q == 0:
            return np.ones(w.shape, dtype=complex)
        j = np.arange(1, self.q + 1)
        return 1.0 + np.exp(-1j * np.multiply.outer(w, j)) @ self.ma

    def density(self, freqs: np.ndarray) -> np.ndarray:
        phi = self.ar_polynomial(freqs)
        psi = self.ma_polynomial(freqs)
        return self.sigma2 * (psi.real**2 + psi.imag**2) / (phi.real**2 + phi.imag**2)

    def pure_ar(self) -> ArModel:
        """The ArModel view of an ARMA with no MA part."""
        if self.q != 0:
            raise DomainError("model has a moving-average part")
        return ArModel(self.ar, self.sigma2)


def _levinson_all(c: np.ndarray, pmax: int):
    """Levinson recursion up to order pmax.

    Returns (coeffs_by_order, sigma2_by_order) where coeffs_by_order[p] is the
    length-p coefficient vector and sigma2_by_order[p] the matching innovation
    variance, for p = 0..pmax.
    """
    if c[0] <= 0.0:
        raise NumericalError("covariance not positive definite (c(0) <= 0)")
    coeffs = [np.zeros(0)]
    sigma2 = np.empty(pmax + 1)
    sigma2[0] = c[0]
    a = np.zeros(0)
    for m in range(1, pmax + 1):
        acc = a @ c[m - 1 : 0 : -1] if m > 1 else 0.0
        k = (c[m] - acc) / sigma2[m - 1]
        if not np.isfinite(k) or abs(k) >= 1.0:
            raise NumericalError(
                f"covariance not positive definite (reflection coefficient at order {m})"
            )
        a = np.concatenate((a - k * a[::-1], [k]))
        sigma2[m] = sigma2[m - 1] * (1.0 - k * k)
        if sigma2[m] <= 0.0:
            raise NumericalError(f"innovation variance collapsed at order {m}")
        coeffs.append(a)
    return coeffs, sigma2


def levinson_durbin(cov: CovarianceSequence, p: int) -> ArModel:
    """Solve the order-p prediction equations from c(0..p) by the Levinson
    recursion; returns the fitted model with its innovation variance."""
    if p < 0:
        raise DomainError("order must be nonnegative")
    if cov.max_lag < p:
        raise DomainError(f"need lags 0..{p}, covariance holds 0..{cov.max_lag}")
    if cov.lags[0] <= 0.0:
        raise NumericalError("covariance not positive definite (c(0) <= 0)")
    coeffs, sigma2 = _levinson_all(cov.lags, p)
    return ArModel(coeffs[p], float(sigma2[p]))


def yule_walker_fit(ts: TimeSeries, p: int) -> ArModel:
    """Fit AR(p) by the sample autocovariances of `ts` (assumed mean zero)."""
    if p < 0 or p >= ts.n:
        raise DomainError("order must satisfy 0 <= p < n")
    cov = sample_autocov(ts, p)
    if cov.lags[0] <= 0.0:
        raise NumericalError("series is constant: zero sample variance")
    return levinson_durbin(cov, p)


@dataclass(frozen=True)
class OrderSelection:
    """Result of information-criterion order selection over 1..k_n."""

    chosen_p: int
    k_n: int
    aic_values: np.ndarray
    model: ArModel

    def __post_init__(self):
        vals = np.array(self.aic_values, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "aic_values", vals)
        if not 1 <= self.chosen_p <= self.k_n:
            raise DomainError("selected order must lie in 1..k_n")
        if vals.size != self.k_n:
            raise DomainError("need one criterion value per candidate order")


def aic_select(ts: TimeSeries, max_order: int | None = None) -> OrderSelection:
    """Pick the AR order in 1..k_n minimizing log(residual variance) + 2p/n.

    k_n defaults to floor(n**0.4), clamped to [1, n-2].  The residual variance
    for every candidate p uses the common window t = k_n+1..n so criteria are
    comparable; ties resolve to the smaller order.
    """
    n = ts.n
    if n < 4:
        raise DomainError("order selection needs n >= 4")
    if max_order is None:
        k_n = min(max(int(n**0.4), 1), n - 2)
    else:
        k_n = max_order
        if k_n < 1 or k_n >= n - 1:
            raise DomainError("max_order must satisfy 1 <= max_order <= n-2")
    cov = sample_autocov(ts, k_n)
    if cov.lags[0] <= 0.0:
        raise NumericalError("series is constant: zero sample variance")
    coeffs, sigma2_lev = _levinson_all(cov.lags, k_n)

    x = ts.values
    # column j-1 holds x[t-j] for the residual window rows t = k_n+1..n (1-based)
    lagmat = np.column_stack([x[k_n - j : n - j] for j in range(1, k_n + 1)])
    target = x[k_n:]
    m = target.size
    aic = np.empty(k_n)
    with np.errstate(divide="ignore"):
        for p in range(1, k_n + 1):
            resid = target - lagmat[:, :p] @ coeffs[p]
            s2 = float(resid @ resid) / m
            aic[p - 1] = np.log(s2) + 2.0 * p / n
    chosen = int(np.argmin(aic)) + 1
    model = ArModel(coeffs[chosen], float(sigma2_lev[chosen]))
    return OrderSelection(chosen_p=chosen, k_n=k_n, aic_values=aic, model=model)


def ar_spectral(model: ArModel, grid: FrequencyGrid):
    """Transfer function a(w) and spectral density sigma2/|a(w)|**2 on a grid."""
    aw = model.transfer(grid.frequencies)
    return aw, model.sigma2 / (aw.real**2 + aw.imag**2)


@dataclass(frozen=True)
class ArmaExpansion:
    """Series expansions of an ARMA model truncated at M terms.

    ar_inf[j-1] holds the AR-representation coefficient a_j (j = 1..M),
    ma_inf[j-1] the MA-representation weight b_j, autocov the exact model
    autocovariances c(0..M), and density a vectorized handle for f(w).
    """

    ar_inf: np.ndarray
    ma_inf: np.ndarray
    autocov: CovarianceSequence
    density: object


_EXPAND_CAP = 5000
_MA_TAIL_CAP = 200_000


def _series_quotient(num: np.ndarray, den: np.ndarray, count: int) -> np.ndarray:
    """Coefficients 1..count of the power series num(z)/den(z), both monic."""
    out = np.empty(count + 1)
    out[0] = 1.0
    for k in range(1, count + 1):
        v = num[k] if k < num.size else 0.0
        lo = max(0, k - (den.size - 1))
        if lo < k:
            v -= den[k - lo : 0 : -1] @ out[lo:k]
        out[k] = v
    return out[1:]


def _ma_weights(model: ArmaModel, tol: float = 1e-14) -> np.ndarray:
    """MA-representation weights b_0=1, b_1, ... until the tail drops below tol."""
    phi = np.concatenate(([1.0], -model.ar))
    chi = [1.0]
    k = 0
    window = 1 + model.p + model.q
    while k < _MA_TAIL_CAP:
        k += 1
        v = model.ma[k - 1] if k <= model.q else 0.0
        for i in range(1, min(k, model.p) + 1):
            v += model.ar[i - 1] * chi[k - i]
        chi.append(v)
        if k >= window and max(abs(c) for c in chi[-window:]) < tol:
            break
    else:
        raise NumericalError("MA-representation weights did not decay; model too close to the unit circle")
    return np.asarray(chi)


def arma_expand(model: ArmaModel, M: int | None = None) -> ArmaExpansion:
    """AR and MA series expansions plus autocovariances of an ARMA model.

    M defaults to the smallest length whose trailing AR coefficients all fall
    below 1e-12 (so sparse coefficient patterns are kept intact), capped at
    5000.  The AR expansion requires the MA polynomial to have all roots
    strictly outside the unit circle.
    """
    if model.q:
        inv = np.roots(np.concatenate(([1.0], model.ma)))
        if inv.size and np.max(np.abs(inv)) >= _CAUSAL_RADIUS:
            raise DomainError("AR-series expansion requires a strictly invertible MA polynomial")
    phi = np.concatenate(([1.0], -model.ar))  # coefficients of 1 - sum ar_j z^j
    psi = np.concatenate(([1.0], model.ma))  # coefficients of 1 + sum ma_j z^j

    if M is None:
        pi_full = _series_quotient(phi, psi, _EXPAND_CAP)
        mags = np.abs(pi_full)
        keep = np.nonzero(mags >= 1e-12)[0]
        M = int(keep[-1]) + 1 if keep.size else 1
        ar_inf = -pi_full[:M]
    else:
        if M < 1:
            raise DomainError("expansion length must be >= 1")
        ar_inf = -_series_quotient(phi, psi, M)

    ma_inf = _series_quotient(psi, phi, M)

    chi = _ma_weights(model)
    pad = np.concatenate((chi, np.zeros(M)))
    autocov = model.sigma2 * np.array(
        [chi @ pad[r : r + chi.size] for r in range(M + 1)]
    )
    cov = CovarianceSequence(autocov, estimator="population")
    return ArmaExpansion(ar_inf=ar_inf, ma_inf=ma_inf, autocov=cov, density=model.density)
