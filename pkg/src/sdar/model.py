"""SDAR model mechanics: simulation, residuals, likelihood and derivatives.

The model is Y_t = alpha + psi(Y_{t-1}) * Y_{t-1} + xi_t with Gaussian
innovations xi_t ~ N(0, sigma^2). The full parameter vector is ordered
theta = (alpha, gamma0, gamma1, r, sigma) everywhere; `SdarParams`
round-trips to and from that flat layout.

The quasi-log-likelihood is the exact Gaussian conditional likelihood,
including the -0.5*ln(2*pi) constant so that AIC values are comparable
across model families. Analytic gradient and Hessian come from the
score / Hessian entries of the Gaussian conditional density combined
with the persistence-function derivative stacks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .persistence import (
    PersistenceKind,
    PersistenceParams,
    _grad_components,
    psi,
    psi_hess,
)
from .series import TimeSeries

PARAM_NAMES = ("alpha", "gamma0", "gamma1", "r", "sigma")


@dataclass(frozen=True)
class SdarParams:
    """Full SDAR parameter vector theta = (alpha, gamma0, gamma1, r, sigma)."""

    alpha: float
    pf: PersistenceParams
    sigma: float
    kind: PersistenceKind

    def __post_init__(self):
        if not (self.sigma > 0.0 and np.isfinite(self.sigma)):
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        self.pf.validate(self.kind)

    def to_array(self) -> np.ndarray:
        return np.array(
            [self.alpha, self.pf.gamma0, self.pf.gamma1, self.pf.r, self.sigma]
        )

    @classmethod
    def from_array(cls, theta, kind: PersistenceKind) -> "SdarParams":
        alpha, g0, g1, r, sigma = (float(v) for v in theta)
        return cls(alpha, PersistenceParams(g0, g1, r), sigma, kind)


@dataclass(frozen=True)
class LikelihoodEval:
    """Total quasi-log-likelihood with its gradient and Hessian."""

    loglik: float
    grad: np.ndarray
    hess: np.ndarray
    n_used: int


def simulate(
    params: SdarParams, n: int, seed: int, y0: float = 0.0
) -> TimeSeries:
    """Simulate an SDAR path of length n from a seeded PCG64 stream.

    Deterministic given (seed, params, n, y0); the default origin
    y0 = 0 matches the model's initial condition.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    xi = rng.standard_normal(n) * params.sigma
    y = np.empty(n)
    prev = float(y0)
    kind, pf, alpha = params.kind, params.pf, params.alpha
    g0, g1, r = pf.gamma0, pf.gamma1, pf.r
    m1 = kind is PersistenceKind.M1
    for t in range(n):
        w = abs(prev) ** (2.0 * r)
        u = g0 + g1 * w
        ps = math.exp(-u) if m1 else 1.0 / u
        prev = alpha + ps * prev + xi[t]
        y[t] = prev
    return TimeSeries(y)


def _lag_and_target(series: TimeSeries, condition_on_first: bool):
    y = series.values
    if y.size < 2:
        raise ValueError("series must have length >= 2")
    if condition_on_first:
        return y[:-1], y[1:]
    return np.concatenate([[0.0], y[:-1]]), y


def residuals(
    params: SdarParams, series: TimeSeries, condition_on_first: bool = True
) -> np.ndarray:
    """Innovation estimates xi_t = Y_t - alpha - psi(Y_{t-1}) * Y_{t-1}.

    With ``condition_on_first`` the first observation is treated as
    given (length n-1 output); otherwise the model's Y_0 = 0 convention
    is used and the output has length n.
    """
    lag, target = _lag_and_target(series, condition_on_first)
    ps = np.asarray(psi(params.kind, lag, params.pf))
    return target - params.alpha - ps * lag


def loglik(
    params: SdarParams, series: TimeSeries, condition_on_first: bool = True
) -> float:
    """Total Gaussian quasi-log-likelihood (constant included)."""
    xi = residuals(params, series, condition_on_first)
    n = xi.size
    s = params.sigma
    return float(
        -0.5 * n * math.log(2.0 * math.pi)
        - n * math.log(s)
        - np.dot(xi, xi) / (2.0 * s * s)
    )


def loglik_grad(
    params: SdarParams, series: TimeSeries, condition_on_first: bool = True
) -> np.ndarray:
    """Analytic gradient of the total log-likelihood in theta order."""
    lag, target = _lag_and_target(series, condition_on_first)
    ps = np.asarray(psi(params.kind, lag, params.pf))
    xi = target - params.alpha - ps * lag
    s = params.sigma
    s2 = s * s
    pg = _grad_components(params.kind, lag, params.pf)  # (3, n)
    g = np.empty(5)
    g[0] = np.sum(xi) / s2
    g[1:4] = pg @ (xi * lag) / s2
    g[4] = np.sum(xi * xi - s2) / (s2 * s)
    return g


def loglik_hess(
    params: SdarParams, series: TimeSeries, condition_on_first: bool = True
) -> np.ndarray:
    """Analytic 5x5 Hessian of the total log-likelihood in theta order."""
    per_t = _per_obs_hess(params, series, condition_on_first)
    return per_t.sum(axis=2)


def _per_obs_score(params, series, condition_on_first):
    """Per-observation score vectors, shape (5, n)."""
    lag, target = _lag_and_target(series, condition_on_first)
    ps = np.asarray(psi(params.kind, lag, params.pf))
    xi = target - params.alpha - ps * lag
    s = params.sigma
    s2 = s * s
    pg = _grad_components(params.kind, lag, params.pf)
    out = np.empty((5, lag.size))
    out[0] = xi / s2
    out[1:4] = pg * (xi * lag) / s2
    out[4] = (xi * xi - s2) / (s2 * s)
    return out


def _per_obs_hess(params, series, condition_on_first):
    """Per-observation Hessian contributions, shape (5, 5, n)."""
    lag, target = _lag_and_target(series, condition_on_first)
    ps = np.asarray(psi(params.kind, lag, params.pf))
    xi = target - params.alpha - ps * lag
    s = params.sigma
    s2, s3, s4 = s * s, s**3, s**4
    pg = _grad_components(params.kind, lag, params.pf)        # (3, n)
    ph = psi_hess(params.kind, lag, params.pf)                # (3, 3, n)
    n = lag.size
    h = np.empty((5, 5, n))
    h[0, 0] = -1.0 / s2
    h[0, 1:4] = h[1:4, 0] = -lag * pg / s2
    h[0, 4] = h[4, 0] = -2.0 * xi / s3
    h[1:4, 1:4] = (
        xi * lag * ph - lag**2 * pg[:, None, :] * pg[None, :, :]
    ) / s2
    h[1:4, 4] = h[4, 1:4] = -2.0 * xi * lag * pg / s3
    h[4, 4] = 1.0 / s2 - 3.0 * xi * xi / s4
    return h


def evaluate(
    params: SdarParams, series: TimeSeries, condition_on_first: bool = True
) -> LikelihoodEval:
    """Log-likelihood, gradient and Hessian in one call."""
    xi = residuals(params, series, condition_on_first)
    return LikelihoodEval(
        loglik=loglik(params, series, condition_on_first),
        grad=loglik_grad(params, series, condition_on_first),
        hess=loglik_hess(params, series, condition_on_first),
        n_used=xi.size,
    )


def persistence_series(params: SdarParams, series: TimeSeries) -> np.ndarray:
    """Fitted persistence values psi(y_{t-1}) for t = 2..n (length n-1)."""
    if len(series) < 2:
        raise ValueError("series must have length >= 2")
    return np.asarray(psi(params.kind, series.values[:-1], params.pf))
