"""Monte-Carlo multi-step SDAR forecasting and accuracy comparison.

Forecasts iterate the fitted one-step map forward with fresh Gaussian
innovations along each of M simulated paths; per-horizon point
forecasts are the path means and intervals come from the empirical
path distribution. Accuracy is scored per horizon with MAFE, MSFE and
MAPE, and two models are compared through relative-efficiency ratios
(SDAR over baseline; values below one favor SDAR).
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .model import SdarParams
from .persistence import psi
from .series import TimeSeries

METRIC_NAMES = ("mafe", "msfe", "mape")


@dataclass(frozen=True)
class ForecastResult:
    """Per-horizon MC forecast means and empirical quantiles."""

    horizon: int
    means: np.ndarray
    quantiles: dict[float, np.ndarray]
    M: int
    seed: int
    path_std: np.ndarray | None = None

    def mc_std_error(self) -> np.ndarray:
        """Monte-Carlo standard error of each per-horizon mean."""
        if self.path_std is None:
            raise ValueError("path dispersion not recorded for this forecast")
        return self.path_std / np.sqrt(self.M)


@dataclass(frozen=True)
class AccuracyReport:
    """MAFE/MSFE/MAPE per horizon; entries are NaN where undefined."""

    mafe: np.ndarray
    msfe: np.ndarray
    mape: np.ndarray
    n_origins: int

    @property
    def horizon(self) -> int:
        return self.mafe.size

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("h,mafe,msfe,mape\n")
        for h in range(self.horizon):
            buf.write(
                f"{h + 1},{self.mafe[h]:.10g},{self.msfe[h]:.10g},"
                f"{self.mape[h]:.10g}\n"
            )
        return buf.getvalue()


def _empirical_quantiles(paths: np.ndarray, probs) -> dict[float, np.ndarray]:
    return {float(p): np.quantile(paths, p, axis=0) for p in sorted(probs)}


def mc_forecast_sdar(
    fit,
    y_n: float,
    H: int,
    M: int = 10_000,
    seed: int = 0,
    quantile_probs=(0.05, 0.25, 0.5, 0.75, 0.95),
) -> ForecastResult:
    """Monte-Carlo forecast of an SDAR model from last observation y_n.

    ``fit`` may be a `FitResult` or the `SdarParams` directly. All M
    innovation draws come from one seeded stream generated up front, so
    the result is deterministic given (fit, y_n, H, M, seed) and
    independent of path evaluation order.
    """
    params: SdarParams = getattr(fit, "theta_hat", fit)
    if H < 1 or M < 1:
        raise ValueError("H and M must be >= 1")
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal((M, H)) * params.sigma
    paths = np.empty((M, H))
    state = np.full(M, float(y_n))
    for h in range(H):
        ps = np.asarray(psi(params.kind, state, params.pf))
        state = params.alpha + ps * state + eps[:, h]
        paths[:, h] = state
    return ForecastResult(
        horizon=H,
        means=paths.mean(axis=0),
        quantiles=_empirical_quantiles(paths, quantile_probs),
        M=M,
        seed=seed,
        path_std=paths.std(axis=0, ddof=1) if M > 1 else np.zeros(H),
    )


def evaluate_forecasts(actuals, forecast: ForecastResult) -> AccuracyReport:
    """Score a single-origin forecast against realized values.

    MAPE entries at zero actuals are NaN; the other metrics are still
    computed.
    """
    actuals = np.asarray(actuals, dtype=float)
    if actuals.size != forecast.horizon:
        raise ValueError(
            f"need {forecast.horizon} actuals, got {actuals.size}"
        )
    err = np.abs(actuals - forecast.means)
    with np.errstate(divide="ignore", invalid="ignore"):
        mape = np.where(actuals != 0.0, err / np.abs(actuals), np.nan)
    return AccuracyReport(mafe=err, msfe=err**2, mape=mape, n_origins=1)


def rolling_evaluate(
    forecaster,
    series_train: TimeSeries,
    series_test: TimeSeries,
    H: int,
    M: int = 10_000,
    seed: int = 0,
    mode: str = "single-origin",
) -> AccuracyReport:
    """Out-of-sample evaluation of a forecaster over the test window.

    Parameters
    ----------
    forecaster : callable
        ``forecaster(history, H, M, seed) -> ForecastResult`` where
        ``history`` is the full conditioning array up to the forecast
        origin. Parameters are not re-estimated per origin.
    mode : {"single-origin", "rolling-origin"}
        Single-origin issues one forecast from the end of the training
        window. Rolling issues a full H-step forecast from every origin
        whose targets all lie inside the test window (origin o uses the
        realized test values up to o), giving
        ``len(test) - H + 1`` origins at every horizon.
    """
    train = series_train.values
    test = series_test.values
    if mode == "single-origin":
        if test.size < H:
            raise ValueError(f"test window shorter than horizon {H}")
        fc = forecaster(train, H, M, seed)
        return evaluate_forecasts(test[:H], fc)
    if mode != "rolling-origin":
        raise ValueError(f"unknown mode {mode!r}")
    n_origins = test.size - H + 1
    if n_origins < 1:
        raise ValueError(f"test window shorter than horizon {H}")
    abs_err = np.zeros(H)
    sq_err = np.zeros(H)
    pct_err = np.zeros(H)
    pct_count = np.zeros(H)
    for o in range(n_origins):
        history = np.concatenate([train, test[:o]])
        fc = forecaster(history, H, M, seed + o)
        actual = test[o : o + H]
        err = np.abs(actual - fc.means)
        abs_err += err
        sq_err += err**2
        nz = actual != 0.0
        pct_err[nz] += err[nz] / np.abs(actual[nz])
        pct_count += nz
    with np.errstate(divide="ignore", invalid="ignore"):
        mape = np.where(pct_count > 0, pct_err / pct_count, np.nan)
    return AccuracyReport(
        mafe=abs_err / n_origins,
        msfe=sq_err / n_origins,
        mape=mape,
        n_origins=n_origins,
    )


def relative_efficiency(a: AccuracyReport, b: AccuracyReport) -> np.ndarray:
    """Elementwise accuracy ratios a/b, rows (mafe, msfe, mape).

    A value below 1 means model `a` was the more accurate at that
    horizon. Cells with a zero denominator are NaN.
    """
    if a.horizon != b.horizon:
        raise ValueError("reports cover different horizons")
    if a.n_origins != b.n_origins:
        raise ValueError("reports aggregate different origin counts")
    out = np.empty((3, a.horizon))
    with np.errstate(divide="ignore", invalid="ignore"):
        for i, name in enumerate(METRIC_NAMES):
            num = getattr(a, name)
            den = getattr(b, name)
            out[i] = np.where(den != 0.0, num / den, np.nan)
    return out


def relative_efficiency_csv(re: np.ndarray) -> str:
    """Table-style CSV of a relative-efficiency array (rows = horizons)."""
    buf = io.StringIO()
    buf.write("h,mafe,msfe,mape\n")
    for h in range(re.shape[1]):
        buf.write(
            f"{h + 1},{re[0, h]:.10g},{re[1, h]:.10g},{re[2, h]:.10g}\n"
        )
    return buf.getvalue()
