"""State-dependent first-order autoregressive (SDAR) models.

Simulation, quasi-maximum-likelihood estimation with analytic
derivatives and sandwich standard errors, stationarity/ergodicity
checks, Monte-Carlo multi-step forecasting, a two-regime SETAR
baseline, and a forecast-accuracy comparison harness.
"""

from .estimation import (
    FitResult,
    ParamBox,
    SandwichMatrices,
    aic,
    fit,
    sandwich_cov,
    select_model,
)
from .forecast import (
    AccuracyReport,
    ForecastResult,
    evaluate_forecasts,
    mc_forecast_sdar,
    relative_efficiency,
    rolling_evaluate,
)
from .model import (
    LikelihoodEval,
    SdarParams,
    loglik,
    loglik_grad,
    loglik_hess,
    persistence_series,
    residuals,
    simulate,
)
from .persistence import (
    AssumptionReport,
    PersistenceKind,
    PersistenceParams,
    a1_bound_closed_form,
    a1_bound_numeric,
    check_assumptions,
    psi,
    psi_dy,
    psi_grad,
    psi_hess,
)
from .series import (
    IngestError,
    ReturnSeries,
    TimeSeries,
    load_returns,
    log_transform,
    realized_volatility,
    split,
)
from .setar import SetarFit, fit_setar, mc_forecast_setar, select_setar

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "AssumptionReport",
    "FitResult",
    "ForecastResult",
    "IngestError",
    "LikelihoodEval",
    "ParamBox",
    "PersistenceKind",
    "PersistenceParams",
    "ReturnSeries",
    "SandwichMatrices",
    "SdarParams",
    "SetarFit",
    "TimeSeries",
    "a1_bound_closed_form",
    "a1_bound_numeric",
    "aic",
    "check_assumptions",
    "evaluate_forecasts",
    "fit",
    "fit_setar",
    "load_returns",
    "log_transform",
    "loglik",
    "loglik_grad",
    "loglik_hess",
    "mc_forecast_sdar",
    "mc_forecast_setar",
    "persistence_series",
    "psi",
    "psi_dy",
    "psi_grad",
    "psi_hess",
    "realized_volatility",
    "relative_efficiency",
    "residuals",
    "sandwich_cov",
    "select_model",
    "select_setar",
    "simulate",
    "split",
]
