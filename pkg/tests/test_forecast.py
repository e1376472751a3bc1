import numpy as np
import pytest

from sdar import (
    AccuracyReport,
    ForecastResult,
    PersistenceKind,
    PersistenceParams,
    SdarParams,
    TimeSeries,
    evaluate_forecasts,
    mc_forecast_sdar,
    relative_efficiency,
    rolling_evaluate,
    simulate,
)
from sdar.forecast import relative_efficiency_csv

from conftest import m1_truth

M1 = PersistenceKind.M1


def tiny_sigma_params(alpha=-1.0):
    # near-deterministic map so MC means can be checked against the
    # noiseless recursion
    return SdarParams(alpha, PersistenceParams(0.4, 0.07, 0.32), 1e-8, M1)


def noiseless_path(params, y0, H):
    from sdar import psi

    out = np.empty(H)
    prev = y0
    for h in range(H):
        prev = params.alpha + float(psi(params.kind, prev, params.pf)) * prev
        out[h] = prev
    return out


class TestMcForecastSdar:
    def test_deterministic_given_seed(self):
        p = m1_truth()
        a = mc_forecast_sdar(p, -3.0, H=5, M=400, seed=1)
        b = mc_forecast_sdar(p, -3.0, H=5, M=400, seed=1)
        np.testing.assert_array_equal(a.means, b.means)
        for q in a.quantiles:
            np.testing.assert_array_equal(a.quantiles[q], b.quantiles[q])

    def test_near_deterministic_matches_recursion(self):
        p = tiny_sigma_params()
        fc = mc_forecast_sdar(p, -2.0, H=8, M=50, seed=2)
        np.testing.assert_allclose(fc.means, noiseless_path(p, -2.0, 8), atol=1e-7)

    def test_h1_mean_and_spread(self):
        p = m1_truth()
        y0 = -3.0
        fc = mc_forecast_sdar(p, y0, H=1, M=40_000, seed=3)
        want = noiseless_path(p, y0, 1)[0]
        assert fc.means[0] == pytest.approx(want, abs=4 * p.sigma / np.sqrt(40_000))
        assert fc.path_std[0] == pytest.approx(p.sigma, rel=0.03)

    def test_accepts_fit_result_wrapper(self):
        class Wrapper:
            theta_hat = m1_truth()

        a = mc_forecast_sdar(Wrapper(), -3.0, H=3, M=100, seed=4)
        b = mc_forecast_sdar(m1_truth(), -3.0, H=3, M=100, seed=4)
        np.testing.assert_array_equal(a.means, b.means)

    def test_quantiles_ordered_and_bracket_median(self):
        fc = mc_forecast_sdar(m1_truth(), -3.0, H=6, M=5000, seed=5)
        q = np.array([fc.quantiles[p] for p in (0.05, 0.25, 0.5, 0.75, 0.95)])
        assert np.all(np.diff(q, axis=0) >= 0)
        np.testing.assert_allclose(fc.quantiles[0.5], fc.means, atol=0.1)

    def test_mc_std_error_scales(self):
        small = mc_forecast_sdar(m1_truth(), -3.0, H=1, M=100, seed=6)
        big = mc_forecast_sdar(m1_truth(), -3.0, H=1, M=10_000, seed=6)
        assert big.mc_std_error()[0] < small.mc_std_error()[0]
        assert big.mc_std_error()[0] == pytest.approx(
            big.path_std[0] / 100.0
        )

    def test_bad_args(self):
        with pytest.raises(ValueError):
            mc_forecast_sdar(m1_truth(), 0.0, H=0, M=10)
        with pytest.raises(ValueError):
            mc_forecast_sdar(m1_truth(), 0.0, H=3, M=0)


class TestEvaluateForecasts:
    def test_hand_metrics(self):
        fc = ForecastResult(
            horizon=2,
            means=np.array([1.0, 2.0]),
            quantiles={},
            M=1,
            seed=0,
        )
        rep = evaluate_forecasts([2.0, 2.5], fc)
        np.testing.assert_allclose(rep.mafe, [1.0, 0.5])
        np.testing.assert_allclose(rep.msfe, [1.0, 0.25])
        np.testing.assert_allclose(rep.mape, [0.5, 0.2])
        assert rep.n_origins == 1

    def test_zero_actual_gives_nan_mape(self):
        fc = ForecastResult(
            horizon=1, means=np.array([1.0]), quantiles={}, M=1, seed=0
        )
        rep = evaluate_forecasts([0.0], fc)
        assert np.isnan(rep.mape[0])
        assert rep.mafe[0] == 1.0

    def test_length_mismatch(self):
        fc = ForecastResult(
            horizon=2, means=np.zeros(2), quantiles={}, M=1, seed=0
        )
        with pytest.raises(ValueError):
            evaluate_forecasts([1.0], fc)

    def test_csv_layout(self):
        rep = AccuracyReport(
            mafe=np.array([1.0, 2.0]),
            msfe=np.array([1.0, 4.0]),
            mape=np.array([0.5, 0.25]),
            n_origins=1,
        )
        lines = rep.to_csv().strip().splitlines()
        assert lines[0] == "h,mafe,msfe,mape"
        assert lines[1] == "1,1,1,0.5"
        assert len(lines) == 3


def constant_forecaster(value):
    def forecaster(history, H, M, seed):
        return ForecastResult(
            horizon=H,
            means=np.full(H, float(value)),
            quantiles={},
            M=M,
            seed=seed,
        )

    return forecaster


class TestRollingEvaluate:
    def test_single_origin_equals_direct_eval(self):
        train = TimeSeries(np.arange(30.0))
        test = TimeSeries(np.array([4.0, 5.0, 6.0]))
        rep = rolling_evaluate(
            constant_forecaster(5.0), train, test, H=3, mode="single-origin"
        )
        np.testing.assert_allclose(rep.mafe, [1.0, 0.0, 1.0])
        assert rep.n_origins == 1

    def test_rolling_origin_count(self):
        # test window of H+1 points gives exactly 2 origins
        train = TimeSeries(np.zeros(20))
        test = TimeSeries(np.arange(1.0, 5.0))  # 4 points
        rep = rolling_evaluate(
            constant_forecaster(0.0), train, test, H=3, mode="rolling-origin"
        )
        assert rep.n_origins == 2
        # origins forecast (1,2,3) and (2,3,4); mean abs err = (1.5, 2.5, 3.5)
        np.testing.assert_allclose(rep.mafe, [1.5, 2.5, 3.5])
        np.testing.assert_allclose(rep.msfe, [2.5, 6.5, 12.5])

    def test_rolling_history_grows_with_origin(self):
        seen = []

        def spy(history, H, M, seed):
            seen.append((history.size, seed))
            return ForecastResult(
                horizon=H, means=np.zeros(H), quantiles={}, M=M, seed=seed
            )

        train = TimeSeries(np.zeros(10))
        test = TimeSeries(np.ones(4))
        rolling_evaluate(spy, train, test, H=2, seed=100, mode="rolling-origin")
        assert seen == [(10, 100), (11, 101), (12, 102)]

    def test_horizon_too_long_rejected(self):
        train = TimeSeries(np.zeros(10))
        test = TimeSeries(np.ones(2))
        with pytest.raises(ValueError):
            rolling_evaluate(
                constant_forecaster(0.0), train, test, H=5, mode="single-origin"
            )

    def test_unknown_mode_rejected(self):
        train = TimeSeries(np.zeros(10))
        test = TimeSeries(np.ones(5))
        with pytest.raises(ValueError, match="mode"):
            rolling_evaluate(
                constant_forecaster(0.0), train, test, H=2, mode="expanding"
            )

    def test_sdar_end_to_end_beats_flat_forecast(self):
        p = m1_truth()
        y = simulate(p, 600, seed=40).values
        train, test = TimeSeries(y[:580]), TimeSeries(y[580:])

        def sdar_forecaster(history, H, M, seed):
            return mc_forecast_sdar(p, history[-1], H, M, seed)

        rep = rolling_evaluate(
            sdar_forecaster, train, test, H=4, M=2000, seed=50,
            mode="rolling-origin",
        )
        flat = rolling_evaluate(
            constant_forecaster(0.0), train, test, H=4, mode="rolling-origin"
        )
        assert np.all(rep.msfe < flat.msfe)


class TestRelativeEfficiency:
    def make(self, scale, n_origins=1):
        return AccuracyReport(
            mafe=np.array([1.0, 2.0]) * scale,
            msfe=np.array([1.0, 4.0]) * scale,
            mape=np.array([0.5, 0.25]) * scale,
            n_origins=n_origins,
        )

    def test_ratio_values(self):
        re = relative_efficiency(self.make(1.0), self.make(2.0))
        np.testing.assert_allclose(re, np.full((3, 2), 0.5))

    def test_below_one_means_first_wins(self):
        re = relative_efficiency(self.make(0.5), self.make(1.0))
        assert np.all(re < 1.0)

    def test_zero_denominator_nan(self):
        re = relative_efficiency(self.make(1.0), self.make(0.0))
        assert np.all(np.isnan(re))

    def test_mismatched_reports_rejected(self):
        a = self.make(1.0)
        short = AccuracyReport(
            mafe=np.ones(1), msfe=np.ones(1), mape=np.ones(1), n_origins=1
        )
        with pytest.raises(ValueError):
            relative_efficiency(a, short)
        with pytest.raises(ValueError):
            relative_efficiency(a, self.make(1.0, n_origins=3))

    def test_csv_layout(self):
        re = relative_efficiency(self.make(1.0), self.make(2.0))
        lines = relative_efficiency_csv(re).strip().splitlines()
        assert lines[0] == "h,mafe,msfe,mape"
        assert lines[1] == "1,0.5,0.5,0.5"
        assert len(lines) == 3
