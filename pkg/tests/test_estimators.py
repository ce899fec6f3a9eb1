import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from dastc.analytic import rsum_closed, rsum_quadrature
from dastc.channel import ScenarioConfig
from dastc.estimators import AnalyticSumRate, MonteCarloSumRate
from dastc.exceptions import ParameterError
from dastc.protocol import monte_carlo_sumrate


def test_params_round_trip():
    est = AnalyticSumRate(omega1=16.0, omega2=16.0, method="quadrature")
    assert est.get_params() == {"omega0": 1.0, "omega1": 16.0, "omega2": 16.0, "method": "quadrature"}
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est
    est.set_params(method="closed")
    assert est.method == "closed"


def test_analytic_predict_matches_functions():
    snr = np.array([10.0, 20.0])
    closed = AnalyticSumRate().fit().predict(snr)
    quad = AnalyticSumRate(method="quadrature").fit().predict(snr.reshape(-1, 1))
    cfg = ScenarioConfig.symmetric()
    assert closed[1] == rsum_closed(cfg, 100.0).rsum
    assert quad[0] == rsum_quadrature(cfg, 10.0).rsum


def test_analytic_validation():
    with pytest.raises(ParameterError):
        AnalyticSumRate(method="magic").fit()
    with pytest.raises(ParameterError):
        AnalyticSumRate(omega0=-1).fit()
    with pytest.raises(NotFittedError):
        AnalyticSumRate().predict([10.0])
    est = AnalyticSumRate().fit()
    with pytest.raises(ValueError):
        est.predict([[1.0, 2.0]])
    with pytest.raises(ValueError):
        est.predict([np.nan])


def test_monte_carlo_estimator_matches_function():
    est = MonteCarloSumRate(trials=3000, seed=9).fit()
    pred = est.predict([0.0, 10.0])
    cfg = ScenarioConfig(trials=3000, seed=9)
    assert pred[1] == monte_carlo_sumrate(cfg, 10.0).mean
    assert len(est.estimates_) == 2


def test_monte_carlo_baseline_and_mode():
    two = MonteCarloSumRate(trials=2000).fit().predict([30.0])[0]
    one = MonteCarloSumRate(trials=2000, baseline=True).fit().predict([30.0])[0]
    assert one == pytest.approx(0.75 * two, rel=1e-12)
    with pytest.raises(ParameterError):
        MonteCarloSumRate(mode="other").fit()
