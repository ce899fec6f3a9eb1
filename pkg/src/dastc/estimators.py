"""Estimator-style wrappers: ``fit`` fixes a scenario, ``predict`` maps SNR (dB) to sum rate.

They plug into scikit-learn tooling (``get_params``, ``clone``) but need no
training data: ``X`` is a column (or 1-D array) of SNR values in dB and
``y`` is ignored.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .analytic import rsum_closed, rsum_quadrature
from .channel import ScenarioConfig, db_to_linear
from .exceptions import ParameterError
from .protocol import ONE_WAY_PREFACTOR, TWO_WAY_PREFACTOR, ensemble_estimate, sample_ensemble


def _snr_column(X):
    """Validate SNR input and return it as a flat float array."""
    X = np.asarray(X, dtype=float)
    if X.ndim <= 1:
        X = X.reshape(-1, 1)
    X = check_array(X, dtype=float, ensure_all_finite=True)
    if X.shape[1] != 1:
        raise ValueError(f"expected a single SNR column, got {X.shape[1]} columns")
    return X[:, 0]


def _config(est, **extra):
    return ScenarioConfig(est.omega0, est.omega1, est.omega2, snr_grid_db=(), **extra)


class AnalyticSumRate(BaseEstimator):
    """High-SNR average sum rate from the closed form or quadrature.

    Parameters
    ----------
    omega0, omega1, omega2 : float
        Mean powers of the direct and the two relay links.
    method : {"closed", "quadrature"}
        ``"closed"`` falls back to quadrature per component when outside its
        region; the tags are kept in ``breakdowns_`` after ``predict``.
    """

    def __init__(self, omega0=1.0, omega1=1.0, omega2=1.0, method="closed"):
        self.omega0 = omega0
        self.omega1 = omega1
        self.omega2 = omega2
        self.method = method

    def fit(self, X=None, y=None):
        if self.method not in ("closed", "quadrature"):
            raise ParameterError(f"method must be 'closed' or 'quadrature', got {self.method!r}")
        self.config_ = _config(self)
        return self

    def predict(self, X):
        check_is_fitted(self, "config_")
        func = rsum_closed if self.method == "closed" else rsum_quadrature
        self.breakdowns_ = [func(self.config_, float(r)) for r in db_to_linear(_snr_column(X))]
        return np.array([b.rsum for b in self.breakdowns_])


class MonteCarloSumRate(BaseEstimator):
    """Monte-Carlo average sum rate over a fixed seeded channel ensemble.

    Parameters
    ----------
    omega0, omega1, omega2 : float
    trials : int
    seed : int
    mode : {"exact", "high-snr"}
        Relay gain rule.
    baseline : bool
        If True, report the one-way DASTC baseline (prefactor 1/2) instead.
    """

    def __init__(self, omega0=1.0, omega1=1.0, omega2=1.0, trials=100_000, seed=0,
                 mode="exact", baseline=False):
        self.omega0 = omega0
        self.omega1 = omega1
        self.omega2 = omega2
        self.trials = trials
        self.seed = seed
        self.mode = mode
        self.baseline = baseline

    def fit(self, X=None, y=None):
        if self.mode not in ("exact", "high-snr"):
            raise ParameterError(f"mode must be 'exact' or 'high-snr', got {self.mode!r}")
        self.config_ = _config(self, trials=self.trials, seed=self.seed)
        self.ensemble_ = sample_ensemble(self.config_)
        return self

    def predict(self, X):
        check_is_fitted(self, "ensemble_")
        pref = ONE_WAY_PREFACTOR if self.baseline else TWO_WAY_PREFACTOR
        self.estimates_ = [ensemble_estimate(self.ensemble_, float(r), self.mode, pref)
                           for r in db_to_linear(_snr_column(X))]
        return np.array([e.mean for e in self.estimates_])
