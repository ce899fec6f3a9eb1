"""Two-way amplify-and-forward relaying with a distributed Alamouti code.

Monte-Carlo simulation of the three-phase protocol, the densities of the
composite SNR variables, and the closed-form high-SNR average sum rate
(Meijer-G, Fox-H and bivariate Fox-H functions) with quadrature oracles.
"""

from .analytic import (
    SumRateBreakdown,
    i1_closed,
    i1_quadrature,
    i2_closed,
    i2_quadrature,
    i3_closed,
    i3_quadrature,
    rsum_closed,
    rsum_quadrature,
)
from .channel import (
    ChannelRealization,
    ScenarioConfig,
    db_to_linear,
    pathloss_omega,
    sample_block,
    sample_realization,
    trial_stream,
)
from .distributions import LemmaParams, cdf_T, cdf_W, cdf_Z, mgf_inverse_gamma, pdf_T, pdf_W, pdf_Z
from .estimators import AnalyticSumRate, MonteCarloSumRate
from .exceptions import (
    ConvergenceError,
    DegenerateChannelError,
    DomainError,
    ParameterError,
    RegionError,
)
from .experiment import ExperimentResult, ExperimentRow, emit_csv, emit_plotdata, run_experiment
from .protocol import (
    SumRateEstimate,
    alamouti_encode,
    cancel_self_interference,
    instantaneous_sumrate_det,
    instantaneous_sumrate_scalar,
    monte_carlo_sumrate,
    oneway_baseline_sumrate,
    relay_gain,
    run_three_phase,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticSumRate", "ChannelRealization", "ConvergenceError", "DegenerateChannelError",
    "DomainError", "ExperimentResult", "ExperimentRow", "LemmaParams", "MonteCarloSumRate",
    "ParameterError", "RegionError", "ScenarioConfig", "SumRateBreakdown", "SumRateEstimate",
    "alamouti_encode", "cancel_self_interference", "cdf_T", "cdf_W", "cdf_Z", "db_to_linear",
    "emit_csv", "emit_plotdata", "i1_closed", "i1_quadrature", "i2_closed", "i2_quadrature",
    "i3_closed", "i3_quadrature", "instantaneous_sumrate_det", "instantaneous_sumrate_scalar",
    "mgf_inverse_gamma", "monte_carlo_sumrate", "oneway_baseline_sumrate", "pathloss_omega",
    "pdf_T", "pdf_W", "pdf_Z", "relay_gain", "rsum_closed", "rsum_quadrature", "run_experiment",
    "run_three_phase", "sample_block", "sample_realization", "trial_stream",
]
