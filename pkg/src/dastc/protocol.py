"""Three-phase two-way AF relaying with a distributed Alamouti code.

Power is normalized so that every symbol has unit power (Ps = 1) and the
noise variance is ``N0 = 1 / rho``; ``rho`` is the only SNR knob.

Phase 1: both sources send the first row of their codeword to the relay.
Phase 2: the relay forwards ``G * yR`` to S2 while S1 sends its second row.
Phase 3: the relay forwards ``G * yR`` to S1 while S2 sends its second row.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, sample_block
from .exceptions import DegenerateChannelError, DomainError

TWO_WAY_PREFACTOR = 2.0 / 3.0
ONE_WAY_PREFACTOR = 0.5
BLOCK_TRIALS = 1 << 16
_MODES = ("exact", "high-snr")


def alamouti_encode(s1, s2):
    """2x2 Alamouti codeword ``[[s1, s2], [-conj(s2), conj(s1)]]``."""
    s1, s2 = complex(s1), complex(s2)
    return np.array([[s1, s2], [-s2.conjugate(), s1.conjugate()]])


def _check_mode(mode):
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")


def relay_gain(h1, h2, rho, mode="exact"):
    """Amplification gain G of the relay.

    ``exact``: ``G**2 = 1 / (|h1|**2 + |h2|**2 + 1/rho)``, which makes the
    relay spend the same average power as a source. ``high-snr`` drops the
    ``1/rho`` term.
    """
    _check_mode(mode)
    if not rho > 0:
        raise DomainError("rho must be positive")
    total = np.abs(h1) ** 2 + np.abs(h2) ** 2
    if mode == "exact":
        return 1.0 / np.sqrt(total + 1.0 / rho)
    if np.any(total == 0):
        raise DegenerateChannelError("both relay links are zero")
    return 1.0 / np.sqrt(total)


@dataclass
class PhaseSignals:
    """Received blocks of one codeword exchange.

    ``yR`` is the relay's phase-1 reception, ``y2`` and ``y1`` what S2 and S1
    hear in phases 2 and 3. ``S`` and ``X`` are the codewords of S1 and S2
    (each source knows its own), ``gain`` the relay gain that was applied.
    """

    yR: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    nR: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    S: np.ndarray
    X: np.ndarray
    gain: float


def _cn(rng, var, size):
    return math.sqrt(var / 2) * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def run_three_phase(realization, symbols, rho, rng=None, noise=True, mode="exact"):
    """Simulate the three transmission phases for one codeword pair.

    Parameters
    ----------
    realization : ChannelRealization
        A single (scalar) realization.
    symbols : tuple
        ``(s1, s2, x1, x2)``; S1 encodes ``(s1, s2)``, S2 encodes ``(x1, x2)``.
    rho : float
        Average SNR ``Ps / N0``.
    rng : numpy.random.Generator, optional
        Noise source; required when ``noise`` is True.
    noise : bool
        Set False to zero every noise vector (protocol-identity checks).
    mode : {"exact", "high-snr"}
        Relay gain rule.
    """
    s1, s2, x1, x2 = symbols
    S = alamouti_encode(s1, s2)
    X = alamouti_encode(x1, x2)
    h0, h1, h2 = realization.gains
    G = float(relay_gain(h1, h2, rho, mode))
    n0 = 1.0 / rho
    if noise:
        if rng is None:
            raise ValueError("rng is required when noise is enabled")
        nR, n2, n1 = (_cn(rng, n0, 2) for _ in range(3))
    else:
        nR = n1 = n2 = np.zeros(2, dtype=complex)
    yR = h1 * S[0] + h2 * X[0] + nR
    y2 = h2 * G * yR + h0 * S[1] + n2
    y1 = h1 * G * yR + h0 * X[1] + n1
    return PhaseSignals(yR, y1, y2, nR, n1, n2, S, X, G)


def effective_channel(realization, gain):
    """Post-cancellation channel row ``[G h1 h2, h0]``."""
    h0, h1, h2 = realization.gains
    return np.array([gain * h1 * h2, h0])


def cancel_self_interference(signals, realization, gain=None):
    """Remove each source's own forwarded first row (perfect CSI).

    Returns ``(y1_eff, y2_eff)`` with ``y1_eff = h_new X + z1`` and
    ``y2_eff = h_new S + z2``, where ``z_i = G h_i nR + n_i``.
    """
    G = signals.gain if gain is None else gain
    _, h1, h2 = realization.gains
    y1_eff = signals.y1 - G * h1 * h1 * signals.S[0]
    y2_eff = signals.y2 - G * h2 * h2 * signals.X[0]
    return y1_eff, y2_eff


def _directional_det(realization, rho, mode):
    # log2 det(I + h^H R h / (N0 (1 + G^2 |h_k|^2))) with R = 2 Ps I.
    h0, h1, h2 = (np.asarray(h) for h in realization.gains)
    G = relay_gain(h1, h2, rho, mode)
    hnew = np.stack([G * h1 * h2, h0], axis=-1)[..., None, :]
    outer = np.conj(np.swapaxes(hnew, -1, -2)) @ hnew
    eye = np.eye(2)
    rates = []
    for hk in (h2, h1):
        scale = rho / (1.0 + G ** 2 * np.abs(hk) ** 2)
        mat = eye + 2.0 * scale[..., None, None] * outer
        rates.append(np.log2(np.linalg.det(mat).real))
    return rates[0], rates[1]


def directional_rates(realization, rho, mode="exact"):
    """Rates (bits/s/Hz, no time-sharing prefactor) of S1->S2 and S2->S1."""
    _check_mode(mode)
    return _directional_det(realization, rho, mode)


def instantaneous_sumrate_det(realization, rho, mode="exact"):
    """Two-way sum rate from the log-det form, in bits/s/Hz."""
    c12, c21 = directional_rates(realization, rho, mode)
    return TWO_WAY_PREFACTOR * (c12 + c21)


def instantaneous_sumrate_scalar(realization, rho):
    """Two-way sum rate from squared channel magnitudes, high-SNR relay gain."""
    if not rho > 0:
        raise DomainError("rho must be positive")
    a0, a1, a2 = realization.powers
    num = a1 * a2 + a0 * (a1 + a2)
    first = 1.0 + 2.0 * rho * num / (a1 + 2.0 * a2)
    second = 1.0 + 2.0 * rho * num / (a2 + 2.0 * a1)
    return TWO_WAY_PREFACTOR * (np.log2(first) + np.log2(second))


def high_snr_split(realization, rho):
    """The three log terms whose expectations are I1, I2 and I3 (in nats).

    ``(2 / (3 ln 2)) * (i1 + i2 + 2 i3)`` approximates the scalar sum rate
    as ``rho`` grows.
    """
    if not rho > 0:
        raise DomainError("rho must be positive")
    g0, g1, g2 = (2.0 * rho * p for p in realization.powers)
    if np.any(g1 == 0) or np.any(g2 == 0):
        raise DegenerateChannelError("relay-link SNR is zero")
    i1 = np.log(g1 * g2 / (g1 + 2.0 * g2))
    i2 = np.log(g1 * g2 / (g2 + 2.0 * g1))
    i3 = np.log1p(g0 * (g1 + g2) / (g1 * g2))
    return i1, i2, i3


def compose_split(i1, i2, i3):
    """Sum rate in bits/s/Hz from the three log terms."""
    return 2.0 / (3.0 * math.log(2.0)) * (i1 + i2 + 2.0 * i3)


@dataclass(frozen=True)
class SumRateEstimate:
    """Monte-Carlo mean with standard error, in bits/s/Hz."""

    mean: float
    stderr: float
    trials: int


def summarize(samples):
    """Mean and standard error with exactly rounded sums.

    ``math.fsum`` makes the result independent of how the samples were
    chunked or which worker produced them.
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    mean = math.fsum(samples) / n
    if n > 1:
        var = math.fsum((samples - mean) ** 2) / (n - 1)
        stderr = math.sqrt(var / n)
    else:
        stderr = math.nan
    return SumRateEstimate(mean, stderr, n)


def sample_ensemble(config, n_jobs=1, block=BLOCK_TRIALS):
    """All ``config.trials`` realizations, assembled in trial order."""
    starts = range(0, config.trials, block)
    counts = [min(block, config.trials - s) for s in starts]
    if n_jobs == 1 or len(counts) == 1:
        parts = [sample_block(config, s, c) for s, c in zip(starts, counts)]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(lambda sc: sample_block(config, *sc), zip(starts, counts)))
    cat = [np.concatenate([getattr(p, f) for p in parts]) for f in ("h0", "h1", "h2")]
    return ChannelRealization(*cat, *config.omegas)


def ensemble_estimate(ensemble, rho, mode="exact", prefactor=TWO_WAY_PREFACTOR):
    c12, c21 = directional_rates(ensemble, rho, mode)
    return summarize(prefactor * (c12 + c21))


def monte_carlo_sumrate(config, rho, mode="exact", n_jobs=1):
    """Average two-way sum rate over ``config.trials`` seeded realizations."""
    return ensemble_estimate(sample_ensemble(config, n_jobs), rho, mode)


def oneway_baseline_sumrate(config, rho, mode="exact", n_jobs=1):
    """Conventional one-way DASTC: same effective channel, prefactor 1/2.

    Exchanging two symbols each way takes four slots, two per direction.
    """
    return ensemble_estimate(sample_ensemble(config, n_jobs), rho, mode, ONE_WAY_PREFACTOR)
