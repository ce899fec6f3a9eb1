"""Rayleigh channel realizations, path loss and reproducible trial streams.

Every trial owns a fixed window of a counter-based Philox stream keyed by the
experiment seed: trial ``t`` reads the 8 doubles starting at counter ``2 t``
(Philox emits four 64-bit words per counter step). A trial's channel draw is
therefore a pure function of ``(seed, t)`` whether it is produced alone with
:func:`sample_realization` or inside a block by :func:`sample_block`.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

from .exceptions import DomainError, ParameterError

WORDS_PER_TRIAL = 8
_COUNTERS_PER_TRIAL = WORDS_PER_TRIAL // 4


def pathloss_omega(distance, exponent=4.0):
    """Mean channel power ``distance ** -exponent`` (unit distance gives 1).

    >>> pathloss_omega(0.5, 4.0)
    16.0
    """
    if not distance > 0:
        raise DomainError("distance must be positive")
    if not exponent > 0:
        raise DomainError("path-loss exponent must be positive")
    return float(distance) ** (-float(exponent))


def _positive(name, value):
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise ParameterError(f"{name} must be a finite positive number, got {value}")
    return value


@dataclass(frozen=True)
class ScenarioConfig:
    """Full input of one experiment.

    Parameters
    ----------
    omega0, omega1, omega2 : float
        Mean powers of the S1-S2, S1-R and S2-R links.
    snr_grid_db : sequence of float
        Strictly increasing average SNR grid, in dB.
    trials : int
        Monte-Carlo trials per grid point.
    seed : int
        Unsigned 64-bit experiment seed.
    """

    omega0: float = 1.0
    omega1: float = 1.0
    omega2: float = 1.0
    snr_grid_db: tuple = field(default_factory=lambda: tuple(range(0, 31, 2)))
    trials: int = 100_000
    seed: int = 0

    def __post_init__(self):
        for name in ("omega0", "omega1", "omega2"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))
        grid = tuple(float(x) for x in self.snr_grid_db)
        if any(not math.isfinite(x) for x in grid):
            raise ParameterError("snr_grid_db must be finite")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ParameterError("snr_grid_db must be strictly increasing")
        object.__setattr__(self, "snr_grid_db", grid)
        if int(self.trials) != self.trials or self.trials < 1:
            raise ParameterError("trials must be a positive integer")
        object.__setattr__(self, "trials", int(self.trials))
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise ParameterError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def omegas(self):
        return (self.omega0, self.omega1, self.omega2)

    @classmethod
    def symmetric(cls, **kwargs):
        """All three links with unit mean power."""
        return cls(omega0=1.0, omega1=1.0, omega2=1.0, **kwargs)

    @classmethod
    def colinear(cls, exponent=4.0, **kwargs):
        """Relay half way between the sources; S1-S2 distance is the unit."""
        omega = pathloss_omega(0.5, exponent)
        return cls(omega0=1.0, omega1=omega, omega2=omega, **kwargs)


@dataclass(frozen=True)
class ChannelRealization:
    """Complex gains h0 (S1-S2), h1 (S1-R), h2 (S2-R) and their mean powers.

    The gain fields may be scalars or equally shaped arrays holding a batch of
    independent realizations. Reciprocity is implicit: each ``h_i`` serves
    both directions of its link.
    """

    h0: complex
    h1: complex
    h2: complex
    omega0: float = 1.0
    omega1: float = 1.0
    omega2: float = 1.0

    @property
    def gains(self):
        return (self.h0, self.h1, self.h2)

    @property
    def powers(self):
        """Instantaneous powers ``|h_i|**2``."""
        return tuple(np.abs(h) ** 2 for h in self.gains)

    def __len__(self):
        return int(np.size(self.h0))

    def __getitem__(self, idx):
        return ChannelRealization(self.h0[idx], self.h1[idx], self.h2[idx],
                                  self.omega0, self.omega1, self.omega2)


def trial_stream(seed, trial):
    """Generator positioned at the first word of ``trial`` under ``seed``."""
    bits = Philox(SeedSequence(int(seed)))
    if trial:
        bits.advance(_COUNTERS_PER_TRIAL * int(trial))
    return Generator(bits)


def _gains_from_uniforms(u, omegas):
    # |h|^2 ~ Exp(omega) via inversion, phase uniform: h ~ CN(0, omega).
    power = -np.log1p(-u[..., 0:6:2])
    phase = 2 * np.pi * u[..., 1:6:2]
    amp = np.sqrt(np.asarray(omegas) * power)
    return amp * np.exp(1j * phase)


def sample_realization(config, stream):
    """Draw one realization from ``stream`` (see :func:`trial_stream`).

    Consumes exactly one trial window of the stream, so successive calls on
    the same generator walk through consecutive trials.
    """
    u = stream.random(WORDS_PER_TRIAL)
    h = _gains_from_uniforms(u, config.omegas)
    return ChannelRealization(complex(h[0]), complex(h[1]), complex(h[2]), *config.omegas)


def sample_block(config, start, count):
    """Realizations for trials ``start .. start + count - 1`` as one batch."""
    stream = trial_stream(config.seed, start)
    u = stream.random((int(count), WORDS_PER_TRIAL))
    h = _gains_from_uniforms(u, config.omegas)
    return ChannelRealization(h[:, 0], h[:, 1], h[:, 2], *config.omegas)


def sample_gamma_vars(realization, rho):
    """Instantaneous SNR variables ``gamma_i = 2 rho |h_i|**2``.

    Each is exponential with mean ``2 rho omega_i``.
    """
    if not rho > 0:
        raise DomainError("rho must be positive")
    return tuple(2.0 * rho * p for p in realization.powers)


def db_to_linear(snr_db):
    return 10.0 ** (np.asarray(snr_db, dtype=float) / 10.0)
