import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from dastc.channel import (
    ChannelRealization,
    ScenarioConfig,
    db_to_linear,
    pathloss_omega,
    sample_block,
    sample_gamma_vars,
    sample_realization,
    trial_stream,
)
from dastc.exceptions import DomainError, ParameterError


def test_pathloss_midpoint_relay():
    assert pathloss_omega(0.5, 4.0) == 16.0
    assert pathloss_omega(1.0, 3.0) == 1.0


@pytest.mark.parametrize("d,n", [(0.0, 4.0), (-1.0, 4.0), (1.0, 0.0)])
def test_pathloss_domain(d, n):
    with pytest.raises(DomainError):
        pathloss_omega(d, n)


def test_scenarios():
    assert ScenarioConfig.symmetric().omegas == (1.0, 1.0, 1.0)
    assert ScenarioConfig.colinear().omegas == (1.0, 16.0, 16.0)
    cfg = ScenarioConfig()
    assert cfg.snr_grid_db == tuple(float(x) for x in range(0, 31, 2))
    assert cfg.trials == 100_000


@pytest.mark.parametrize("kwargs", [
    dict(omega0=0.0), dict(omega1=-2.0), dict(omega2=math.inf),
    dict(snr_grid_db=(0, 0)), dict(snr_grid_db=(10, 5)), dict(snr_grid_db=(0, math.nan)),
    dict(trials=0), dict(trials=2.5), dict(seed=-1), dict(seed=2 ** 64),
])
def test_config_validation(kwargs):
    with pytest.raises(ParameterError):
        ScenarioConfig(**kwargs)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 64 - 1), trial=st.integers(0, 10 ** 6))
def test_trial_draw_is_pure_function_of_seed_and_index(seed, trial):
    cfg = ScenarioConfig(omega0=1.0, omega1=2.0, omega2=3.0, seed=seed)
    alone = sample_realization(cfg, trial_stream(seed, trial))
    block = sample_block(cfg, trial, 3)[0]
    assert alone.gains == tuple(complex(h) for h in block.gains)


def test_consecutive_trials_from_one_stream():
    cfg = ScenarioConfig(seed=7)
    stream = trial_stream(7, 10)
    first, second = sample_realization(cfg, stream), sample_realization(cfg, stream)
    block = sample_block(cfg, 10, 2)
    assert first.gains == tuple(complex(h) for h in block[0].gains)
    assert second.gains == tuple(complex(h) for h in block[1].gains)


def test_block_boundaries_do_not_matter():
    cfg = ScenarioConfig(seed=3)
    whole = sample_block(cfg, 0, 100)
    parts = [sample_block(cfg, s, 25) for s in range(0, 100, 25)]
    for f in ("h0", "h1", "h2"):
        np.testing.assert_array_equal(getattr(whole, f), np.concatenate([getattr(p, f) for p in parts]))


def test_different_seeds_differ():
    a = sample_block(ScenarioConfig(seed=1), 0, 10)
    b = sample_block(ScenarioConfig(seed=2), 0, 10)
    assert not np.any(a.h1 == b.h1)


def test_rayleigh_statistics():
    cfg = ScenarioConfig(omega0=1.0, omega1=16.0, omega2=0.25, seed=11)
    block = sample_block(cfg, 0, 200_000)
    for h, omega in zip(block.gains, cfg.omegas):
        power = np.abs(h) ** 2
        assert power.mean() == pytest.approx(omega, rel=0.01)
        assert stats.kstest(power / omega, "expon").pvalue > 0.01
        assert stats.kstest((np.angle(h) + np.pi) / (2 * np.pi), "uniform").pvalue > 0.01
    # independent links
    assert abs(np.corrcoef(np.abs(block.h1), np.abs(block.h2))[0, 1]) < 0.01


def test_realization_container():
    r = ChannelRealization(np.array([1j, 2]), np.array([3, 4j]), np.array([1, 1]), 1, 2, 3)
    assert len(r) == 2
    assert r[1].h1 == 4j
    np.testing.assert_array_equal(r.powers[1], [9, 16])


def test_gamma_vars():
    r = ChannelRealization(1.0, 2.0, 1j)
    assert sample_gamma_vars(r, 10.0) == (20.0, 80.0, 20.0)
    with pytest.raises(DomainError):
        sample_gamma_vars(r, 0.0)


def test_db_to_linear():
    np.testing.assert_allclose(db_to_linear([0, 10, 30]), [1, 10, 1000])
