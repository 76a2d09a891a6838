"""Shared Monte Carlo fixtures for the acceptance suite.

The heavy runs are session-scoped and shared across tests so each
configuration is simulated exactly once. Everything is seeded, so the
numbers printed by the acceptance tests are identical on every run.
"""
import time

import pytest

from cbsim.evaluate import monte_carlo
from cbsim.model import ScenarioConfig


def cluster_cfg(alpha, beta, grid, drops, seed=12345, max_iterations=10):
    """Three 4-antenna BSs, one 2-antenna MT each: the IFC cluster."""
    return ScenarioConfig(
        num_bs=3,
        antennas_bs=4,
        antennas_mt=2,
        mts_per_bs=(1, 1, 1),
        alpha=alpha,
        beta=beta,
        snr_db_grid=tuple(grid),
        num_drops=drops,
        rng_seed=seed,
        max_iterations=max_iterations,
    )


def ibc_cfg(alpha, grid, drops, seed=12345, beta=0.25):
    """Two 4-antenna BSs, four 4-antenna MTs each: the IBC pair."""
    return ScenarioConfig(
        num_bs=2,
        antennas_bs=4,
        antennas_mt=4,
        mts_per_bs=(4, 4),
        alpha=alpha,
        beta=beta,
        snr_db_grid=tuple(grid),
        num_drops=drops,
        rng_seed=seed,
        max_iterations=10,
    )


def _timed(cfg, schemes, **kw):
    t0 = time.time()
    res = monte_carlo(cfg, schemes, **kw)
    return {"results": res, "cfg": cfg, "seconds": time.time() - t0}


@pytest.fixture(scope="session")
def strong_coupling_sweep():
    """alpha=1, beta=0 cluster, low-to-mid SNR grid, 2000 drops."""
    cfg = cluster_cfg(1.0, 0.0, (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0), 2000)
    return _timed(cfg, ["ia", "max_sinr", "wmmse", "reconfigurable"])


@pytest.fixture(scope="session")
def mixed_coupling_sweep():
    """alpha=0.25, beta=0.25 cluster around the crossover region."""
    cfg = cluster_cfg(0.25, 0.25, (15.0, 17.5, 20.0), 2000)
    return _timed(cfg, ["ia", "max_sinr", "wmmse", "reconfigurable", "orthogonal"])


@pytest.fixture(scope="session")
def ibc_20db():
    """IBC pair at 20 dB for both coupling strengths, 2000 drops."""
    out = {}
    for alpha in (1.0, 0.25):
        cfg = ibc_cfg(alpha, (20.0,), 2000)
        out[alpha] = _timed(cfg, ["downlink_ia", "eigenbeams", "wmmse_ibc"])
    return out


@pytest.fixture(scope="session")
def feedback_sweep():
    """IBC pair, ideal vs standardized-codebook feedback, 1000 drops."""
    cfg = ibc_cfg(1.0, (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0), 1000)
    return _timed(
        cfg,
        ["downlink_ia", "eigenbeams", "downlink_ia_q", "eigenbeams_q"],
        feedback_construction="lte_dual_stage",
    )
