"""System model for a cluster of coordinated base stations.

A cluster holds B coordinated BSs with N antennas each. Every BS serves its
own group of M-antenna mobile terminals on the same resource, so each MT sees
its desired link, intra-cluster interference from the other B-1 BSs, and
out-of-cluster interference (OCI) from the rest of the network.

Normalization: desired-link entries are unit-variance complex Gaussian.
Cross-link entries carry variance alpha/(B-1) so the total intra-cluster
interference power is a fraction alpha of the desired power; OCI carries a
fraction beta. With S the nominal expected total desired power and
SNR = S / E{||n||^2}, the per-antenna noise variance is S/(M*SNR) and the
per-element OCI power is beta*S/M. These identities are exact by
construction, not Monte Carlo estimates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class InfeasibleConfiguration(ValueError):
    """Raised when a scheme cannot run on the configured shapes."""


class RankDeficientChannel(RuntimeError):
    """Raised when a drop is numerically rank-deficient for a scheme.

    Drops raising this are excluded from Monte Carlo averages and counted.
    """


@dataclass(frozen=True)
class ScenarioConfig:
    """Static description of one simulation scenario.

    alpha is the intra-cluster interference-to-signal power ratio, beta the
    out-of-cluster one. snr_db_grid lists the nominal SNR sweep in dB.
    """

    num_bs: int
    antennas_bs: int
    antennas_mt: int
    mts_per_bs: tuple[int, ...]
    alpha: float
    beta: float
    snr_db_grid: tuple[float, ...]
    nakagami_m: float = 1.0
    num_drops: int = 1000
    rng_seed: int = 12345
    max_iterations: int = 10
    power_budget_per_bs: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mts_per_bs", tuple(int(k) for k in self.mts_per_bs))
        object.__setattr__(self, "snr_db_grid", tuple(float(s) for s in self.snr_db_grid))
        if self.num_bs < 1:
            raise ValueError("num_bs must be >= 1")
        if self.antennas_bs < 1 or self.antennas_mt < 1:
            raise ValueError("antenna counts must be >= 1")
        if len(self.mts_per_bs) != self.num_bs:
            raise ValueError("mts_per_bs needs one entry per BS")
        if any(k < 1 for k in self.mts_per_bs):
            raise ValueError("each BS serves at least one MT")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must lie in [0, 1]")
        if not self.snr_db_grid:
            raise ValueError("snr_db_grid must not be empty")
        if self.nakagami_m < 0.5:
            raise ValueError("nakagami_m must be >= 0.5")
        if self.num_drops < 1:
            raise ValueError("num_drops must be >= 1")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if self.power_budget_per_bs <= 0:
            raise ValueError("power_budget_per_bs must be positive")

    @property
    def num_mts(self) -> int:
        return sum(self.mts_per_bs)

    def users_of(self, b: int) -> list[int]:
        """Global MT indices served by BS b (MTs are numbered BS by BS)."""
        start = sum(self.mts_per_bs[:b])
        return list(range(start, start + self.mts_per_bs[b]))

    def serving_bs(self, u: int) -> int:
        start = 0
        for b, k in enumerate(self.mts_per_bs):
            if u < start + k:
                return b
            start += k
        raise IndexError(f"no MT with index {u}")

    def nominal_desired_power(self) -> float:
        """S: expected total desired received power per BS group.

        E{||H x||^2} = M * E{||x||^2} for unit-variance entries, so summing
        over one BS's MTs gives M times the power budget regardless of how
        the budget is split.
        """
        return self.antennas_mt * self.power_budget_per_bs

    def noise_var(self, snr_db: float) -> float:
        """Per-antenna noise variance at a nominal SNR grid point."""
        snr = 10.0 ** (snr_db / 10.0)
        return self.nominal_desired_power() / (self.antennas_mt * snr)

    def oci_elem_power(self) -> float:
        """Per-element OCI power: beta * S / M."""
        return self.beta * self.nominal_desired_power() / self.antennas_mt


@dataclass(frozen=True)
class ChannelDrop:
    """One channel realization: every (MT, BS) link in the cluster.

    channels[(u, b)] is the M x N matrix from BS b to MT u. Treated as
    immutable once created.
    """

    channels: dict[tuple[int, int], np.ndarray]
    oci_elem_power: float
    noise_var: float
    drop_index: int

    def h(self, u: int, b: int) -> np.ndarray:
        return self.channels[(u, b)]


@dataclass
class TxStrategy:
    """Transmit side of a scheme's output.

    precoders[(u, b)] is an N x d_u matrix with unit-norm columns for MT u
    served by BS b; per_stream_powers[(u, l)] is the power on stream l of
    MT u. stream_counts includes served MTs with d_u = 0 when a scheme
    switches an MT off entirely.
    """

    precoders: dict[tuple[int, int], np.ndarray]
    stream_counts: dict[int, int]
    per_stream_powers: dict[tuple[int, int], float]

    def scaled_precoder(self, u: int, b: int) -> np.ndarray:
        """Precoder with per-stream powers folded in (columns * sqrt(p))."""
        v = self.precoders[(u, b)]
        if v.shape[1] == 0:
            return v
        p = np.array([self.per_stream_powers[(u, l)] for l in range(v.shape[1])])
        return v * np.sqrt(p)[None, :]

    def bs_power(self, cfg: ScenarioConfig, b: int) -> float:
        total = 0.0
        for (u, bb), v in self.precoders.items():
            if bb != b:
                continue
            for l in range(v.shape[1]):
                total += self.per_stream_powers[(u, l)]
        return total


@dataclass
class RxStrategy:
    """combiners[u] is a d_u x M matrix with unit-norm rows."""

    combiners: dict[int, np.ndarray]


def check_tx_strategy(tx: TxStrategy, cfg: ScenarioConfig, tol: float = 1e-9) -> None:
    """Assert the transmit-side invariants: unit columns, budget respected."""
    for (u, b), v in tx.precoders.items():
        if v.shape[0] != cfg.antennas_bs:
            raise AssertionError(f"precoder for MT {u} has wrong row count")
        norms = np.linalg.norm(v, axis=0)
        if v.shape[1] and not np.allclose(norms, 1.0, atol=1e-8):
            raise AssertionError(f"precoder columns for MT {u} are not unit norm")
    for b in range(cfg.num_bs):
        used = tx.bs_power(cfg, b)
        if used > cfg.power_budget_per_bs + tol:
            raise AssertionError(f"BS {b} exceeds its power budget: {used}")
    for u, d in tx.stream_counts.items():
        if d < 0:
            raise AssertionError("negative stream count")


def check_rx_strategy(rx: RxStrategy) -> None:
    for u, w in rx.combiners.items():
        norms = np.linalg.norm(w, axis=1)
        if w.shape[0] and not np.allclose(norms, 1.0, atol=1e-8):
            raise AssertionError(f"combiner rows for MT {u} are not unit norm")


def drop_rng(seed: int, drop_index: int) -> np.random.Generator:
    """Random source for one drop, splittable on (seed, drop_index).

    Drop i is bit-identical no matter which worker generates it or how many
    drops ran before it.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(drop_index)]))


def _standard_complex(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def generate_drop(
    cfg: ScenarioConfig,
    drop_index: int,
    rng: np.random.Generator | None = None,
    snr_db: float | None = None,
) -> ChannelDrop:
    """Draw one channel realization.

    The raw Gaussian draws depend only on (rng_seed, drop_index) and the
    array shapes, never on alpha or beta; cross links are scaled afterwards.
    Scenarios sharing a seed therefore share channel randomness (common
    random numbers), and alpha = 0 yields exactly zero cross matrices.
    snr_db defaults to the first grid entry and only sets noise_var.
    """
    if cfg.num_bs == 1 and cfg.alpha > 0:
        raise ValueError("alpha > 0 requires at least two coordinated BSs")
    if rng is None:
        rng = drop_rng(cfg.rng_seed, drop_index)
    if snr_db is None:
        snr_db = cfg.snr_db_grid[0]

    m, n = cfg.antennas_mt, cfg.antennas_bs
    cross_scale = np.sqrt(cfg.alpha / (cfg.num_bs - 1)) if cfg.num_bs > 1 else 0.0
    channels: dict[tuple[int, int], np.ndarray] = {}
    for u in range(cfg.num_mts):
        serving = cfg.serving_bs(u)
        for b in range(cfg.num_bs):
            h = _standard_complex(rng, m, n)
            channels[(u, b)] = h if b == serving else cross_scale * h

    return ChannelDrop(
        channels=channels,
        oci_elem_power=cfg.oci_elem_power(),
        noise_var=cfg.noise_var(snr_db),
        drop_index=drop_index,
    )


def sample_oci(drop: ChannelDrop, cfg: ScenarioConfig, rng: np.random.Generator) -> np.ndarray:
    """One OCI vector: i.i.d. Nakagami-m amplitudes, uniform phases.

    Element power equals drop.oci_elem_power; the amplitude squared is
    Gamma(m, omega/m) so E{r^2} = omega and E{r^4} = omega^2 (1 + 1/m).
    """
    m = cfg.antennas_mt
    omega = drop.oci_elem_power
    if omega == 0.0:
        return np.zeros(m, dtype=complex)
    r2 = rng.gamma(shape=cfg.nakagami_m, scale=omega / cfg.nakagami_m, size=m)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=m)
    return np.sqrt(r2) * np.exp(1j * phase)


def oci_covariance(cfg: ScenarioConfig, drop: ChannelDrop) -> np.ndarray:
    """Covariance the receivers use for OCI: oci_elem_power * I_M."""
    return drop.oci_elem_power * np.eye(cfg.antennas_mt)
