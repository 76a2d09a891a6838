"""Rate computation and the Monte Carlo ergodic-rate engine."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .model import (
    ChannelDrop,
    RankDeficientChannel,
    RxStrategy,
    ScenarioConfig,
    TxStrategy,
    generate_drop,
    oci_covariance,
)
from .numerics import logdet_hermitian, mmse_combiner

WORKERS_ENV = "CBSIM_WORKERS"


class SchemeExecutionError(RuntimeError):
    """A scheme failed numerically; carries (scheme, snr_db, drop_index)."""

    def __init__(self, scheme: str, snr_db: float, drop_index: int, original: BaseException):
        super().__init__(
            f"scheme {scheme!r} failed at snr_db={snr_db}, drop={drop_index}: {original}"
        )
        self.scheme = scheme
        self.snr_db = snr_db
        self.drop_index = drop_index
        self.original = original


def interference_covariance(
    u: int,
    drop: ChannelDrop,
    tx: TxStrategy,
    cfg: ScenarioConfig,
    oci_cov: np.ndarray,
    exclude_ici: bool = False,
) -> np.ndarray:
    """Noise + OCI + every stream not intended for MT u."""
    b_u = cfg.serving_bs(u)
    r = drop.noise_var * np.eye(cfg.antennas_mt, dtype=complex) + oci_cov
    for (k, bk), v in tx.precoders.items():
        if k == u or v.shape[1] == 0:
            continue
        if exclude_ici and bk != b_u:
            continue
        hv = drop.h(u, bk) @ tx.scaled_precoder(k, bk)
        r += hv @ hv.conj().T
    return r


def achievable_rate(
    u: int,
    drop: ChannelDrop,
    tx: TxStrategy,
    cfg: ScenarioConfig,
    oci_cov: np.ndarray | None = None,
    combiner: np.ndarray | None = None,
    exclude_ici: bool = False,
) -> float:
    """Rate of MT u in bits/s/Hz under the given transmit strategy.

    With combiner=None this is the receiver-optimal log-det rate against
    the full interference-plus-noise covariance. With a fixed combiner
    (d x M, rows applied to y) it is the sum of per-stream log2(1+SINR),
    where each stream sees every other stream as interference.
    """
    if oci_cov is None:
        oci_cov = oci_covariance(cfg, drop)
    b_u = cfg.serving_bs(u)
    key = (u, b_u)
    if key not in tx.precoders or tx.precoders[key].shape[1] == 0:
        return 0.0
    r = interference_covariance(u, drop, tx, cfg, oci_cov, exclude_ici)
    heff = drop.h(u, b_u) @ tx.scaled_precoder(u, b_u)
    c = heff @ heff.conj().T
    if combiner is None:
        return logdet_hermitian(r + c) - logdet_hermitian(r)
    rate = 0.0
    for l in range(heff.shape[1]):
        h = heff[:, l]
        r_l = r + c - np.outer(h, h.conj())
        w = combiner[l]
        sinr = abs(w @ h) ** 2 / (w @ r_l @ w.conj()).real
        rate += np.log2(1.0 + sinr)
    return float(rate)


def irc_receivers(
    drop: ChannelDrop,
    cfg: ScenarioConfig,
    tx: TxStrategy,
    oci_cov: np.ndarray | None = None,
    within_cell_only: bool = False,
) -> RxStrategy:
    """Per-stream MMSE rows against the model covariance.

    By default the covariance is exact (every stream of every BS plus OCI
    and noise), which makes the resulting SINR optimal for its stream. With
    within_cell_only=True the rows are built as if only the serving cell's
    other streams, the OCI floor, and noise existed; a receiver with no
    channel knowledge toward the other BS can do no better, and the rate it
    actually achieves is still evaluated against the full interference.
    """
    if oci_cov is None:
        oci_cov = oci_covariance(cfg, drop)
    combiners = {}
    for (u, b), v in tx.precoders.items():
        if v.shape[1] == 0:
            continue
        r = interference_covariance(u, drop, tx, cfg, oci_cov, exclude_ici=within_cell_only)
        heff = drop.h(u, b) @ tx.scaled_precoder(u, b)
        c = heff @ heff.conj().T
        rows = []
        for l in range(heff.shape[1]):
            h = heff[:, l]
            r_l = r + c - np.outer(h, h.conj())
            rows.append(mmse_combiner(h, r_l)[0])
        combiners[u] = np.array(rows)
    return RxStrategy(combiners=combiners)


def prelog_adjust(rate: float, scheme: str, num_bs: int = 1) -> float:
    """Scale a rate by a scheme's resource-reuse prelog (1/B if orthogonal)."""
    if scheme == "orthogonal":
        return rate / num_bs
    return rate


@dataclass
class RateReport:
    """Monte Carlo averages for one (scheme, SNR) cell.

    stderr is the standard error of the cluster sum; per-MT and per-BS
    standard errors ride along for reporting. With a single drop all
    standard errors are zero by convention.
    """

    per_mt_rate: dict[int, float]
    per_bs_sum: dict[int, float]
    cluster_sum: float
    num_drops_used: int
    stderr: float
    excluded_drops: int = 0
    stderr_per_mt: dict[int, float] = field(default_factory=dict)
    stderr_per_bs: dict[int, float] = field(default_factory=dict)


def per_mt_rates(drop: ChannelDrop, cfg: ScenarioConfig, out, oci_cov: np.ndarray) -> np.ndarray:
    """Vector of rates, one per MT, honoring the scheme's evaluation mode."""
    rates = np.zeros(cfg.num_mts)
    if getattr(out, "exclude_oci", False):
        oci_cov = np.zeros_like(oci_cov)
    for u in range(cfg.num_mts):
        b = cfg.serving_bs(u)
        if (u, b) not in out.tx.precoders:
            continue
        comb = None
        if out.rate_mode == "combiner":
            comb = out.rx.combiners.get(u)
            if comb is None:
                continue
        rates[u] = out.prelog * achievable_rate(
            u, drop, out.tx, cfg, oci_cov, combiner=comb, exclude_ici=out.exclude_ici
        )
    return rates


def _evaluate_chunk(cfg, runner_specs, snr_db, indices):
    """Rates for a block of drops at one SNR point.

    Returns (per-scheme rate matrix rows, per-scheme excluded flags).
    Runner specs are (id, callable) pairs; every scheme sees the same drop
    object so scenarios share channel randomness.
    """
    n_u = cfg.num_mts
    rates = {sid: np.zeros((len(indices), n_u)) for sid, _ in runner_specs}
    excluded = {sid: np.zeros(len(indices), dtype=bool) for sid, _ in runner_specs}
    for row, i in enumerate(indices):
        drop = generate_drop(cfg, i, snr_db=snr_db)
        oci_cov = oci_covariance(cfg, drop)
        for sid, runner in runner_specs:
            try:
                out = runner(drop, cfg, oci_cov)
            except RankDeficientChannel:
                excluded[sid][row] = True
                continue
            except Exception as exc:  # noqa: BLE001 - context added, then re-raised
                raise SchemeExecutionError(sid, snr_db, i, exc) from exc
            rates[sid][row] = per_mt_rates(drop, cfg, out, oci_cov)
    return rates, excluded


def _mc_worker(args):
    cfg, scheme_ids, construction, snr_db, indices = args
    from .catalog import resolve

    runner_specs = list(resolve(scheme_ids, cfg, construction).items())
    return _evaluate_chunk(cfg, runner_specs, snr_db, indices)


def _report_from_matrix(cfg: ScenarioConfig, rates: np.ndarray, excluded: np.ndarray) -> RateReport:
    used = rates[~excluded]
    n = used.shape[0]
    if n == 0:
        zeros_mt = {u: 0.0 for u in range(cfg.num_mts)}
        zeros_bs = {b: 0.0 for b in range(cfg.num_bs)}
        return RateReport(zeros_mt, zeros_bs, 0.0, 0, 0.0, int(excluded.sum()), zeros_mt, zeros_bs)

    def stderr_of(col: np.ndarray) -> float:
        if n < 2:
            return 0.0
        return float(np.std(col, ddof=1) / np.sqrt(n))

    per_mt = {u: float(used[:, u].mean()) for u in range(cfg.num_mts)}
    se_mt = {u: stderr_of(used[:, u]) for u in range(cfg.num_mts)}
    per_bs = {}
    se_bs = {}
    for b in range(cfg.num_bs):
        cols = cfg.users_of(b)
        sums = used[:, cols].sum(axis=1)
        per_bs[b] = float(sums.mean())
        se_bs[b] = stderr_of(sums)
    cluster = used.sum(axis=1)
    return RateReport(
        per_mt_rate=per_mt,
        per_bs_sum=per_bs,
        cluster_sum=float(cluster.mean()),
        num_drops_used=n,
        stderr=stderr_of(cluster),
        excluded_drops=int(excluded.sum()),
        stderr_per_mt=se_mt,
        stderr_per_bs=se_bs,
    )


def monte_carlo(
    cfg: ScenarioConfig,
    schemes,
    feedback_construction: str = "lte_dual_stage",
) -> dict[str, dict[float, RateReport]]:
    """Ergodic rates over cfg.num_drops drops for every (scheme, SNR) pair.

    `schemes` is a list of registered scheme ids (validated against the
    configuration up front) or, mainly for tests, a mapping id -> runner.
    Drop i is derived from (rng_seed, i) alone, so results are independent
    of the worker count set via the CBSIM_WORKERS environment variable, and
    all schemes at one SNR share the same drops.
    """
    if isinstance(schemes, dict):
        runner_specs = list(schemes.items())
        scheme_ids = [sid for sid, _ in runner_specs]
        parallel_ids = None  # custom runners may not pickle; stay serial
    else:
        from .catalog import resolve

        runner_specs = list(resolve(schemes, cfg, feedback_construction).items())
        scheme_ids = [sid for sid, _ in runner_specs]
        parallel_ids = list(schemes)

    workers = int(os.environ.get(WORKERS_ENV, "1") or "1")
    indices = list(range(cfg.num_drops))
    results: dict[str, dict[float, RateReport]] = {sid: {} for sid in scheme_ids}

    for snr_db in cfg.snr_db_grid:
        if workers > 1 and parallel_ids is not None and cfg.num_drops > 1:
            chunks = np.array_split(np.array(indices), min(workers, len(indices)))
            args = [
                (cfg, parallel_ids, feedback_construction, snr_db, [int(i) for i in chunk])
                for chunk in chunks
                if len(chunk)
            ]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_mc_worker, args))
            rates = {
                sid: np.vstack([p[0][sid] for p in parts]) for sid in scheme_ids
            }
            excluded = {
                sid: np.concatenate([p[1][sid] for p in parts]) for sid in scheme_ids
            }
        else:
            rates, excluded = _evaluate_chunk(cfg, runner_specs, snr_db, indices)
        for sid in scheme_ids:
            results[sid][snr_db] = _report_from_matrix(cfg, rates[sid], excluded[sid])
    return results
