"""Coordinated beamforming schemes for the interference-channel setup.

One MT per BS unless a scheme states otherwise (wmmse and reconfigurable
also run on multi-MT-per-BS configurations). All schemes take an explicit
OCI covariance; passing None derives it from the drop. `ia` is the only one
that ignores it, since alignment nulls intra-cluster interference without
looking at the noise floor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import (
    ChannelDrop,
    InfeasibleConfiguration,
    RxStrategy,
    ScenarioConfig,
    TxStrategy,
    oci_covariance,
)
from .numerics import (
    fix_phase,
    herm_solve,
    waterfill,
)


class PowerBisectionError(RuntimeError):
    """Raised when the per-BS power dual cannot be bracketed."""


@dataclass
class SchemeOutput:
    """What every scheme returns.

    iterations_used counts outer sweeps and never exceeds
    cfg.max_iterations; objective_trace has one entry per sweep. Schemes
    with internal iterations outside that budget (ia) report zero sweeps
    and keep their internals in `aux`. rate_mode selects how the evaluation
    module computes rates: 'optimal' for the receiver-optimal bound,
    'combiner' to score the returned combiners. prelog, exclude_ici and
    exclude_oci implement orthogonal transmission accounting.
    """

    tx: TxStrategy
    rx: RxStrategy
    iterations_used: int
    converged: bool
    objective_trace: list[float]
    rate_mode: str = "optimal"
    prelog: float = 1.0
    exclude_ici: bool = False
    exclude_oci: bool = False
    aux: dict = field(default_factory=dict)


def default_stream_count(cfg: ScenarioConfig) -> int:
    """Streams per MT: half the smaller antenna count when that is an
    integer, otherwise the alignment-feasibility bound floor((N+M)/(B+1))."""
    dmin = min(cfg.antennas_bs, cfg.antennas_mt)
    if dmin % 2 == 0:
        return dmin // 2
    return max(1, (cfg.antennas_bs + cfg.antennas_mt) // (cfg.num_bs + 1))


def check_alignment_feasible(cfg: ScenarioConfig, d: int) -> None:
    n, m = cfg.antennas_bs, cfg.antennas_mt
    if d < 1:
        raise InfeasibleConfiguration("stream count must be >= 1")
    if n + m < (cfg.num_bs + 1) * d:
        raise InfeasibleConfiguration(
            f"d={d} streams infeasible for N={n}, M={m}, B={cfg.num_bs}: "
            f"N+M < (B+1)d"
        )


def _single_user_per_bs(cfg: ScenarioConfig) -> list[int]:
    if any(k != 1 for k in cfg.mts_per_bs):
        raise InfeasibleConfiguration("this scheme expects one MT per BS")
    return [cfg.users_of(b)[0] for b in range(cfg.num_bs)]


def _init_right_singular(drop: ChannelDrop, cfg: ScenarioConfig, users, d: int):
    """Deterministic start: d dominant right singular vectors per link."""
    init = {}
    for u in users:
        b = cfg.serving_bs(u)
        _, _, vh = np.linalg.svd(drop.h(u, b))
        v = vh[:d].conj().T
        init[u] = np.column_stack([fix_phase(v[:, l]) for l in range(d)])
    return init


def _relative_leakage(drop, cfg, users, precoders, combiner_cols, p_stream):
    """Max over links of (post-combining interference) / (post-combining signal)."""
    worst = 0.0
    for k, uk in enumerate(users):
        bk = cfg.serving_bs(uk)
        w = combiner_cols[uk]
        sig = p_stream * np.linalg.norm(w.conj().T @ drop.h(uk, bk) @ precoders[uk]) ** 2
        leak = 0.0
        for j, uj in enumerate(users):
            if j == k:
                continue
            bj = cfg.serving_bs(uj)
            leak += p_stream * np.linalg.norm(w.conj().T @ drop.h(uk, bj) @ precoders[uj]) ** 2
        worst = max(worst, leak / max(sig, 1e-300))
    return worst


def ia(
    drop: ChannelDrop,
    cfg: ScenarioConfig,
    oci_cov: np.ndarray | None = None,
    num_streams: int | None = None,
    leakage_cap: int = 500,
    leakage_tol: float = 1e-10,
) -> SchemeOutput:
    """Interference alignment via alternating leakage minimization.

    Noise- and OCI-oblivious by design: the only objective is confining
    every link's received intra-cluster interference to a subspace the
    combiner can null. The forward half-sweep picks each receiver's d
    least-interfered directions, the reversed network does the same for
    the transmitters; total leakage is non-increasing across sweeps. The
    internal sweep budget is separate from cfg.max_iterations. Precoders
    start from the desired channels' dominant right singular vectors, so
    when there is no cross interference at all the start already has zero
    leakage and matched-filter beams are returned unchanged.
    """
    del oci_cov  # alignment does not use the noise floor
    users = _single_user_per_bs(cfg)
    d = num_streams if num_streams is not None else default_stream_count(cfg)
    check_alignment_feasible(cfg, d)
    p_stream = cfg.power_budget_per_bs / d
    m, n = cfg.antennas_mt, cfg.antennas_bs

    precoders = _init_right_singular(drop, cfg, users, d)
    combiner_cols = {u: np.zeros((m, d), dtype=complex) for u in users}

    def update_combiners():
        for uk in users:
            q = np.zeros((m, m), dtype=complex)
            for uj in users:
                if uj == uk:
                    continue
                hv = drop.h(uk, cfg.serving_bs(uj)) @ precoders[uj]
                q += p_stream * hv @ hv.conj().T
            _, vecs = np.linalg.eigh(q)
            combiner_cols[uk] = vecs[:, :d]

    def update_precoders():
        for uj in users:
            bj = cfg.serving_bs(uj)
            q = np.zeros((n, n), dtype=complex)
            for uk in users:
                if uk == uj:
                    continue
                hw = drop.h(uk, bj).conj().T @ combiner_cols[uk]
                q += p_stream * hw @ hw.conj().T
            _, vecs = np.linalg.eigh(q)
            precoders[uj] = vecs[:, :d]

    update_combiners()
    leak = _relative_leakage(drop, cfg, users, precoders, combiner_cols, p_stream)
    sweeps = 0
    while leak >= leakage_tol and sweeps < leakage_cap:
        update_precoders()
        update_combiners()
        leak = _relative_leakage(drop, cfg, users, precoders, combiner_cols, p_stream)
        sweeps += 1

    tx = TxStrategy(
        precoders={
            (u, cfg.serving_bs(u)): np.column_stack(
                [fix_phase(precoders[u][:, l]) for l in range(d)]
            )
            for u in users
        },
        stream_counts={u: d for u in users},
        per_stream_powers={(u, l): p_stream for u in users for l in range(d)},
    )
    rx = RxStrategy(
        combiners={
            u: np.array([fix_phase(combiner_cols[u][:, l]).conj() for l in range(d)])
            for u in users
        }
    )
    return SchemeOutput(
        tx=tx,
        rx=rx,
        iterations_used=0,
        converged=leak < leakage_tol,
        objective_trace=[],
        aux={"leakage_sweeps": sweeps, "max_rel_leakage": leak},
    )


def max_sinr(
    drop: ChannelDrop,
    cfg: ScenarioConfig,
    oci_cov: np.ndarray | None = None,
    num_streams: int | None = None,
) -> SchemeOutput:
    """Alternating per-stream SINR maximization over the reciprocal network.

    Forward pass: each stream's combiner is the SINR-optimal direction
    given everything else (OCI folded into the noise floor). Reverse pass:
    roles swap and the precoders get the same treatment. Stops at sum-rate
    stationarity or after cfg.max_iterations sweeps.
    """
    users = _single_user_per_bs(cfg)
    if oci_cov is None:
        oci_cov = oci_covariance(cfg, drop)
    d = num_streams if num_streams is not None else default_stream_count(cfg)
    check_alignment_feasible(cfg, d)
    m, n = cfg.antennas_mt, cfg.antennas_bs
    p = cfg.power_budget_per_bs / d
    noise = drop.noise_var

    v = _init_right_singular(drop, cfg, users, d)
    w = {u: np.zeros((m, d), dtype=complex) for u in users}

    def forward_cov(uk):
        t = noise * np.eye(m, dtype=complex) + oci_cov
        for uj in users:
            hv = drop.h(uk, cfg.serving_bs(uj)) @ v[uj]
            t += p * hv @ hv.conj().T
        return t

    def update_combiners():
        for uk in users:
            t = forward_cov(uk)
            heff = drop.h(uk, cfg.serving_bs(uk)) @ v[uk]
            for l in range(d):
                h = heff[:, l]
                b = t - p * np.outer(h, h.conj())
                wl = herm_solve(b, h)
                w[uk][:, l] = wl / np.linalg.norm(wl)

    def current_sum_rate():
        total = 0.0
        for uk in users:
            t = forward_cov(uk)
            heff = drop.h(uk, cfg.serving_bs(uk)) @ v[uk]
            for l in range(d):
                h = heff[:, l]
                b = t - p * np.outer(h, h.conj())
                wl = w[uk][:, l]
                sinr = p * abs(wl.conj() @ h) ** 2 / (wl.conj() @ b @ wl).real
                total += np.log2(1.0 + sinr)
        return float(total)

    trace: list[float] = []
    sweeps = 0
    converged = False
    for sweeps in range(1, cfg.max_iterations + 1):
        update_combiners()
        # reversed network: combiners transmit, BSs receive
        for uj in users:
            bj = cfg.serving_bs(uj)
            t = noise * np.eye(n, dtype=complex)
            for uk in users:
                hw = drop.h(uk, bj).conj().T @ w[uk]
                t += p * hw @ hw.conj().T
            heff = drop.h(uj, bj).conj().T @ w[uj]
            for l in range(d):
                h = heff[:, l]
                b = t - p * np.outer(h, h.conj())
                vl = herm_solve(b, h)
                v[uj][:, l] = vl / np.linalg.norm(vl)
        update_combiners()
        trace.append(current_sum_rate())
        if len(trace) >= 2 and abs(trace[-1] - trace[-2]) <= 1e-6 * max(1.0, abs(trace[-2])):
            converged = True
            break
    if cfg.max_iterations == 0:
        sweeps = 0
        update_combiners()

    tx = TxStrategy(
        precoders={(u, cfg.serving_bs(u)): v[u] for u in users},
        stream_counts={u: d for u in users},
        per_stream_powers={(u, l): p for u in users for l in range(d)},
    )
    rx = RxStrategy(combiners={u: w[u].conj().T for u in users})
    return SchemeOutput(
        tx=tx,
        rx=rx,
        iterations_used=sweeps,
        converged=converged,
        objective_trace=trace,
    )


def _wmmse_power_and_precoders(lam, q, c_list, budget):
    """Per-BS precoders (A + mu I)^-1 B with mu bisected onto the budget.

    lam/q is the eigendecomposition of A; c_list holds Q^H B per served MT.
    Returns the rotated precoder blocks and the dual value used.
    """
    lam = np.clip(lam, 0.0, None)
    lam_max = lam.max() if lam.size else 0.0
    row_powers = [np.sum(np.abs(c) ** 2, axis=1) for c in c_list]
    total_c = float(sum(rp.sum() for rp in row_powers))
    if total_c <= 0.0:
        return [np.zeros_like(c) for c in c_list], 0.0

    # the dual objective only sees the summed load per eigen-direction, so
    # collapse across users once and bisect on plain floats
    rp_total = np.sum(row_powers, axis=0)
    thresh = 1e-14 * max(lam_max, 1.0)
    loaded = rp_total > 1e-18 * total_c
    lam_l = [float(x) for x in lam[loaded]]
    rp_l = [float(x) for x in rp_total[loaded]]

    def power(mu):
        out = 0.0
        for la, rp in zip(lam_l, rp_l):
            denom = la + mu
            if denom <= thresh:
                return np.inf
            out += rp / (denom * denom)
        return out

    if power(0.0) <= budget:
        mu = 0.0
    else:
        hi = float(np.sqrt(total_c / budget)) + 1e-12
        if not power(hi) <= budget:
            raise PowerBisectionError("power dual could not be bracketed")
        lo = 0.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if power(mid) > budget:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * hi:
                break
        mu = hi
    blocks = []
    denom = lam + mu
    for c in c_list:
        safe = np.where(denom > 0, denom, 1.0)
        blocks.append(c / safe[:, None])
    return blocks, mu


def wmmse(
    drop: ChannelDrop,
    cfg: ScenarioConfig,
    oci_cov: np.ndarray | None = None,
    users: list[int] | None = None,
    max_iterations: int | None = None,
) -> SchemeOutput:
    """Weighted-MMSE sum-rate maximization with per-BS power constraints.

    Cycles MMSE receivers, MSE-inverse weights, and dual-bisected
    precoders. The recorded objective is the weighted-MSE surrogate, which
    is monotonically non-increasing across sweeps. Streams start at
    min(N, M) per MT; after the final sweep each MT's transmit covariance
    is eigendecomposed and streams below 1e-6 of the budget are dropped.
    """
    if oci_cov is None:
        oci_cov = oci_covariance(cfg, drop)
    if users is None:
        users = list(range(cfg.num_mts))
    iters = cfg.max_iterations if max_iterations is None else max_iterations
    m, n = cfg.antennas_mt, cfg.antennas_bs
    d0 = min(n, m)
    noise = drop.noise_var
    budget = cfg.power_budget_per_bs
    by_bs = {b: [u for u in users if cfg.serving_bs(u) == b] for b in range(cfg.num_bs)}
    by_bs = {b: us for b, us in by_bs.items() if us}

    v = {}
    for u in users:
        b = cfg.serving_bs(u)
        _, _, vh = np.linalg.svd(drop.h(u, b))
        p0 = budget / (len(by_bs[b]) * d0)
        v[u] = vh[:d0].conj().T * np.sqrt(p0)

    def rx_cov(u):
        r = noise * np.eye(m, dtype=complex) + oci_cov
        for k in users:
            hv = drop.h(u, cfg.serving_bs(k)) @ v[k]
            r += hv @ hv.conj().T
        return r

    trace: list[float] = []
    sweeps = 0
    converged = False
    rec = {u: np.zeros((m, d0), dtype=complex) for u in users}
    wgt = {u: np.eye(d0, dtype=complex) for u in users}
    for sweeps in range(1, iters + 1):
        for u in users:
            heff = drop.h(u, cfg.serving_bs(u)) @ v[u]
            rec[u] = herm_solve(rx_cov(u), heff)
            e = np.eye(d0) - rec[u].conj().T @ heff
            e = 0.5 * (e + e.conj().T)
            wgt[u] = np.linalg.inv(e)
            wgt[u] = 0.5 * (wgt[u] + wgt[u].conj().T)

        for b, served in by_bs.items():
            a = np.zeros((n, n), dtype=complex)
            for k in users:
                g = drop.h(k, b).conj().T @ rec[k]
                a += g @ wgt[k] @ g.conj().T
            a = 0.5 * (a + a.conj().T)
            lam, q = np.linalg.eigh(a)
            c_list = [q.conj().T @ (drop.h(u, b).conj().T @ rec[u] @ wgt[u]) for u in served]
            blocks, _ = _wmmse_power_and_precoders(lam, q, c_list, budget)
            for u, blk in zip(served, blocks):
                v[u] = q @ blk

        obj = 0.0
        for u in users:
            heff = drop.h(u, cfg.serving_bs(u)) @ v[u]
            t = np.eye(d0) - rec[u].conj().T @ heff
            e = t @ t.conj().T
            for k in users:
                if k == u:
                    continue
                g = rec[u].conj().T @ (drop.h(u, cfg.serving_bs(k)) @ v[k])
                e += g @ g.conj().T
            e += rec[u].conj().T @ (noise * np.eye(m) + oci_cov) @ rec[u]
            e = 0.5 * (e + e.conj().T)
            sign, logdet_w = np.linalg.slogdet(wgt[u])
            if sign.real <= 0:
                raise PowerBisectionError("weight matrix lost positive definiteness")
            obj += float(np.trace(wgt[u] @ e).real - logdet_w)
        trace.append(obj)
        if len(trace) >= 2 and abs(trace[-1] - trace[-2]) <= 1e-12 * max(1.0, abs(trace[-2])):
            converged = True
            break
    if len(trace) >= 2:
        converged = abs(trace[-1] - trace[-2]) <= 1e-6 * max(1.0, abs(trace[-2]))

    # per-stream extraction from the transmit covariance
    precoders = {}
    powers = {}
    counts = {}
    for u in users:
        b = cfg.serving_bs(u)
        t = v[u] @ v[u].conj().T
        lam, q = np.linalg.eigh(0.5 * (t + t.conj().T))
        keep = lam > 1e-6 * budget
        vecs = q[:, keep][:, ::-1]
        vals = lam[keep][::-1]
        vecs = np.column_stack([fix_phase(vecs[:, i]) for i in range(vecs.shape[1])]) if vals.size else np.zeros((n, 0), dtype=complex)
        precoders[(u, b)] = vecs
        counts[u] = int(vals.size)
        for l, pw in enumerate(vals):
            powers[(u, l)] = float(pw)

    tx = TxStrategy(precoders=precoders, stream_counts=counts, per_stream_powers=powers)
    from .evaluate import irc_receivers

    rx = irc_receivers(drop, cfg, tx, oci_cov)
    return SchemeOutput(
        tx=tx,
        rx=rx,
        iterations_used=sweeps if iters > 0 else 0,
        converged=converged,
        objective_trace=trace,
    )


def reconfigurable(
    drop: ChannelDrop,
    cfg: ScenarioConfig,
    oci_cov: np.ndarray | None = None,
    users: list[int] | None = None,
) -> SchemeOutput:
    """Adaptive-rank beamforming: MMSE filtering plus waterfilling.

    Every MT keeps min(N, M) candidate streams. Each sweep first fits
    per-stream MMSE combiners against everything currently transmitted
    (OCI folded into the noise floor), then walks the BSs: each stream's
    beam becomes the interference-whitened matched filter of the reversed
    network (combiners transmit, BSs receive), which steers transmit energy
    away from subspaces other links occupy, and the BS then pours its
    budget over its streams' estimated per-watt SINRs with single-user
    waterfilling. Streams the waterfiller zeroes stay as candidates and may
    resurface later; the final positive-power count is the link's explicit
    d_b. With no interference anywhere this reduces exactly to single-user
    eigenbeamforming with waterfilling.
    """
    if oci_cov is None:
        oci_cov = oci_covariance(cfg, drop)
    if users is None:
        users = list(range(cfg.num_mts))
    m, n = cfg.antennas_mt, cfg.antennas_bs
    noise = drop.noise_var
    budget = cfg.power_budget_per_bs
    d0 = min(n, m)
    by_bs = {b: [u for u in users if cfg.serving_bs(u) == b] for b in range(cfg.num_bs)}
    by_bs = {b: us for b, us in by_bs.items() if us}

    v_dirs = _init_right_singular(drop, cfg, users, d0)
    p_cur = {
        u: np.full(d0, budget / (len(by_bs[cfg.serving_bs(u)]) * d0)) for u in users
    }
    w_dirs = {u: np.zeros((m, d0), dtype=complex) for u in users}

    def rx_cov(u):
        r = noise * np.eye(m, dtype=complex) + oci_cov
        for k in users:
            hv = drop.h(u, cfg.serving_bs(k)) @ v_dirs[k]
            r += (hv * p_cur[k][None, :]) @ hv.conj().T
        return r

    def update_combiners():
        for u in users:
            t = rx_cov(u)
            heff = drop.h(u, cfg.serving_bs(u)) @ v_dirs[u]
            for l in range(d0):
                h = heff[:, l]
                b_mat = t - p_cur[u][l] * np.outer(h, h.conj())
                wl = herm_solve(b_mat, h)
                nw = np.linalg.norm(wl)
                w_dirs[u][:, l] = wl / nw if nw > 0 else wl

    def snapshot_tx():
        precoders = {}
        powers = {}
        counts = {}
        for u in users:
            b = cfg.serving_bs(u)
            active = np.flatnonzero(p_cur[u] > 0)
            cols = [fix_phase(v_dirs[u][:, l]) for l in active]
            precoders[(u, b)] = (
                np.column_stack(cols) if cols else np.zeros((n, 0), dtype=complex)
            )
            counts[u] = len(cols)
            for slot, l in enumerate(active):
                powers[(u, slot)] = float(p_cur[u][l])
        return TxStrategy(precoders=precoders, stream_counts=counts, per_stream_powers=powers)

    from .evaluate import achievable_rate

    trace: list[float] = []
    sweeps = 0
    converged = False
    for sweeps in range(1, cfg.max_iterations + 1):
        update_combiners()
        for b, served in by_bs.items():
            # reversed network: every stream's combiner radiates its power
            t_rev = noise * np.eye(n, dtype=complex)
            for k in users:
                hw = drop.h(k, b).conj().T @ w_dirs[k]
                t_rev += (hw * p_cur[k][None, :]) @ hw.conj().T
            for u in served:
                hw_own = drop.h(u, b).conj().T @ w_dirs[u]
                for l in range(d0):
                    h = hw_own[:, l]
                    b_mat = t_rev - p_cur[u][l] * np.outer(h, h.conj())
                    g = herm_solve(b_mat, h)
                    ng = np.linalg.norm(g)
                    if ng > 0:
                        v_dirs[u][:, l] = g / ng
            # whitened per-watt stream gains, own stream carved out
            gains = []
            for u in served:
                r = rx_cov(u)
                heff = drop.h(u, b) @ v_dirs[u]
                for l in range(d0):
                    h = heff[:, l]
                    r_minus = r - p_cur[u][l] * np.outer(h, h.conj())
                    gains.append((h.conj() @ herm_solve(r_minus, h)).real)
            wf = waterfill(np.array(gains), budget)
            for i, u in enumerate(served):
                p_cur[u] = wf.powers[i * d0 : (i + 1) * d0].copy()
        tx = snapshot_tx()
        total = sum(achievable_rate(u, drop, tx, cfg, oci_cov) for u in users)
        trace.append(float(total))
        if len(trace) >= 2 and abs(trace[-1] - trace[-2]) <= 1e-12 * max(1.0, abs(trace[-2])):
            converged = True
            break
    if len(trace) >= 2:
        converged = abs(trace[-1] - trace[-2]) <= 1e-6 * max(1.0, abs(trace[-2]))

    def cluster_rate():
        snap = snapshot_tx()
        return sum(achievable_rate(u, drop, snap, cfg, oci_cov) for u in users)

    # rank reconfiguration: collapsing an MT's share onto its strongest
    # whitened stream is kept only when the cluster rate strictly improves
    base = cluster_rate()
    for _ in range(2):
        improved = False
        for u in users:
            share = float(p_cur[u].sum())
            if share <= 0 or np.count_nonzero(p_cur[u]) == 1:
                continue
            r = rx_cov(u)
            heff = drop.h(u, cfg.serving_bs(u)) @ v_dirs[u]
            g_u = np.empty(d0)
            for l in range(d0):
                h = heff[:, l]
                r_minus = r - p_cur[u][l] * np.outer(h, h.conj())
                g_u[l] = (h.conj() @ herm_solve(r_minus, h)).real
            cand = np.zeros(d0)
            cand[int(np.argmax(g_u))] = share
            keep = p_cur[u]
            p_cur[u] = cand
            trial = cluster_rate()
            if trial > base + 1e-12:
                base = trial
                improved = True
            else:
                p_cur[u] = keep
        if not improved:
            break

    tx = snapshot_tx()
    from .evaluate import irc_receivers

    rx = irc_receivers(drop, cfg, tx, oci_cov)
    return SchemeOutput(
        tx=tx,
        rx=rx,
        iterations_used=sweeps,
        converged=converged,
        objective_trace=trace,
        aux={"d_b": {u: tx.stream_counts[u] for u in users}},
    )


def _su_eigen_waterfill(drop: ChannelDrop, cfg: ScenarioConfig) -> TxStrategy:
    """Interference-oblivious eigenbeamforming with waterfilling per MT."""
    precoders = {}
    powers = {}
    counts = {}
    for u in range(cfg.num_mts):
        b = cfg.serving_bs(u)
        share = cfg.power_budget_per_bs / cfg.mts_per_bs[b]
        _, s, vh = np.linalg.svd(drop.h(u, b))
        wf = waterfill(s**2 / drop.noise_var, share)
        active = wf.powers > 0
        vecs = vh[: s.size].conj().T[:, active]
        vecs = np.column_stack([fix_phase(vecs[:, i]) for i in range(vecs.shape[1])]) if active.any() else np.zeros((cfg.antennas_bs, 0), dtype=complex)
        precoders[(u, b)] = vecs
        counts[u] = int(active.sum())
        for l, pw in enumerate(wf.powers[active]):
            powers[(u, l)] = float(pw)
    return TxStrategy(precoders=precoders, stream_counts=counts, per_stream_powers=powers)


def baseline_full_reuse_su(
    drop: ChannelDrop,
    cfg: ScenarioConfig,
    oci_cov: np.ndarray | None = None,
) -> SchemeOutput:
    """Uncoordinated reuse-1: every BS runs single-user eigenbeamforming.

    The precoders depend only on the desired channel and the noise floor,
    never on alpha or beta; the interference shows up at evaluation time.
    """
    if oci_cov is None:
        oci_cov = oci_covariance(cfg, drop)
    tx = _su_eigen_waterfill(drop, cfg)
    from .evaluate import irc_receivers

    rx = irc_receivers(drop, cfg, tx, oci_cov)
    return SchemeOutput(tx=tx, rx=rx, iterations_used=0, converged=True, objective_trace=[])


def baseline_orthogonal_su(
    drop: ChannelDrop,
    cfg: ScenarioConfig,
    oci_cov: np.ndarray | None = None,
) -> SchemeOutput:
    """Orthogonal resource split: same transmission, 1/B prelog, no
    co-channel interference.

    Models a network-wide orthogonal reuse plan: each BS gets a private
    slice of the resource, so its MT hears neither the coordinated
    neighbours nor the surrounding tiers, only thermal noise.
    """
    out = baseline_full_reuse_su(drop, cfg, oci_cov)
    out.prelog = 1.0 / cfg.num_bs
    out.exclude_ici = True
    out.exclude_oci = True
    return out
