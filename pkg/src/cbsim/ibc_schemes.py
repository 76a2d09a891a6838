"""Downlink multi-user schemes for two coordinated cells.

Both schemes reduce each MT to an equivalent MISO link through a receive
combining direction chosen before any feedback happens, then zero-force the
stacked equivalent rows at the BS. Final receivers are interference
rejection combiners, built from whatever each scheme lets an MT know:

- The alignment scheme requires its MTs to track the other cell's channel
  and the agreed transmit basis, so their combiners use the full model
  covariance. Against that covariance the per-stream MMSE row is optimal,
  so the refinement never lowers a rate relative to the initial direction.
- The eigenbeam scheme never looks at the other cell; its MTs whiten only
  their own cell's residual streams plus the OCI-and-noise floor, and the
  cross-cell interference lands on them unmitigated. Rates are always
  evaluated against the full interference either way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evaluate import irc_receivers
from .ifc_schemes import SchemeOutput, wmmse
from .model import (
    ChannelDrop,
    InfeasibleConfiguration,
    RankDeficientChannel,
    ScenarioConfig,
    TxStrategy,
    oci_covariance,
)
from .numerics import dominant_left_singular_vector, fix_phase


@dataclass
class EquivalentMiso:
    """One MT collapsed to a MISO link: y = eq_channel @ x + noise.

    combiner_dir is the unit receive direction; eq_channel the resulting
    1 x N row (stored as a length-N array) of combiner_dir^H H.
    """

    mt: int
    combiner_dir: np.ndarray
    eq_channel: np.ndarray


def reference_tx_basis(n_antennas: int) -> np.ndarray:
    """Agreed transmit basis each BS confines itself to: first N-1 columns
    of the identity. Any full-rank tall basis works as long as both ends
    agree on it; the identity keeps it parameter-free."""
    return np.eye(n_antennas, dtype=complex)[:, : n_antennas - 1]


def _served_users(cfg: ScenarioConfig, k_per_bs: int) -> list[list[int]]:
    served = []
    for b in range(cfg.num_bs):
        users = cfg.users_of(b)
        if len(users) < k_per_bs:
            raise InfeasibleConfiguration(
                f"BS {b} serves {len(users)} MTs but the scheme needs {k_per_bs}"
            )
        served.append(users[:k_per_bs])
    return served


def downlink_ia_directions(drop: ChannelDrop, cfg: ScenarioConfig) -> list[EquivalentMiso]:
    """Combining directions that pre-null the other cell's reference basis.

    Each MT points its combiner orthogonal to the (N-1)-dimensional image
    of the interferer's reference basis through its cross channel. With
    M = N that direction is unique; with M > N the freedom left is spent on
    the best-aligned direction for the desired channel.
    """
    if cfg.num_bs != 2:
        raise InfeasibleConfiguration("downlink interference alignment needs exactly 2 BSs")
    n, m = cfg.antennas_bs, cfg.antennas_mt
    if m < n:
        raise InfeasibleConfiguration("needs at least as many MT antennas as BS antennas")
    basis = reference_tx_basis(n)
    served = _served_users(cfg, n - 1)
    out = []
    for b in range(2):
        other = 1 - b
        for u in served[b]:
            image = drop.h(u, other) @ basis
            uu, s, _ = np.linalg.svd(image)
            rank = int(np.sum(s > 1e-12 * max(s[0], 1.0))) if s.size else 0
            comp = uu[:, rank:]
            if comp.shape[1] == 0:
                raise RankDeficientChannel(f"no interference-free direction for MT {u}")
            proj = comp.conj().T @ drop.h(u, b)
            c = dominant_left_singular_vector(proj)
            w = fix_phase(comp @ c)
            out.append(EquivalentMiso(mt=u, combiner_dir=w, eq_channel=w.conj() @ drop.h(u, b)))
    return out


def eigenbeam_directions(drop: ChannelDrop, cfg: ScenarioConfig) -> list[EquivalentMiso]:
    """Combine along each MT's strongest left singular direction."""
    if cfg.num_bs != 2:
        raise InfeasibleConfiguration("eigenbeam transmission here is defined for 2 BSs")
    served = _served_users(cfg, cfg.antennas_bs)
    out = []
    for b in range(2):
        for u in served[b]:
            w = dominant_left_singular_vector(drop.h(u, b))
            out.append(EquivalentMiso(mt=u, combiner_dir=w, eq_channel=w.conj() @ drop.h(u, b)))
    return out


def zf_transmit(
    eqs: list[EquivalentMiso],
    cfg: ScenarioConfig,
    basis: np.ndarray | None = None,
    rows_override: dict[int, np.ndarray] | None = None,
) -> TxStrategy:
    """Zero-force the stacked equivalent rows per BS, equal power per MT.

    With a basis, both the rows and the precoders are confined to its
    column space. rows_override substitutes fed-back directions for the
    true equivalent channels (quantized feedback path). Pseudo-inverse
    columns are renormalized to unit vectors; a numerically rank-deficient
    stack raises RankDeficientChannel.
    """
    n = cfg.antennas_bs
    by_bs: dict[int, list[EquivalentMiso]] = {}
    for eq in eqs:
        by_bs.setdefault(cfg.serving_bs(eq.mt), []).append(eq)

    precoders: dict[tuple[int, int], np.ndarray] = {}
    powers: dict[tuple[int, int], float] = {}
    counts: dict[int, int] = {u: 0 for u in range(cfg.num_mts)}
    for b, group in by_bs.items():
        rows = []
        for eq in group:
            row = rows_override[eq.mt] if rows_override is not None else eq.eq_channel
            rows.append(row if basis is None else row @ basis)
        a = np.array(rows)
        s = np.linalg.svd(a, compute_uv=False)
        if s.size == 0 or s[-1] <= 1e-12 * s[0]:
            raise RankDeficientChannel(f"stacked equivalent channels of BS {b} are singular")
        f = np.linalg.pinv(a)
        share = cfg.power_budget_per_bs / len(group)
        for col, eq in enumerate(group):
            v = f[:, col]
            if basis is not None:
                v = basis @ v
            v = v / np.linalg.norm(v)
            precoders[(eq.mt, b)] = v[:, None]
            powers[(eq.mt, 0)] = share
            counts[eq.mt] = 1
    return TxStrategy(precoders=precoders, stream_counts=counts, per_stream_powers=powers)


def _zf_scheme_output(drop, cfg, oci_cov, eqs, basis, cross_blind=False) -> SchemeOutput:
    tx = zf_transmit(eqs, cfg, basis=basis)
    rx = irc_receivers(drop, cfg, tx, oci_cov, within_cell_only=cross_blind)
    return SchemeOutput(
        tx=tx,
        rx=rx,
        iterations_used=0,
        converged=True,
        objective_trace=[],
        rate_mode="combiner",
        aux={"equivalent_misos": eqs},
    )


def downlink_ia(
    drop: ChannelDrop,
    cfg: ScenarioConfig,
    oci_cov: np.ndarray | None = None,
) -> SchemeOutput:
    """Serve N-1 single-stream MTs per BS with cross-cell interference
    pre-nulled by the combiner choice, then zero-force inside the cell."""
    if oci_cov is None:
        oci_cov = oci_covariance(cfg, drop)
    eqs = downlink_ia_directions(drop, cfg)
    return _zf_scheme_output(drop, cfg, oci_cov, eqs, reference_tx_basis(cfg.antennas_bs))


def eigenbeams(
    drop: ChannelDrop,
    cfg: ScenarioConfig,
    oci_cov: np.ndarray | None = None,
) -> SchemeOutput:
    """Serve N single-stream MTs per BS on their dominant eigen-directions.

    The scheme ignores the other cell end to end: the direction choice, the
    zero-forcing, and the final combiners all see only the serving cell, so
    cross-cell interference is taken as-is (its receivers hold no estimate
    of the other cell's channel to reject it with).
    """
    if oci_cov is None:
        oci_cov = oci_covariance(cfg, drop)
    eqs = eigenbeam_directions(drop, cfg)
    return _zf_scheme_output(drop, cfg, oci_cov, eqs, basis=None, cross_blind=True)


def wmmse_ibc_reference(
    drop: ChannelDrop,
    cfg: ScenarioConfig,
    oci_cov: np.ndarray | None = None,
) -> SchemeOutput:
    """The weighted-MMSE optimizer run on the same N-1 MTs per BS that the
    alignment scheme serves, as the iterative reference point."""
    if cfg.num_bs != 2:
        raise InfeasibleConfiguration("the reference comparison is defined for 2 BSs")
    served = _served_users(cfg, cfg.antennas_bs - 1)
    users = [u for group in served for u in group]
    return wmmse(drop, cfg, oci_cov, users=users)
