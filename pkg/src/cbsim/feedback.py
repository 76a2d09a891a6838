"""Limited feedback: codebooks, PMI/CQI quantization, quantized pipelines.

The BS side of a quantized scheme only ever sees codebook entries; the MTs
still combine with exact channel knowledge, so feedback error shows up as
residual inter-user interference after zero-forcing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ibc_schemes import (
    downlink_ia_directions,
    eigenbeam_directions,
    reference_tx_basis,
    zf_transmit,
)
from .evaluate import irc_receivers
from .ifc_schemes import SchemeOutput
from .model import ChannelDrop, ScenarioConfig, oci_covariance

CQI_GRID_DB = np.arange(-6.0, 25.0, 2.0)  # 4-bit uniform grid, -6..24 dB


@dataclass(frozen=True)
class Codebook:
    """entries is K x N, unit-norm rows; row index is the PMI."""

    entries: np.ndarray
    construction_id: str

    def __len__(self) -> int:
        return self.entries.shape[0]


@dataclass
class FeedbackReport:
    pmi: int
    cqi: float
    quantization_chordal_dist: float


def _dual_stage_entries() -> np.ndarray:
    """Rank-1 dual-stage family for 4 transmit antennas, 256 entries.

    First stage picks a group of four adjacent beams from a 64-times
    oversampled two-element DFT; second stage picks the beam within the
    group and one of four QPSK cophasing factors between the antenna
    halves: w = [v_m; phi_n v_m]/2 with v_m = [1, exp(j 2 pi m / 64)].
    Beam groups do not overlap, so all 256 entries are pairwise distinct.
    """
    entries = np.zeros((256, 4), dtype=complex)
    for i1 in range(16):
        for i2 in range(16):
            m = 4 * i1 + i2 // 4
            n = i2 % 4
            v = np.array([1.0, np.exp(2j * np.pi * m / 64.0)])
            phi = np.exp(1j * np.pi * n / 2.0)
            entries[16 * i1 + i2] = 0.5 * np.concatenate([v, phi * v])
    return entries


def _dft_grid_entries(n_antennas: int, num_entries: int) -> np.ndarray:
    """Single linear phase progression per entry, oversampled num_entries
    times: entry k has element a equal to exp(j 2 pi k a / K) / sqrt(N)."""
    k = np.arange(num_entries)[:, None]
    a = np.arange(n_antennas)[None, :]
    return np.exp(2j * np.pi * k * a / num_entries) / np.sqrt(n_antennas)


def build_codebook(n_antennas: int, construction_id: str, num_entries: int = 256) -> Codebook:
    if construction_id == "lte_dual_stage":
        if n_antennas != 4:
            raise ValueError("lte_dual_stage is defined for 4 transmit antennas")
        if num_entries != 256:
            raise ValueError("lte_dual_stage has a fixed size of 256 entries")
        entries = _dual_stage_entries()
    elif construction_id == "dft_grid":
        if n_antennas < 2:
            raise ValueError("dft_grid needs at least 2 antennas")
        if num_entries < 2:
            raise ValueError("dft_grid needs at least 2 entries")
        entries = _dft_grid_entries(n_antennas, num_entries)
    else:
        raise ValueError(f"unknown codebook construction: {construction_id}")
    return Codebook(entries=entries, construction_id=construction_id)


def quantize(
    eq_channel: np.ndarray,
    cb: Codebook,
    noise_floor: float = 1.0,
    tx_power: float = 1.0,
) -> FeedbackReport:
    """Pick the codebook entry closest to the channel direction.

    Maximizes |entry^H h| over the book (ties break to the lowest index);
    the reported distance is the chordal distance sqrt(1 - |.|^2). The CQI
    is a matched-beam SINR estimate quantized to the 4-bit grid; downstream
    zero-forcing ignores it, it is carried for completeness.
    """
    h = np.asarray(eq_channel, dtype=complex).ravel()
    nrm = np.linalg.norm(h)
    if nrm == 0:
        raise ValueError("cannot quantize a zero channel")
    hn = h / nrm
    corr = np.abs(cb.entries.conj() @ hn)
    pmi = int(np.argmax(corr))
    best = min(float(corr[pmi]), 1.0)
    chord = float(np.sqrt(max(0.0, 1.0 - best**2)))
    sinr = tx_power * nrm**2 * best**2 / noise_floor
    sinr_db = 10.0 * np.log10(max(sinr, 1e-30))
    idx = int(np.clip(np.round((sinr_db - CQI_GRID_DB[0]) / 2.0), 0, len(CQI_GRID_DB) - 1))
    return FeedbackReport(pmi=pmi, cqi=float(CQI_GRID_DB[idx]), quantization_chordal_dist=chord)


def run_quantized_scheme(
    scheme: str,
    drop: ChannelDrop,
    cfg: ScenarioConfig,
    cb: Codebook,
    oci_cov: np.ndarray | None = None,
) -> SchemeOutput:
    """Same pipeline as the ideal scheme, but the BS zero-forces the
    fed-back codebook entries instead of the true equivalent channels."""
    if oci_cov is None:
        oci_cov = oci_covariance(cfg, drop)
    if scheme == "downlink_ia":
        eqs = downlink_ia_directions(drop, cfg)
        basis = reference_tx_basis(cfg.antennas_bs)
    elif scheme == "eigenbeams":
        eqs = eigenbeam_directions(drop, cfg)
        basis = None
    else:
        raise ValueError(f"no quantized variant for scheme {scheme!r}")

    reports = {}
    rows = {}
    for eq in eqs:
        rep = quantize(
            eq.eq_channel,
            cb,
            noise_floor=drop.noise_var + drop.oci_elem_power,
            tx_power=cfg.power_budget_per_bs / len(eqs) * 2,
        )
        reports[eq.mt] = rep
        rows[eq.mt] = cb.entries[rep.pmi]

    tx = zf_transmit(eqs, cfg, basis=basis, rows_override=rows)
    rx = irc_receivers(
        drop, cfg, tx, oci_cov, within_cell_only=(scheme == "eigenbeams")
    )
    mean_chord = float(
        np.mean([r.quantization_chordal_dist for r in reports.values()])
    )
    return SchemeOutput(
        tx=tx,
        rx=rx,
        iterations_used=0,
        converged=True,
        objective_trace=[],
        rate_mode="combiner",
        aux={"feedback": reports, "mean_chordal_dist": mean_chord},
    )


def export_codebook(cb: Codebook, path: str) -> None:
    """One entry per line, comma-separated re+imj pairs, PMI order."""
    with open(path, "w", encoding="ascii") as fh:
        for row in cb.entries:
            fh.write(",".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row) + "\n")


def import_codebook(path: str, construction_id: str = "imported") -> Codebook:
    rows = []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rows.append([complex(tok) for tok in line.split(",")])
    if not rows:
        raise ValueError(f"{path} holds no codebook entries")
    return Codebook(entries=np.array(rows, dtype=complex), construction_id=construction_id)
