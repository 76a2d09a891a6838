"""Closed-form rate bounds for the two-cell toy scenario.

Single-antenna MTs, one per BS, B = 2, with intra-cluster interference
fraction alpha and out-of-cluster fraction beta. All rates are per-MT in
bits/s/Hz. These are classical MISO bounds with deterministic unit link
gain; the Monte Carlo engine simulates the faded counterparts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ToyScenario:
    alpha: float
    beta: float
    snr_db: float

    @property
    def snr(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)


def _check(alpha: float, beta: float, snr: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    if snr < 0:
        raise ValueError("snr must be nonnegative (linear scale)")


def rate_full_reuse(snr: float, alpha: float, beta: float) -> float:
    """Both BSs transmit at full power with no coordination."""
    _check(alpha, beta, snr)
    return float(np.log2(1.0 + snr / (alpha * snr + beta * snr + 1.0)))


def rate_orthogonal(snr: float, alpha: float, beta: float) -> float:
    """Each BS gets half the resources; intra-cluster interference vanishes."""
    _check(alpha, beta, snr)
    return float(0.5 * np.log2(1.0 + snr / (beta * snr + 1.0)))


def rate_ia(snr: float, alpha: float, beta: float) -> float:
    """Interference alignment: full resources, intra-cluster removed."""
    _check(alpha, beta, snr)
    return float(np.log2(1.0 + snr / (beta * snr + 1.0)))


def rate_jt(snr: float, alpha: float, beta: float) -> float:
    """Joint transmission: the cross link adds coherently to the signal."""
    _check(alpha, beta, snr)
    return float(np.log2(1.0 + (1.0 + alpha) * snr / (beta * snr + 1.0)))


@dataclass(frozen=True)
class GainRow:
    snr_db: float
    rate_full_reuse: float
    rate_orthogonal: float
    rate_ia: float
    rate_jt: float
    gain_full_reuse_pct: float
    gain_ia_pct: float
    gain_jt_pct: float


def gain_table(snr_db_grid, alpha: float, beta: float) -> list[GainRow]:
    """All four closed-form rates plus percentage gains over orthogonal."""
    rows = []
    for snr_db in snr_db_grid:
        snr = 10.0 ** (float(snr_db) / 10.0)
        fr = rate_full_reuse(snr, alpha, beta)
        orth = rate_orthogonal(snr, alpha, beta)
        ia = rate_ia(snr, alpha, beta)
        jt = rate_jt(snr, alpha, beta)
        rows.append(
            GainRow(
                snr_db=float(snr_db),
                rate_full_reuse=fr,
                rate_orthogonal=orth,
                rate_ia=ia,
                rate_jt=jt,
                gain_full_reuse_pct=100.0 * (fr / orth - 1.0),
                gain_ia_pct=100.0 * (ia / orth - 1.0),
                gain_jt_pct=100.0 * (jt / orth - 1.0),
            )
        )
    return rows
