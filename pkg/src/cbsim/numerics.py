"""Shared linear-algebra helpers: waterfilling, singular vectors, MMSE rows."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class WaterfillResult:
    powers: np.ndarray
    water_level: float


def waterfill(gains, budget: float) -> WaterfillResult:
    """Allocate `budget` over parallel channels to maximize sum log2(1+g*p).

    KKT solution: p_i = max(0, mu - 1/g_i) with the water level mu chosen so
    active powers sum to the budget (within 1e-9). Channels with g <= 0 get
    zero power. Powers come back aligned with the input order.
    """
    g = np.asarray(gains, dtype=float)
    if g.size == 0:
        raise ValueError("waterfill needs at least one gain")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    if not np.any(g > 0):
        raise ValueError("waterfill needs at least one positive gain")
    if budget == 0.0:
        return WaterfillResult(np.zeros_like(g), 0.0)

    order = np.argsort(-g)
    gs = g[order]
    pos = gs > 0
    inv = np.where(pos, 1.0 / np.where(pos, gs, 1.0), np.inf)
    powers_sorted = np.zeros_like(gs)
    # Try the k strongest channels as the active set, largest k that works.
    for k in range(int(pos.sum()), 0, -1):
        mu = (budget + inv[:k].sum()) / k
        p = mu - inv[:k]
        if p[-1] >= 0:
            powers_sorted[:k] = p
            break
    else:  # pragma: no cover - unreachable given a positive gain exists
        raise ValueError("waterfilling failed to find an active set")

    powers = np.zeros_like(g)
    powers[order] = powers_sorted
    assert abs(powers.sum() - budget) <= 1e-9 * max(1.0, budget)
    return WaterfillResult(powers, mu)


def fix_phase(v: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Rotate a vector so its first non-negligible entry is real positive."""
    idx = np.flatnonzero(np.abs(v) > tol)
    if idx.size == 0:
        return v.copy()
    ph = v[idx[0]] / abs(v[idx[0]])
    return v * np.conj(ph)


def dominant_left_singular_vector(a: np.ndarray) -> np.ndarray:
    """Unit left singular vector of the largest singular value.

    The phase is fixed (first non-negligible entry real positive) so the
    result is deterministic.
    """
    u, _, _ = np.linalg.svd(a)
    return fix_phase(u[:, 0])


def herm_solve(r: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve R x = b for Hermitian positive definite R.

    Cholesky-based; if factorization fails, a relative jitter of
    1e-12 * trace(R)/dim is added once. Failure beyond that raises.
    """
    r = np.asarray(r)
    try:
        l = np.linalg.cholesky(r)
    except np.linalg.LinAlgError:
        jitter = 1e-12 * np.trace(r).real / r.shape[0]
        try:
            l = np.linalg.cholesky(r + jitter * np.eye(r.shape[0]))
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError(
                "covariance is not positive definite even with jitter"
            ) from exc
    y = np.linalg.solve(l, b)
    return np.linalg.solve(l.conj().T, y)


def mmse_combiner(h_eff: np.ndarray, cov: np.ndarray) -> np.ndarray:
    """Per-stream linear MMSE receive rows for an effective channel.

    h_eff is M x d (one column per stream), cov the interference-plus-noise
    covariance the caller composed. Returns d x M with unit-norm rows, each
    row proportional to (column^H cov^-1).
    """
    h_eff = np.asarray(h_eff)
    if h_eff.ndim == 1:
        h_eff = h_eff[:, None]
    rows = herm_solve(cov, h_eff).conj().T
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise ValueError("zero effective channel has no MMSE combiner")
    return rows / norms


def logdet_hermitian(a: np.ndarray) -> float:
    """log2 det of a Hermitian positive definite matrix."""
    sign, logdet = np.linalg.slogdet(a)
    if sign.real <= 0:
        raise np.linalg.LinAlgError("matrix is not positive definite")
    return float(logdet / np.log(2.0))
