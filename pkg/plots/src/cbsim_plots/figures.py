"""Figure recipes and rendering for results CSVs.

A recipe names the curves of one figure: scheme, metric, label, line
style. Rendering reads nothing but the CSV, draws error bars from the
stderr column, and refuses to write an image unless every requested
curve is present in the data.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend pinned above

CSV_HEADER = [
    "scheme", "snr_db", "alpha", "beta", "metric", "mt_or_bs_id",
    "value", "stderr", "drops",
]


class RecipeError(ValueError):
    """The CSV cannot satisfy the recipe; the message says why."""


@dataclass(frozen=True)
class CurveSpec:
    """One line of a figure.

    metric is a CSV metric name, or per_bs_mean for the cluster sum
    divided by the number of BS rows the file carries.
    """

    scheme: str
    metric: str
    label: str
    style: str = "-"
    marker: str = "o"


@dataclass(frozen=True)
class FigureRecipe:
    figure_id: str
    csv_path: str
    out_path: str
    curves: tuple[CurveSpec, ...]
    title: str
    ylabel: str
    xlabel: str = "SNR (dB)"


@dataclass(frozen=True)
class RenderSummary:
    """What was drawn: curve labels, the SNR grid, and the plotted data."""

    figure_id: str
    out_path: str
    num_curves: int
    curve_labels: tuple[str, ...]
    snr_grid: tuple[float, ...]
    values: dict[str, tuple[float, ...]]
    stderrs: dict[str, tuple[float, ...]]


_SUM_RATE = "Achievable sum rate (bits/s/Hz)"
_BS_RATE = "Achievable rate per BS (bits/s/Hz)"

_IFC_CURVES = (
    CurveSpec("max_sinr", "cluster_sum", "Maximum SINR", "-", "o"),
    CurveSpec("wmmse", "cluster_sum", "WMMSE", "-", "v"),
    CurveSpec("reconfigurable", "cluster_sum", "Reconfigurable", "-", "^"),
    CurveSpec("ia", "cluster_sum", "IA", "--", "s"),
    CurveSpec("full_reuse", "cluster_sum", "Full reuse", ":", "x"),
    CurveSpec("orthogonal", "cluster_sum", "Orthogonal", ":", "d"),
)

RECIPES: dict[str, dict] = {
    "fig2": dict(
        title="Closed-form rates, two-cell toy scenario",
        ylabel=_SUM_RATE,
        curves=(
            CurveSpec("jt", "cluster_sum", "JT CoMP", "-", "o"),
            CurveSpec("ia", "cluster_sum", "IA", "-", "s"),
            CurveSpec("full_reuse", "cluster_sum", "Full reuse", "--", "x"),
            CurveSpec("orthogonal", "cluster_sum", "Orthogonal", "--", "d"),
        ),
    ),
    "fig3": dict(
        title="Coordinated beamforming, strong coupling (alpha=1, beta=0)",
        ylabel=_SUM_RATE,
        curves=_IFC_CURVES,
    ),
    "fig4": dict(
        title="Coordinated beamforming, partial coupling (alpha=0.25, beta=0.25)",
        ylabel=_SUM_RATE,
        curves=_IFC_CURVES,
    ),
    "fig5": dict(
        title="Two-cell multi-user downlink, rate per BS",
        ylabel=_BS_RATE,
        curves=(
            CurveSpec("downlink_ia", "per_bs_mean", "Downlink IA", "-", "o"),
            CurveSpec("eigenbeams", "per_bs_mean", "Eigenbeams", "-", "s"),
            CurveSpec("wmmse_ibc", "per_bs_mean", "WMMSE", "--", "v"),
        ),
    ),
    "fig6": dict(
        title="Ideal vs standardized codebook feedback, rate per BS",
        ylabel=_BS_RATE,
        curves=(
            CurveSpec("downlink_ia", "per_bs_mean", "Downlink IA, ideal", "-", "o"),
            CurveSpec("downlink_ia_q", "per_bs_mean", "Downlink IA, codebook", "--", "o"),
            CurveSpec("eigenbeams", "per_bs_mean", "Eigenbeams, ideal", "-", "s"),
            CurveSpec("eigenbeams_q", "per_bs_mean", "Eigenbeams, codebook", "--", "s"),
        ),
    ),
}


def recipe_for(figure_id: str, csv_path: str, out_path: str) -> FigureRecipe:
    if figure_id not in RECIPES:
        raise RecipeError(
            f"unknown figure id {figure_id!r}; known: {', '.join(sorted(RECIPES))}"
        )
    return FigureRecipe(
        figure_id=figure_id, csv_path=csv_path, out_path=out_path,
        **RECIPES[figure_id],
    )


def _load_rows(path: str) -> list[dict]:
    try:
        with open(path, newline="", encoding="ascii") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != CSV_HEADER:
                raise RecipeError(f"{path} does not follow the results CSV schema")
            rows = list(reader)
    except OSError as exc:
        raise RecipeError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise RecipeError(f"{path} holds no data rows")
    return rows


def _available_pairs(rows: list[dict]) -> str:
    pairs = sorted({(r["scheme"], r["metric"]) for r in rows})
    return ", ".join(f"{s}/{m}" for s, m in pairs)


def _curve_points(rows: list[dict], curve: CurveSpec):
    """(snr, value, stderr) triples for one curve, sorted by SNR."""
    base_metric = "cluster_sum" if curve.metric == "per_bs_mean" else curve.metric
    picked = [r for r in rows
              if r["scheme"] == curve.scheme and r["metric"] == base_metric]
    if not picked:
        raise RecipeError(
            f"curve {curve.scheme}/{curve.metric} is not in the CSV; "
            f"available: {_available_pairs(rows)}"
        )
    denom = 1.0
    if curve.metric == "per_bs_mean":
        bs_ids = {r["mt_or_bs_id"] for r in rows
                  if r["scheme"] == curve.scheme and r["metric"] == "per_bs_sum"}
        if not bs_ids:
            raise RecipeError(
                f"curve {curve.scheme}/{curve.metric} needs per_bs_sum rows to "
                f"count the BSs; available: {_available_pairs(rows)}"
            )
        denom = float(len(bs_ids))
    pts = sorted(
        (float(r["snr_db"]), float(r["value"]) / denom, float(r["stderr"]) / denom)
        for r in picked
    )
    snrs, vals, errs = zip(*pts)
    return snrs, vals, errs


def render(recipe: FigureRecipe) -> RenderSummary:
    rows = _load_rows(recipe.csv_path)
    curves = []
    for spec in recipe.curves:
        snrs, vals, errs = _curve_points(rows, spec)
        curves.append((spec, snrs, vals, errs))
    grids = {snrs for _, snrs, _, _ in curves}
    if len(grids) != 1:
        raise RecipeError("the selected curves disagree on the SNR grid")
    grid = grids.pop()

    # everything resolved; only now is the output file touched
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    for spec, snrs, vals, errs in curves:
        ax.errorbar(
            snrs, vals, yerr=errs, label=spec.label, linestyle=spec.style,
            marker=spec.marker, markersize=4, linewidth=1.4, capsize=2,
        )
    ax.set_xlabel(recipe.xlabel)
    ax.set_ylabel(recipe.ylabel)
    ax.set_title(recipe.title)
    ax.grid(True, alpha=0.35)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(recipe.out_path)
    plt.close(fig)

    return RenderSummary(
        figure_id=recipe.figure_id,
        out_path=recipe.out_path,
        num_curves=len(curves),
        curve_labels=tuple(spec.label for spec, _, _, _ in curves),
        snr_grid=grid,
        values={spec.label: tuple(vals) for spec, _, vals, _ in curves},
        stderrs={spec.label: tuple(errs) for spec, _, _, errs in curves},
    )


def render_figure(figure_id: str, csv_path: str, out_path: str) -> RenderSummary:
    """Render one named figure from a results CSV."""
    return render(recipe_for(figure_id, csv_path, out_path))
