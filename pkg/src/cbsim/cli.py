"""Command-line front end: scenario runs, gain tables, codebook export.

Subcommands
    run       simulate (or tabulate closed forms) and write the results CSV
    gains     percentage gains of every scheme against a baseline, from a CSV
    codebook  export a quantization codebook as text

CSV schema (one row per scheme/SNR/metric/id):
    scheme,snr_db,alpha,beta,metric,mt_or_bs_id,value,stderr,drops
with metric one of per_mt_rate, per_bs_sum, cluster_sum. Identical seeds
produce byte-identical files. CBSIM_WORKERS sets the Monte Carlo worker
count (default 1); results do not depend on it.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field, replace

from . import theory
from .catalog import ALL_SCHEMES, FEEDBACK_CONSTRUCTIONS
from .evaluate import SchemeExecutionError, monte_carlo
from .feedback import build_codebook, export_codebook
from .model import InfeasibleConfiguration, ScenarioConfig

CSV_HEADER = ["scheme", "snr_db", "alpha", "beta", "metric", "mt_or_bs_id", "value", "stderr", "drops"]
THEORY_SCHEMES = ("full_reuse", "orthogonal", "ia", "jt")


class ConfigError(ValueError):
    """Bad configuration input; the message carries the diagnostics."""


@dataclass
class ExperimentSpec:
    """Everything one `run` needs, fully resolved."""

    preset: str | None
    theory_only: bool
    num_bs: int
    antennas_bs: int
    antennas_mt: int
    mts_per_bs: tuple[int, ...]
    alpha: float
    beta: float
    snr_db_grid: tuple[float, ...]
    schemes: tuple[str, ...]
    feedback: str
    drops: int
    seed: int
    max_iterations: int
    out: str | None = None

    def scenario(self) -> ScenarioConfig:
        return ScenarioConfig(
            num_bs=self.num_bs,
            antennas_bs=self.antennas_bs,
            antennas_mt=self.antennas_mt,
            mts_per_bs=self.mts_per_bs,
            alpha=self.alpha,
            beta=self.beta,
            snr_db_grid=self.snr_db_grid,
            num_drops=self.drops,
            rng_seed=self.seed,
            max_iterations=self.max_iterations,
        )


def _grid(start: float, stop: float, step: float) -> tuple[float, ...]:
    n = int(round((stop - start) / step))
    return tuple(start + step * k for k in range(n + 1))


PRESETS: dict[str, ExperimentSpec] = {
    # two-cell closed-form toy: four bounds over the SNR sweep
    "fig2": ExperimentSpec(
        preset="fig2", theory_only=True, num_bs=2, antennas_bs=2, antennas_mt=1,
        mts_per_bs=(1, 1), alpha=1.0, beta=0.25, snr_db_grid=_grid(0.0, 30.0, 2.5),
        schemes=THEORY_SCHEMES, feedback="ideal", drops=0, seed=12345, max_iterations=0,
    ),
    # three coordinated cells, one 2-antenna MT each, interference-free OCI
    "fig3": ExperimentSpec(
        preset="fig3", theory_only=False, num_bs=3, antennas_bs=4, antennas_mt=2,
        mts_per_bs=(1, 1, 1), alpha=1.0, beta=0.0, snr_db_grid=_grid(-10.0, 30.0, 2.5),
        schemes=("ia", "max_sinr", "wmmse", "reconfigurable", "full_reuse", "orthogonal"),
        feedback="ideal", drops=1000, seed=12345, max_iterations=10,
    ),
    # same cluster under partial coupling and out-of-cluster interference
    "fig4": ExperimentSpec(
        preset="fig4", theory_only=False, num_bs=3, antennas_bs=4, antennas_mt=2,
        mts_per_bs=(1, 1, 1), alpha=0.25, beta=0.25, snr_db_grid=_grid(-10.0, 30.0, 2.5),
        schemes=("ia", "max_sinr", "wmmse", "reconfigurable", "full_reuse", "orthogonal"),
        feedback="ideal", drops=1000, seed=12345, max_iterations=10,
    ),
    # two-cell multi-user downlink, 4x4 links
    "fig5": ExperimentSpec(
        preset="fig5", theory_only=False, num_bs=2, antennas_bs=4, antennas_mt=4,
        mts_per_bs=(4, 4), alpha=1.0, beta=0.25, snr_db_grid=_grid(0.0, 30.0, 5.0),
        schemes=("downlink_ia", "eigenbeams", "wmmse_ibc"),
        feedback="ideal", drops=1000, seed=12345, max_iterations=10,
    ),
    # same, ideal vs codebook feedback
    "fig6": ExperimentSpec(
        preset="fig6", theory_only=False, num_bs=2, antennas_bs=4, antennas_mt=4,
        mts_per_bs=(4, 4), alpha=1.0, beta=0.25, snr_db_grid=_grid(0.0, 30.0, 5.0),
        schemes=("downlink_ia", "eigenbeams", "downlink_ia_q", "eigenbeams_q"),
        feedback="lte_dual_stage", drops=1000, seed=12345, max_iterations=10,
    ),
}


def parse_snr_text(text: str) -> tuple[float, ...]:
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, stop, step = parts
            if step <= 0 or stop < start:
                raise ValueError
            return _grid(start, stop, step)
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise ConfigError(
            f"invalid snr specification {text!r}: use start:stop:step or a comma list"
        ) from None


_FILE_KEYS = {
    "preset": str,
    "alpha": float,
    "beta": float,
    "snr": parse_snr_text,
    "drops": int,
    "seed": int,
    "schemes": lambda t: tuple(s.strip() for s in t.split(",") if s.strip()),
    "feedback": str,
    "out": str,
    "num_bs": int,
    "antennas_bs": int,
    "antennas_mt": int,
    "mts_per_bs": lambda t: tuple(int(s) for s in t.split(",")),
    "max_iterations": int,
}


def load_config_file(path: str) -> dict:
    """key = value lines, # comments; unknown keys and bad values are
    reported with file and line number."""
    values: dict = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw.strip()!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _FILE_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _FILE_KEYS[key](val)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{path}:{lineno}: invalid value for {key}: {val!r}") from exc
    return values


def build_spec(args) -> ExperimentSpec:
    """Resolve preset defaults, config file entries, then CLI flags."""
    file_values = load_config_file(args.config) if args.config else {}
    preset_id = args.preset or file_values.get("preset")
    if preset_id is not None and preset_id not in PRESETS:
        raise ConfigError(f"unknown preset {preset_id!r}; choose from {', '.join(PRESETS)}")
    if preset_id is None:
        needed = {"num_bs", "antennas_bs", "antennas_mt", "mts_per_bs", "alpha", "beta", "snr", "schemes"}
        missing = needed - set(file_values)
        if missing:
            raise ConfigError(
                "no preset given and the config file leaves these unset: "
                + ", ".join(sorted(missing))
            )
        spec = ExperimentSpec(
            preset=None, theory_only=False,
            num_bs=file_values["num_bs"], antennas_bs=file_values["antennas_bs"],
            antennas_mt=file_values["antennas_mt"], mts_per_bs=file_values["mts_per_bs"],
            alpha=file_values["alpha"], beta=file_values["beta"],
            snr_db_grid=file_values["snr"], schemes=file_values["schemes"],
            feedback=file_values.get("feedback", "lte_dual_stage"),
            drops=file_values.get("drops", 1000), seed=file_values.get("seed", 12345),
            max_iterations=file_values.get("max_iterations", 10),
            out=file_values.get("out"),
        )
    else:
        spec = replace(PRESETS[preset_id])
        renames = {"snr": "snr_db_grid"}
        for key, val in file_values.items():
            if key == "preset":
                continue
            setattr(spec, renames.get(key, key), val)

    for flag, attr in [
        ("alpha", "alpha"), ("beta", "beta"), ("drops", "drops"), ("seed", "seed"),
        ("feedback", "feedback"), ("out", "out"), ("max_iterations", "max_iterations"),
    ]:
        val = getattr(args, flag, None)
        if val is not None:
            setattr(spec, attr, val)
    if args.snr is not None:
        spec.snr_db_grid = parse_snr_text(args.snr)
    if args.schemes is not None:
        spec.schemes = tuple(s.strip() for s in args.schemes.split(",") if s.strip())

    if spec.out is None:
        raise ConfigError("an output path is required (--out or out= in the config file)")
    if spec.theory_only:
        if tuple(spec.schemes) != THEORY_SCHEMES:
            raise ConfigError("the closed-form preset has a fixed scheme set; do not override it")
        return spec
    unknown = [s for s in spec.schemes if s not in ALL_SCHEMES]
    if unknown:
        raise ConfigError(
            f"unknown schemes: {', '.join(unknown)}; registered: {', '.join(ALL_SCHEMES)}"
        )
    if spec.feedback not in FEEDBACK_CONSTRUCTIONS + ("ideal",):
        raise ConfigError(
            f"unknown feedback setting {spec.feedback!r}; "
            f"use ideal or one of {', '.join(FEEDBACK_CONSTRUCTIONS)}"
        )
    if spec.drops < 1:
        raise ConfigError("drops must be >= 1")
    return spec


def _fmt(x) -> str:
    return f"{x:.12g}"


def _write_csv(path: str, rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        writer.writerows(rows)


def _theory_rows(spec: ExperimentSpec) -> list[list]:
    rows = []
    table = theory.gain_table(spec.snr_db_grid, spec.alpha, spec.beta)
    rates = {
        "full_reuse": [r.rate_full_reuse for r in table],
        "orthogonal": [r.rate_orthogonal for r in table],
        "ia": [r.rate_ia for r in table],
        "jt": [r.rate_jt for r in table],
    }
    for sid in THEORY_SCHEMES:
        for i, row in enumerate(table):
            rate = rates[sid][i]
            common = [sid, _fmt(row.snr_db), _fmt(spec.alpha), _fmt(spec.beta)]
            for mt in range(2):
                rows.append(common + ["per_mt_rate", str(mt), _fmt(rate), "0", "0"])
            for bs in range(2):
                rows.append(common + ["per_bs_sum", str(bs), _fmt(rate), "0", "0"])
            rows.append(common + ["cluster_sum", "", _fmt(2.0 * rate), "0", "0"])
    return rows


def _sim_rows(spec: ExperimentSpec, reports) -> list[list]:
    rows = []
    for sid in spec.schemes:
        for snr in spec.snr_db_grid:
            rep = reports[sid][snr]
            common = [sid, _fmt(snr), _fmt(spec.alpha), _fmt(spec.beta)]
            for mt in sorted(rep.per_mt_rate):
                rows.append(common + [
                    "per_mt_rate", str(mt), _fmt(rep.per_mt_rate[mt]),
                    _fmt(rep.stderr_per_mt.get(mt, 0.0)), str(rep.num_drops_used),
                ])
            for bs in sorted(rep.per_bs_sum):
                rows.append(common + [
                    "per_bs_sum", str(bs), _fmt(rep.per_bs_sum[bs]),
                    _fmt(rep.stderr_per_bs.get(bs, 0.0)), str(rep.num_drops_used),
                ])
            rows.append(common + [
                "cluster_sum", "", _fmt(rep.cluster_sum), _fmt(rep.stderr),
                str(rep.num_drops_used),
            ])
    return rows


def _print_theory_summary(spec: ExperimentSpec) -> None:
    print(f"closed-form rates, alpha={spec.alpha} beta={spec.beta}")
    print("snr_db  full_reuse  orthogonal  ia      jt      gain_ia%  gain_jt%")
    for row in theory.gain_table(spec.snr_db_grid, spec.alpha, spec.beta):
        print(
            f"{row.snr_db:6.1f}  {row.rate_full_reuse:10.4f}  {row.rate_orthogonal:10.4f}  "
            f"{row.rate_ia:6.4f}  {row.rate_jt:6.4f}  {row.gain_ia_pct:8.1f}  {row.gain_jt_pct:8.1f}"
        )


def _print_sim_summary(spec: ExperimentSpec, reports) -> None:
    print(f"mean cluster sum rate (bits/s/Hz), alpha={spec.alpha} beta={spec.beta}, "
          f"{spec.drops} drops, seed {spec.seed}")
    header = "snr_db  " + "  ".join(f"{sid:>14}" for sid in spec.schemes)
    print(header)
    for snr in spec.snr_db_grid:
        cells = "  ".join(f"{reports[sid][snr].cluster_sum:14.4f}" for sid in spec.schemes)
        print(f"{snr:6.1f}  {cells}")
    if "orthogonal" in spec.schemes:
        others = [s for s in spec.schemes if s != "orthogonal"]
        print("gain over orthogonal (%, by snr):")
        for snr in spec.snr_db_grid:
            base = reports["orthogonal"][snr].cluster_sum
            cells = "  ".join(
                f"{sid}={100.0 * (reports[sid][snr].cluster_sum / base - 1.0):+.1f}"
                for sid in others
            )
            print(f"{snr:6.1f}  {cells}")
    for sid in spec.schemes:
        if not sid.endswith("_q"):
            continue
        base = sid[:-2]
        if base not in spec.schemes:
            continue
        losses = [
            100.0 * (1.0 - reports[sid][snr].cluster_sum / reports[base][snr].cluster_sum)
            for snr in spec.snr_db_grid
            if reports[base][snr].cluster_sum > 0
        ]
        if losses:
            print(f"rate loss of {sid} vs {base}: {sum(losses) / len(losses):.1f}% "
                  f"(mean over the SNR grid)")


def _render_figure(spec: ExperimentSpec, csv_path: str) -> None:
    if spec.preset is None:
        raise ConfigError("--render needs a preset so the figure recipe is known")
    try:
        from cbsim_plots import render_figure
    except ImportError as exc:
        raise ConfigError(
            "--render needs the cbsim-plots package (pip install ./plots)"
        ) from exc
    out = csv_path.rsplit(".", 1)[0] + ".png"
    summary = render_figure(spec.preset, csv_path, out)
    print(f"rendered {spec.preset} with {summary.num_curves} curves to {out}")


def cmd_run(args) -> int:
    spec = build_spec(args)
    if spec.theory_only:
        _write_csv(spec.out, _theory_rows(spec))
        _print_theory_summary(spec)
    else:
        cfg = spec.scenario()
        reports = monte_carlo(cfg, list(spec.schemes), feedback_construction=spec.feedback)
        _write_csv(spec.out, _sim_rows(spec, reports))
        _print_sim_summary(spec, reports)
    print(f"wrote {spec.out}")
    if args.render:
        _render_figure(spec, spec.out)
    return 0


def read_results_csv(path: str) -> dict[str, dict[float, float]]:
    """cluster_sum values per scheme and SNR from a results CSV."""
    out: dict[str, dict[float, float]] = {}
    try:
        with open(path, newline="", encoding="ascii") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != CSV_HEADER:
                raise ConfigError(f"{path} does not follow the results CSV schema")
            for row in reader:
                if row["metric"] != "cluster_sum":
                    continue
                out.setdefault(row["scheme"], {})[float(row["snr_db"])] = float(row["value"])
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not out:
        raise ConfigError(f"{path} holds no cluster_sum rows")
    return out


def compute_gains(path: str, baseline: str) -> list[tuple[float, str, float, float]]:
    """(snr_db, scheme, value, gain_pct) rows against the baseline scheme."""
    data = read_results_csv(path)
    if baseline not in data:
        raise ConfigError(
            f"baseline {baseline!r} not in {path}; schemes present: {', '.join(sorted(data))}"
        )
    rows = []
    for snr in sorted(data[baseline]):
        base = data[baseline][snr]
        for sid in data:
            if snr not in data[sid]:
                continue
            gain = 100.0 * (data[sid][snr] / base - 1.0) if base > 0 else float("nan")
            rows.append((snr, sid, data[sid][snr], gain))
    return rows


def cmd_gains(args) -> int:
    rows = compute_gains(args.csv, args.baseline)
    print(f"gains relative to {args.baseline} (cluster sum rate)")
    print("snr_db  scheme            value     gain_pct")
    for snr, sid, value, gain in rows:
        print(f"{snr:6.1f}  {sid:<16}  {value:8.4f}  {gain:+8.1f}")
    return 0


def cmd_codebook_export(args) -> int:
    cb = build_codebook(args.antennas, args.construction, num_entries=args.entries)
    export_codebook(cb, args.out)
    print(f"wrote {len(cb)} entries ({cb.construction_id}, {args.antennas} antennas) to {args.out}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbsim",
        description="Coordinated beamforming link simulator",
        epilog="CBSIM_WORKERS sets the Monte Carlo process count (default 1); "
               "results are identical for any value.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a scenario and write the results CSV")
    run.add_argument("--preset", choices=sorted(PRESETS), help="named scenario preset")
    run.add_argument("--config", help="key = value config file (preset inheritance allowed)")
    run.add_argument("--alpha", type=float, help="intra-cluster interference fraction")
    run.add_argument("--beta", type=float, help="out-of-cluster interference fraction")
    run.add_argument("--snr", help="SNR grid in dB: start:stop:step or comma list")
    run.add_argument("--drops", type=int, help="Monte Carlo channel drops")
    run.add_argument("--seed", type=int, help="random seed")
    run.add_argument("--schemes", help="comma-separated scheme ids")
    run.add_argument("--feedback", help="ideal, lte_dual_stage, or dft_grid")
    run.add_argument("--max-iterations", dest="max_iterations", type=int,
                     help="outer iteration budget for the iterative schemes")
    run.add_argument("--out", help="output CSV path")
    run.add_argument("--render", action="store_true",
                     help="also render the preset figure next to the CSV (needs cbsim-plots)")
    run.set_defaults(func=cmd_run)

    gains = sub.add_parser("gains", help="percentage gains against a baseline scheme")
    gains.add_argument("--csv", required=True, help="results CSV from `cbsim run`")
    gains.add_argument("--baseline", required=True, help="scheme id to compare against")
    gains.set_defaults(func=cmd_gains)

    cb = sub.add_parser("codebook", help="codebook utilities")
    cbsub = cb.add_subparsers(dest="cb_command", required=True)
    export = cbsub.add_parser("export", help="write a codebook as text, one entry per line")
    export.add_argument("--antennas", type=int, default=4, help="transmit antenna count")
    export.add_argument("--construction", default="lte_dual_stage",
                        choices=sorted(FEEDBACK_CONSTRUCTIONS))
    export.add_argument("--entries", type=int, default=256, help="codebook size")
    export.add_argument("--out", required=True, help="output text file")
    export.set_defaults(func=cmd_codebook_export)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, InfeasibleConfiguration, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SchemeExecutionError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
