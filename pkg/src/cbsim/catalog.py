"""Scheme registry: ids, shape compatibility, runner resolution."""

from __future__ import annotations

from . import feedback, ibc_schemes, ifc_schemes
from .ifc_schemes import check_alignment_feasible, default_stream_count
from .model import InfeasibleConfiguration, ScenarioConfig

IFC_SCHEMES = ("ia", "max_sinr", "wmmse", "reconfigurable", "full_reuse", "orthogonal")
IBC_SCHEMES = ("downlink_ia", "eigenbeams", "wmmse_ibc")
QUANTIZED_SCHEMES = ("downlink_ia_q", "eigenbeams_q")
ALL_SCHEMES = IFC_SCHEMES + IBC_SCHEMES + QUANTIZED_SCHEMES

FEEDBACK_CONSTRUCTIONS = ("lte_dual_stage", "dft_grid")


def compatibility_error(scheme: str, cfg: ScenarioConfig) -> str | None:
    """Why a scheme cannot run on this configuration, or None if it can."""
    n, m = cfg.antennas_bs, cfg.antennas_mt
    if scheme in ("ia", "max_sinr"):
        if any(k != 1 for k in cfg.mts_per_bs):
            return f"{scheme} expects one MT per BS"
        try:
            check_alignment_feasible(cfg, default_stream_count(cfg))
        except InfeasibleConfiguration as exc:
            return str(exc)
        return None
    if scheme in ("wmmse", "reconfigurable", "full_reuse", "orthogonal"):
        return None
    if scheme in ("downlink_ia", "downlink_ia_q", "wmmse_ibc"):
        if cfg.num_bs != 2:
            return f"{scheme} needs exactly 2 coordinated BSs"
        if scheme != "wmmse_ibc" and m < n:
            return f"{scheme} needs M >= N to find interference-free directions"
        if any(k < n - 1 for k in cfg.mts_per_bs):
            return f"{scheme} needs at least N-1 MTs per BS"
        return None
    if scheme in ("eigenbeams", "eigenbeams_q"):
        if cfg.num_bs != 2:
            return f"{scheme} needs exactly 2 coordinated BSs"
        if any(k < n for k in cfg.mts_per_bs):
            return f"{scheme} needs at least N MTs per BS"
        return None
    return f"unknown scheme id: {scheme}"


def resolve(scheme_ids, cfg: ScenarioConfig, construction: str = "lte_dual_stage"):
    """Map scheme ids to runner(drop, cfg, oci_cov) callables.

    Incompatible schemes are rejected here, before any drop is generated.
    Quantized variants share one codebook built for the run.
    """
    problems = []
    for sid in scheme_ids:
        msg = compatibility_error(sid, cfg)
        if msg:
            problems.append(msg)
    if problems:
        raise InfeasibleConfiguration("; ".join(problems))

    cb = None
    if any(sid in QUANTIZED_SCHEMES for sid in scheme_ids):
        if construction == "ideal":
            raise InfeasibleConfiguration(
                "quantized schemes requested but feedback is set to ideal"
            )
        cb = feedback.build_codebook(cfg.antennas_bs, construction)

    runners = {}
    for sid in scheme_ids:
        if sid == "ia":
            runners[sid] = ifc_schemes.ia
        elif sid == "max_sinr":
            runners[sid] = ifc_schemes.max_sinr
        elif sid == "wmmse":
            runners[sid] = ifc_schemes.wmmse
        elif sid == "reconfigurable":
            runners[sid] = ifc_schemes.reconfigurable
        elif sid == "full_reuse":
            runners[sid] = ifc_schemes.baseline_full_reuse_su
        elif sid == "orthogonal":
            runners[sid] = ifc_schemes.baseline_orthogonal_su
        elif sid == "downlink_ia":
            runners[sid] = ibc_schemes.downlink_ia
        elif sid == "eigenbeams":
            runners[sid] = ibc_schemes.eigenbeams
        elif sid == "wmmse_ibc":
            runners[sid] = ibc_schemes.wmmse_ibc_reference
        elif sid == "downlink_ia_q":
            runners[sid] = _quantized_runner("downlink_ia", cb)
        elif sid == "eigenbeams_q":
            runners[sid] = _quantized_runner("eigenbeams", cb)
    return runners


def _quantized_runner(base: str, cb):
    def run(drop, cfg, oci_cov=None):
        return feedback.run_quantized_scheme(base, drop, cfg, cb, oci_cov)

    run.__name__ = f"{base}_quantized"
    return run
