"""Coordinated beamforming simulator for clustered cellular downlinks."""

from .model import (
    ChannelDrop,
    InfeasibleConfiguration,
    RankDeficientChannel,
    RxStrategy,
    ScenarioConfig,
    TxStrategy,
    generate_drop,
    oci_covariance,
    sample_oci,
)
from .theory import gain_table, rate_full_reuse, rate_ia, rate_jt, rate_orthogonal
from .evaluate import RateReport, achievable_rate, monte_carlo, prelog_adjust
from .ifc_schemes import (
    SchemeOutput,
    baseline_full_reuse_su,
    baseline_orthogonal_su,
    ia,
    max_sinr,
    reconfigurable,
    wmmse,
)
from .ibc_schemes import downlink_ia, eigenbeams, wmmse_ibc_reference
from .feedback import Codebook, FeedbackReport, build_codebook, quantize, run_quantized_scheme

__version__ = "0.1.0"

__all__ = [
    "ChannelDrop",
    "Codebook",
    "FeedbackReport",
    "InfeasibleConfiguration",
    "RankDeficientChannel",
    "RateReport",
    "RxStrategy",
    "ScenarioConfig",
    "SchemeOutput",
    "TxStrategy",
    "achievable_rate",
    "baseline_full_reuse_su",
    "baseline_orthogonal_su",
    "build_codebook",
    "downlink_ia",
    "eigenbeams",
    "gain_table",
    "generate_drop",
    "ia",
    "max_sinr",
    "monte_carlo",
    "oci_covariance",
    "prelog_adjust",
    "quantize",
    "rate_full_reuse",
    "rate_ia",
    "rate_jt",
    "rate_orthogonal",
    "reconfigurable",
    "run_quantized_scheme",
    "sample_oci",
    "wmmse",
    "wmmse_ibc_reference",
]
