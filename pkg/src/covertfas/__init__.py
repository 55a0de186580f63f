"""Covert-link performance metrics for fluid-antenna (port-selection) terminals.

Analytic detection/outage probabilities built on a Student-t copula over
Jakes-correlated port gains, an independent correlated-Rayleigh Monte
Carlo oracle, and a config-driven CLI for sweeps and validation reports.
"""

from .geometry import (
    CorrelationMatrix,
    PortGrid,
    PortIndex,
    build_correlation_matrix,
    jakes_correlation,
    map_to_coords,
    map_to_linear,
    repair_to_psd,
)
from .metrics import (
    LinkBudget,
    NodeFas,
    covert_outage_prob,
    db_to_linear,
    dbm_to_linear,
    dbm_to_watts,
    false_alarm_prob,
    miss_detection_prob,
    normalized_rate_threshold,
    optimal_threshold,
    outage_prob,
    success_prob,
)
from .mvt import CopulaSpec, MetricValue, QmcSettings, mvt_cdf
from .oracle import (
    ChannelDraw,
    McSettings,
    estimate_max_gain_cdf,
    estimate_metrics,
    event_level_detection,
    sample_channel,
)
from .special import bessel_j0, cholesky_psd, student_t_cdf, student_t_quantile

__version__ = "0.1.0"

__all__ = [
    "PortGrid",
    "PortIndex",
    "CorrelationMatrix",
    "map_to_linear",
    "map_to_coords",
    "jakes_correlation",
    "build_correlation_matrix",
    "repair_to_psd",
    "bessel_j0",
    "student_t_cdf",
    "student_t_quantile",
    "cholesky_psd",
    "CopulaSpec",
    "QmcSettings",
    "MetricValue",
    "mvt_cdf",
    "LinkBudget",
    "NodeFas",
    "db_to_linear",
    "dbm_to_linear",
    "dbm_to_watts",
    "miss_detection_prob",
    "false_alarm_prob",
    "covert_outage_prob",
    "optimal_threshold",
    "normalized_rate_threshold",
    "outage_prob",
    "success_prob",
    "McSettings",
    "ChannelDraw",
    "sample_channel",
    "estimate_max_gain_cdf",
    "estimate_metrics",
    "event_level_detection",
    "__version__",
]
