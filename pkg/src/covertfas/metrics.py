"""Closed-form link metrics for the covert transmission model.

The warden thresholds its long-run average received power at zeta.  With
per-port exponential gains coupled by a t-copula whose dependence matrix is
the Jakes port correlation, every detection and outage probability reduces
to the multivariate t CDF at equal coordinates:

    P_MD(zeta) = T_{nu,Sigma}(u, ..., u),  u = t_nu^{-1}(1 - exp(-(zeta - sigma_w^2)/P_a))

for zeta above the noise floor and 0 otherwise; the false-alarm probability
is the complementary indicator; the covertness outage probability is
1 - (P_FA + P_MD).  The receiver-side outage uses the same copula form at
the normalized rate threshold, and the success probability is the product
P_MD(zeta*) * (1 - P_out) at the warden's optimal threshold
zeta* = sigma_w^2 + mu.

All powers are linear, on one common scale (watts throughout this package:
dB values convert via 10^(x/10), dBm via 10^((x-30)/10)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import CorrelationMatrix, PortGrid, build_correlation_matrix, repair_to_psd
from .mvt import CopulaSpec, MetricValue, QmcSettings, mvt_cdf
from .special import student_t_quantile

__all__ = [
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
    "DEPENDENCE_MODES",
]

DEPENDENCE_MODES = ("field_rho", "gain_rho_sq")


@dataclass(frozen=True)
class LinkBudget:
    """Link powers (linear scale), target rate, and warden threshold margin."""

    p_a: float  # transmit power
    sigma2_w: float  # warden noise power
    sigma2_b: float  # receiver noise power
    r_b: float  # target rate, bits
    mu: float = 0.01  # threshold margin above the warden noise floor

    def __post_init__(self):
        if not (self.p_a > 0):
            raise ValueError("transmit power must be positive")
        if self.sigma2_w < 0 or self.sigma2_b < 0:
            raise ValueError("noise powers must be nonnegative")
        if self.r_b < 0:
            raise ValueError("target rate must be nonnegative")
        if not (self.mu > 0):
            raise ValueError("threshold margin must be positive")


@dataclass(frozen=True)
class NodeFas:
    """One terminal's port grid plus its copula degrees of freedom."""

    grid: PortGrid
    nu: float = 40.0

    def __post_init__(self):
        if not (self.nu > 0):
            raise ValueError("degrees of freedom must be positive")


def db_to_linear(x_db: float) -> float:
    """Decibel ratio to linear: 10^(x/10)."""
    return float(10.0 ** (np.asarray(x_db, dtype=float) / 10.0))


def dbm_to_linear(x_dbm: float) -> float:
    """dBm to linear milliwatt-referenced power: 10^(x/10) mW."""
    return float(10.0 ** (np.asarray(x_dbm, dtype=float) / 10.0))


def dbm_to_watts(x_dbm: float) -> float:
    """dBm to watts, the common linear scale used by :class:`LinkBudget`."""
    return dbm_to_linear(x_dbm) * 1e-3


def node_copula(
    node: NodeFas,
    dependence: str = "field_rho",
    kernel: str = "jakes_j0",
) -> CopulaSpec:
    """Copula implied by a node's geometry.

    ``field_rho`` (default) uses the Jakes field correlation directly as the
    dependence matrix; ``gain_rho_sq`` squares it (sign kept), matching the
    correlation of the power gains instead of the field.  Both are
    PSD-repaired.
    """
    sigma = build_correlation_matrix(node.grid, kernel=kernel)
    if dependence == "field_rho":
        return CopulaSpec(node.nu, sigma)
    if dependence == "gain_rho_sq":
        e = sigma.entries
        return CopulaSpec(node.nu, CorrelationMatrix(repair_to_psd(np.sign(e) * e * e)))
    raise ValueError(f"unknown dependence mode {dependence!r}; expected one of {DEPENDENCE_MODES}")


def _equal_coordinate_cdf(marginal: float, spec: CopulaSpec, settings: QmcSettings | None) -> MetricValue:
    """Copula CDF at equal per-port marginal probability ``marginal``."""
    u = student_t_quantile(marginal, spec.nu)
    return mvt_cdf(u, spec, settings)


def miss_detection_prob(
    link: LinkBudget,
    willie: NodeFas,
    zeta: float,
    settings: QmcSettings | None = None,
    *,
    dependence: str = "field_rho",
    kernel: str = "jakes_j0",
) -> MetricValue:
    """Probability the warden's average power stays below the threshold.

    Zero at or below the noise floor; above it, the copula CDF at the
    per-port marginal 1 - exp(-(zeta - sigma_w^2)/P_a).
    """
    if not np.isfinite(zeta):
        raise ValueError("zeta must be finite")
    if zeta <= link.sigma2_w:
        return MetricValue(0.0, 0.0)
    marginal = float(-np.expm1(-(zeta - link.sigma2_w) / link.p_a))
    spec = node_copula(willie, dependence, kernel)
    return _equal_coordinate_cdf(marginal, spec, settings)


def false_alarm_prob(link: LinkBudget, zeta: float) -> float:
    """1 below or at the warden noise floor, else 0 (long-run power test)."""
    if not np.isfinite(zeta):
        raise ValueError("zeta must be finite")
    return 1.0 if zeta <= link.sigma2_w else 0.0


def covert_outage_prob(
    link: LinkBudget,
    willie: NodeFas,
    zeta: float,
    settings: QmcSettings | None = None,
    *,
    dependence: str = "field_rho",
    kernel: str = "jakes_j0",
) -> MetricValue:
    """Probability the warden detects correctly: 1 - (P_FA + P_MD)."""
    if zeta <= link.sigma2_w:
        return MetricValue(0.0, 0.0)
    md = miss_detection_prob(link, willie, zeta, settings, dependence=dependence, kernel=kernel)
    return MetricValue(min(max(1.0 - md.value, 0.0), 1.0), md.abs_error_estimate)


def optimal_threshold(link: LinkBudget) -> float:
    """The warden threshold maximizing detection: just above the noise floor."""
    return link.sigma2_w + link.mu


def normalized_rate_threshold(link: LinkBudget) -> float:
    """Gain threshold equivalent to the target rate: (2^r_b - 1) * sigma_b^2 / p_a."""
    return float(np.expm1(link.r_b * np.log(2.0)) * link.sigma2_b / link.p_a)


def outage_prob(
    link: LinkBudget,
    bob: NodeFas,
    settings: QmcSettings | None = None,
    *,
    dependence: str = "field_rho",
    kernel: str = "jakes_j0",
) -> MetricValue:
    """Probability the best-port capacity falls short of the target rate."""
    marginal = float(-np.expm1(-normalized_rate_threshold(link)))
    spec = node_copula(bob, dependence, kernel)
    return _equal_coordinate_cdf(marginal, spec, settings)


def success_prob(
    link: LinkBudget,
    bob: NodeFas,
    willie: NodeFas,
    settings: QmcSettings | None = None,
    *,
    dependence: str = "field_rho",
    kernel: str = "jakes_j0",
) -> MetricValue:
    """Joint probability of staying undetected (at zeta*) and meeting the rate.

    Error estimates combine by the first-order product rule.
    """
    md = miss_detection_prob(
        link, willie, optimal_threshold(link), settings, dependence=dependence, kernel=kernel
    )
    out = outage_prob(link, bob, settings, dependence=dependence, kernel=kernel)
    value = md.value * (1.0 - out.value)
    err = abs(md.value) * out.abs_error_estimate + abs(1.0 - out.value) * md.abs_error_estimate
    return MetricValue(min(max(value, 0.0), 1.0), err)
