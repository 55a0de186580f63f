"""Correlated-Rayleigh Monte Carlo ground truth.

Samples the physical channel directly: jointly Gaussian complex port
coefficients with the exact Jakes field correlation (no copula anywhere),
best-port selection by maximum gain, and optionally the symbol-level
threshold test at finite block length.  Because the dependence structure
here is the true one, agreement with the analytic layer quantifies the
copula approximation error rather than restating it.

Trials are partitioned into fixed-size chunks; chunk c draws from the
counter stream keyed by derive_seed(master_seed, c, role), and partial
results are reduced in chunk order, so outputs are bit-identical for a
given (inputs, seed) regardless of scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .geometry import CorrelationMatrix
from .metrics import LinkBudget, NodeFas, normalized_rate_threshold, optimal_threshold
from .mvt import MetricValue
from .special import cholesky_psd

__all__ = [
    "McSettings",
    "ChannelDraw",
    "OracleMetrics",
    "DetectionRecord",
    "sample_channel",
    "estimate_max_gain_cdf",
    "estimate_max_gain_cdf_grid",
    "estimate_metrics",
    "event_level_detection",
]

_CHUNK_TRIALS = 1 << 16
# Role tags keep the substreams of one master seed disjoint.
_ROLE_CHANNEL = 0
_ROLE_SYMBOLS = 1
_ROLE_NOISE = 2
_NODE_WILLIE = 0x57  # 'W'
_NODE_BOB = 0x42  # 'B'


@dataclass(frozen=True)
class McSettings:
    """Trial count, master seed, and symbols per transmission slot (k)."""

    trials: int
    seed: int = 0
    symbols_per_slot: int = 1000

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.symbols_per_slot < 1:
            raise ValueError("symbols_per_slot must be >= 1")


@dataclass(frozen=True)
class ChannelDraw:
    """Per-port power gains of one channel realization (unit-mean exponential marginals)."""

    gains: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gains, dtype=float)
        if np.any(g < 0):
            raise ValueError("gains must be nonnegative")
        object.__setattr__(self, "gains", g)


def _chunk_ranges(trials: int):
    for c, start in enumerate(range(0, trials, _CHUNK_TRIALS)):
        yield c, min(_CHUNK_TRIALS, trials - start)


def _chunk_fields(chol: np.ndarray, key: int, count: int) -> np.ndarray:
    """(count, N) complex port coefficients with field covariance chol @ chol.T."""
    n_ports = chol.shape[0]
    z = rng.complex_normals(key, 0, count * n_ports).reshape(count, n_ports)
    return z @ chol.T


def sample_channel(chol: np.ndarray, stream: rng.CounterStream) -> ChannelDraw:
    """One correlated channel draw; consumes 2 * n_ports counters of ``stream``."""
    n_ports = chol.shape[0]
    z = stream.take_complex_normals(n_ports)
    h = chol @ z
    return ChannelDraw(np.abs(h) ** 2)


def _binomial_err(p_hat: np.ndarray | float, n: int) -> np.ndarray | float:
    return 3.0 * np.sqrt(np.asarray(p_hat) * (1.0 - np.asarray(p_hat)) / n)


def estimate_max_gain_cdf_grid(
    sigma: CorrelationMatrix,
    xs: np.ndarray,
    settings: McSettings,
    node_tag: int = _NODE_WILLIE,
) -> tuple[np.ndarray, np.ndarray]:
    """Empirical P(max-port gain <= x) at many thresholds from one set of draws.

    Returns (values, three-sigma binomial errors), one per threshold.
    """
    xs = np.asarray(xs, dtype=float)
    if np.any(xs < 0):
        raise ValueError("gain thresholds must be nonnegative")
    chol = cholesky_psd(sigma)
    counts = np.zeros(len(xs), dtype=np.int64)
    for c, size in _chunk_ranges(settings.trials):
        key = rng.derive_seed(settings.seed, node_tag, c, _ROLE_CHANNEL)
        h = _chunk_fields(chol, key, size)
        gmax = (h.real * h.real + h.imag * h.imag).max(axis=1)
        counts += (gmax[:, None] <= xs[None, :]).sum(axis=0)
    values = counts / settings.trials
    return values, np.asarray(_binomial_err(values, settings.trials))


def estimate_max_gain_cdf(
    sigma: CorrelationMatrix, x: float, settings: McSettings
) -> MetricValue:
    """Empirical CDF of the best-port gain at a single threshold."""
    values, errs = estimate_max_gain_cdf_grid(sigma, np.asarray([x], dtype=float), settings)
    return MetricValue(float(values[0]), float(errs[0]))


@dataclass(frozen=True)
class OracleMetrics:
    """Empirical counterpart of the analytic metric set, with 3-sigma errors."""

    p_md: float
    p_md_err: float
    p_fa: float
    cop: float
    cop_err: float
    p_out: float
    p_out_err: float
    p_suc: float
    p_suc_err: float


def estimate_metrics(
    link: LinkBudget,
    bob: NodeFas,
    willie: NodeFas,
    zeta: float,
    settings: McSettings,
) -> OracleMetrics:
    """All five probabilities, empirically, from independent Bob/Willie draws.

    The miss-detection estimate at the supplied zeta feeds COP; the success
    probability always uses the optimal threshold zeta* = sigma_w^2 + mu.
    """
    from .geometry import build_correlation_matrix

    sigma_w = build_correlation_matrix(willie.grid)
    sigma_b = build_correlation_matrix(bob.grid)

    x_md = (zeta - link.sigma2_w) / link.p_a
    x_star = (optimal_threshold(link) - link.sigma2_w) / link.p_a
    xs = np.asarray([max(x_md, 0.0), x_star])
    (p_md, p_md_star), (p_md_err, p_md_star_err) = estimate_max_gain_cdf_grid(
        sigma_w, xs, settings, node_tag=_NODE_WILLIE
    )
    if x_md < 0.0:  # below the noise floor no sampling is needed
        p_md, p_md_err = 0.0, 0.0

    r_bar = normalized_rate_threshold(link)
    (p_out,), (p_out_err,) = estimate_max_gain_cdf_grid(
        sigma_b, np.asarray([r_bar]), settings, node_tag=_NODE_BOB
    )

    p_fa = 1.0 if zeta <= link.sigma2_w else 0.0
    cop = 1.0 - p_fa - p_md
    p_suc = p_md_star * (1.0 - p_out)
    p_suc_err = p_md_star * p_out_err + (1.0 - p_out) * p_md_star_err
    return OracleMetrics(
        p_md=float(p_md),
        p_md_err=float(p_md_err),
        p_fa=p_fa,
        cop=float(cop),
        cop_err=float(p_md_err),
        p_out=float(p_out),
        p_out_err=float(p_out_err),
        p_suc=float(p_suc),
        p_suc_err=float(p_suc_err),
    )


@dataclass(frozen=True)
class DetectionRecord:
    """Finite-block threshold test outcome."""

    empirical_md_rate: float
    mean_abs_power_gap: float


_QPSK_RE = np.array([1.0, -1.0, -1.0, 1.0]) / np.sqrt(2.0)
_QPSK_IM = np.array([1.0, 1.0, -1.0, -1.0]) / np.sqrt(2.0)


def event_level_detection(
    link: LinkBudget,
    willie: NodeFas,
    zeta: float,
    settings: McSettings,
) -> DetectionRecord:
    """Symbol-level threshold test at the warden's best port.

    Each trial draws a channel, synthesizes k unit-power QPSK symbols plus
    complex Gaussian noise of variance sigma_w^2, averages the received
    power over the slot, and compares it to zeta.  Also reports the mean
    absolute gap between the slot average and its large-k limit
    P_a * g + sigma_w^2, which shrinks like 1/sqrt(k).
    """
    from .geometry import build_correlation_matrix

    k = settings.symbols_per_slot
    chol = cholesky_psd(build_correlation_matrix(willie.grid))
    # Keep each chunk's symbol block around 4M entries.
    block = max(1, min(_CHUNK_TRIALS, 4_000_000 // k))
    md_count = 0
    gap_sum = 0.0
    done = 0
    c = 0
    while done < settings.trials:
        size = min(block, settings.trials - done)
        h_all = _chunk_fields(chol, rng.derive_seed(settings.seed, _NODE_WILLIE, c, _ROLE_CHANNEL), size)
        gains = np.abs(h_all) ** 2
        best = np.argmax(gains, axis=1)
        h = h_all[np.arange(size), best]
        g = gains[np.arange(size), best]

        u = rng.uniforms(rng.derive_seed(settings.seed, _NODE_WILLIE, c, _ROLE_SYMBOLS), 0, size * k)
        idx = np.minimum((u * 4).astype(np.int64), 3).reshape(size, k)
        symbols = _QPSK_RE[idx] + 1j * _QPSK_IM[idx]
        noise = np.sqrt(link.sigma2_w) * rng.complex_normals(
            rng.derive_seed(settings.seed, _NODE_WILLIE, c, _ROLE_NOISE), 0, size * k
        ).reshape(size, k)

        y = np.sqrt(link.p_a) * h[:, None] * symbols + noise
        p_bar = np.mean(np.abs(y) ** 2, axis=1)
        md_count += int(np.sum(p_bar < zeta))
        gap_sum += float(np.sum(np.abs(p_bar - (link.p_a * g + link.sigma2_w))))
        done += size
        c += 1
    return DetectionRecord(
        empirical_md_rate=md_count / settings.trials,
        mean_abs_power_gap=gap_sum / settings.trials,
    )
