"""Scalar special functions and the PSD Cholesky used throughout.

Thin, contract-checked fronts over the scipy.special cephes/boost kernels:
J0 for the spatial kernel, the Student-t CDF/quantile pair for the copula
transforms, and a Cholesky that tolerates the near-singular matrices that
PSD repair produces.
"""

from __future__ import annotations

import numpy as np
from scipy import special as sp

from .geometry import CorrelationMatrix

__all__ = ["bessel_j0", "student_t_cdf", "student_t_quantile", "cholesky_psd"]


def bessel_j0(x):
    """Bessel function of the first kind, order zero.

    Accepts scalars or arrays; rejects non-finite input.  |J0(x)| <= 1 for
    real x and J0 is even.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("bessel_j0 requires finite input")
    out = sp.j0(arr)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def _check_nu(nu: float) -> float:
    nu = float(nu)
    if not (nu > 0) or not np.isfinite(nu):
        raise ValueError(f"degrees of freedom must be positive, got {nu}")
    return nu


def student_t_cdf(x, nu: float):
    """CDF of the standard Student-t distribution (regularized incomplete beta).

    x may be +-inf; those map to 1 and 0 exactly.
    """
    nu = _check_nu(nu)
    arr = np.asarray(x, dtype=float)
    out = np.empty_like(arr)
    finite = np.isfinite(arr)
    out[finite] = sp.stdtr(nu, arr[finite])
    out[arr == np.inf] = 1.0
    out[arr == -np.inf] = 0.0
    if np.any(np.isnan(arr)):
        raise ValueError("student_t_cdf requires non-NaN input")
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def _t_logpdf(x: np.ndarray, nu: float) -> np.ndarray:
    return (
        sp.gammaln(0.5 * (nu + 1.0))
        - sp.gammaln(0.5 * nu)
        - 0.5 * np.log(nu * np.pi)
        - 0.5 * (nu + 1.0) * np.log1p(x * x / nu)
    )


def student_t_quantile(p, nu: float):
    """Inverse of :func:`student_t_cdf`; p = 0 and 1 return signed infinities.

    The library inverse is polished with one Newton step so the residual
    |T(result) - p| stays below 1e-12 wherever the density is resolvable.
    """
    nu = _check_nu(nu)
    arr = np.asarray(p, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise ValueError("quantile probability must lie in [0, 1]")
    out = np.full_like(arr, np.nan)
    interior = (arr > 0.0) & (arr < 1.0)
    if np.any(interior):
        x = np.atleast_1d(sp.stdtrit(nu, arr[interior]))
        residual = sp.stdtr(nu, x) - arr[interior]
        with np.errstate(over="ignore", under="ignore"):
            density = np.exp(_t_logpdf(x, nu))
        safe = density > 0.0
        step = np.where(safe, residual / np.where(safe, density, 1.0), 0.0)
        x = np.where(np.abs(step) < 1.0, x - step, x)
        out[interior] = x
    out[arr == 0.0] = -np.inf
    out[arr == 1.0] = np.inf
    # stdtrit(nu, 0.5) is not always exactly 0; pin the symmetry point.
    out[arr == 0.5] = 0.0
    return float(out) if np.isscalar(p) or arr.ndim == 0 else out


def cholesky_psd(sigma: CorrelationMatrix | np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of a (repaired) correlation matrix.

    Escalates a diagonal jitter when the matrix sits on the PSD boundary,
    keeping the reconstruction error L @ L.T - sigma below 1e-8 Frobenius.
    """
    m = sigma.entries if isinstance(sigma, CorrelationMatrix) else np.asarray(sigma, float)
    jitter = 0.0
    for _ in range(6):
        try:
            L = np.linalg.cholesky(m + jitter * np.eye(m.shape[0]))
            return L
        except np.linalg.LinAlgError:
            jitter = 1e-12 if jitter == 0.0 else jitter * 100.0
    raise np.linalg.LinAlgError("matrix remained indefinite after jitter escalation")
