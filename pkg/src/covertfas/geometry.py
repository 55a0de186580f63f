"""Planar port grids and their spatial correlation structure.

A fluid-antenna surface exposes N = n1 * n2 candidate positions (ports) on
a rectangular aperture measured in wavelengths.  Under isotropic rich
scattering the fading field at two ports is correlated through the Jakes
kernel J0(2*pi*d), d the port separation in wavelengths.  This module owns
the 2D<->1D port index mapping, pairwise correlations, and assembly of the
full (PSD-repaired) correlation matrix consumed by the copula formulas and
the Monte Carlo channel sampler.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PortGrid",
    "PortIndex",
    "CorrelationMatrix",
    "map_to_linear",
    "map_to_coords",
    "jakes_correlation",
    "build_correlation_matrix",
    "repair_to_psd",
    "KERNELS",
]

# Eigenvalues below this are floored during PSD repair.
_EIGEN_FLOOR = 1e-10
# Raw matrices may dip this far below zero before repair and still be valid.
_PRE_REPAIR_TOL = -1e-8

KERNELS = ("jakes_j0", "spherical_sinc")


@dataclass(frozen=True)
class PortGrid:
    """Rectangular port layout: counts per dimension and aperture sides in wavelengths."""

    n1_count: int
    n2_count: int
    w1: float
    w2: float

    def __post_init__(self):
        if self.n1_count < 1 or self.n2_count < 1:
            raise ValueError("port counts must be >= 1")
        if self.w1 < 0 or self.w2 < 0:
            raise ValueError("aperture sides must be >= 0")

    @property
    def total_ports(self) -> int:
        return self.n1_count * self.n2_count


@dataclass(frozen=True)
class PortIndex:
    """A port addressed both by linear index (1-based) and (n1, n2) coordinates."""

    linear: int
    coords: tuple[int, int]

    @classmethod
    def from_linear(cls, grid: PortGrid, linear: int) -> "PortIndex":
        return cls(linear, map_to_coords(grid, linear))

    @classmethod
    def from_coords(cls, grid: PortGrid, coords: tuple[int, int]) -> "PortIndex":
        return cls(map_to_linear(grid, coords), (coords[0], coords[1]))


def map_to_linear(grid: PortGrid, coords: tuple[int, int]) -> int:
    """Row-major 2D -> 1D port index: linear = (n2 - 1) * n1_count + n1 (all 1-based)."""
    n1, n2 = coords
    if not (1 <= n1 <= grid.n1_count and 1 <= n2 <= grid.n2_count):
        raise ValueError(f"coords {coords} outside grid {grid.n1_count}x{grid.n2_count}")
    return (n2 - 1) * grid.n1_count + n1


def map_to_coords(grid: PortGrid, linear: int) -> tuple[int, int]:
    """Inverse of :func:`map_to_linear`."""
    if not (1 <= linear <= grid.total_ports):
        raise ValueError(f"linear index {linear} outside [1, {grid.total_ports}]")
    n2, n1 = divmod(linear - 1, grid.n1_count)
    return (n1 + 1, n2 + 1)


def _axis_offsets(count: int, aperture: float) -> np.ndarray:
    # Port positions along one axis, in wavelengths.  A single port has no
    # displacement, so a collapsed axis contributes zero separation.
    if count == 1:
        return np.zeros(1)
    return np.arange(count) / (count - 1) * aperture


def _port_positions(grid: PortGrid) -> np.ndarray:
    """(N, 2) port coordinates in wavelengths, in linear-index order."""
    x1 = _axis_offsets(grid.n1_count, grid.w1)
    x2 = _axis_offsets(grid.n2_count, grid.w2)
    # Row-major: n1 varies fastest.
    g2, g1 = np.meshgrid(x2, x1, indexing="ij")
    return np.column_stack([g1.ravel(), g2.ravel()])


def _kernel(distances: np.ndarray, kernel: str) -> np.ndarray:
    from .special import bessel_j0  # local import; special depends on nothing here

    if kernel == "jakes_j0":
        return bessel_j0(2.0 * np.pi * distances)
    if kernel == "spherical_sinc":
        # sin(x)/x with the removable singularity at 0; np.sinc is sin(pi t)/(pi t).
        return np.sinc(2.0 * distances)
    raise ValueError(f"unknown correlation kernel {kernel!r}; expected one of {KERNELS}")


def jakes_correlation(
    grid: PortGrid,
    a: PortIndex | tuple[int, int],
    b: PortIndex | tuple[int, int],
    kernel: str = "jakes_j0",
) -> float:
    """Spatial correlation between two ports of a grid.

    The separation is d = sqrt(((n1 - m1)/(N1 - 1) * W1)^2 + ((n2 - m2)/(N2 - 1) * W2)^2)
    wavelengths, with a collapsed axis (count 1) contributing zero, and the
    default kernel evaluates J0(2*pi*d).
    """
    ca = a.coords if isinstance(a, PortIndex) else tuple(a)
    cb = b.coords if isinstance(b, PortIndex) else tuple(b)
    map_to_linear(grid, ca)  # validates range
    map_to_linear(grid, cb)
    d1 = 0.0 if grid.n1_count == 1 else (ca[0] - cb[0]) / (grid.n1_count - 1) * grid.w1
    d2 = 0.0 if grid.n2_count == 1 else (ca[1] - cb[1]) / (grid.n2_count - 1) * grid.w2
    d = float(np.hypot(d1, d2))
    if d == 0.0:
        return 1.0
    return float(_kernel(np.asarray(d), kernel))


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric PSD matrix with unit diagonal and entries in [-1, 1].

    Construction validates the invariants; use :func:`repair_to_psd` first
    when starting from raw kernel values that may be slightly indefinite.
    """

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("correlation matrix must be square")
        if not np.allclose(m, m.T, atol=1e-12):
            raise ValueError("correlation matrix must be symmetric")
        if not np.allclose(np.diag(m), 1.0, atol=1e-12):
            raise ValueError("correlation matrix must have unit diagonal")
        if np.any(np.abs(m) > 1.0 + 1e-12):
            raise ValueError("correlation entries must lie in [-1, 1]")
        if m.shape[0] > 1:
            smallest = float(np.linalg.eigvalsh(m)[0])
            if smallest < _PRE_REPAIR_TOL:
                raise ValueError(
                    f"matrix is indefinite (min eigenvalue {smallest:.3e}); repair it first"
                )
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def repair_to_psd(raw: np.ndarray) -> np.ndarray:
    """Project a nearly-valid correlation matrix onto the PSD unit-diagonal set.

    Symmetrize, floor eigenvalues at 1e-10, reconstruct, and rescale back to
    a unit diagonal.  Dense J0 matrices on fine grids are numerically
    near-singular; downstream Cholesky factorizations need the floor.
    """
    m = np.asarray(raw, dtype=float)
    m = 0.5 * (m + m.T)
    vals, vecs = np.linalg.eigh(m)
    vals = np.maximum(vals, _EIGEN_FLOOR)
    m = (vecs * vals) @ vecs.T
    d = np.sqrt(np.diag(m))
    m = m / np.outer(d, d)
    m = 0.5 * (m + m.T)
    np.fill_diagonal(m, 1.0)
    return np.clip(m, -1.0, 1.0)


def build_correlation_matrix(grid: PortGrid, kernel: str = "jakes_j0") -> CorrelationMatrix:
    """Pairwise port correlations for a grid, PSD-repaired.

    Entry (i, j) is the kernel value at the separation of ports i+1 and j+1
    in linear-index order.
    """
    pos = _port_positions(grid)
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    raw = _kernel(dist, kernel)
    np.fill_diagonal(raw, 1.0)
    return CorrelationMatrix(repair_to_psd(raw))
