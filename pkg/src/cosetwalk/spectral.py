"""Dispersion sweeps over the wave-vector domain, group velocity, and band
curvature by finite differences.

Bands are indexed by sorted phase at each k independently; crossing points
show up as kinks of the sorted bands and are detected (never silently
differentiated across).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coarse import _components, kspace_operators
from .linalg import (
    DEFAULT_RESIDUAL_TOL,
    DEFAULT_UNITARY_TOL,
    EigensolveError,
    NonUnitaryError,
    wrap_phase,
)
from .walks import WalkSpec

VELOCITY_STEP = 1e-5
CURVATURE_STEP = 1e-3
GRADIENT_TOLERANCE = 1e-6


class BandCrossingError(RuntimeError):
    """A band crossing sits inside the finite-difference stencil."""


class ExtremumError(RuntimeError):
    """Curvature was requested away from a band extremum."""


@dataclass(frozen=True, eq=False)
class DispersionGrid:
    """Sorted eigenphases on an N^d lattice over (-pi, pi]^d.

    ``kpoints`` has shape (N^d, d) in row-major axis order and ``phases``
    shape (N^d, s*l) with each row ascending.
    """

    walk: WalkSpec
    resolution: int
    axis_values: np.ndarray
    kpoints: np.ndarray
    phases: np.ndarray

    @property
    def band_count(self) -> int:
        return self.phases.shape[1]


def grid_axis(resolution: int) -> np.ndarray:
    """N uniformly spaced values in (-pi, pi], right endpoint included."""
    steps = np.arange(1, resolution + 1, dtype=float)
    return -np.pi + 2.0 * np.pi * steps / resolution


def _batched_phases(walk: WalkSpec, kpoints: np.ndarray) -> np.ndarray:
    operators = kspace_operators(walk, kpoints)
    defect = np.abs(
        np.swapaxes(operators, -1, -2).conj() @ operators - np.eye(walk.block_dim)
    ).sum(axis=(-1, -2))
    bad = int(np.argmax(defect))
    if defect[bad] > DEFAULT_UNITARY_TOL * walk.block_dim:
        raise NonUnitaryError(
            f"fiber operator at k={kpoints[bad]} has unitarity defect "
            f"{defect[bad]:.3e}"
        )
    try:
        values, vectors = np.linalg.eig(operators)
    except np.linalg.LinAlgError as exc:
        raise EigensolveError(f"batched eigensolve failed: {exc}") from exc
    phases = wrap_phase(-np.angle(values))
    order = np.argsort(phases, axis=1, kind="stable")
    phases = np.take_along_axis(phases, order, axis=1)
    vectors = np.take_along_axis(vectors, order[:, None, :], axis=2)
    residuals = np.linalg.norm(
        operators @ vectors - vectors * np.exp(-1j * phases)[:, None, :], axis=1
    ) / np.linalg.norm(vectors, axis=1)
    worst = int(np.argmax(residuals.max(axis=1)))
    if residuals[worst].max() > DEFAULT_RESIDUAL_TOL:
        raise EigensolveError(
            f"eigenpair residual {residuals[worst].max():.3e} at k={kpoints[worst]}"
        )
    return phases


def dispersion_grid(walk: WalkSpec, resolution: int) -> DispersionGrid:
    """Eigenphase sweep on the N^d wave-vector lattice (N = resolution >= 2)."""
    if resolution < 2:
        raise ValueError("grid resolution must be at least 2")
    d = walk.tiling.dimension
    axis = grid_axis(resolution)
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    kpoints = np.stack([m.ravel() for m in mesh], axis=1)
    phases = _batched_phases(walk, kpoints)
    return DispersionGrid(walk, resolution, axis, kpoints, phases)


def band_phases(walk: WalkSpec, k) -> np.ndarray:
    """Sorted eigenphases of the fiber operator at one wave-vector."""
    comps = _components(k, walk.tiling.dimension)
    return _batched_phases(walk, comps[None, :])[0]


def _signed_gap(a: float, b: float) -> float:
    """a - b on the circle, in (-pi, pi]."""
    return float(wrap_phase(a - b))


def group_velocity(
    walk: WalkSpec, k, band: int, *, step: float = VELOCITY_STEP
) -> np.ndarray:
    """Central-difference gradient of the sorted band at k.

    Raises BandCrossingError when the second difference betrays a kink of
    the sorted band inside the stencil (a crossing), rather than returning a
    silent average slope.
    """
    comps = _components(k, walk.tiling.dimension)
    d = comps.size
    center = band_phases(walk, comps)[band]
    out = np.empty(d)
    for axis in range(d):
        offset = np.zeros(d)
        offset[axis] = step
        upper = band_phases(walk, comps + offset)[band]
        lower = band_phases(walk, comps - offset)[band]
        forward = _signed_gap(upper, center)
        backward = _signed_gap(center, lower)
        if abs(forward - backward) > 50.0 * step * step:
            raise BandCrossingError(
                f"band {band} kinks within the stencil at k={comps} along axis {axis}"
            )
        out[axis] = (forward + backward) / (2.0 * step)
    return out


@dataclass(frozen=True)
class BandAnalysis:
    """Local kinematics of one sorted band at an extremum."""

    band: int
    location: tuple[float, ...]
    gradient: tuple[float, ...]
    curvature: tuple[float, ...]


def analyze_band(walk: WalkSpec, k, band: int) -> BandAnalysis:
    """Gradient and pure second partials of a band at an extremum of it."""
    comps = _components(k, walk.tiling.dimension)
    gradient = group_velocity(walk, comps, band)
    curvature = band_curvature(walk, comps, band)
    return BandAnalysis(
        band,
        tuple(float(x) for x in comps),
        tuple(float(x) for x in gradient),
        tuple(float(x) for x in curvature),
    )


def band_curvature(
    walk: WalkSpec,
    k,
    band: int,
    *,
    step: float = CURVATURE_STEP,
    gradient_tolerance: float = GRADIENT_TOLERANCE,
) -> np.ndarray:
    """Pure second partials of the sorted band at an extremum.

    Second-order central differences with one Richardson extrapolation;
    requires the gradient at k to vanish to ``gradient_tolerance``.
    """
    comps = _components(k, walk.tiling.dimension)
    gradient = group_velocity(walk, comps, band)
    worst = float(np.abs(gradient).max())
    if worst > gradient_tolerance:
        raise ExtremumError(
            f"gradient component {worst:.3e} exceeds {gradient_tolerance:.1e}; "
            "curvature is defined at extrema only"
        )
    d = comps.size
    center = band_phases(walk, comps)[band]

    def second_difference(axis: int, h: float) -> float:
        offset = np.zeros(d)
        offset[axis] = h
        upper = band_phases(walk, comps + offset)[band]
        lower = band_phases(walk, comps - offset)[band]
        return (_signed_gap(upper, center) + _signed_gap(lower, center)) / (h * h)

    out = np.empty(d)
    for axis in range(d):
        coarse = second_difference(axis, step)
        fine = second_difference(axis, step / 2.0)
        out[axis] = (4.0 * fine - coarse) / 3.0
    return out
