"""Position-space evolution on a finite torus and the Fourier cross-check.

The state holds one amplitude per (site, coset, coin) cell.  A step sends
the (v, j) component through every alphabet letter g: the amplitude block
A_g psi(v, j) accumulates at site v - h_{j,g} (mod N) in coset target(g, j).
The torus must be wide enough that no displacement wraps onto itself within
a single step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coarse import kspace_operators
from .walks import WalkSpec


class TorusSizeError(ValueError):
    """Torus too small for the walk's displacement set."""


@dataclass(frozen=True, eq=False)
class LatticeState:
    """Amplitudes on a periodic lattice, shaped sizes + (cosets, coin)."""

    sizes: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape[: len(self.sizes)] != self.sizes or amps.ndim != len(self.sizes) + 2:
            raise ValueError(
                f"amplitude array shape {amps.shape} does not match sizes {self.sizes}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes.ravel()))


def minimum_torus_size(walk: WalkSpec) -> int:
    """Smallest per-axis size that keeps one step wrap-free."""
    return 2 * walk.tiling.max_shift + 1


def _check_torus(walk: WalkSpec, sizes: tuple[int, ...]) -> None:
    smallest = min(sizes)
    needed = minimum_torus_size(walk)
    if smallest < needed:
        raise TorusSizeError(
            f"torus size {smallest} too small; displacements up to "
            f"{walk.tiling.max_shift} need at least {needed}"
        )


def make_delta(
    walk: WalkSpec,
    size: int,
    *,
    site: tuple[int, ...] | None = None,
    coset: int = 0,
    coin: int | None = None,
) -> LatticeState:
    """Unit-norm state concentrated on one (site, coset) cell.

    ``coin=None`` places the uniform coin superposition (1, ..., 1)/sqrt(s);
    an integer selects a single coin basis vector.
    """
    d = walk.tiling.dimension
    sizes = (size,) * d
    _check_torus(walk, sizes)
    if site is None:
        site = (0,) * d
    amps = np.zeros(sizes + (walk.tiling.index, walk.coin_dim), dtype=complex)
    if coin is None:
        amps[site + (coset,)] = np.full(walk.coin_dim, 1.0 / np.sqrt(walk.coin_dim))
    else:
        amps[site + (coset, coin)] = 1.0
    return LatticeState(sizes, amps)


def make_plane_wave(
    walk: WalkSpec, size: int, momentum: tuple[int, ...], band: int = 0
) -> LatticeState:
    """Unit-norm momentum eigenstate: e^{-i k.v} times a fiber eigenvector.

    ``momentum`` is the integer index m of the allowed wave-vector
    k = 2 pi m / N (componentwise); the fiber vector is the sorted-band
    eigenvector of the k-space operator, so a step multiplies the state by
    a phase and every probability marginal is time invariant.
    """
    from .linalg import eigenpairs, wrap_phase

    d = walk.tiling.dimension
    sizes = (size,) * d
    _check_torus(walk, sizes)
    if len(momentum) != d:
        raise ValueError(f"momentum index needs {d} components")
    k = wrap_phase(2.0 * np.pi * np.asarray(momentum, dtype=float) / size)
    operator = kspace_operators(walk, np.asarray(k)[None, :])[0]
    _, vectors = eigenpairs(operator)
    fiber = vectors[:, band]
    fiber = fiber / np.linalg.norm(fiber)
    grids = np.meshgrid(*[np.arange(size) for _ in range(d)], indexing="ij")
    phase = np.zeros(sizes, dtype=float)
    for axis in range(d):
        phase += k[axis] * grids[axis]
    wave = np.exp(-1j * phase) / np.sqrt(size**d)
    amps = wave[..., None, None] * fiber.reshape((walk.tiling.index, walk.coin_dim))
    return LatticeState(sizes, amps)


def step(walk: WalkSpec, state: LatticeState) -> LatticeState:
    """One application of the walk operator; norm preserved for unitary walks."""
    _check_torus(walk, state.sizes)
    d = walk.tiling.dimension
    amps = state.amplitudes
    out = np.zeros_like(amps)
    for rule in walk.tiling.rules:
        block = walk.transitions.matrix(rule.generator)
        # psi'(v - h, target) += A_g psi(v, coset): roll by -h brings psi(v + h) to v
        shifted = np.roll(amps[..., rule.coset, :], tuple(-s for s in rule.shift), axis=tuple(range(d)))
        out[..., rule.target, :] += shifted @ block.T
    return LatticeState(state.sizes, out)


def evolve(walk: WalkSpec, state: LatticeState, steps: int) -> LatticeState:
    """``steps`` repeated applications of ``step``."""
    if steps < 0:
        raise ValueError("step count must be nonnegative")
    for _ in range(steps):
        state = step(walk, state)
    return state


def evolve_fourier(walk: WalkSpec, state: LatticeState, steps: int) -> LatticeState:
    """Evolve by diagonalizing over the allowed torus momenta.

    Transforms site axes with the e^{+i k.v} kernel, applies the matrix
    power of the fiber operator at every k = 2 pi m / N, and transforms
    back; agrees with repeated stepping to tight tolerance.
    """
    if steps < 0:
        raise ValueError("step count must be nonnegative")
    _check_torus(walk, state.sizes)
    d = walk.tiling.dimension
    size = state.sizes[0]
    if any(n != size for n in state.sizes):
        raise ValueError("fourier evolution expects a square torus")
    site_axes = tuple(range(d))
    volume = float(size**d)
    # hat psi(m) = sum_v e^{+2 pi i m.v / N} psi(v)
    hat = np.fft.ifftn(state.amplitudes, axes=site_axes) * volume
    fiber = hat.reshape(state.sizes + (walk.block_dim,))

    momenta = np.meshgrid(*[np.arange(size) for _ in range(d)], indexing="ij")
    kpoints = np.stack(
        [np.mod(2.0 * np.pi * m.ravel() / size + np.pi, 2.0 * np.pi) - np.pi for m in momenta],
        axis=1,
    )
    operators = kspace_operators(walk, kpoints)
    powered = np.linalg.matrix_power(operators, steps)
    flat = fiber.reshape(-1, walk.block_dim)
    evolved = np.einsum("kij,kj->ki", powered, flat)
    hat_out = evolved.reshape(state.sizes + (walk.tiling.index, walk.coin_dim))
    out = np.fft.fftn(hat_out, axes=site_axes) / volume
    return LatticeState(state.sizes, out)


def probability_map(state: LatticeState) -> np.ndarray:
    """Per-(site, coset) probabilities: coin-summed squared magnitudes."""
    return np.sum(np.abs(state.amplitudes) ** 2, axis=-1)
