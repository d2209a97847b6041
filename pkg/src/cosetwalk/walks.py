"""Quantum-walk definitions on tiled Cayley graphs and the unitarity /
isotropy constraint validators.

The walk operator is sum_g T_g (x) A_g with one s x s transition matrix per
alphabet letter.  Unitarity requires, for every group element f, that the
pair sums  sum_{g g'^-1 = f} A_g A_{g'}^dag  and  sum_{g^-1 g' = f}
A_g^dag A_{g'}  vanish for f != e and equal the identity for f = e; the
validator buckets all ordered generator pairs by the exact canonical form
of f and reports the worst operator-norm deviation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Mapping

import numpy as np

from .groups import (
    GeneratorLabel,
    GroupElement,
    GroupPresentation,
    TilingData,
    right_multiply,
)
from .linalg import adjoint, operator_norm, unitarity_defect


@dataclass(frozen=True, eq=False)
class TransitionFamily:
    """One complex s x s transition matrix per alphabet letter."""

    coin_dim: int
    matrices: Mapping[GeneratorLabel, np.ndarray]

    def __post_init__(self) -> None:
        if self.coin_dim < 1:
            raise ValueError("coin dimension must be positive")
        frozen: dict[GeneratorLabel, np.ndarray] = {}
        for g, m in self.matrices.items():
            m = np.array(m, dtype=complex)
            if m.shape != (self.coin_dim, self.coin_dim):
                raise ValueError(
                    f"matrix for {g.name} has shape {m.shape}, expected "
                    f"({self.coin_dim}, {self.coin_dim})"
                )
            m.setflags(write=False)
            frozen[g] = m
        object.__setattr__(self, "matrices", frozen)

    @cached_property
    def labels(self) -> frozenset[GeneratorLabel]:
        return frozenset(self.matrices)

    def matrix(self, g: GeneratorLabel) -> np.ndarray:
        return self.matrices[g]

    def null_labels(self) -> tuple[GeneratorLabel, ...]:
        """Letters carrying an all-zero matrix (edges a walk never uses)."""
        return tuple(
            g for g, m in sorted(self.matrices.items(), key=lambda kv: kv[0])
            if not m.any()
        )


@dataclass(frozen=True, eq=False)
class WalkSpec:
    """A walk on a tiled Cayley graph: presentation + tiling + transitions."""

    presentation: GroupPresentation
    tiling: TilingData
    transitions: TransitionFamily

    def __post_init__(self) -> None:
        alphabet = set(self.presentation.alphabet)
        if set(self.transitions.labels) != alphabet:
            raise ValueError("transition matrices do not cover the alphabet exactly")
        if set(self.tiling.generators) != alphabet:
            raise ValueError("tiling table rows do not cover the alphabet exactly")

    @property
    def coin_dim(self) -> int:
        return self.transitions.coin_dim

    @property
    def block_dim(self) -> int:
        """Dimension s*l of the coarse-grained coin (k-space operator size)."""
        return self.coin_dim * self.tiling.index


@dataclass(frozen=True, eq=False)
class IsotropySpec:
    """A graph automorphism acting on the alphabet plus its coin unitary."""

    permutation: Mapping[GeneratorLabel, GeneratorLabel]
    coin_unitary: np.ndarray

    def __post_init__(self) -> None:
        perm = dict(self.permutation)
        if set(perm.values()) != set(perm):
            raise ValueError("permutation is not a bijection of the alphabet")
        for g, image in perm.items():
            if perm[g.inverse()] != image.inverse():
                raise ValueError(
                    f"permutation does not commute with inversion at {g.name}"
                )
        u = np.array(self.coin_unitary, dtype=complex)
        defect = unitarity_defect(u)
        if defect > 1e-10:
            raise ValueError(f"coin matrix is not unitary (defect {defect:.3e})")
        u.setflags(write=False)
        object.__setattr__(self, "permutation", perm)
        object.__setattr__(self, "coin_unitary", u)


@lru_cache(maxsize=None)
def _pair_buckets(
    tiling: TilingData, alphabet: tuple[GeneratorLabel, ...]
) -> tuple[
    dict[GroupElement, tuple[tuple[GeneratorLabel, GeneratorLabel], ...]],
    dict[GroupElement, tuple[tuple[GeneratorLabel, GeneratorLabel], ...]],
]:
    """Ordered generator pairs grouped by exact canonical products.

    left buckets:  f = g g'^-1   (for sums A_g A_{g'}^dag)
    right buckets: f = g^-1 g'   (for sums A_g^dag A_{g'})
    """
    identity = GroupElement.identity(tiling.dimension)
    left: dict[GroupElement, list[tuple[GeneratorLabel, GeneratorLabel]]] = {}
    right: dict[GroupElement, list[tuple[GeneratorLabel, GeneratorLabel]]] = {}
    for g in alphabet:
        for gp in alphabet:
            f_left = right_multiply(right_multiply(identity, g, tiling), gp.inverse(), tiling)
            f_right = right_multiply(right_multiply(identity, g.inverse(), tiling), gp, tiling)
            left.setdefault(f_left, []).append((g, gp))
            right.setdefault(f_right, []).append((g, gp))
    return (
        {f: tuple(pairs) for f, pairs in left.items()},
        {f: tuple(pairs) for f, pairs in right.items()},
    )


def unitarity_residual(walk: WalkSpec) -> tuple[float, dict[GroupElement, float]]:
    """Worst constraint deviation and the per-product bucket report.

    For each canonical product f the report carries the larger of the two
    deviations ||sum A_g A_{g'}^dag - target|| and ||sum A_g^dag A_{g'} -
    target|| with target I for f = e and 0 otherwise.  A residual of zero is
    equivalent to a unitary walk operator.
    """
    tiling = walk.tiling
    s = walk.coin_dim
    identity_element = GroupElement.identity(tiling.dimension)
    eye = np.eye(s)
    left, right = _pair_buckets(tiling, walk.presentation.alphabet)
    report: dict[GroupElement, float] = {}
    mats = walk.transitions.matrices
    for buckets, combine in ((left, lambda a, b: a @ adjoint(b)), (right, lambda a, b: adjoint(a) @ b)):
        for f, pairs in buckets.items():
            acc = np.zeros((s, s), dtype=complex)
            for g, gp in pairs:
                acc += combine(mats[g], mats[gp])
            if f == identity_element:
                acc -= eye
            deviation = operator_norm(acc)
            report[f] = max(report.get(f, 0.0), deviation)
    residual = max(report.values(), default=0.0)
    return residual, report


def check_isotropy(walk: WalkSpec, iso: IsotropySpec) -> float:
    """Worst covariance deviation max_g ||A_{f(g)} - U A_g U^dag||."""
    u = iso.coin_unitary
    if u.shape != (walk.coin_dim, walk.coin_dim):
        raise ValueError(
            f"coin unitary has shape {u.shape}, walk coin dimension is {walk.coin_dim}"
        )
    mats = walk.transitions.matrices
    worst = 0.0
    for g in walk.presentation.alphabet:
        image = iso.permutation.get(g)
        if image is None:
            raise ValueError(f"permutation does not act on {g.name}")
        deviation = operator_norm(mats[image] - u @ mats[g] @ adjoint(u))
        worst = max(worst, deviation)
    return worst


def isotropy_normalization_residual(walk: WalkSpec) -> float:
    """||sum_g A_g - I||, zero exactly for the normalized solution families."""
    s = walk.coin_dim
    total = np.zeros((s, s), dtype=complex)
    for m in walk.transitions.matrices.values():
        total = total + m
    return operator_norm(total - np.eye(s))
