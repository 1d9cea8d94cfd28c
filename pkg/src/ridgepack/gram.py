"""Exact L2(P) inner products, norms, and pairwise separations for the two
designs (uniform cube, standard Gaussian), plus a deterministic Monte-Carlo
estimator used as the independent oracle for every analytic value.

Sinusoidal atoms sqrt(2) sin(pi theta . x) with nonzero integer theta are
orthonormal under the uniform design, up to sign: the inner product of two
atoms is 1 for equal directions, -1 for negated directions, 0 otherwise.
Hermite atoms phi_l(theta . x) with unit-norm directions under the Gaussian
design have inner product (theta . theta')^l.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import rng
from .codes import Codeword
from .lattice import RidgeDirection


@dataclass
class GramMatrix:
    """Dense Gram matrix of a ridge family under a stated design."""

    entries: np.ndarray
    design: str  # "uniform-cube" | "gaussian"
    activation: str  # "sine" | "hermite"
    order: int | None = None

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])

    def is_identity(self, tol: float = 0.0) -> bool:
        return bool(
            np.all(np.abs(self.entries - np.eye(self.size)) <= tol)
        )


def identity_gram(size: int, design: str, activation: str, order=None) -> GramMatrix:
    return GramMatrix(np.eye(size), design, activation, order)


def sine_inner_product(theta: RidgeDirection, other: RidgeDirection) -> float:
    """E[2 sin(pi theta . X) sin(pi theta' . X)] under uniform [-1, 1]^d.

    Exact for nonzero integer lattice directions: 1 if theta' == theta,
    -1 if theta' == -theta, 0 otherwise.
    """
    for d in (theta, other):
        if d.kind != "lattice":
            raise ValueError("sine inner products are defined for lattice directions")
        if d.is_zero():
            raise ValueError("zero direction has no sine atom")
    if theta.coordinates == other.coordinates:
        return 1.0
    if theta.coordinates == other.negated().coordinates:
        return -1.0
    return 0.0


def sine_gram(dirs: Sequence[RidgeDirection]) -> GramMatrix:
    n = len(dirs)
    g = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            g[i, j] = g[j, i] = sine_inner_product(dirs[i], dirs[j])
    return GramMatrix(g, "uniform-cube", "sine")


def hermite_gram(dirs: Sequence[RidgeDirection], order: int) -> GramMatrix:
    """G_ij = (theta_i . theta_j)^order, dot products exact rationals."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    for d in dirs:
        if d.l2_norm_sq != 1:
            raise ValueError(
                f"non-unit direction (|theta|^2 = {d.l2_norm_sq}) in Hermite family"
            )
    n = len(dirs)
    g = np.empty((n, n))
    for i in range(n):
        g[i, i] = 1.0
        for j in range(i + 1, n):
            g[i, j] = g[j, i] = float(dirs[i].dot(dirs[j]) ** order)
    return GramMatrix(g, "gaussian", "hermite", order)


def _delta(omega: Codeword, other: Codeword) -> np.ndarray:
    if omega.length != other.length:
        raise ValueError(
            f"codeword length mismatch: {omega.length} != {other.length}"
        )
    return np.array(omega.bits, dtype=np.float64) - np.array(
        other.bits, dtype=np.float64
    )


def packing_separation(
    omega: Codeword,
    other: Codeword,
    v1: float,
    L: int,
    gram: GramMatrix | None = None,
) -> float:
    """Exact squared L2(P) distance (v1/L)^2 Delta' G Delta of two packing
    members; ``gram=None`` means the orthonormal case, where the quadratic
    form reduces to the Hamming distance."""
    scale = (v1 / L) ** 2
    if gram is None:
        return scale * float(
            sum(a != b for a, b in zip(omega.bits, other.bits))
        )
    if gram.size != omega.length:
        raise ValueError(
            f"codeword length {omega.length} != gram size {gram.size}"
        )
    delta = _delta(omega, other)
    return scale * float(delta @ gram.entries @ delta)


def packing_norm(
    omega: Codeword,
    v1: float,
    L: int,
    gram: GramMatrix | None = None,
) -> float:
    """Squared norm (v1/L)^2 omega' G omega; equals v1^2 / L when the family
    is orthonormal."""
    if omega.weight != L:
        raise ValueError(f"codeword weight {omega.weight} != stated L {L}")
    scale = (v1 / L) ** 2
    if gram is None:
        return scale * L
    if gram.size != omega.length:
        raise ValueError(
            f"codeword length {omega.length} != gram size {gram.size}"
        )
    w = np.array(omega.bits, dtype=np.float64)
    return scale * float(w @ gram.entries @ w)


def mc_l2(
    f: Callable[[np.ndarray], np.ndarray],
    g: Callable[[np.ndarray], np.ndarray],
    design: str,
    d: int,
    n_samples: int,
    seed: int,
    *,
    threads: int | None = None,
) -> tuple[float, float]:
    """Monte-Carlo estimate of E[(f(X) - g(X))^2] with its standard error.

    Deterministic given the seed: samples come from counter-based blocks
    keyed by (seed, block index), and block statistics are reduced in
    block order regardless of how many worker threads evaluate them.
    """
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    n_blocks = -(-n_samples // rng.BLOCK)

    def block_stats(b: int) -> tuple[float, float, int]:
        x = rng.design_block(design, d, seed, rng.DESIGN_STREAM, b)
        take = min(rng.BLOCK, n_samples - b * rng.BLOCK)
        x = x[:take]
        diff = np.asarray(f(x), dtype=np.float64) - np.asarray(
            g(x), dtype=np.float64
        )
        sq = diff * diff
        return float(sq.sum()), float((sq * sq).sum()), take

    if threads and threads > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            stats = list(pool.map(block_stats, range(n_blocks)))
    else:
        stats = [block_stats(b) for b in range(n_blocks)]

    total = sum(s[0] for s in stats)
    total_sq = sum(s[1] for s in stats)
    count = sum(s[2] for s in stats)
    mean = total / count
    var = max(0.0, total_sq / count - mean * mean)
    stderr = math.sqrt(var / (count - 1))
    return mean, stderr


def mc_inner_products(
    atoms: Callable[[np.ndarray], np.ndarray],
    n_atoms: int,
    design: str,
    d: int,
    n_samples: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Monte-Carlo estimates of all pairwise inner products E[a_i a_j].

    ``atoms`` maps an (n, d) sample block to an (n, n_atoms) matrix of atom
    values.  Returns (estimates, standard errors), both (n_atoms, n_atoms).
    """
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    n_blocks = -(-n_samples // rng.BLOCK)
    first = np.zeros((n_atoms, n_atoms))
    second = np.zeros((n_atoms, n_atoms))
    count = 0
    for b in range(n_blocks):
        x = rng.design_block(design, d, seed, rng.DESIGN_STREAM, b)
        take = min(rng.BLOCK, n_samples - count)
        a = np.asarray(atoms(x[:take]), dtype=np.float64)
        first += a.T @ a
        sq = a * a
        second += sq.T @ sq
        count += take
    mean = first / count
    var = np.maximum(0.0, second / count - mean * mean)
    stderr = np.sqrt(var / (count - 1))
    return mean, stderr


def exact_dot(theta: RidgeDirection, other: RidgeDirection) -> Fraction:
    """Exact rational Euclidean inner product of two directions."""
    return theta.dot(other)
