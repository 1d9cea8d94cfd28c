"""Activation functions and ridge function evaluation.

Activations: scaled sine sqrt(2) sin(pi z), unit step I{z > 0}, signum
2 step - 1, clipped linear sgn(z) min(1, |z|), standardized Hermite
polynomials H_l / sqrt(l!), and a clipped Hermite variant held constant
outside [-zeta, zeta].

Conventions: step(0) = 0 (strict inequality), hence sgn(0) = -1.  Both
sit on measure-zero sets and are irrelevant to the L2 quantities computed
downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .lattice import RidgeDirection
from .quadrature import QuadratureConfig, integrate_piecewise

ArrayLike = Union[float, np.ndarray]

ACTIVATION_KINDS = ("sine", "sgn", "step", "clip", "hermite", "clipped-hermite")

SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def step(z: ArrayLike) -> ArrayLike:
    return np.where(np.asarray(z, dtype=np.float64) > 0, 1.0, 0.0)[()]


def sgn(z: ArrayLike) -> ArrayLike:
    return np.where(np.asarray(z, dtype=np.float64) > 0, 1.0, -1.0)[()]


def clip(z: ArrayLike) -> ArrayLike:
    # sgn(z) min(1, |z|) coincides with clamping to [-1, 1] everywhere,
    # including z = 0.
    return np.clip(np.asarray(z, dtype=np.float64), -1.0, 1.0)[()]


def scaled_sine(z: ArrayLike) -> ArrayLike:
    return SQRT2 * np.sin(np.pi * np.asarray(z, dtype=np.float64))[()]


def _inv_sqrt_factorial(order: int) -> float:
    if order <= 20:
        return 1.0 / math.sqrt(math.factorial(order))
    # log domain beyond 20!: the plain factorial overflows float64 at 171.
    return math.exp(-0.5 * math.lgamma(order + 1))


def hermite_polynomial(order: int, z: ArrayLike) -> ArrayLike:
    """Probabilists' Hermite polynomial via H_{k+1} = z H_k - k H_{k-1}."""
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    z = np.asarray(z, dtype=np.float64)
    h_prev = np.ones_like(z)
    if order == 0:
        return h_prev[()]
    h = z.copy()
    for k in range(1, order):
        h, h_prev = z * h - k * h_prev, h
    return h[()]


def standardized_hermite(order: int, z: ArrayLike) -> ArrayLike:
    """H_order(z) / sqrt(order!), orthonormal under the standard Gaussian."""
    return hermite_polynomial(order, z) * _inv_sqrt_factorial(order)


@dataclass(frozen=True)
class Activation:
    """An activation kind plus its parameters (Hermite order, clamp point)."""

    kind: str
    order: int = 0
    threshold: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ACTIVATION_KINDS:
            raise ValueError(
                f"unknown activation {self.kind!r}; expected one of "
                f"{ACTIVATION_KINDS}"
            )
        if self.kind in ("hermite", "clipped-hermite") and self.order < 0:
            raise ValueError("hermite order must be >= 0")
        if self.kind == "clipped-hermite" and (
            self.threshold is None or self.threshold < 0
        ):
            raise ValueError("clipped-hermite needs a clamp threshold >= 0")

    def __call__(self, z: ArrayLike) -> ArrayLike:
        if self.kind == "sine":
            return scaled_sine(z)
        if self.kind == "step":
            return step(z)
        if self.kind == "sgn":
            return sgn(z)
        if self.kind == "clip":
            return clip(z)
        if self.kind == "hermite":
            return standardized_hermite(self.order, z)
        # clipped-hermite: constant height outside [-threshold, threshold]
        clamped = np.clip(np.asarray(z, dtype=np.float64), -self.threshold, self.threshold)
        return standardized_hermite(self.order, clamped)[()]


def eval_activation(
    kind: str,
    z: ArrayLike,
    *,
    order: int = 0,
    threshold: float | None = None,
) -> ArrayLike:
    return Activation(kind, order=order, threshold=threshold)(z)


@dataclass(frozen=True)
class ClassDescriptor:
    """A function class: activation kind plus the l1 budgets of the inner
    (v0) and outer (v1) parameter vectors."""

    kind: str
    v0: float
    v1: float
    order: int = 0

    def __post_init__(self) -> None:
        if self.v0 <= 0 or self.v1 <= 0:
            raise ValueError("v0 and v1 must be positive")
        if self.kind not in ACTIVATION_KINDS:
            raise ValueError(f"unknown activation {self.kind!r}")


@dataclass(frozen=True)
class RidgeFunction:
    """outer_scale * phi(theta . x - shift)."""

    activation: Activation
    direction: RidgeDirection
    shift: float = 0.0
    outer_scale: float = 1.0

    def __call__(self, x: np.ndarray) -> ArrayLike:
        return eval_ridge(self, x)


def eval_ridge(f: RidgeFunction, x: np.ndarray) -> ArrayLike:
    """Evaluate a ridge function at one point (1-d x) or a batch of points
    (rows of a 2-d x)."""
    x = np.asarray(x, dtype=np.float64)
    theta = f.direction.as_array()
    if x.shape[-1] != theta.shape[0]:
        raise ValueError(
            f"dimension mismatch: x has {x.shape[-1]} coordinates, "
            f"direction has {theta.shape[0]}"
        )
    z = x @ theta - f.shift
    return f.outer_scale * f.activation(z)


def gaussian_density(z: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * z * z)


def hermite_tail_mass(
    order: int,
    zeta: float,
    *,
    abs_tol: float = 1e-12,
    upper: float | None = None,
) -> float:
    """E[phi_l(Z)^2 1{|Z| > zeta}] for Z standard normal, by quadrature."""
    if zeta < 0:
        raise ValueError("zeta must be >= 0")
    inv = _inv_sqrt_factorial(order)

    def integrand(z: float) -> float:
        h = float(hermite_polynomial(order, z)) * inv
        return h * h * gaussian_density(z)

    if upper is None:
        # Integrand is O(z^{2l} e^{-z^2/2}); beyond this point it is far
        # below any tolerance used at desk scale.
        upper = max(12.0, zeta + 12.0, math.sqrt(6.0 * order + 40.0))
    if zeta >= upper:
        return 0.0
    cfg = QuadratureConfig(abs_tol=abs_tol)
    return 2.0 * integrate_piecewise(integrand, zeta, upper, [], cfg)


def hermite_clip_threshold(
    order: int,
    delta: float,
    *,
    tol: float = 1e-9,
    max_iter: int = 200,
) -> float:
    """Smallest clamp point zeta with E[phi_l(Z)^2 1{|Z| > zeta}] <= delta.

    Found by bracketing + bisection; each tail mass is evaluated by
    adaptive quadrature at absolute tolerance delta / 100.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    quad_tol = delta / 100.0

    def tail(z: float) -> float:
        return hermite_tail_mass(order, z, abs_tol=quad_tol)

    lo = 0.0
    if tail(lo) <= delta:  # only as delta -> 1; zeta = 0 is then admissible
        return 0.0
    hi = 1.0
    iterations = 0
    while tail(hi) > delta:
        hi *= 2.0
        iterations += 1
        if iterations > 60:
            raise RuntimeError("failed to bracket the clip threshold")
    for _ in range(max_iter):
        if hi - lo <= tol:
            return hi
        mid = 0.5 * (lo + hi)
        if tail(mid) <= delta:
            hi = mid
        else:
            lo = mid
    raise RuntimeError(
        f"clip-threshold bisection did not converge within {max_iter} iterations"
    )
