"""Ridge-direction dictionaries: integer points of the l1 ball, and
unit-norm directions derived from constant-weight codewords.

Inner products and l1 norms of directions are kept in exact rational
arithmetic (separation certificates downstream must be exact); floating
point enters only through l2 normalization.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .codes import Codebook

DEFAULT_MEMORY_CAP = 50_000_000  # entries: d * number of points


class EnumerationCapError(RuntimeError):
    """Raised when an enumeration would exceed the configured memory cap."""


class DirectionPreconditionError(ValueError):
    """Raised when code-derived directions are requested from an unsuitable
    codebook; the message names the violated inequality."""


@dataclass(frozen=True)
class RidgeDirection:
    """An inner-parameter vector: integer lattice point or rational
    unit-norm direction."""

    coordinates: tuple[Fraction, ...]
    kind: str  # "lattice" | "unit-code"

    def __post_init__(self) -> None:
        if self.kind not in ("lattice", "unit-code"):
            raise ValueError(f"unknown direction kind {self.kind!r}")
        if self.kind == "lattice" and any(
            c.denominator != 1 for c in self.coordinates
        ):
            raise ValueError("lattice directions must have integer coordinates")

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    @property
    def l1_norm(self) -> Fraction:
        return sum((abs(c) for c in self.coordinates), Fraction(0))

    @property
    def l2_norm_sq(self) -> Fraction:
        return sum((c * c for c in self.coordinates), Fraction(0))

    @property
    def l2_norm(self) -> float:
        sq = self.l2_norm_sq
        if sq == 1:
            return 1.0
        return math.sqrt(float(sq))

    def dot(self, other: "RidgeDirection") -> Fraction:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} != {other.dim}")
        return sum(
            (a * b for a, b in zip(self.coordinates, other.coordinates)),
            Fraction(0),
        )

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coordinates)

    def negated(self) -> "RidgeDirection":
        return RidgeDirection(tuple(-c for c in self.coordinates), self.kind)

    def as_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.coordinates], dtype=np.float64)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coordinates]

    @classmethod
    def from_json(cls, coords: Sequence[str], kind: str) -> "RidgeDirection":
        return cls(tuple(Fraction(c) for c in coords), kind)


def lattice_direction(coords: Sequence[int]) -> RidgeDirection:
    return RidgeDirection(tuple(Fraction(int(c)) for c in coords), "lattice")


def _coerce_radius(v0) -> int:
    """Radii are integers; non-integer input is floored with a warning."""
    if isinstance(v0, int):
        return v0
    if float(v0).is_integer():
        return int(v0)
    floored = math.floor(v0)
    warnings.warn(
        f"l1 radius {v0} is not an integer; using floor value {floored}",
        stacklevel=3,
    )
    return floored


def l1_ball_count(d: int, v0: int) -> int:
    """Exact number of integer points with l1 norm <= v0 in dimension d."""
    return sum(
        2**k * math.comb(d, k) * math.comb(v0, k) for k in range(min(d, v0) + 1)
    )


def _points(d: int, budget: int) -> Iterator[tuple[int, ...]]:
    if d == 0:
        yield ()
        return
    for v in range(-budget, budget + 1):
        for rest in _points(d - 1, budget - abs(v)):
            yield (v,) + rest


def enumerate_l1_lattice(
    d: int,
    v0,
    canonical: bool = True,
    *,
    memory_cap: int = DEFAULT_MEMORY_CAP,
) -> list[RidgeDirection]:
    """All integer points with l1 norm <= v0 in dimension d.

    With ``canonical=True`` the zero vector is dropped and exactly one of
    each +/- pair is kept (the representative whose first nonzero
    coordinate is positive); sinusoidal ridge atoms built on the canonical
    half form an orthonormal family, whereas the full set pairs each atom
    with its negation.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    radius = _coerce_radius(v0)
    if radius < 1:
        raise ValueError(f"l1 radius must be >= 1, got {v0}")
    count = l1_ball_count(d, radius)
    if d * count > memory_cap:
        raise EnumerationCapError(
            f"enumeration needs {d * count} entries > cap {memory_cap}"
        )
    out: list[RidgeDirection] = []
    for point in _points(d, radius):
        if canonical:
            first = next((c for c in point if c != 0), 0)
            if first <= 0:
                continue
        out.append(lattice_direction(point))
    return out


def l1_ball_count_recursive(d: int, v0: int) -> int:
    """Independent recursive count: N(d, r) = N(d-1, r) + sum_j 2 N(d-1, r-j)."""
    if d == 0:
        return 1
    return l1_ball_count_recursive(d - 1, v0) + sum(
        2 * l1_ball_count_recursive(d - 1, v0 - j) for j in range(1, v0 + 1)
    )


@dataclass(frozen=True)
class LatticeCountBounds:
    """Closed-form size bounds for the l1 lattice dictionary.

    ``binomial_count`` is the stated closed-form count C(2d+v0, 2d); for
    d >= 2 it overcounts the exact enumeration (15 vs 13 at d = v0 = 2),
    so callers should rely on the exact count and treat this value as a
    reported reference.  The two lower bounds are (1+d/v0)^v0 (large-d
    regime) and (1+v0/d)^d (large-v0 regime).
    """

    lower_large_d: float
    lower_large_v0: float
    binomial_count: float
    log_lower_large_d: float
    log_lower_large_v0: float
    log_binomial_count: float


def lattice_count_bounds(d: int, v0: int) -> LatticeCountBounds:
    if d < 1 or v0 < 1:
        raise ValueError("d and v0 must be >= 1")
    log_large_d = v0 * math.log1p(d / v0)
    log_large_v0 = d * math.log1p(v0 / d)
    from .codes import log_binomial

    log_binom = log_binomial(2 * d + v0, 2 * d)

    def safe_exp(x: float) -> float:
        return math.exp(x) if x < 700 else math.inf

    binom = (
        float(math.comb(2 * d + v0, 2 * d))
        if 2 * d + v0 <= 1000
        else safe_exp(log_binom)
    )
    return LatticeCountBounds(
        lower_large_d=safe_exp(log_large_d),
        lower_large_v0=safe_exp(log_large_v0),
        binomial_count=binom,
        log_lower_large_d=log_large_d,
        log_lower_large_v0=log_large_v0,
        log_binomial_count=log_binom,
    )


def hermite_directions(cb: Codebook, v0: int, d: int) -> list[RidgeDirection]:
    """Unit-norm directions theta = a / v0 from a constant-weight codebook.

    The codebook must have length d, weight v0^2, and minimum distance
    >= ceil(v0^2 / 5), with v0^2 <= d/10 and d >= 10.  Every direction then
    has unit l2 norm and l1 norm exactly v0, and distinct pairs satisfy
    |theta . theta'| <= 9/10 because
    theta . theta' = (v0^2 - Hamming(a, a')/2) / v0^2.
    """
    v0 = _coerce_radius(v0)
    violations = []
    if d < 10:
        violations.append(f"d >= 10 (got d={d})")
    if cb.length != d:
        violations.append(f"codebook length == d (got {cb.length} != {d})")
    if cb.weight != v0 * v0:
        violations.append(
            f"codebook weight == v0^2 (got {cb.weight} != {v0 * v0})"
        )
    if v0 * v0 > d / 10:
        violations.append(f"v0^2 <= d/10 (got {v0 * v0} > {d / 10})")
    required = math.ceil(v0 * v0 / 5)
    if cb.min_distance < required:
        violations.append(
            f"min distance >= ceil(v0^2/5) (got {cb.min_distance} < {required})"
        )
    if violations:
        raise DirectionPreconditionError(
            "codebook unsuitable for unit directions: " + "; ".join(violations)
        )
    dirs = []
    for w in cb.words:
        coords = tuple(Fraction(b, v0) for b in w.bits)
        dirs.append(RidgeDirection(coords, "unit-code"))
    return dirs


def directions_to_json(dirs: list[RidgeDirection], d: int, v0) -> dict:
    return {
        "d": d,
        "v0": v0,
        "kind": dirs[0].kind if dirs else "lattice",
        "directions": [dr.to_json() for dr in dirs],
    }


def directions_from_json(doc: dict) -> list[RidgeDirection]:
    kind = doc["kind"]
    return [RidgeDirection.from_json(coords, kind) for coords in doc["directions"]]
