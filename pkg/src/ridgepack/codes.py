"""Constant-weight binary codebooks with certified minimum distance.

A codebook here is a set of binary words of common length M and common
Hamming weight L whose pairwise Hamming distances all reach a stated
minimum.  The deterministic greedy scan over the weight-L slice realizes
the classical counting guarantee: with minimum distance ceil(L/5) and
M >= 10, L <= M/10, the scan returns at least sqrt(C(M, L)) words.

Words are stored as explicit bit vectors; distance computations use
bit-packed integers (popcount) in the greedy inner loop and BLAS matrix
products for whole-codebook verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import rng

#: Largest slice size that is enumerated exhaustively before the builder
#: switches to seeded random sampling.
DEFAULT_ENUMERATION_CAP = 10_000_000


class CodeConstructionError(RuntimeError):
    """Raised when a codebook with the requested parameters cannot be built."""


@dataclass(frozen=True)
class Codeword:
    """A fixed-length binary word with its Hamming weight."""

    bits: tuple[int, ...]
    weight: int = field(default=-1)

    def __post_init__(self) -> None:
        if len(self.bits) < 1:
            raise ValueError("codeword length must be >= 1")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("codeword entries must be 0 or 1")
        w = sum(self.bits)
        if self.weight == -1:
            object.__setattr__(self, "weight", w)
        elif self.weight != w:
            raise ValueError(f"stated weight {self.weight} != count of ones {w}")

    @property
    def length(self) -> int:
        return len(self.bits)

    def packed(self) -> int:
        """Bit-packed integer; coordinate j maps to bit (length-1-j)."""
        return int("".join("1" if b else "0" for b in self.bits), 2)

    def to_string(self) -> str:
        """Bit-string, most-significant index first."""
        return "".join("1" if b else "0" for b in self.bits)

    @classmethod
    def from_string(cls, s: str) -> "Codeword":
        return cls(tuple(int(c) for c in s))

    def support(self) -> tuple[int, ...]:
        return tuple(j for j, b in enumerate(self.bits) if b)


@dataclass
class Codebook:
    """A constant-weight code: common length, common weight, certified
    minimum pairwise Hamming distance."""

    length: int
    weight: int
    min_distance: int
    words: list[Codeword]

    def __len__(self) -> int:
        return len(self.words)

    def bit_matrix(self) -> np.ndarray:
        """(n_words, length) float matrix of 0/1 entries."""
        return np.array([w.bits for w in self.words], dtype=np.float64)

    def to_json(self) -> dict:
        return {
            "M": self.length,
            "L": self.weight,
            "min_distance": self.min_distance,
            "words": [w.to_string() for w in self.words],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Codebook":
        return cls(
            length=int(doc["M"]),
            weight=int(doc["L"]),
            min_distance=int(doc["min_distance"]),
            words=[Codeword.from_string(s) for s in doc["words"]],
        )


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass
class VerificationReport:
    """Outcome of re-deriving an object's invariants from scratch."""

    checks: list[Check]
    measurements: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_checks(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
            "measurements": self.measurements,
        }


def log_binomial(n: int, k: int) -> float:
    """log C(n, k): exact integer arithmetic for n <= 60, log-gamma beyond."""
    if k < 0 or k > n:
        raise ValueError(f"k={k} out of range for n={n}")
    if n <= 60:
        return math.log(math.comb(n, k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def hamming_distance(a: int, b: int) -> int:
    """Hamming distance of two bit-packed words."""
    return (a ^ b).bit_count()


def _colex_supports(length: int, weight: int) -> Iterator[tuple[int, ...]]:
    """Weight-`weight` supports of {0..length-1} in colexicographic order."""
    if weight == 0:
        yield ()
        return
    for top in range(weight - 1, length):
        for rest in _colex_supports(top, weight - 1):
            yield rest + (top,)


def _pack_support(support: Sequence[int]) -> int:
    word = 0
    for j in support:
        word |= 1 << j
    return word


def _unpack(word: int, length: int) -> Codeword:
    bits = tuple((word >> j) & 1 for j in range(length))
    return Codeword(bits)


def lemma_guarantee_size(M: int, L: int) -> int:
    """Cardinality target ceil(sqrt(C(M, L))) for distance ceil(L/5)."""
    return math.ceil(math.exp(0.5 * log_binomial(M, L)))


def build_constant_weight_code(
    M: int,
    L: int,
    min_dist: int,
    *,
    require_guarantee: bool = False,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
    stop_at: int | None = None,
    seed: int = 0,
    max_attempts_factor: int = 1000,
) -> Codebook:
    """Greedy constant-weight code over the weight-L slice of {0,1}^M.

    The deterministic scan visits supports in colexicographic order and
    accepts a word iff it is at Hamming distance >= min_dist from every
    accepted word.  When C(M, L) exceeds ``enumeration_cap`` the builder
    switches to seeded random sampling with rejection, stopping once the
    guarantee target sqrt(C(M, L)) is reached (or erroring after
    ``max_attempts_factor * target`` rejected draws).

    ``require_guarantee`` additionally validates M >= 10, 1 <= L <= M/10 and
    min_dist == ceil(L/5), and errors if the counting target is missed.
    ``stop_at`` truncates the scan once that many words are accepted (the
    size guarantee is then not claimed).
    """
    if not (1 <= L <= M):
        raise CodeConstructionError(f"infeasible parameters: L={L} not in [1, {M}]")
    if min_dist < 1:
        raise CodeConstructionError(f"min_dist must be >= 1, got {min_dist}")
    if require_guarantee:
        if M < 10 or L > M / 10:
            raise CodeConstructionError(
                f"guarantee mode needs M >= 10 and L <= M/10; got M={M}, L={L}"
            )
        expected_dist = math.ceil(L / 5)
        if min_dist != expected_dist:
            raise CodeConstructionError(
                f"guarantee mode needs min_dist == ceil(L/5) == {expected_dist}, "
                f"got {min_dist}"
            )

    slice_size = math.comb(M, L)
    target = lemma_guarantee_size(M, L)

    accepted: list[int] = []
    if slice_size <= enumeration_cap:
        # Constant-weight words have even pairwise distances, and distinct
        # words differ in >= 2 positions, so min_dist <= 2 accepts the
        # whole slice without any distance checks.
        check_needed = min_dist > 2
        for support in _colex_supports(M, L):
            cand = _pack_support(support)
            if not check_needed or all(
                (cand ^ w).bit_count() >= min_dist for w in accepted
            ):
                accepted.append(cand)
                if stop_at is not None and len(accepted) >= stop_at:
                    break
    else:
        goal = stop_at if stop_at is not None else target
        g = rng.generator(seed, rng.SAMPLING_STREAM, 0)
        attempts_left = max_attempts_factor * max(goal, 1)
        while len(accepted) < goal:
            if attempts_left <= 0:
                raise CodeConstructionError(
                    f"random sampling exhausted its retry budget at "
                    f"{len(accepted)}/{goal} words (M={M}, L={L}, "
                    f"min_dist={min_dist})"
                )
            attempts_left -= 1
            support = g.choice(M, size=L, replace=False)
            cand = _pack_support(support.tolist())
            if all((cand ^ w).bit_count() >= min_dist for w in accepted):
                accepted.append(cand)

    if require_guarantee and stop_at is None and len(accepted) < target:
        raise CodeConstructionError(
            f"counting guarantee missed: built {len(accepted)} < target {target}"
        )

    words = [_unpack(w, M) for w in accepted]
    return Codebook(length=M, weight=L, min_distance=min_dist, words=words)


def pairwise_distance_stats(cb: Codebook, block: int = 512) -> dict:
    """Min pairwise Hamming distance, duplicate count, and weight range.

    Works blockwise on the bit matrix so large codebooks stay within a
    modest memory budget.  Distances use w_i + w_j - 2 <w_i, w_j>, which is
    exact in float64 for the word lengths handled here.
    """
    n = len(cb.words)
    weights = np.array([w.weight for w in cb.words], dtype=np.float64)
    if n < 2:
        return {
            "min_distance": math.inf,
            "duplicates": 0,
            "weight_min": int(weights.min()) if n else 0,
            "weight_max": int(weights.max()) if n else 0,
        }
    bits = cb.bit_matrix()
    min_dist = math.inf
    duplicates = 0
    for start in range(0, n, block):
        rows = bits[start : start + block]
        inner = rows @ bits.T
        dist = weights[start : start + block, None] + weights[None, :] - 2.0 * inner
        for r in range(rows.shape[0]):
            dist[r, start + r] = math.inf
        block_min = float(dist.min())
        min_dist = min(min_dist, block_min)
        duplicates += int(np.count_nonzero(dist < 0.5))
    # Every unordered pair appears twice in the blockwise sweep.
    duplicates //= 2
    return {
        "min_distance": min_dist,
        "duplicates": duplicates,
        "weight_min": int(weights.min()),
        "weight_max": int(weights.max()),
    }


def verify_codebook(cb: Codebook) -> VerificationReport:
    """Re-derive a codebook's invariants: weight uniformity, duplicate
    freedom, and the claimed minimum distance."""
    checks: list[Check] = []
    stats = pairwise_distance_stats(cb)

    uniform = stats["weight_min"] == stats["weight_max"] == cb.weight if cb.words else True
    checks.append(
        Check(
            "weight_uniformity",
            uniform,
            f"weights in [{stats['weight_min']}, {stats['weight_max']}], "
            f"stated L={cb.weight}",
        )
    )
    checks.append(
        Check(
            "no_duplicates",
            stats["duplicates"] == 0,
            f"{stats['duplicates']} duplicate pair(s)",
        )
    )
    dist_ok = stats["min_distance"] >= cb.min_distance
    checks.append(
        Check(
            "min_distance",
            dist_ok,
            f"actual min distance {stats['min_distance']}, "
            f"claimed {cb.min_distance}",
        )
    )
    lengths_ok = all(w.length == cb.length for w in cb.words)
    checks.append(
        Check("length_uniformity", lengths_ok, f"stated M={cb.length}")
    )
    return VerificationReport(
        checks=checks,
        measurements={
            "size": len(cb.words),
            "actual_min_distance": stats["min_distance"],
            "claimed_min_distance": cb.min_distance,
            "duplicates": stats["duplicates"],
        },
    )


def covering_certificate(cb: Codebook, enumeration_cap: int = 1_000_000) -> bool:
    """Gilbert-Varshamov covering witness for a full greedy scan: every
    weight-L word lies within min_dist - 1 of some codeword.

    Only meaningful for codebooks produced by an untruncated scan; errors
    if the slice is larger than ``enumeration_cap``.
    """
    if math.comb(cb.length, cb.weight) > enumeration_cap:
        raise ValueError("slice too large for exhaustive covering check")
    packed = [_pack_support(w.support()) for w in cb.words]
    radius = cb.min_distance - 1
    for support in _colex_supports(cb.length, cb.weight):
        cand = _pack_support(support)
        if not any((cand ^ w).bit_count() <= radius for w in packed):
            return False
    return True


def codeword_fraction_vector(w: Codeword) -> tuple[Fraction, ...]:
    """Exact rational view of a codeword, for separation certificates."""
    return tuple(Fraction(b) for b in w.bits)
