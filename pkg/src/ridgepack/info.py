"""Information-theoretic bounds: KL divergence under the Gaussian
regression model, and the Fano / Pinsker lower bounds on the minimax
identification probability.

All quantities are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class InfoBoundInput:
    """Inputs for the probability bounds: the log-cardinality of the
    hypothesis family, an upper bound on the mutual information between the
    hypothesis index and the data, and the information fraction alpha."""

    log_cardinality: float
    mutual_info_bound: float
    alpha: float

    def __post_init__(self) -> None:
        if self.log_cardinality <= 0:
            raise ValueError("log_cardinality must be positive")
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.mutual_info_bound < 0:
            raise ValueError("mutual information bound must be >= 0")


@dataclass(frozen=True)
class FanoBound:
    """Fano lower bound on the identification error probability.

    When the stated mutual-information condition MI <= alpha log N fails,
    the bound is evaluated at the implied alpha = MI / log N and flagged.
    """

    value: float
    alpha_used: float
    mi_condition_holds: bool
    vacuous: bool


def kl_regression(norm_sq: float, n: int) -> float:
    """KL divergence bound (n/2) ||f||^2 for n observations of
    Y = f(X) + N(0,1) noise against the pure-noise model.

    Equality holds for the zero-centered reference, which is the choice
    used throughout: families here are small-radius around f = 0.
    """
    if norm_sq < 0:
        raise ValueError("norm_sq must be >= 0")
    if n < 1:
        raise ValueError("n must be >= 1")
    return 0.5 * n * norm_sq


def fano_bound(inp: InfoBoundInput) -> FanoBound:
    """P(error) >= 1 - (alpha log N + log 2)/log N given MI <= alpha log N."""
    if inp.log_cardinality <= LOG2:
        raise ValueError(
            f"log cardinality {inp.log_cardinality:.6g} <= log 2: the bound "
            "is vacuous for fewer than two hypotheses"
        )
    holds = inp.mutual_info_bound <= inp.alpha * inp.log_cardinality
    alpha_used = (
        inp.alpha if holds else inp.mutual_info_bound / inp.log_cardinality
    )
    raw = 1.0 - alpha_used - LOG2 / inp.log_cardinality
    value = min(1.0, max(0.0, raw))
    return FanoBound(
        value=value,
        alpha_used=alpha_used,
        mi_condition_holds=holds,
        vacuous=raw <= 0.0,
    )


def fano_bound_implied(log_cardinality: float, mutual_info_bound: float) -> FanoBound:
    """Fano bound at the implied alpha = MI / log N (the raw Fano form
    P(error) >= 1 - (MI + log 2)/log N)."""
    if log_cardinality <= LOG2:
        raise ValueError(
            f"log cardinality {log_cardinality:.6g} <= log 2: the bound "
            "is vacuous for fewer than two hypotheses"
        )
    alpha_used = mutual_info_bound / log_cardinality
    raw = 1.0 - alpha_used - LOG2 / log_cardinality
    return FanoBound(
        value=min(1.0, max(0.0, raw)),
        alpha_used=alpha_used,
        mi_condition_holds=True,
        vacuous=raw <= 0.0,
    )


def pinsker_bound(cardinality: float, alpha: float) -> float:
    """(sqrt(N)/(1+sqrt(N))) (1 - 2 alpha - sqrt(2 alpha / log N)),
    clipped to [0, 1]; requires N >= 2 and alpha in (0, 1/8)."""
    if cardinality < 2:
        raise ValueError(f"cardinality must be >= 2, got {cardinality}")
    if not (0.0 < alpha < 0.125):
        raise ValueError(f"alpha must be in (0, 1/8), got {alpha}")
    log_n = math.log(cardinality)
    # sqrt(N)/(1+sqrt(N)) written log-safely for very large N
    front = 1.0 / (1.0 + math.exp(-0.5 * log_n))
    value = front * (1.0 - 2.0 * alpha - math.sqrt(2.0 * alpha / log_n))
    return min(1.0, max(0.0, value))


def risk_from_testing(epsilon: float, min_prob: float) -> float:
    """Risk lower bound (epsilon^2 / 4) * P(test error)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not (0.0 <= min_prob <= 1.0):
        raise ValueError("min_prob must be in [0, 1]")
    return 0.25 * epsilon * epsilon * min_prob
