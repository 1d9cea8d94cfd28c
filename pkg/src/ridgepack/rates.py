"""Closed-form minimax rate formulas, regime conditions, the entropy
matching solver, and reference upper/lower comparison curves.

Universal constants are never pinned by the theory, so every formula takes
its constant from a named map defaulting to 1; results echo the constants
used.  Constant names: c1 (penalized tradeoff curve), c2 (bounded-Lipschitz
upper curve), c3 (unconstrained-v0 lower curve), c4_prime (high-dimensional
upper curve), c4/c5 (sine regime conditions), c6/c7 (sine rates), c8/c9
(Hermite dimension/order conditions), c10 (Hermite rate), plus gamma (the
high-dimensional upper exponent, 1/3 noise-free or discretized least
squares, 1/4 sub-Gaussian noise) and alpha (information fraction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

DEFAULT_CONSTANTS: dict[str, float] = {
    "c1": 1.0,
    "c2": 1.0,
    "c3": 1.0,
    "c4": 1.0,
    "c4_prime": 1.0,
    "c5": 1.0,
    "c6": 1.0,
    "c7": 1.0,
    "c8": 1.0,
    "c9": 1.0,
    "c10": 1.0,
    "alpha": 0.1,
    "gamma": 1.0 / 3.0,
}

REGIMES = ("large_d", "large_v0", "hermite")


@dataclass(frozen=True)
class RateQuery:
    """Problem parameters for rate and condition evaluation."""

    d: float
    v0: float
    v1: float
    n: float
    order: int | None = None
    constants: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if min(self.d, self.v0, self.v1, self.n) <= 0:
            raise ValueError("d, v0, v1, n must all be positive")
        unknown = set(self.constants) - set(DEFAULT_CONSTANTS)
        if unknown:
            raise ValueError(f"unknown constants: {sorted(unknown)}")
        gamma = self.constant("gamma")
        if gamma not in (0.25, 1.0 / 3.0):
            raise ValueError("gamma must be 1/4 or 1/3")

    def constant(self, name: str) -> float:
        return float(self.constants.get(name, DEFAULT_CONSTANTS[name]))

    def constants_used(self) -> dict[str, float]:
        return {k: self.constant(k) for k in DEFAULT_CONSTANTS}


@dataclass(frozen=True)
class ConditionCheck:
    holds: bool
    lhs: float
    rhs: float

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.lhs - self.rhs,
        }


@dataclass
class RateResult:
    eps_n_sq: float
    regime: str
    conditions: dict[str, ConditionCheck]
    comparison_curves: dict[str, float]
    constants: dict[str, float]

    def to_json(self) -> dict:
        return {
            "eps_n_sq": self.eps_n_sq,
            "regime": self.regime,
            "conditions": {k: v.to_json() for k, v in self.conditions.items()},
            "comparison_curves": self.comparison_curves,
            "constants": self.constants,
        }


def rate_sine(
    d: float,
    v0: float,
    v1: float,
    n: float,
    regime: str = "auto",
    constant: float = 1.0,
) -> float:
    """Sine-class rate: (v0 v1^2 log(1+d/v0)/n)^(1/2) when d dominates,
    with d and v0 exchanged when v0 dominates."""
    if regime == "auto":
        regime = "large_d" if d >= v0 else "large_v0"
    if regime == "large_d":
        return constant * math.sqrt(v0 * v1 * v1 * math.log1p(d / v0) / n)
    if regime == "large_v0":
        return constant * math.sqrt(d * v1 * v1 * math.log1p(v0 / d) / n)
    raise ValueError(f"unknown regime {regime!r}")


def rate_hermite(
    d: float, v0: float, v1: float, n: float, constant: float = 1.0
) -> float:
    """Hermite-class rate: (v0^2 v1^2 log(d/v0^2)/n)^(1/2); needs d > v0^2."""
    if d <= v0 * v0:
        raise ValueError(f"need d > v0^2 (got d={d}, v0^2={v0 * v0})")
    return constant * math.sqrt(v0 * v0 * v1 * v1 * math.log(d / (v0 * v0)) / n)


def _sine_conditions(q: RateQuery) -> dict[str, ConditionCheck]:
    d, v0, v1, n = q.d, q.v0, q.v1, q.n
    out: dict[str, ConditionCheck] = {}

    lhs = d / v0 + 1.0
    rhs = (q.constant("c4") * v1 * v1 * n / (v0 * math.log1p(d / v0))) ** (1.0 / v0)
    out["sine_large_d"] = ConditionCheck(lhs > rhs, lhs, rhs)

    lhs = v0 / d + 1.0
    rhs = (q.constant("c5") * v1 * v1 * n / (d * math.log1p(v0 / d))) ** (1.0 / d)
    out["sine_large_v0"] = ConditionCheck(lhs > rhs, lhs, rhs)
    return out


def _hermite_conditions(q: RateQuery) -> dict[str, ConditionCheck]:
    d, v0, v1, n = q.d, q.v0, q.v1, q.n
    if d <= v0 * v0:
        raise ValueError(
            f"Hermite conditions need d > v0^2 (got d={d}, v0^2={v0 * v0})"
        )
    if q.order is None:
        raise ValueError("Hermite order condition needs the polynomial order")
    out: dict[str, ConditionCheck] = {}
    log_ratio = math.log(d / (v0 * v0))

    lhs = d / (v0 * v0)
    rhs = (q.constant("c8") * v1 * v1 * n / (v0 * v0 * log_ratio)) ** (
        2.0 / (v0 * v0)
    )
    out["hermite_dimension"] = ConditionCheck(lhs > rhs, lhs, rhs)

    lhs = float(q.order)
    rhs = q.constant("c9") * math.log(v1 * v1 * n / (v0 * v0 * log_ratio))
    out["hermite_order"] = ConditionCheck(lhs > rhs, lhs, rhs)

    # Sufficient form: the order condition follows once the order reaches a
    # constant multiple of v0^2 log(d/v0^2), given the dimension condition.
    rhs_suff = q.constant("c9") * v0 * v0 * log_ratio
    out["hermite_order_sufficient"] = ConditionCheck(
        lhs >= rhs_suff, lhs, rhs_suff
    )
    return out


def check_conditions(
    q: RateQuery, family: str = "sine"
) -> dict[str, ConditionCheck]:
    """Literal evaluation of the regime conditions, reporting both sides of
    each inequality for audit.  ``family`` is "sine", "hermite", or "all"."""
    if family == "sine":
        return _sine_conditions(q)
    if family == "hermite":
        return _hermite_conditions(q)
    if family == "all":
        out = _sine_conditions(q)
        out.update(_hermite_conditions(q))
        return out
    raise ValueError(f"unknown family {family!r}")


def solve_matching(
    log_packing: Callable[[float], float],
    n: float,
    *,
    rel_tol: float = 1e-10,
    bracket: tuple[float, float] = (1e-8, 1e8),
    max_expand: int = 200,
) -> float:
    """Solve eps^2 = log N(eps) / n for a nonincreasing log-packing curve.

    Bisection on g(eps) = eps^2 - log N(eps)/n, which is increasing when
    log N is nonincreasing; returns eps_n^2.
    """
    if n <= 0:
        raise ValueError("n must be positive")

    def g(eps: float) -> float:
        return eps * eps - log_packing(eps) / n

    lo, hi = bracket
    expands = 0
    while g(lo) >= 0.0:
        lo /= 2.0
        expands += 1
        if expands > max_expand:
            raise ValueError("no sign change: g(eps) >= 0 down to the bracket floor")
    expands = 0
    while g(hi) <= 0.0:
        hi *= 2.0
        expands += 1
        if expands > max_expand:
            raise ValueError("no sign change: g(eps) <= 0 up to the bracket ceiling")

    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if g(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    eps = 0.5 * (lo + hi)
    return eps * eps


def sine_log_packing(
    d: float, v0: float, v1: float, regime: str = "auto"
) -> Callable[[float], float]:
    """The packing log-cardinality curve matched by the sine rates."""
    if regime == "auto":
        regime = "large_d" if d >= v0 else "large_v0"
    if regime == "large_d":
        factor = v0 * math.log1p(d / v0)
    elif regime == "large_v0":
        factor = d * math.log1p(v0 / d)
    else:
        raise ValueError(f"unknown regime {regime!r}")

    def log_packing(eps: float) -> float:
        return factor * (v1 / eps) ** 2

    return log_packing


def hermite_log_packing(
    d: float, v0: float, v1: float
) -> Callable[[float], float]:
    if d <= v0 * v0:
        raise ValueError("need d > v0^2")
    factor = math.log(d / (v0 * v0))

    def log_packing(eps: float) -> float:
        return factor * (v0 * v1 / eps) ** 2

    return log_packing


def comparison_curves(q: RateQuery) -> dict[str, float]:
    """Reference upper/lower bound curves for comparison tables.

    penalized_tradeoff  : 2 v1 (c1 d log n / n)^(1/2)
    upper_lipschitz     : c2 (d v0^2 v1^2 / n)^(1/2 + 1/(2(d+1)))
    lower_any_v0        : c3 v1^(d/(d+2)) (1/(d^4 n))^(1/2 + 1/(d+2))
    upper_highdim_g13   : c4' (v0^2 v1^4 log(d+1) / n)^(1/3)
    upper_highdim_g14   : same base to the 1/4 power
    """
    d, v0, v1, n = q.d, q.v0, q.v1, q.n
    highdim_base = v0 * v0 * v1**4 * math.log(d + 1.0) / n
    return {
        "penalized_tradeoff": 2.0
        * v1
        * math.sqrt(q.constant("c1") * d * math.log(n) / n),
        "upper_lipschitz": q.constant("c2")
        * (d * v0 * v0 * v1 * v1 / n) ** (0.5 + 1.0 / (2.0 * (d + 1.0))),
        "lower_any_v0": q.constant("c3")
        * v1 ** (d / (d + 2.0))
        * (1.0 / (d**4 * n)) ** (0.5 + 1.0 / (d + 2.0)),
        "upper_highdim_g13": q.constant("c4_prime") * highdim_base ** (1.0 / 3.0),
        "upper_highdim_g14": q.constant("c4_prime") * highdim_base**0.25,
    }


def rate_query(q: RateQuery, family: str = "sine") -> RateResult:
    """One-stop evaluation: rate, regime, conditions, comparison curves."""
    if family == "sine":
        regime = "large_d" if q.d >= q.v0 else "large_v0"
        constant = q.constant("c6") if regime == "large_d" else q.constant("c7")
        eps_n_sq = rate_sine(q.d, q.v0, q.v1, q.n, regime, constant)
        conditions = _sine_conditions(q)
    elif family == "hermite":
        regime = "hermite"
        eps_n_sq = rate_hermite(q.d, q.v0, q.v1, q.n, q.constant("c10"))
        conditions = _hermite_conditions(q)
    else:
        raise ValueError(f"unknown family {family!r}")
    return RateResult(
        eps_n_sq=eps_n_sq,
        regime=regime,
        conditions=conditions,
        comparison_curves=comparison_curves(q),
        constants=q.constants_used(),
    )
