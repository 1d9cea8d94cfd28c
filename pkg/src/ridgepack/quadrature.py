"""Adaptive Simpson quadrature with explicit discontinuity splitting.

Adaptive rules converge slowly across jumps, so callers pass the known
discontinuity/kink locations and each smooth piece is integrated separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable


@dataclass(frozen=True)
class QuadratureConfig:
    rule: str = "adaptive-simpson"
    abs_tol: float = 1e-10
    max_depth: int = 60

    def __post_init__(self) -> None:
        if self.abs_tol <= 0:
            raise ValueError("abs_tol must be positive")
        if self.rule != "adaptive-simpson":
            raise ValueError(f"unknown quadrature rule {self.rule!r}")


DEFAULT_CONFIG = QuadratureConfig()


class QuadratureError(RuntimeError):
    """Raised when the adaptive rule fails to converge within max_depth."""


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, fa, b, fb, m, fm, whole, tol, depth, max_depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth >= max_depth:
        raise QuadratureError(
            f"adaptive Simpson did not converge on [{a}, {b}] at depth {depth}"
        )
    half = 0.5 * tol
    return _adaptive(
        f, a, fa, m, fm, lm, flm, left, half, depth + 1, max_depth
    ) + _adaptive(f, m, fm, b, fb, rm, frm, right, half, depth + 1, max_depth)


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Integrate a smooth ``f`` over [a, b] to ``config.abs_tol``."""
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(fa, fm, fb, b - a)
    return _adaptive(f, a, fa, b, fb, m, fm, whole, config.abs_tol, 0, config.max_depth)


# Interior breakpoints are nudged by EDGE so panel endpoints never sample a
# jump exactly; the omitted slivers contribute O(EDGE) which is far below
# any tolerance used here.
EDGE = 1e-12


def integrate_piecewise(
    f: Callable[[float], float],
    a: float,
    b: float,
    breakpoints: Iterable[float],
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Integrate ``f`` over [a, b], splitting at known jump/kink locations.

    Breakpoints outside (a, b) are ignored; duplicates are merged.
    """
    if b < a:
        raise ValueError("integration interval is reversed")
    cuts = sorted({float(t) for t in breakpoints if a < t < b})
    edges = [a, *cuts, b]
    per_piece = QuadratureConfig(
        rule=config.rule,
        abs_tol=config.abs_tol / max(1, len(edges) - 1),
        max_depth=config.max_depth,
    )
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        lo_in = lo + EDGE if lo in cuts else lo
        hi_in = hi - EDGE if hi in cuts else hi
        if hi_in > lo_in:
            total += integrate(f, lo_in, hi_in, per_piece)
    return total
