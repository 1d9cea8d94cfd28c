"""Packing sets, information bounds, and minimax rate certificates for
ridge-combination function classes.

The library builds the combinatorial objects behind information-theoretic
risk lower bounds for ridge combinations (sinusoidal, sigmoidal, and
Hermite-polynomial nets): constant-weight codebooks, integer-lattice and
code-derived ridge directions, certified packing families, KL/Fano/Pinsker
bounds, closed-form rate curves, and deterministic Monte-Carlo experiments
that exercise the whole pipeline at desk scale.
"""

from __future__ import annotations

__version__ = "0.1.0"

from . import codes, gram, info, lattice, packing, rates, ridge, simulate, variation

__all__ = [
    "__version__",
    "codes",
    "gram",
    "info",
    "lattice",
    "packing",
    "rates",
    "ridge",
    "simulate",
    "variation",
]
