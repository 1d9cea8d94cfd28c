"""Integral identities expressing sinusoids over step/sgn/clip dictionaries,
the variation constants they induce, and the resulting class mappings.

The identities (all for |z| <= v):

  sin z = (v/2) int_0^1 cos(vt) [sgn(z/v - t) - sgn(-z/v - t)] dt
  cos w = cos v - (v/2) int_0^1 sin(vt) [sgn(-w/v - t) + sgn(w/v - t)] dt
  sin z = z + (v^2/2) int_0^1 sin(vt) [clip(-2z/v - 2t - 1)
                                       - clip(2z/v - 2t - 1)] dt

are verified numerically by adaptive quadrature split at the known
sgn jumps / clip kinks.

Variation constants are reported in two columns that are NOT reconciled:
``mapping_constant`` is the closed-form value the class-containment
mappings use (sqrt(2) pi v0 for sgn, 2 sqrt(2) pi v0 for step,
sqrt(2) pi (v0^2+1) for clip), while ``quadrature_mass`` is the
independently computed l1 coefficient mass of the integral representation
under the v = pi v0 convention, in which the identity domain |z| <= v
covers the class argument range.  The two differ by constant factors;
both are surfaced so the discrepancy stays visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quadrature import QuadratureConfig, DEFAULT_CONFIG, integrate_piecewise
from .ridge import ClassDescriptor, clip, sgn

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ClassMapping:
    """A containment of a sine class inside a sigmoid-type class."""

    source: ClassDescriptor
    target_kind: str
    target_v0: float
    target_v1: float

    def target(self) -> ClassDescriptor:
        return ClassDescriptor(self.target_kind, self.target_v0, self.target_v1)

    def to_json(self) -> dict:
        return {
            "source": {
                "kind": self.source.kind,
                "v0": self.source.v0,
                "v1": self.source.v1,
            },
            "target": {
                "kind": self.target_kind,
                "v0": self.target_v0,
                "v1": self.target_v1,
            },
        }


@dataclass(frozen=True)
class VariationConstant:
    mapping_constant: float
    quadrature_mass: float

    def to_json(self) -> dict:
        return {
            "mapping_constant": self.mapping_constant,
            "quadrature_mass": self.quadrature_mass,
        }


def _check_domain(z: float, v: float) -> None:
    if v <= 0:
        raise ValueError("v must be positive")
    if abs(z) > v:
        raise ValueError(f"identity requires |z| <= v, got z={z}, v={v}")


def verify_sin_sgn_identity(
    z: float, v: float, config: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """|sin z - quadrature of the sgn representation|."""
    _check_domain(z, v)

    def integrand(t: float) -> float:
        return math.cos(v * t) * (sgn(z / v - t) - sgn(-z / v - t))

    cuts = [abs(z) / v]
    rhs = 0.5 * v * integrate_piecewise(integrand, 0.0, 1.0, cuts, config)
    return abs(math.sin(z) - rhs)


def verify_cos_sgn_identity(
    w: float, v: float, config: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """|cos w - (cos v + correction)| for the differentiated identity."""
    _check_domain(w, v)

    def integrand(t: float) -> float:
        return math.sin(v * t) * (sgn(-w / v - t) + sgn(w / v - t))

    cuts = [abs(w) / v]
    rhs = math.cos(v) - 0.5 * v * integrate_piecewise(
        integrand, 0.0, 1.0, cuts, config
    )
    return abs(math.cos(w) - rhs)


def verify_sin_clip_identity(
    z: float, v: float, config: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """|sin z - (z + quadrature of the clip representation)|."""
    _check_domain(z, v)

    def integrand(t: float) -> float:
        return math.sin(v * t) * (
            clip(-2.0 * z / v - 2.0 * t - 1.0) - clip(2.0 * z / v - 2.0 * t - 1.0)
        )

    # clip kinks where either argument crosses +/-1
    cuts = [z / v, -z / v, z / v - 1.0, -z / v - 1.0]
    rhs = z + 0.5 * v * v * integrate_piecewise(integrand, 0.0, 1.0, cuts, config)
    return abs(math.sin(z) - rhs)


def _abs_cos_mass(v: float, config: QuadratureConfig) -> float:
    """int_0^1 |cos(v t)| dt, split at the zeros of cos."""
    cuts = []
    k = 0
    while True:
        t = (0.5 + k) * math.pi / v
        if t >= 1.0:
            break
        cuts.append(t)
        k += 1
    return integrate_piecewise(lambda t: abs(math.cos(v * t)), 0.0, 1.0, cuts, config)


def _abs_sin_mass(v: float, config: QuadratureConfig) -> float:
    """int_0^1 |sin(v t)| dt, split at the zeros of sin."""
    cuts = []
    k = 1
    while True:
        t = k * math.pi / v
        if t >= 1.0:
            break
        cuts.append(t)
        k += 1
    return integrate_piecewise(lambda t: abs(math.sin(v * t)), 0.0, 1.0, cuts, config)


def variation_constants(
    v0: int, config: QuadratureConfig = DEFAULT_CONFIG
) -> dict[str, VariationConstant]:
    """Variation of the scaled sine activation over the step, sgn, and clip
    dictionaries on [-v0, v0].

    The quadrature masses use v = pi v0: the sgn representation carries
    coefficient density sqrt(2) (v/2) |cos(vt)| on each of its two atoms
    (total sqrt(2) v int|cos|), the step representation doubles it, and the
    clip representation adds the linear term z = v clip(z/v) to
    sqrt(2) v^2 int|sin|.
    """
    if v0 < 1 or int(v0) != v0:
        raise ValueError(f"v0 must be a positive integer, got {v0}")
    v = math.pi * v0
    cos_mass = _abs_cos_mass(v, config)
    sin_mass = _abs_sin_mass(v, config)
    sgn_mass = SQRT2 * v * cos_mass
    return {
        "sgn": VariationConstant(
            mapping_constant=SQRT2 * math.pi * v0,
            quadrature_mass=sgn_mass,
        ),
        "step": VariationConstant(
            mapping_constant=2.0 * SQRT2 * math.pi * v0,
            quadrature_mass=2.0 * sgn_mass,
        ),
        "clip": VariationConstant(
            mapping_constant=SQRT2 * math.pi * (v0 * v0 + 1.0),
            quadrature_mass=SQRT2 * (v + v * v * sin_mass),
        ),
    }


def map_class(src: ClassDescriptor) -> list[ClassMapping]:
    """Containment targets of a sine class: the sgn class with budgets
    (1, sqrt(2) pi v0 v1) and the clip class with budgets
    (2, sqrt(2) pi (v0^2+1) v1).  Rate lower bounds transfer unchanged."""
    if src.kind != "sine":
        raise ValueError(f"class mappings are defined for sine classes, got {src.kind!r}")
    return [
        ClassMapping(
            source=src,
            target_kind="sgn",
            target_v0=1.0,
            target_v1=SQRT2 * math.pi * src.v0 * src.v1,
        ),
        ClassMapping(
            source=src,
            target_kind="clip",
            target_v0=2.0,
            target_v1=SQRT2 * math.pi * (src.v0 * src.v0 + 1.0) * src.v1,
        ),
    ]
