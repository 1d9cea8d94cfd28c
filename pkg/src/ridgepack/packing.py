"""Assembly and certification of packing families.

A packing set is a finite family f_omega = (v1/L) sum_k omega_k a_k(x),
where the atoms a_k are sinusoidal or Hermite ridge functions indexed by a
direction dictionary, and the omega range over a constant-weight codebook.
Pairwise squared L2(P) distances are quadratic forms Delta' G Delta in the
atom Gram matrix, so certificates are computed exactly: the sine family is
orthonormal (identity Gram on canonical directions) and the Hermite Gram
is (theta_i . theta_j)^l with exact rational dot products.

Separation levels are stored in realized form: building with a requested
epsilon picks the integer weight L and then records epsilon^2 = v1^2/(5L)
(sine) or v1^2/(10L) (Hermite), which the certificate meets exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .codes import (
    Check,
    Codebook,
    CodeConstructionError,
    VerificationReport,
    build_constant_weight_code,
    verify_codebook,
)
from .gram import GramMatrix, identity_gram, hermite_gram, mc_l2, sine_inner_product
from .lattice import (
    RidgeDirection,
    directions_from_json,
    enumerate_l1_lattice,
    hermite_directions,
)
from .ridge import SQRT2, standardized_hermite
from . import rng

FAMILIES = ("sine", "hermite")

#: Hermite order must exceed log(4L)/log(10/9) for the separation chain.
_ORDER_BASE = math.log(10.0 / 9.0)


class PackingPreconditionError(ValueError):
    """A build precondition failed; the message states the violated
    inequality with its numeric sides."""


@dataclass(frozen=True)
class PackingCertificate:
    min_separation: float
    common_norm: float
    norm_min: float
    norm_max: float


@dataclass
class PackingSet:
    """A certified epsilon-packing of a ridge-combination class."""

    family: str
    d: int
    v0: int
    v1: float
    epsilon: float
    L: int
    order: int | None
    directions: list[RidgeDirection]
    codebook: Codebook
    log_cardinality: float
    certificate: PackingCertificate
    metadata: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.codebook.words)

    @property
    def n_directions(self) -> int:
        return len(self.directions)

    def direction_matrix(self) -> np.ndarray:
        return np.array([dr.as_array() for dr in self.directions])

    def atom_matrix(self, x: np.ndarray) -> np.ndarray:
        """(n_points, n_directions) matrix of atom values at the rows of x."""
        z = np.asarray(x, dtype=np.float64) @ self.direction_matrix().T
        if self.family == "sine":
            return SQRT2 * np.sin(np.pi * z)
        return standardized_hermite(self.order, z)

    def member_matrix(self, x: np.ndarray) -> np.ndarray:
        """(n_points, size) matrix of member values at the rows of x."""
        scale = self.v1 / self.L
        return scale * (self.atom_matrix(x) @ self.codebook.bit_matrix().T)

    def member_function(self, index: int):
        w = np.array(self.codebook.words[index].bits, dtype=np.float64)
        scale = self.v1 / self.L

        def f(x: np.ndarray) -> np.ndarray:
            return scale * (self.atom_matrix(x) @ w)

        return f

    def gram(self) -> GramMatrix:
        if self.family == "sine":
            return identity_gram(self.n_directions, "uniform-cube", "sine")
        return hermite_gram(self.directions, self.order)

    def design(self) -> str:
        return "uniform-cube" if self.family == "sine" else "gaussian"

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "d": self.d,
            "v0": self.v0,
            "v1": self.v1,
            "epsilon": self.epsilon,
            "L": self.L,
            "order": self.order,
            "log_cardinality": self.log_cardinality,
            "size": self.size,
            "directions": {
                "d": self.d,
                "v0": self.v0,
                "kind": self.directions[0].kind,
                "directions": [dr.to_json() for dr in self.directions],
            },
            "codebook": self.codebook.to_json(),
            "certificate": {
                "min_separation": self.certificate.min_separation,
                "common_norm": self.certificate.common_norm,
                "norm_min": self.certificate.norm_min,
                "norm_max": self.certificate.norm_max,
            },
            "metadata": self.metadata,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PackingSet":
        cert = doc["certificate"]
        return cls(
            family=doc["family"],
            d=int(doc["d"]),
            v0=int(doc["v0"]),
            v1=float(doc["v1"]),
            epsilon=float(doc["epsilon"]),
            L=int(doc["L"]),
            order=None if doc["order"] is None else int(doc["order"]),
            directions=directions_from_json(doc["directions"]),
            codebook=Codebook.from_json(doc["codebook"]),
            log_cardinality=float(doc["log_cardinality"]),
            certificate=PackingCertificate(
                min_separation=float(cert["min_separation"]),
                common_norm=float(cert["common_norm"]),
                norm_min=float(cert["norm_min"]),
                norm_max=float(cert["norm_max"]),
            ),
            metadata=dict(doc.get("metadata", {})),
        )


def size_L(v1: float, epsilon: float, family: str) -> int:
    """Codeword weight realizing a requested separation level epsilon^2."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if family == "sine":
        raw = (v1 / (math.sqrt(5.0) * epsilon)) ** 2
    elif family == "hermite":
        raw = (v1 / (math.sqrt(10.0) * epsilon)) ** 2
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    return max(1, round(raw))


def realized_epsilon(v1: float, L: int, family: str) -> float:
    if family == "sine":
        return v1 / math.sqrt(5.0 * L)
    return v1 / math.sqrt(10.0 * L)


def hermite_order_threshold(L: int) -> float:
    """The separation chain needs order > log(4L)/log(10/9)."""
    return math.log(4.0 * L) / _ORDER_BASE


def separation_stats(
    bits: np.ndarray,
    gram_entries: np.ndarray | None,
    scale: float,
    *,
    block: int = 256,
    threads: int | None = None,
) -> tuple[float, np.ndarray]:
    """Minimum pairwise squared separation and all member squared norms.

    ``bits`` is the (N, M) codeword matrix, ``gram_entries`` the M x M atom
    Gram (None = identity), ``scale`` = (v1/L)^2.  Row blocks keep memory
    at block * N; block results are reduced in index order, so the output
    is independent of the thread count.
    """
    n = bits.shape[0]
    gw = bits.T if gram_entries is None else gram_entries @ bits.T
    qdiag = np.einsum("ij,ji->i", bits, gw)
    norms = scale * qdiag
    if n < 2:
        return math.inf, norms

    starts = list(range(0, n, block))

    def block_min(start: int) -> float:
        rows = bits[start : start + block]
        quad = rows @ gw
        sep = qdiag[start : start + block, None] + qdiag[None, :] - 2.0 * quad
        for r in range(rows.shape[0]):
            sep[r, start + r] = math.inf
        return float(sep.min())

    if threads and threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            mins = list(pool.map(block_min, starts))
    else:
        mins = [block_min(s) for s in starts]
    return scale * min(mins), norms


def _require(condition: bool, inequality: str) -> None:
    if not condition:
        raise PackingPreconditionError(f"violated: {inequality}")


def build_sine_packing(
    d: int,
    v0: int,
    v1: float,
    epsilon: float,
    *,
    enumeration_cap: int | None = None,
    threads: int | None = None,
) -> PackingSet:
    """Sine packing on canonical l1-lattice directions.

    Members are f_omega(x) = (v1/L) sum_k omega_k sqrt(2) sin(pi theta_k . x)
    with omega from a constant-weight codebook of weight L and minimum
    distance ceil(L/5).  On canonical directions the atom family is
    orthonormal, so every squared norm is exactly v1^2/L = 5 eps^2 and the
    minimum squared separation is (v1/L)^2 times the minimum Hamming
    distance, certified >= eps^2.
    """
    dirs = enumerate_l1_lattice(d, v0, canonical=True)
    m = len(dirs)
    _require(m >= 10, f"canonical direction count M >= 10 (got M={m})")
    L = size_L(v1, epsilon, "sine")
    _require(
        L <= math.sqrt(m),
        f"L <= sqrt(M), the separation-level validity floor "
        f"(got L={L} > sqrt({m})={math.sqrt(m):.4f}); "
        f"equivalently epsilon >= v1/(5M)^(1/4) = "
        f"{v1 / (5.0 * m) ** 0.25:.6g}",
    )
    _require(L <= m / 10, f"L <= M/10 (got L={L} > {m / 10})")

    kwargs = {}
    if enumeration_cap is not None:
        kwargs["enumeration_cap"] = enumeration_cap
    try:
        cb = build_constant_weight_code(
            m, L, math.ceil(L / 5), require_guarantee=True, **kwargs
        )
    except CodeConstructionError as exc:
        raise PackingPreconditionError(str(exc)) from exc

    scale = (v1 / L) ** 2
    min_sep, norms = separation_stats(cb.bit_matrix(), None, scale, threads=threads)
    eps = realized_epsilon(v1, L, "sine")
    cert = PackingCertificate(
        min_separation=min_sep,
        common_norm=v1 * v1 / L,
        norm_min=float(norms.min()),
        norm_max=float(norms.max()),
    )
    log_card = math.log(len(cb.words))
    metadata = {
        "requested_epsilon": epsilon,
        "enumeration": "canonical",
        "full_lattice_count": 2 * m + 1,
        "log_cardinality_target": (L / 4.0) * math.log(m),
        "eps_floor_order": v1 * m ** (-0.25),
        "eps_threshold_quarter_exponent": v1 / (1.0 + d / v0) ** (v0 / 4.0),
        "eps_threshold_half_exponent": v1 / (1.0 + d / v0) ** (v0 / 2.0),
    }
    return PackingSet(
        family="sine",
        d=d,
        v0=v0,
        v1=v1,
        epsilon=eps,
        L=L,
        order=None,
        directions=dirs,
        codebook=cb,
        log_cardinality=log_card,
        certificate=cert,
        metadata=metadata,
    )


def build_hermite_packing(
    d: int,
    v0: int,
    v1: float,
    epsilon: float,
    order: int,
    *,
    max_directions: int | None = None,
    enumeration_cap: int | None = None,
    threads: int | None = None,
) -> PackingSet:
    """Hermite packing on unit directions derived from a constant-weight
    code of length d and weight v0^2.

    The atom Gram under the Gaussian design is (theta_i . theta_j)^order;
    with |theta_i . theta_j| <= 9/10 and order above the threshold
    log(4L)/log(10/9), every pairwise squared separation is certified
    >= v1^2/(10 L) = eps^2 by the exact Gram quadratic form.

    ``max_directions`` truncates the outer codebook (desk-scale control of
    the Gram size); the counting guarantee is only claimed when it is None.
    """
    _require(d >= 10, f"d >= 10 (got d={d})")
    dprime = v0 * v0
    _require(dprime <= d / 10, f"v0^2 <= d/10 (got {dprime} > {d / 10})")

    kwargs = {}
    if enumeration_cap is not None:
        kwargs["enumeration_cap"] = enumeration_cap
    try:
        outer = build_constant_weight_code(
            d,
            dprime,
            math.ceil(dprime / 5),
            require_guarantee=max_directions is None,
            stop_at=max_directions,
            **kwargs,
        )
    except CodeConstructionError as exc:
        raise PackingPreconditionError(str(exc)) from exc
    dirs = hermite_directions(outer, v0, d)
    m = len(dirs)

    L = size_L(v1, epsilon, "hermite")
    _require(
        L <= math.sqrt(m),
        f"L <= sqrt(M), the separation-level validity floor "
        f"(got L={L} > sqrt({m})={math.sqrt(m):.4f})",
    )
    threshold = hermite_order_threshold(L)
    if order <= threshold:
        raise PackingPreconditionError(
            f"violated: order > log(4L)/log(10/9) = {threshold:.4f} "
            f"(got order={order}; smallest admissible order is "
            f"{math.floor(threshold) + 1})"
        )

    try:
        cb = build_constant_weight_code(
            m, L, math.ceil(L / 5), require_guarantee=True, **kwargs
        )
    except CodeConstructionError as exc:
        raise PackingPreconditionError(str(exc)) from exc

    gram = hermite_gram(dirs, order)
    scale = (v1 / L) ** 2
    min_sep, norms = separation_stats(
        cb.bit_matrix(), gram.entries, scale, threads=threads
    )
    eps = realized_epsilon(v1, L, "hermite")
    cert = PackingCertificate(
        min_separation=min_sep,
        common_norm=v1 * v1 / L,
        norm_min=float(norms.min()),
        norm_max=float(norms.max()),
    )
    metadata = {
        "requested_epsilon": epsilon,
        "order_threshold": threshold,
        "outer_code_truncated": max_directions is not None,
        "log_cardinality_target": (L / 4.0) * math.log(m),
        "rate_log_cardinality_scale": (v0 * v1 / eps) ** 2
        * math.log(d / dprime),
        "max_abs_inner_product": float(
            np.abs(gram.entries - np.eye(m)).max() ** (1.0 / order)
        )
        if m > 1
        else 0.0,
    }
    return PackingSet(
        family="hermite",
        d=d,
        v0=v0,
        v1=v1,
        epsilon=eps,
        L=L,
        order=order,
        directions=dirs,
        codebook=cb,
        log_cardinality=math.log(len(cb.words)),
        certificate=cert,
        metadata=metadata,
    )


def _check_directions(ps: PackingSet) -> list[Check]:
    checks: list[Check] = []
    v0 = Fraction(ps.v0)
    l1_ok = all(dr.l1_norm <= v0 for dr in ps.directions)
    checks.append(
        Check(
            "direction_l1_within_budget",
            l1_ok,
            f"every direction has exact l1 norm <= v0 = {ps.v0}",
        )
    )
    if ps.family == "sine":
        nonzero = all(not dr.is_zero() for dr in ps.directions)
        checks.append(Check("directions_nonzero", nonzero, "no zero direction"))
        seen = {dr.coordinates for dr in ps.directions}
        sign_free = all(
            dr.negated().coordinates not in seen for dr in ps.directions
        )
        checks.append(
            Check(
                "directions_sign_canonical",
                sign_free and len(seen) == len(ps.directions),
                "no duplicate or +/- colliding directions "
                "(identity Gram requires the canonical half)",
            )
        )
    else:
        unit = all(dr.l2_norm_sq == 1 for dr in ps.directions)
        checks.append(
            Check("directions_unit_norm", unit, "exact unit l2 norm")
        )
        coh_bound = Fraction(9, 10)
        coherent = True
        for i, a in enumerate(ps.directions):
            for b in ps.directions[i + 1 :]:
                if abs(a.dot(b)) > coh_bound:
                    coherent = False
                    break
            if not coherent:
                break
        checks.append(
            Check(
                "directions_coherence",
                coherent,
                "pairwise |theta . theta'| <= 9/10 (exact rationals)",
            )
        )
    return checks


def certify_packing(
    ps: PackingSet,
    *,
    mc_pairs: int = 0,
    mc_samples: int = 200_000,
    seed: int = 0,
    threads: int | None = None,
) -> VerificationReport:
    """Re-derive a packing certificate from scratch.

    Recomputes the Gram matrix, all pairwise separations, and all norms;
    passes iff the minimum separation reaches epsilon^2 and the norms match
    the family formula within 1e-12 relative.  ``mc_pairs > 0`` additionally
    spot-checks that many randomly chosen pair separations against the
    Monte-Carlo oracle at 3 standard errors.
    """
    checks: list[Check] = []
    measurements: dict = {}

    cb_report = verify_codebook(ps.codebook)
    checks.extend(cb_report.checks)
    checks.append(
        Check(
            "codebook_weight_matches_L",
            ps.codebook.weight == ps.L,
            f"codebook weight {ps.codebook.weight}, packing L {ps.L}",
        )
    )
    checks.append(
        Check(
            "codebook_length_matches_directions",
            ps.codebook.length == ps.n_directions,
            f"codebook length {ps.codebook.length}, "
            f"{ps.n_directions} directions",
        )
    )
    checks.append(
        Check(
            "L_within_sqrt_M",
            ps.L <= math.sqrt(max(1, ps.n_directions)),
            f"L={ps.L}, sqrt(M)={math.sqrt(max(1, ps.n_directions)):.4f}",
        )
    )
    checks.extend(_check_directions(ps))

    if ps.family == "hermite":
        threshold = hermite_order_threshold(ps.L)
        checks.append(
            Check(
                "hermite_order_above_threshold",
                ps.order is not None and ps.order > threshold,
                f"order {ps.order}, threshold log(4L)/log(10/9) = "
                f"{threshold:.4f}",
            )
        )

    gram = ps.gram()
    scale = (ps.v1 / ps.L) ** 2
    entries = None if ps.family == "sine" else gram.entries
    min_sep, norms = separation_stats(
        ps.codebook.bit_matrix(), entries, scale, threads=threads
    )
    eps_sq = ps.epsilon**2
    measurements["min_separation"] = min_sep
    measurements["epsilon_sq"] = eps_sq
    measurements["norm_min"] = float(norms.min())
    measurements["norm_max"] = float(norms.max())
    measurements["size"] = ps.size
    measurements["log_cardinality"] = math.log(ps.size)

    if ps.family == "sine":
        # Exact integer form of min_sep >= eps^2 = v1^2/(5L):
        # the minimum Hamming distance must reach L/5.
        min_hamming = round(min_sep / scale)
        sep_ok = 5 * min_hamming >= ps.L
        measurements["min_hamming"] = min_hamming
    else:
        sep_ok = min_sep >= eps_sq * (1.0 - 1e-12)
    checks.append(
        Check(
            "min_separation_reaches_epsilon_sq",
            sep_ok,
            f"min separation {min_sep:.6g} vs epsilon^2 {eps_sq:.6g}",
        )
    )

    common = ps.v1**2 / ps.L
    if ps.family == "sine":
        norm_ok = bool(np.all(np.abs(norms - common) <= 1e-12 * common))
        detail = f"all norms == v1^2/L = {common:.6g} within 1e-12 relative"
    else:
        lo, hi = ps.certificate.norm_min, ps.certificate.norm_max
        norm_ok = bool(
            np.all(norms >= lo * (1.0 - 1e-12))
            and np.all(norms <= hi * (1.0 + 1e-12))
        )
        detail = (
            f"norms within certified range [{lo:.6g}, {hi:.6g}] "
            f"(nominal v1^2/L = {common:.6g})"
        )
    checks.append(Check("norms_match_family_formula", norm_ok, detail))

    checks.append(
        Check(
            "certificate_matches_recomputation",
            abs(min_sep - ps.certificate.min_separation)
            <= 1e-12 * max(1.0, abs(min_sep)),
            f"stored {ps.certificate.min_separation:.6g}, "
            f"recomputed {min_sep:.6g}",
        )
    )

    # Membership: outer coefficients are L copies of v1/L, so the outer l1
    # norm is exactly v1; direction budgets were checked above.
    outer_l1 = (Fraction(ps.v1) / ps.L) * ps.L
    checks.append(
        Check(
            "member_outer_l1_norm",
            outer_l1 == Fraction(ps.v1),
            f"outer l1 norm exactly v1 = {ps.v1}",
        )
    )

    if mc_pairs > 0 and ps.size >= 2:
        g = rng.generator(seed, rng.SPOT_CHECK_STREAM, 0)
        worst = 0.0
        ok = True
        for _ in range(mc_pairs):
            i, j = g.choice(ps.size, size=2, replace=False)
            analytic = scale * float(
                _pair_quadratic(ps, gram, int(i), int(j))
            )
            est, stderr = mc_l2(
                ps.member_function(int(i)),
                ps.member_function(int(j)),
                ps.design(),
                ps.d,
                mc_samples,
                seed,
            )
            dev = abs(est - analytic)
            worst = max(worst, dev - 3.0 * stderr)
            if dev > 3.0 * stderr:
                ok = False
        checks.append(
            Check(
                "mc_spot_check",
                ok,
                f"{mc_pairs} random pair separations within 3 standard "
                f"errors of analytic values (worst excess {worst:.3g})",
            )
        )

    return VerificationReport(checks=checks, measurements=measurements)


def _pair_quadratic(
    ps: PackingSet, gram: GramMatrix, i: int, j: int
) -> float:
    wi = np.array(ps.codebook.words[i].bits, dtype=np.float64)
    wj = np.array(ps.codebook.words[j].bits, dtype=np.float64)
    delta = wi - wj
    if ps.family == "sine":
        return float(delta @ delta)
    return float(delta @ gram.entries @ delta)
