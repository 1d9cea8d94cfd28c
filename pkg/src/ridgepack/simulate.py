"""Deterministic Monte-Carlo experiments.

The centerpiece is the identification experiment: draw a member of a
packing uniformly, generate regression data Y = f(X) + noise, identify the
member by least squares over the whole family, and compare the empirical
identification-error probability with the Fano and Pinsker predictions
computed from the KL bound (n/2) ||f||^2.  Because the predictions are true
lower bounds on ANY test's error, the empirical error must not undercut
them (beyond Monte-Carlo noise) -- that is the pass criterion.

Every trial draws from its own counter-based stream keyed by
(seed, domain, trial index), so reports are byte-identical across runs and
across thread counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .info import fano_bound_implied, kl_regression, pinsker_bound, risk_from_testing
from .packing import PackingSet


@dataclass
class ExperimentReport:
    """Outcome of one identification experiment."""

    seed: int
    trials: int
    n: int
    sigma: float
    packing: dict
    empirical_error_prob: float
    stderr: float
    mi_bound: float
    alpha_used: float
    fano_prediction: float
    fano_vacuous: bool
    pinsker_prediction: float | None
    risk_lower_bound: float
    selection_risk: float
    selection_risk_stderr: float
    passed: bool
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "n": self.n,
            "sigma": self.sigma,
            "packing": self.packing,
            "empirical_error_prob": self.empirical_error_prob,
            "stderr": self.stderr,
            "mi_bound": self.mi_bound,
            "alpha_used": self.alpha_used,
            "fano_prediction": self.fano_prediction,
            "fano_vacuous": self.fano_vacuous,
            "pinsker_prediction": self.pinsker_prediction,
            "risk_lower_bound": self.risk_lower_bound,
            "selection_risk": self.selection_risk,
            "selection_risk_stderr": self.selection_risk_stderr,
            "passed": self.passed,
            "notes": self.notes,
        }


def sample_design(design: str, d: int, n: int, seed: int) -> np.ndarray:
    """n x d design matrix; row i depends only on (seed, i), never on n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rows = []
    got = 0
    b = 0
    while got < n:
        block = rng.design_block(design, d, seed, rng.DESIGN_STREAM, b)
        take = min(rng.BLOCK, n - got)
        rows.append(block[:take])
        got += take
        b += 1
    return np.vstack(rows)


def generate_data(f, x: np.ndarray, seed: int, sigma: float = 1.0) -> np.ndarray:
    """Responses Y_i = f(X_i) + sigma * eps_i with unit Gaussian noise keyed
    by (seed, i)."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    values = np.asarray(f(x), dtype=np.float64)
    noise = np.empty(n)
    got = 0
    b = 0
    while got < n:
        block = rng.noise_block(seed, rng.NOISE_STREAM, b)
        take = min(rng.BLOCK, n - got)
        noise[got : got + take] = block[:take]
        got += take
        b += 1
    return values + sigma * noise


def least_squares_select(
    data: tuple[np.ndarray, np.ndarray], candidates: PackingSet
) -> int:
    """Index of the packing member minimizing the residual sum of squares;
    ties break to the lowest index."""
    if candidates.size < 1:
        raise ValueError("candidate family is empty")
    x, y = data
    predictions = candidates.member_matrix(np.asarray(x, dtype=np.float64))
    return _select_from_predictions(np.asarray(y, dtype=np.float64), predictions)


def _select_from_predictions(y: np.ndarray, predictions: np.ndarray) -> int:
    # argmin_j ||y - p_j||^2 = argmin_j (||p_j||^2 - 2 y . p_j)
    scores = np.einsum("ij,ij->j", predictions, predictions) - 2.0 * (
        y @ predictions
    )
    return int(np.argmin(scores))


def fano_experiment(
    ps: PackingSet,
    n: int,
    trials: int,
    seed: int,
    *,
    sigma: float = 1.0,
    threads: int | None = None,
) -> ExperimentReport:
    """Identification experiment against the Fano/Pinsker predictions.

    Per trial: draw omega uniformly, sample the packing's design, generate
    Y = f_omega(X) + sigma * noise, select by least squares over the family,
    and record whether the selection missed.  The Fano prediction uses the
    implied information fraction alpha = MI / log(#family) with
    MI = (n/2) max member norm^2; the Pinsker prediction is reported when
    that alpha is inside its (0, 1/8) domain.
    """
    if trials < 100:
        raise ValueError("need at least 100 trials for a meaningful error rate")
    if n < 0:
        raise ValueError("n must be >= 0")
    size = ps.size
    if size < 2:
        raise ValueError("packing must contain at least 2 members")

    bits = ps.codebook.bit_matrix()
    scale = ps.v1 / ps.L
    design = ps.design()
    d = ps.d
    # Analytic separation machinery: ||f_i - f_j||^2 via the atom Gram.
    gram_entries = None if ps.family == "sine" else ps.gram().entries
    gw = bits if gram_entries is None else bits @ gram_entries
    qdiag = np.einsum("ij,ij->i", gw, bits)
    sep_scale = scale * scale

    def separation(i: int, j: int) -> float:
        return sep_scale * float(qdiag[i] + qdiag[j] - 2.0 * (gw[i] @ bits[j]))

    def run_trial(t: int) -> tuple[bool, float]:
        g_choice = rng.generator(seed, rng.TRIAL_CHOICE_STREAM, t)
        omega = int(g_choice.integers(size))
        if n == 0:
            chosen = _select_from_predictions(np.zeros(0), np.zeros((0, size)))
            return chosen != omega, separation(chosen, omega)
        g_design = rng.generator(seed, rng.TRIAL_DESIGN_STREAM, t)
        if design == "uniform-cube":
            x = g_design.uniform(-1.0, 1.0, (n, d))
        else:
            x = g_design.standard_normal((n, d))
        atoms = ps.atom_matrix(x)
        predictions = scale * (atoms @ bits.T)
        g_noise = rng.generator(seed, rng.TRIAL_NOISE_STREAM, t)
        y = predictions[:, omega] + sigma * g_noise.standard_normal(n)
        chosen = _select_from_predictions(y, predictions)
        return chosen != omega, separation(chosen, omega)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run_trial, range(trials)))
    else:
        outcomes = [run_trial(t) for t in range(trials)]

    errors = [e for e, _ in outcomes]
    seps = np.array([s for _, s in outcomes])
    n_err = sum(errors)
    p_hat = n_err / trials
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / trials)
    sel_risk = float(seps.mean())
    sel_risk_stderr = float(seps.std(ddof=1) / math.sqrt(trials))

    log_card = math.log(size)
    mi = kl_regression(ps.certificate.norm_max, n) if n > 0 else 0.0
    fano = fano_bound_implied(log_card, mi)
    notes = []
    if fano.vacuous:
        notes.append(
            "fano bound vacuous: mutual-information bound "
            f"{mi:.6g} + log 2 exceeds log cardinality {log_card:.6g}"
        )
    pinsker = None
    if 0.0 < fano.alpha_used < 0.125:
        pinsker = pinsker_bound(float(size), fano.alpha_used)
    else:
        notes.append(
            f"pinsker bound skipped: implied alpha {fano.alpha_used:.6g} "
            "outside (0, 1/8)"
        )
    risk = risk_from_testing(ps.epsilon, fano.value)
    passed = p_hat >= fano.value - 3.0 * stderr

    return ExperimentReport(
        seed=seed,
        trials=trials,
        n=n,
        sigma=sigma,
        packing={
            "family": ps.family,
            "d": ps.d,
            "v0": ps.v0,
            "v1": ps.v1,
            "epsilon": ps.epsilon,
            "L": ps.L,
            "order": ps.order,
            "size": size,
            "log_cardinality": log_card,
            "common_norm": ps.certificate.common_norm,
        },
        empirical_error_prob=p_hat,
        stderr=stderr,
        mi_bound=mi,
        alpha_used=fano.alpha_used,
        fano_prediction=fano.value,
        fano_vacuous=fano.vacuous,
        pinsker_prediction=pinsker,
        risk_lower_bound=risk,
        selection_risk=sel_risk,
        selection_risk_stderr=sel_risk_stderr,
        passed=passed,
        notes=notes,
    )
