"""Command-line interface.

Subcommands: codebook, lattice, packing build|certify, bounds
rate|conditions|table|curves, verify identities|orthonormality|hermite-gram,
simulate fano, map-class.  Exit codes: 0 success, 1 verification failure,
2 usage error.

Structured artifacts are JSON, grid outputs are CSV; every seeded command
is bit-reproducible and independent of --threads (worker threads only
evaluate independent blocks/trials whose results are reduced in index
order, so the thread count is an execution detail and is excluded from
run manifests).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, rng
from .codes import build_constant_weight_code, verify_codebook, Codebook
from .gram import mc_inner_products
from .lattice import (
    enumerate_l1_lattice,
    l1_ball_count,
    lattice_count_bounds,
    directions_to_json,
)
from .packing import (
    PackingSet,
    build_hermite_packing,
    build_sine_packing,
    certify_packing,
)
from .quadrature import QuadratureConfig
from .rates import (
    RateQuery,
    check_conditions,
    comparison_curves,
    rate_query,
)
from .ridge import SQRT2, ClassDescriptor, standardized_hermite
from .serialize import (
    build_manifest,
    dumps_json,
    write_csv_artifact,
    write_json_artifact,
)
from .simulate import fano_experiment
from .variation import (
    map_class,
    variation_constants,
    verify_cos_sgn_identity,
    verify_sin_clip_identity,
    verify_sin_sgn_identity,
)


def _default_threads() -> int:
    env = os.environ.get("RIDGEPACK_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _emit(args, payload: dict, command: str, inputs=()) -> None:
    params = {
        k: v
        for k, v in vars(args).items()
        if k not in ("func", "out", "threads") and v is not None
    }
    seed = getattr(args, "seed", None)
    manifest = build_manifest(command, params, seed, inputs)
    if args.out:
        write_json_artifact(args.out, payload, manifest)
        print(f"wrote {args.out}")
    else:
        doc = dict(payload)
        doc["manifest_digest"] = manifest["manifest_digest"]
        sys.stdout.write(dumps_json(doc))


def _cmd_codebook(args) -> int:
    cb = build_constant_weight_code(
        args.M,
        args.L,
        args.min_dist if args.min_dist is not None else math.ceil(args.L / 5),
        require_guarantee=args.lemma,
        seed=args.seed,
        stop_at=args.stop_at,
    )
    report = verify_codebook(cb)
    payload = cb.to_json()
    payload["verification"] = report.to_json()
    _emit(args, payload, "codebook")
    return 0 if report.passed else 1


def _cmd_lattice(args) -> int:
    canonical = not args.full
    dirs = enumerate_l1_lattice(args.d, args.v0, canonical=canonical)
    bounds = lattice_count_bounds(args.d, args.v0)
    exact_full = l1_ball_count(args.d, args.v0)
    payload = directions_to_json(dirs, args.d, args.v0)
    payload["canonical"] = canonical
    payload["count"] = len(dirs)
    payload["exact_full_count"] = exact_full
    payload["binomial_count"] = bounds.binomial_count
    payload["binomial_count_matches_exact"] = (
        round(bounds.binomial_count) == exact_full
    )
    payload["lower_bound_large_d"] = bounds.lower_large_d
    payload["lower_bound_large_v0"] = bounds.lower_large_v0
    _emit(args, payload, "lattice")
    return 0


def _cmd_packing_build(args) -> int:
    if args.family == "sine":
        ps = build_sine_packing(
            args.d, args.v0, args.v1, args.eps, threads=args.threads
        )
    else:
        if args.ell is None:
            print("--ell is required for the hermite family", file=sys.stderr)
            return 2
        ps = build_hermite_packing(
            args.d,
            args.v0,
            args.v1,
            args.eps,
            args.ell,
            max_directions=args.max_directions,
            threads=args.threads,
        )
    _emit(args, ps.to_json(), "packing build")
    return 0


def _cmd_packing_certify(args) -> int:
    doc = json.loads(Path(args.packing).read_text())
    ps = PackingSet.from_json(doc)
    report = certify_packing(
        ps,
        mc_pairs=args.mc_pairs,
        mc_samples=args.mc_samples,
        seed=args.seed,
        threads=args.threads,
    )
    _emit(args, report.to_json(), "packing certify", inputs=[args.packing])
    return 0 if report.passed else 1


def _constants_from_args(args) -> dict:
    constants = {}
    if args.constants:
        constants.update(json.loads(args.constants))
    return constants


def _cmd_bounds_rate(args) -> int:
    q = RateQuery(
        d=args.d,
        v0=args.v0,
        v1=args.v1,
        n=args.n,
        order=args.ell,
        constants=_constants_from_args(args),
    )
    result = rate_query(q, args.family)
    payload = result.to_json()
    payload["query"] = {"d": args.d, "v0": args.v0, "v1": args.v1, "n": args.n,
                        "ell": args.ell, "family": args.family}
    payload["formula"] = {
        "sine": "eps_n^2 = c * (v0 v1^2 log(1 + d/v0) / n)^(1/2) for the "
        "large-d regime, with d and v0 exchanged otherwise",
        "hermite": "eps_n^2 = c * (v0^2 v1^2 log(d / v0^2) / n)^(1/2)",
    }[args.family]
    _emit(args, payload, "bounds rate")
    return 0


def _cmd_bounds_conditions(args) -> int:
    q = RateQuery(
        d=args.d,
        v0=args.v0,
        v1=args.v1,
        n=args.n,
        order=args.ell,
        constants=_constants_from_args(args),
    )
    checks = check_conditions(q, args.family)
    payload = {
        "query": {"d": args.d, "v0": args.v0, "v1": args.v1, "n": args.n,
                  "ell": args.ell},
        "conditions": {k: v.to_json() for k, v in checks.items()},
        "constants": q.constants_used(),
    }
    _emit(args, payload, "bounds conditions")
    return 0


def _grid(values: str) -> list[float]:
    return [float(v) for v in values.split(",")]


_TABLE_COLUMNS = [
    "d",
    "v0",
    "v1",
    "n",
    "rate_sine",
    "rate_hermite",
    "penalized_tradeoff",
    "upper_lipschitz",
    "lower_any_v0",
    "upper_highdim_g13",
    "upper_highdim_g14",
    "sine_large_d_holds",
    "sine_large_d_slack",
    "sine_large_v0_holds",
    "sine_large_v0_slack",
]


def _cmd_bounds_table(args) -> int:
    from .rates import rate_sine, rate_hermite

    constants = _constants_from_args(args)
    rows = []
    for d in _grid(args.d):
        for v0 in _grid(args.v0):
            for v1 in _grid(args.v1):
                for n in _grid(args.n):
                    q = RateQuery(d=d, v0=v0, v1=v1, n=n, constants=constants)
                    curves = comparison_curves(q)
                    conds = check_conditions(q, "sine")
                    hermite = (
                        rate_hermite(d, v0, v1, n, q.constant("c10"))
                        if d > v0 * v0
                        else float("nan")
                    )
                    rows.append(
                        [
                            d,
                            v0,
                            v1,
                            n,
                            rate_sine(d, v0, v1, n, "auto", q.constant("c6")),
                            hermite,
                            curves["penalized_tradeoff"],
                            curves["upper_lipschitz"],
                            curves["lower_any_v0"],
                            curves["upper_highdim_g13"],
                            curves["upper_highdim_g14"],
                            int(conds["sine_large_d"].holds),
                            conds["sine_large_d"].lhs - conds["sine_large_d"].rhs,
                            int(conds["sine_large_v0"].holds),
                            conds["sine_large_v0"].lhs - conds["sine_large_v0"].rhs,
                        ]
                    )
    params = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    manifest = build_manifest("bounds table", params, None)
    write_csv_artifact(args.out, _TABLE_COLUMNS, rows, manifest)
    print(f"wrote {args.out}")
    return 0


def _cmd_bounds_curves(args) -> int:
    q = RateQuery(
        d=args.d,
        v0=args.v0,
        v1=args.v1,
        n=args.n,
        constants=_constants_from_args(args),
    )
    payload = {
        "query": {"d": args.d, "v0": args.v0, "v1": args.v1, "n": args.n},
        "curves": comparison_curves(q),
        "constants": q.constants_used(),
    }
    _emit(args, payload, "bounds curves")
    return 0


def _cmd_verify_identities(args) -> int:
    cfg = QuadratureConfig(abs_tol=args.tol / 100.0)
    grid = np.linspace(-args.v, args.v, args.grid)
    points = []
    worst = 0.0
    for z in grid:
        res = {
            "z": float(z),
            "sin_sgn": verify_sin_sgn_identity(float(z), args.v, cfg),
            "cos_sgn": verify_cos_sgn_identity(float(z), args.v, cfg),
            "sin_clip": verify_sin_clip_identity(float(z), args.v, cfg),
        }
        worst = max(worst, res["sin_sgn"], res["cos_sgn"], res["sin_clip"])
        points.append(res)
    passed = worst <= args.tol
    payload = {
        "v": args.v,
        "grid": args.grid,
        "tolerance": args.tol,
        "max_residual": worst,
        "passed": passed,
        "residuals": points,
    }
    _emit(args, payload, "verify identities")
    return 0 if passed else 1


def _cmd_verify_orthonormality(args) -> int:
    dirs = enumerate_l1_lattice(args.d, args.v0, canonical=True)
    theta = np.array([dr.as_array() for dr in dirs])

    def atoms(x: np.ndarray) -> np.ndarray:
        return SQRT2 * np.sin(np.pi * (x @ theta.T))

    est, stderr = mc_inner_products(
        atoms, len(dirs), "uniform-cube", args.d, args.samples, args.seed
    )
    target = np.eye(len(dirs))
    dev = np.abs(est - target)
    margin = 3.0 * stderr
    ok = bool(np.all(dev <= margin))
    worst = int(np.argmax(dev - margin))
    i, j = divmod(worst, len(dirs))
    payload = {
        "d": args.d,
        "v0": args.v0,
        "n_directions": len(dirs),
        "samples": args.samples,
        "passed": ok,
        "worst_pair": [i, j],
        "worst_estimate": float(est[i, j]),
        "worst_target": float(target[i, j]),
        "worst_stderr": float(stderr[i, j]),
        "max_abs_deviation": float(dev.max()),
    }
    _emit(args, payload, "verify orthonormality")
    return 0 if ok else 1


def _cmd_verify_hermite_gram(args) -> int:
    g = rng.generator(args.seed, rng.SPOT_CHECK_STREAM, 1)
    pairs = []
    for _ in range(args.pairs):
        a = g.standard_normal(args.d)
        b = g.standard_normal(args.d)
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        pairs.append((a, b))
    columns = np.array([v for pair in pairs for v in pair]).T  # (d, 2p)

    def atoms(x: np.ndarray) -> np.ndarray:
        return standardized_hermite(args.ell, x @ columns)

    est, stderr = mc_inner_products(
        atoms, 2 * args.pairs, "gaussian", args.d, args.samples, args.seed
    )
    results = []
    ok = True
    for k, (a, b) in enumerate(pairs):
        target = float(a @ b) ** args.ell
        e = float(est[2 * k, 2 * k + 1])
        s = float(stderr[2 * k, 2 * k + 1])
        within = abs(e - target) <= 3.0 * s
        ok = ok and within
        results.append(
            {
                "dot": float(a @ b),
                "target": target,
                "estimate": e,
                "stderr": s,
                "within_3_stderr": within,
            }
        )
    payload = {
        "d": args.d,
        "ell": args.ell,
        "pairs": args.pairs,
        "samples": args.samples,
        "passed": ok,
        "results": results,
    }
    _emit(args, payload, "verify hermite-gram")
    return 0 if ok else 1


def _cmd_simulate_fano(args) -> int:
    doc = json.loads(Path(args.packing).read_text())
    ps = PackingSet.from_json(doc)
    report = fano_experiment(
        ps,
        args.n,
        args.trials,
        args.seed,
        sigma=args.sigma,
        threads=args.threads,
    )
    _emit(args, report.to_json(), "simulate fano", inputs=[args.packing])
    return 0 if report.passed else 1


def _cmd_map_class(args) -> int:
    src = ClassDescriptor("sine", args.v0, args.v1)
    mappings = map_class(src)
    constants = variation_constants(int(args.v0))
    payload = {
        "source": {"kind": "sine", "v0": args.v0, "v1": args.v1},
        "mappings": [m.to_json() for m in mappings],
        "variation_constants": {k: v.to_json() for k, v in constants.items()},
    }
    _emit(args, payload, "map-class")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ridgepack",
        description="Packing sets, information bounds, and minimax rate "
        "certificates for ridge-combination function classes.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    def add_threads(p):
        p.add_argument(
            "--threads",
            type=int,
            default=_default_threads(),
            help="worker threads (results are independent of this value)",
        )

    p = sub.add_parser("codebook", help="build a constant-weight codebook")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--min-dist", type=int, default=None,
                   help="default: ceil(L/5)")
    p.add_argument("--lemma", action="store_true",
                   help="require the sqrt(C(M,L)) size guarantee")
    p.add_argument("--stop-at", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    add_out(p)
    p.set_defaults(func=_cmd_codebook)

    p = sub.add_parser("lattice", help="enumerate l1-ball ridge directions")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--v0", type=int, required=True)
    p.add_argument("--full", action="store_true",
                   help="full set instead of the canonical half")
    add_out(p)
    p.set_defaults(func=_cmd_lattice)

    p = sub.add_parser("packing", help="build or certify packing sets")
    psub = p.add_subparsers(dest="packing_command", required=True)

    pb = psub.add_parser("build")
    pb.add_argument("--family", choices=["sine", "hermite"], required=True)
    pb.add_argument("--d", type=int, required=True)
    pb.add_argument("--v0", type=int, required=True)
    pb.add_argument("--v1", type=float, required=True)
    pb.add_argument("--eps", type=float, required=True)
    pb.add_argument("--ell", type=int, default=None)
    pb.add_argument("--max-directions", type=int, default=None)
    add_threads(pb)
    add_out(pb)
    pb.set_defaults(func=_cmd_packing_build)

    pc = psub.add_parser("certify")
    pc.add_argument("--packing", required=True)
    pc.add_argument("--mc-pairs", type=int, default=0)
    pc.add_argument("--mc-samples", type=int, default=200_000)
    pc.add_argument("--seed", type=int, default=0)
    add_threads(pc)
    add_out(pc)
    pc.set_defaults(func=_cmd_packing_certify)

    p = sub.add_parser("bounds", help="rates, conditions, and curve tables")
    bsub = p.add_subparsers(dest="bounds_command", required=True)

    br = bsub.add_parser("rate")
    br.add_argument("--family", choices=["sine", "hermite"], default="sine")
    br.add_argument("--d", type=float, required=True)
    br.add_argument("--v0", type=float, required=True)
    br.add_argument("--v1", type=float, required=True)
    br.add_argument("--n", type=float, required=True)
    br.add_argument("--ell", type=int, default=None)
    br.add_argument("--constants", default=None, help="JSON constant overrides")
    add_out(br)
    br.set_defaults(func=_cmd_bounds_rate)

    bc = bsub.add_parser("conditions")
    bc.add_argument("--family", choices=["sine", "hermite", "all"], default="sine")
    bc.add_argument("--d", type=float, required=True)
    bc.add_argument("--v0", type=float, required=True)
    bc.add_argument("--v1", type=float, required=True)
    bc.add_argument("--n", type=float, required=True)
    bc.add_argument("--ell", type=int, default=None)
    bc.add_argument("--constants", default=None)
    add_out(bc)
    bc.set_defaults(func=_cmd_bounds_conditions)

    bt = bsub.add_parser("table")
    bt.add_argument("--d", required=True, help="comma-separated grid")
    bt.add_argument("--v0", required=True, help="comma-separated grid")
    bt.add_argument("--v1", required=True, help="comma-separated grid")
    bt.add_argument("--n", required=True, help="comma-separated grid")
    bt.add_argument("--constants", default=None)
    bt.add_argument("--out", required=True)
    bt.set_defaults(func=_cmd_bounds_table)

    bcv = bsub.add_parser("curves")
    bcv.add_argument("--d", type=float, required=True)
    bcv.add_argument("--v0", type=float, required=True)
    bcv.add_argument("--v1", type=float, required=True)
    bcv.add_argument("--n", type=float, required=True)
    bcv.add_argument("--constants", default=None)
    add_out(bcv)
    bcv.set_defaults(func=_cmd_bounds_curves)

    p = sub.add_parser("verify", help="numerical verifications")
    vsub = p.add_subparsers(dest="verify_command", required=True)

    vi = vsub.add_parser("identities")
    vi.add_argument("--v", type=float, required=True)
    vi.add_argument("--grid", type=int, default=41)
    vi.add_argument("--tol", type=float, default=1e-8,
                    help="max allowed residual; quadrature runs at tol/100")
    add_out(vi)
    vi.set_defaults(func=_cmd_verify_identities)

    vo = vsub.add_parser("orthonormality")
    vo.add_argument("--d", type=int, required=True)
    vo.add_argument("--v0", type=int, required=True)
    vo.add_argument("--samples", type=int, default=100_000)
    vo.add_argument("--seed", type=int, default=0)
    add_out(vo)
    vo.set_defaults(func=_cmd_verify_orthonormality)

    vh = vsub.add_parser("hermite-gram")
    vh.add_argument("--d", type=int, default=6)
    vh.add_argument("--ell", type=int, required=True)
    vh.add_argument("--pairs", type=int, default=10)
    vh.add_argument("--samples", type=int, default=1_000_000)
    vh.add_argument("--seed", type=int, default=0)
    add_out(vh)
    vh.set_defaults(func=_cmd_verify_hermite_gram)

    p = sub.add_parser("simulate", help="Monte-Carlo experiments")
    ssub = p.add_subparsers(dest="simulate_command", required=True)

    sf = ssub.add_parser("fano")
    sf.add_argument("--packing", required=True)
    sf.add_argument("--n", type=int, required=True)
    sf.add_argument("--trials", type=int, required=True)
    sf.add_argument("--seed", type=int, required=True)
    sf.add_argument("--sigma", type=float, default=1.0)
    add_threads(sf)
    add_out(sf)
    sf.set_defaults(func=_cmd_simulate_fano)

    p = sub.add_parser("map-class", help="sine-class containment targets")
    p.add_argument("--v0", type=float, required=True)
    p.add_argument("--v1", type=float, required=True)
    add_out(p)
    p.set_defaults(func=_cmd_map_class)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
