"""Command-line entry point: complex summaries, filter and projection runs, resource estimates."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .complexes import DEFAULT_K_MAX, build_clique_complex
from .encoding import COMPACT, DIRECT, alpha
from .homology import (
    betti_numbers,
    hodge_laplacian,
    hodge_projectors,
    lower_pseudoinverse,
)
from .qsvt import run_pipeline, run_projection
from .resources import estimate_filter, estimate_membership, estimate_projection
from .spectral_filter import FilterSpec, apply_filter, identity_spec, to_quantum_spec

BUILTIN_PROJECTIONS = {"gradient-proj": "G", "curl-proj": "C", "harmonic-proj": "H", "lower-proj": "lower"}
BUILTINS = ("identity", *BUILTIN_PROJECTIONS)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT_ERROR = 0, 1, 2


def _complex(args, k: int | None = None):
    g = io.read_graph(args.graph)
    k_max = getattr(args, "k_max", None) or DEFAULT_K_MAX
    if k is not None:
        k_max = max(k_max, k + 1)
    return build_clique_complex(g, k_max)


def _emit(payload: dict, out) -> None:
    text = io.dump_json(payload, out)
    if out is None:
        print(text)


def cmd_complex(args) -> int:
    K = _complex(args)
    betti = betti_numbers(K)
    payload = {
        "n": K.n,
        "edges": K.graph.n_edges,
        "k_max": K.k_max,
        "counts": {str(k): K.count(k) for k in range(K.k_max + 1)},
        "betti": {str(k): b for k, b in enumerate(betti)},
    }
    _emit(payload, args.out)
    return EXIT_OK


def _load_spec(args, K) -> FilterSpec:
    if args.spec == "identity":
        return identity_spec()
    spec = io.read_filter_spec(args.spec)
    if spec.rescaled:
        return spec
    return to_quantum_spec(spec, (alpha(args.encoding, K.n, args.k), alpha(args.encoding, K.n, args.k + 1)))


def cmd_filter(args) -> int:
    if args.spec in BUILTIN_PROJECTIONS:
        args.component = BUILTIN_PROJECTIONS[args.spec]
        return cmd_project(args)
    K = _complex(args, args.k)
    s = io.read_signal(args.signal, K, args.k)
    spec = _load_spec(args, K)
    if args.classical_only:
        lap = hodge_laplacian(K, args.k)
        alphas = (alpha(args.encoding, K.n, args.k), alpha(args.encoding, K.n, args.k + 1))
        out = apply_filter(spec, lap, s, alphas)
        _emit({"mode": "classical", "spec": spec.to_json(), "output": out.tolist(),
               "norm": float(np.linalg.norm(out))}, args.out)
        return EXIT_OK
    try:
        report = run_pipeline(s, spec, K, args.k, args.encoding, output_tol=args.output_tol,
                              identity_tol=args.identity_tol, tol=args.phase_tol)
    except ValueError as exc:
        if "annihilates" not in str(exc) and "vanishes" not in str(exc):
            raise
        _emit({"mode": "quantum", "postselection_infeasible": True, "reason": str(exc), "passed": False}, args.out)
        return EXIT_CHECK_FAILED
    payload = report.to_json()
    payload["mode"] = "quantum"
    payload["spec"] = spec.to_json()
    _emit(payload, args.out)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_project(args) -> int:
    K = _complex(args, args.k)
    s = io.read_signal(args.signal, K, args.k)
    if args.classical_only:
        if args.component == "lower":
            out = lower_pseudoinverse(K, args.k) @ s
        else:
            out = hodge_projectors(K, args.k)[args.component] @ s
        _emit({"mode": "classical", "component": args.component, "output": out.tolist()}, args.out)
        return EXIT_OK
    report = run_projection(s, args.component, K, args.k, args.encoding, args.kappa, args.eps)
    payload = report.to_json()
    payload["mode"] = "quantum"
    payload["postselection_infeasible"] = not report.feasible
    _emit(payload, args.out)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_resources(args) -> int:
    if args.kappa is not None:
        est = estimate_projection(args.n, args.k, args.kappa, args.eps, args.encoding, args.E)
        payload = est.to_json()
    else:
        payload = estimate_filter(args.n, args.k, args.d_lower, args.d_upper, args.encoding, args.E, args.h0).to_json()
    payload["membership_parallel"] = estimate_membership(args.n, args.k, args.E, args.encoding, parallel=True)
    _emit(payload, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simplicial-qsvt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, signal: bool = True):
        p.add_argument("--graph", required=True, help="edge-list file")
        if signal:
            p.add_argument("--signal", required=True, help="JSON list of {simplex, value}")
            p.add_argument("--k", type=int, default=1)
            p.add_argument("--encoding", choices=(DIRECT, COMPACT), default=DIRECT)
            p.add_argument("--classical-only", action="store_true")
        p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("complex", help="simplex counts and Betti numbers")
    common(p, signal=False)
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("filter", help="quantum simplicial filter against the classical one")
    common(p)
    p.add_argument("--spec", default="identity", help=f"FilterSpec JSON path or one of {', '.join(BUILTINS)}")
    p.add_argument("--kappa", type=float, help="condition bound for projection builtins")
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--output-tol", type=float, default=1e-6)
    p.add_argument("--identity-tol", type=float, default=1e-9)
    p.add_argument("--phase-tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("project", help="Hodge subcomponent or lower projection")
    common(p)
    p.add_argument("--component", choices=("G", "C", "H", "lower"), required=True)
    p.add_argument("--kappa", type=float)
    p.add_argument("--eps", type=float, default=1e-3)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("resources", help="exact counts and unit-constant cost proxies")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--E", type=int, default=0)
    p.add_argument("--encoding", choices=(DIRECT, COMPACT), default=DIRECT)
    p.add_argument("--d-lower", type=int, default=0)
    p.add_argument("--d-upper", type=int, default=0)
    p.add_argument("--h0", type=float, default=0.0)
    p.add_argument("--kappa", type=float, help="estimate a projection instead of a filter")
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_resources)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
