"""Command-line front end.

Subcommands:

* ``sweep``       gap curve of the noisy family over a nu grid (CSV/JSON)
* ``minimizers``  enumerate all minimal-uncertainty vectors for a dimension
* ``gap``         distillation ceiling vs phase-minimum for one profile
* ``verify``      run the full invariant suite (exit 1 on any failure)
* ``state``       inspect rho_lambda: spectrum, marginals, partial
                  transpose, twirl diagnostics

Data goes to stdout (or ``--out``); diagnostics go to stderr.  Exit codes:
0 success, 1 failed verification, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

import numpy as np

from . import measures, qcore, symstates, uncertainty
from . import verify as verify_mod

CSV_HEADER = "nu,f,ed_plus_bits,epsilon_bits,co_epsilon_bits,gap_bits,relative_gap"
GAP_FIELDS = ("nu", "f", "ed_plus_bits", "epsilon_bits", "co_epsilon_bits",
              "gap_bits", "relative_gap")


class UsageError(Exception):
    """Invalid arguments or unusable I/O targets (exit code 2)."""


def _parse_lambda(text, d):
    try:
        entries = [float(x) for x in str(text).split(",")]
    except ValueError as exc:
        raise UsageError(f"could not parse probability vector {text!r}: {exc}")
    if len(entries) != d:
        raise UsageError(f"expected {d} comma-separated entries, got {len(entries)}")
    try:
        # strict: inputs off by more than 1e-9 are rejected, never renormalized
        return qcore.prob_vector(np.array(entries), tol=qcore.ASSERT_TOL)
    except ValueError as exc:
        raise UsageError(str(exc))


def _complex_str(z):
    return f"{z.real:+.6f}{z.imag:+.6f}j"


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path!r}: {exc}")


def _render_sweep(points, fmt):
    if fmt == "csv":
        lines = [CSV_HEADER]
        for p in points:
            row = asdict(p)
            lines.append(",".join(f"{row[k]:.16e}" for k in GAP_FIELDS))
        return "\n".join(lines) + "\n"
    payload = [{k: asdict(p)[k] for k in GAP_FIELDS} for p in points]
    return json.dumps(payload, indent=2) + "\n"


def cmd_sweep(args):
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    if not (0.0 <= args.nu_min < args.nu_max <= 1.0):
        raise UsageError("need 0 <= --nu-min < --nu-max <= 1")
    if args.d < 2:
        raise UsageError("--d must be >= 2")
    grid = np.linspace(args.nu_min, args.nu_max, args.steps)
    cfg = measures.OptimizerConfig(restarts=args.restarts, seed=args.seed)
    print(f"sweep: d={args.d} steps={args.steps} nu=[{args.nu_min},{args.nu_max}] "
          f"seed={args.seed} restarts={args.restarts}", file=sys.stderr)
    points = measures.gap_sweep(args.d, grid, cfg)
    _write_text(args.out, _render_sweep(points, args.format))
    return 0


def cmd_minimizers(args):
    if args.d < 1:
        raise UsageError("--d must be >= 1")
    entries = uncertainty.enumerate_minimizers(args.d)
    profiles = set()
    print("# d1 d2 beta gamma | vector | modulus^2 profile | deficit")
    for spec, c in entries:
        rep = uncertainty.ur_report(c)
        prof = np.abs(c) ** 2
        profiles.add(tuple(np.round(prof, 10)))
        vec = " ".join(_complex_str(z) for z in c)
        prof_s = ",".join(f"{x:.6f}" for x in prof)
        print(f"{spec.d1} {spec.d2} {spec.beta} {spec.gamma} | {vec} | "
              f"{prof_s} | {rep.deficit:.3e}")
    print(f"total vectors: {len(entries)}")
    print(f"distinct modulus profiles: {len(profiles)}")
    return 0


def cmd_gap(args):
    lam = _parse_lambda(args.lam, args.d)
    try:
        res = measures.epsilon_min(lam)
        ed = measures.ed_plus(lam)
    except ValueError as exc:
        raise UsageError(str(exc))
    c_opt = np.sqrt(lam) * np.exp(1j * res.optimizer_phases)
    verdict, spec = uncertainty.is_minimizer(c_opt, tol=measures.CHAIN_TOL)
    payload = {
        "d": args.d,
        "lambda": [float(x) for x in lam],
        "convention": args.convention,
        "ed_plus_bits": ed,
        "epsilon_bits": res.value,
        "gap_bits": res.value - ed,
        "optimizer_phases": [float(t) for t in res.optimizer_phases],
        "restarts_used": res.restarts_used,
        "converged": res.converged,
        "is_minimizer": bool(verdict),
        "minimizer_spec": asdict(spec) if spec is not None else None,
    }
    print(json.dumps(payload, indent=2))
    return 0


def cmd_verify(args):
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if args.d_max < 2:
        raise UsageError("--d-max must be >= 2")
    ok, results = verify_mod.run_all(d_max=args.d_max, samples=args.samples,
                                     seed=args.seed, tol=args.tol)
    width = max(len(r.name) for r in results)
    for r in results:
        mark = "ok  " if r.passed else "FAIL"
        print(f"{mark}  {r.name:<{width}}  {r.detail}")
    n_bad = sum(not r.passed for r in results)
    print(f"{len(results) - n_bad}/{len(results)} checks passed")
    return 0 if ok else 1


def cmd_state(args):
    lam = _parse_lambda(args.lam, args.d)
    rho = symstates.rho_lambda(lam)
    d = args.d
    out = {"d": d, "lambda": [float(x) for x in lam], "show": args.show}
    if args.show == "eigs":
        out["eigenvalues"] = [float(x) for x in qcore.herm_eigvals(rho)]
    elif args.show == "ptrace":
        for keep in ("A", "B"):
            red = qcore.partial_trace(rho, keep, (d, d))
            out[f"marginal_{keep}"] = [[_complex_str(z) for z in row] for row in red]
    elif args.show == "ptranspose":
        ev = qcore.herm_eigvals(qcore.partial_transpose(rho, "B", (d, d)))
        out["pt_eigenvalues"] = [float(x) for x in ev]
        out["pt_min_eigenvalue"] = float(ev[0])
        out["npt"] = bool(ev[0] < -1e-12)
    elif args.show == "twirl":
        twirled = symstates.twirl_group(rho)
        out["invariance_distance"] = qcore.trace_distance(rho, twirled)
        basis = symstates.bell_basis_matrix(d)
        weights = np.real(np.einsum("id,ij,jd->d", basis.conj(), rho, basis))
        out["diagonal_weights"] = [float(x) for x in weights]
    print(json.dumps(out, indent=2))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="belldiag",
        description="Bell-diagonal qudit states: entanglement bounds, "
                    "minimal-uncertainty vectors, gap sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="gap curve over a nu grid")
    p.add_argument("--d", type=int, required=True, help="local dimension")
    p.add_argument("--nu-min", type=float, default=0.0)
    p.add_argument("--nu-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=200, help="grid size (>= 2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("minimizers", help="enumerate minimal-uncertainty vectors")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_minimizers)

    p = sub.add_parser("gap", help="ceiling vs phase-minimum for one profile")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True,
                   help="comma-separated probabilities, e.g. 0.75,0.25")
    p.add_argument("--convention", choices=("column", "row"), default="column")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--d-max", type=int, default=8)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None,
                   help="override every check tolerance")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("state", help="inspect a Bell-diagonal state")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--show", choices=("eigs", "ptrace", "ptranspose", "twirl"),
                   required=True)
    p.set_defaults(func=cmd_state)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
