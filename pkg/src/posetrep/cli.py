"""Command-line interface.

Subcommands: hasse, kleiner, euler, dim-quotient, stability, solve,
invariants, fourspace-sweep.  Global flags (before the subcommand, or after
it) are --tol, --max-iter, --seed, --output; each falls back to the
environment variables PRL_TOL, PRL_MAX_ITER, PRL_SEED, PRL_OUTPUT.

Exit codes: 0 success, 1 invalid input, 2 non-convergence,
3 numerical breakdown.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Sequence

import numpy as np

from . import fileio
from .bound_quiver import (
    DimVector,
    assignment_report,
    bound_quiver_of,
    euler_form,
    quotient_dim_lower_bound,
)
from .errors import (
    CheckFailed,
    NoTraceIdentity,
    NumericalBreakdown,
    ParseError,
    PosetRepError,
    SingularMetric,
)
from .families import four_lines_rep, is_exceptional, parse_lambda
from .linrep import StabilityOptions, decompose, stability_check
from .moment import FlowOptions, kempf_ness_flow, orthoscalar_check, unitary_invariants
from .poset import hasse_quiver, is_representation_finite

_BREAKDOWN = (NumericalBreakdown, SingularMetric, CheckFailed)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; the exit-code contract
    # reserves 2 for non-convergence, so route usage errors through 1.
    def error(self, message):
        raise _UsageError(message)


def _emit(args, payload: dict, text: str) -> None:
    if args.output == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


# ---------------------------------------------------------------------------
# combinatorial subcommands

def _cmd_hasse(args) -> int:
    p = fileio.load_poset(args.poset)
    q = hasse_quiver(p)
    bq = bound_quiver_of(p)
    lines = ["vertices: " + " ".join(q.vertices), "arrows:"]
    lines += [f"  {s} -> {t}" for s, t in q.arrows]
    lines.append(f"relations: {len(bq.relations)}")
    _emit(
        args,
        {
            "vertices": list(q.vertices),
            "arrows": [list(a) for a in q.arrows],
            "relations": len(bq.relations),
        },
        "\n".join(lines),
    )
    return 0


def _cmd_kleiner(args) -> int:
    p = fileio.load_poset(args.poset)
    res = is_representation_finite(p)
    lines = [f"representation-finite: {'yes' if res.finite else 'no'}"]
    lines += [
        f"  contains {name} on {', '.join(subset)}"
        for name, subset in res.witnesses
    ]
    _emit(
        args,
        {
            "finite": res.finite,
            "witnesses": [
                {"critical": name, "elements": list(subset)}
                for name, subset in res.witnesses
            ],
        },
        "\n".join(lines),
    )
    return 0


def _cmd_euler(args) -> int:
    p = fileio.load_poset(args.poset)
    bq = bound_quiver_of(p)
    d = fileio.parse_dim_vector(args.dim, p)
    e = fileio.parse_dim_vector(args.second, p) if args.second else None
    val = euler_form(bq, d, e)
    _emit(args, {"euler_form": val}, str(val))
    return 0


def _cmd_dim_quotient(args) -> int:
    p = fileio.load_poset(args.poset)
    if not args.search_assignments:
        d = fileio.parse_dim_vector(args.dim, p)
        qd = quotient_dim_lower_bound(bound_quiver_of(p), d)
        _emit(
            args,
            {"value": qd.value, "empty_quotient": qd.empty_quotient},
            str(qd.value),
        )
        return 0

    root, groups = fileio.parse_dim_groups(args.dim)
    rep = assignment_report(p, root, groups, target=args.expect)
    values = sorted({val for _, val in rep.assignments})
    lines = []
    for assignment, val in rep.assignments:
        pairs = " ".join(f"{e}={x}" for e, x in assignment)
        lines.append(f"assignment {pairs} -> {val}")
    if args.expect is not None:
        lines.append(f"target: {args.expect}")
        lines.append(f"matched: {'yes' if rep.matched else 'no'}")
        if not rep.matched:
            lines.append(
                "DISCREPANCY: no nesting-consistent assignment attains "
                f"{args.expect}; values seen: {values}"
            )
    _emit(
        args,
        {
            "assignments": [
                {"assignment": dict(a), "value": v} for a, v in rep.assignments
            ],
            "target": rep.target,
            "matched": rep.matched,
            "values_seen": values,
        },
        "\n".join(lines),
    )
    return 0


# ---------------------------------------------------------------------------
# linear-representation subcommands

def _cmd_stability(args) -> int:
    rep, _ = fileio.load_rep(args.rep)
    w = fileio.parse_weight(args.weight, rep.poset)
    opts = StabilityOptions(
        tol=args.tol if args.tol is not None else 1e-9,
        restarts=args.restarts,
        seed=args.seed,
        use_flow=args.use_flow,
    )
    if args.max_iter is not None:
        opts.flow_max_iter = args.max_iter
    verdict = stability_check(rep, w, opts)
    lines = [
        f"classification: {verdict.classification}",
        f"best_score: {verdict.best_score if verdict.best_score is not None else 'none'}",
        f"trace_identity: {'yes' if verdict.trace_identity else 'no'}",
        f"methods: {', '.join(verdict.methods)}",
        f"inconclusive: {'yes' if verdict.inconclusive else 'no'}",
    ]
    witness = None
    if verdict.witness is not None:
        witness = [
            [fileio.format_complex(z) for z in row]
            for row in verdict.witness.tolist()
        ]
        lines.append(f"witness_dim: {verdict.witness.shape[1]}")
    _emit(
        args,
        {
            "classification": verdict.classification,
            "best_score": str(verdict.best_score)
            if verdict.best_score is not None
            else None,
            "trace_identity": verdict.trace_identity,
            "methods": list(verdict.methods),
            "inconclusive": verdict.inconclusive,
            "witness": witness,
        },
        "\n".join(lines),
    )
    return 0


def _cmd_solve(args) -> int:
    rep, poset_path = fileio.load_rep(args.rep)
    w = fileio.parse_weight(args.weight, rep.poset)
    opts = FlowOptions(
        tol=args.tol if args.tol is not None else 1e-8,
        max_iter=args.max_iter if args.max_iter is not None else 20000,
        seed=args.seed,
    )
    system, report = kempf_ness_flow(rep, w, opts)
    prefix = args.prefix or os.path.splitext(args.rep)[0]
    report_path = prefix + ".report.json"
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(fileio.report_to_json(report))
    written = [report_path]
    if system is not None:
        out_dir = os.path.dirname(os.path.abspath(prefix + ".proj"))
        poset_abs = os.path.join(
            os.path.dirname(os.path.abspath(args.rep)), poset_path
        )
        fileio.save_projection_system(
            system, prefix + ".proj", os.path.relpath(poset_abs, out_dir)
        )
        written.append(prefix + ".proj")
    payload = report.as_dict()
    payload.pop("final_metric", None)
    payload.pop("history", None)
    payload["files"] = written
    _emit(
        args,
        payload,
        "\n".join(
            [
                f"status: {report.status}",
                f"iterations: {report.iterations}",
                f"residual: {report.residual:.6e}",
                f"gradient: {report.gradient_norm:.6e}",
                "files: " + " ".join(written),
            ]
        ),
    )
    return 0 if report.status == "converged" else 2


def _cmd_invariants(args) -> int:
    ps, _ = fileio.load_projection_system(args.projections)
    check = orthoscalar_check(ps, tol=args.tol if args.tol is not None else 1e-8)
    traces = unitary_invariants(ps, max_len=args.max_len)
    lines = [f"orthoscalar: {'yes' if check.passed else 'no'}"]
    lines += [
        f"{' '.join(word)}: {fileio.format_complex(val)}"
        for word, val in sorted(traces.items(), key=lambda kv: (len(kv[0]), kv[0]))
    ]
    _emit(
        args,
        {
            "orthoscalar": check.passed,
            "checks": check.as_dict(),
            "invariants": {
                " ".join(word): fileio.format_complex(val)
                for word, val in traces.items()
            },
        },
        "\n".join(lines),
    )
    return 0


# ---------------------------------------------------------------------------
# four-subspace sweep

_SWEEP_COLUMNS = (
    "lambda",
    "status",
    "exceptional",
    "a_sq",
    "b_sq",
    "c_sq",
    "invariant_sum",
    "residual",
    "iterations",
    "summands",
)


def _sweep_row(token: str, args) -> dict:
    row = {col: "" for col in _SWEEP_COLUMNS}
    row["lambda"] = token
    try:
        lam = parse_lambda(token)
    except PosetRepError:
        row["status"] = "error:invalid-lambda"
        return row
    exceptional = is_exceptional(lam)
    row["exceptional"] = "yes" if exceptional else "no"
    tol = args.tol if args.tol is not None else 1e-8
    if exceptional:
        # Boundary points approach the zero fiber only polynomially; run to
        # a coarser residual and widen decompose accordingly (the angle
        # between coalescing lines scales like sqrt(residual)).
        tol = max(tol, 1e-4)
    decomp_tol = 1e-2 if exceptional else 1e-6
    try:
        rep = four_lines_rep(lam)
        w = fileio.parse_weight(args.chi, rep.poset)
        opts = FlowOptions(
            tol=tol,
            max_iter=args.max_iter if args.max_iter is not None else 20000,
            seed=args.seed,
        )
        system, report = kempf_ness_flow(rep, w, opts)
    except NoTraceIdentity:
        row["status"] = "error:trace-identity"
        return row
    except _BREAKDOWN:
        row["status"] = "error:breakdown"
        return row
    row["status"] = report.status
    row["residual"] = repr(report.residual)
    row["iterations"] = str(report.iterations)
    if system is None:
        return row
    e1, e2, e3, e4 = system.poset.elements
    p = system.projections
    t14 = float(np.trace(p[e1] @ p[e4]).real)
    t13 = float(np.trace(p[e1] @ p[e3]).real)
    t12 = float(np.trace(p[e1] @ p[e2]).real)
    row["a_sq"], row["b_sq"], row["c_sq"] = repr(t14), repr(t13), repr(t12)
    row["invariant_sum"] = repr(t14 + t13 + t12)
    try:
        parts = decompose(
            system.subspace_rep(tol=decomp_tol), seed=args.seed, tol=decomp_tol
        )
        row["summands"] = str(len(parts))
    except PosetRepError:
        row["summands"] = ""
    return row


def _cmd_fourspace_sweep(args) -> int:
    tokens = [tok.strip() for tok in args.lambdas.split(",") if tok.strip()]
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=_SWEEP_COLUMNS)
        writer.writeheader()
        for token in tokens:
            writer.writerow(_sweep_row(token, args))
    finally:
        if args.out:
            out.close()
    return 0


# ---------------------------------------------------------------------------
# parser assembly

def _env_default(name: str, cast, fallback):
    raw = os.environ.get("PRL_" + name)
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError:
        raise _UsageError(f"bad value {raw!r} for PRL_{name}") from None


def _output_choice(raw: str) -> str:
    if raw not in ("text", "json"):
        raise ValueError(raw)
    return raw


def _global_options() -> argparse.ArgumentParser:
    par = _Parser(add_help=False)
    g = par.add_argument_group("global options")
    g.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                   help="numerical tolerance (default per command; env PRL_TOL)")
    g.add_argument("--max-iter", type=int, default=argparse.SUPPRESS,
                   help="iteration cap for flows (env PRL_MAX_ITER)")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                   help="random seed (env PRL_SEED)")
    g.add_argument("--output", choices=("text", "json"), default=argparse.SUPPRESS,
                   help="report format (env PRL_OUTPUT)")
    return par


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = _Parser(prog="posetrep", parents=[common], description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("hasse", parents=[common],
                        help="covering quiver of the poset extended by a top element")
    sp.add_argument("poset", help="poset file")
    sp.set_defaults(func=_cmd_hasse)

    sp = sub.add_parser("kleiner", parents=[common],
                        help="representation-finiteness via critical subposets")
    sp.add_argument("poset")
    sp.set_defaults(func=_cmd_kleiner)

    sp = sub.add_parser("euler", parents=[common],
                        help="Euler form of dimension vectors on the bound quiver")
    sp.add_argument("poset")
    sp.add_argument("-d", "--dim", required=True, help="'d0; d_1, d_2, ...'")
    sp.add_argument("-e", "--second", help="second dimension vector (default: d)")
    sp.set_defaults(func=_cmd_euler)

    sp = sub.add_parser("dim-quotient", parents=[common],
                        help="moduli dimension lower bound for a dimension vector")
    sp.add_argument("poset")
    sp.add_argument("-d", "--dim", required=True)
    sp.add_argument("--search-assignments", action="store_true",
                    help="try every nesting-consistent placement of the "
                         "semicolon-grouped entries")
    sp.add_argument("--expect", type=int, default=None,
                    help="flag whether any assignment attains this value")
    sp.set_defaults(func=_cmd_dim_quotient)

    sp = sub.add_parser("stability", parents=[common],
                        help="classify a subspace representation for a weight")
    sp.add_argument("rep", help="representation file")
    sp.add_argument("-w", "--weight", required=True, help="'chi0; chi_1, ...'")
    sp.add_argument("--restarts", type=int, default=200)
    sp.add_argument("--use-flow", action="store_true",
                    help="also consult the gradient-flow oracle")
    sp.set_defaults(func=_cmd_stability)

    sp = sub.add_parser("solve", parents=[common],
                        help="gradient flow to the orthoscalar representative")
    sp.add_argument("rep")
    sp.add_argument("-w", "--weight", required=True)
    sp.add_argument("--prefix", help="output prefix (default: rep path stem)")
    sp.set_defaults(func=_cmd_solve)

    sp = sub.add_parser("invariants", parents=[common],
                        help="trace monomials of a projection system")
    sp.add_argument("projections", help="projection-system file")
    sp.add_argument("--max-len", type=int, default=4)
    sp.set_defaults(func=_cmd_invariants)

    sp = sub.add_parser("fourspace-sweep", parents=[common],
                        help="flow the four-line family over a lambda grid, CSV out")
    sp.add_argument("--lambdas", required=True,
                    help="comma-separated lambda values; 'inf' for the line <e2>")
    sp.add_argument("--chi", default="2; 1, 1, 1, 1")
    sp.add_argument("--out", help="CSV path (default: stdout)")
    sp.set_defaults(func=_cmd_fourspace_sweep)

    return parser


def _fill_globals(args) -> None:
    # The global flags keep SUPPRESS defaults so a value given before the
    # subcommand survives the subparser pass (set_defaults would mutate the
    # shared parent actions and let the subparser clobber it); absent flags
    # are filled from the environment here instead.
    if not hasattr(args, "tol"):
        args.tol = _env_default("TOL", float, None)
    if not hasattr(args, "max_iter"):
        args.max_iter = _env_default("MAX_ITER", int, None)
    if not hasattr(args, "seed"):
        args.seed = _env_default("SEED", int, 0)
    if not hasattr(args, "output"):
        args.output = _env_default("OUTPUT", _output_choice, "text")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        _fill_globals(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _BREAKDOWN as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (PosetRepError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
