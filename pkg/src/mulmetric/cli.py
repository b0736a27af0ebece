"""Command-line front end.

Subcommands: check, transform, solve, common, estimate-lambda.  Machine
output is one JSON document on stdout; one-line human summaries go to
stderr so pipelines stay clean.  Exit codes: 0 pass/converged, 1 axiom or
hypothesis failure (and other verdict-level failures), 2 structural,
parse, or argument errors, 3 ran out of iterations.  Files are written
via write-then-rename, so readers never observe partial output.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from pathlib import Path

from .banach import (
    ContractionCertificate,
    NotAContraction,
    NumericError,
    StopReason,
    estimate_multiplicative_lambda,
    solve_fixed_point,
)
from .common import ContractiveModulus, SolverError, solve_common_fixed_point
from .core import (
    DomainError,
    Flavor,
    StructureError,
    check_table_axioms,
    exp_abs_metric,
    parse_flavor,
    read_table_csv,
    write_table_csv,
)
from .duality import exp_transform, log_transform
from .manifest import ManifestError, load_system_manifest, parse_numeric_map

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3


def _atomic_write(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _emit(doc: dict, out=None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    sys.stdout.write(text)
    if out:
        _atomic_write(out, text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _witness_json(w):
    if w is None:
        return None
    if isinstance(w, tuple):
        return list(w)
    return w


def _error_doc(kind: str, exc: Exception) -> dict:
    doc = {"error": {"type": kind, "message": str(exc)}}
    witness = getattr(exc, "witness", None) or getattr(exc, "orphan", None)
    if witness is not None:
        doc["error"]["witness"] = _witness_json(witness)
    if isinstance(exc, ManifestError):
        doc["error"]["path"] = exc.path
    return doc


# ------------------------------------------------------------- subcommands


def cmd_check(args) -> int:
    table = read_table_csv(args.table, parse_flavor(args.flavor))
    report = check_table_axioms(table)
    _emit(report.to_dict(), args.out)
    _note(f"check: {'pass' if report.overall else 'FAIL'} "
          f"({table.flavor.value}, {table.n} points)")
    return EXIT_PASS if report.overall else EXIT_FAIL


def cmd_transform(args) -> int:
    if args.dir == "log":
        in_flavor, transform = Flavor.MULTIPLICATIVE, log_transform
    else:
        in_flavor, transform = Flavor.ADDITIVE, exp_transform
    table = read_table_csv(args.table, in_flavor)
    input_report = check_table_axioms(table)
    out_table = transform(table)
    output_report = check_table_axioms(out_table)
    if args.out:
        import io

        buf = io.StringIO()
        write_table_csv(out_table, buf)
        _atomic_write(args.out, buf.getvalue())
    _emit({
        "direction": args.dir,
        "input_report": input_report.to_dict(),
        "output_report": output_report.to_dict(),
        "table": out_table.to_dict(),
        "written": args.out,
    })
    _note(f"transform {args.dir}: input {'pass' if input_report.overall else 'FAIL'}, "
          f"output {'pass' if output_report.overall else 'FAIL'}")
    return EXIT_PASS


def _parse_range(spec: str) -> tuple[float, float]:
    try:
        lo_str, hi_str = spec.split(",")
        lo, hi = float(lo_str), float(hi_str)
    except ValueError:
        raise ValueError(f"--range needs 'lo,hi', got {spec!r}") from None
    if not lo < hi:
        raise ValueError(f"--range needs lo < hi, got {spec!r}")
    return lo, hi


def _probe_pairs(args) -> list[tuple[float, float]]:
    if args.pairs:
        pairs = []
        for chunk in args.pairs.split(";"):
            try:
                x_str, y_str = chunk.split(",")
                pairs.append((float(x_str), float(y_str)))
            except ValueError:
                raise ValueError(f"--pairs chunk {chunk!r} is not 'x,y'") from None
        return pairs
    lo, hi = _parse_range(args.range)
    rng = random.Random(args.seed)
    pairs = []
    while len(pairs) < args.probes:
        x, y = rng.uniform(lo, hi), rng.uniform(lo, hi)
        if abs(x - y) > 1e-6:
            pairs.append((x, y))
    return pairs


def _certificate(args, f, metric) -> ContractionCertificate | NotAContraction:
    if args.estimate:
        return estimate_multiplicative_lambda(f, metric, _probe_pairs(args))
    if args.lam is None:
        raise ValueError("either --lambda or --estimate is required")
    return ContractionCertificate(args.lam)


def cmd_solve(args) -> int:
    f = parse_numeric_map(args.map, where="--map")
    metric = exp_abs_metric()
    cert = _certificate(args, f, metric)
    if isinstance(cert, NotAContraction):
        _emit(cert.to_dict(), args.out)
        _note(f"solve: not a contraction (worst ratio {cert.ratio:.6g})")
        return EXIT_FAIL
    res = solve_fixed_point(f, metric, args.x0, cert,
                            tol_additive=args.tol, max_iter=args.max_iter)
    if args.trace:
        if args.format == "csv":
            import io

            buf = io.StringIO()
            res.trace.write_csv(buf)
            _atomic_write(args.trace, buf.getvalue())
        else:
            _atomic_write(args.trace, json.dumps(res.trace.to_dict(), indent=2) + "\n")
    _emit(res.to_dict(), args.out)
    converged = res.trace.stop_reason is StopReason.CONVERGED
    _note(f"solve: {res.trace.stop_reason.value} after {res.iterations} iterations, "
          f"point {res.point!r}")
    return EXIT_PASS if converged else EXIT_NO_CONVERGENCE


def cmd_common(args) -> int:
    sysm = load_system_manifest(args.manifest)
    modulus = ContractiveModulus.linear(args.lam)
    x0 = None
    if args.x0 is not None:
        if sysm.finite:
            labels = sysm.domain.labels
            x0 = labels.index(args.x0) if args.x0 in labels else int(args.x0)
        else:
            x0 = float(args.x0)
    res = solve_common_fixed_point(sysm, modulus, x0=x0, tol=args.tol, max_iter=args.max_iter)
    _emit(res.to_dict(), args.out)
    if res.trace is None:
        failed = [k for k, v in res.hypothesis_report.items() if not v.passed]
        _note(f"common: hypothesis failure ({', '.join(failed)})")
        return EXIT_FAIL
    if not res.success:
        _note("common: did not converge")
        return EXIT_NO_CONVERGENCE
    shown = res.point_label if res.point_label is not None else res.point
    _note(f"common: fixed point {shown!r} after {len(res.trace.step_distances)} steps")
    return EXIT_PASS


def cmd_estimate_lambda(args) -> int:
    f = parse_numeric_map(args.map, where="--map")
    outcome = estimate_multiplicative_lambda(f, exp_abs_metric(), _probe_pairs(args))
    _emit(outcome.to_dict(), args.out)
    if isinstance(outcome, NotAContraction):
        _note(f"estimate-lambda: not a contraction (ratio {outcome.ratio:.6g})")
        return EXIT_FAIL
    _note(f"estimate-lambda: lambda_hat = {outcome.lambda_hat:.6g} "
          f"from {outcome.sample_pairs} pairs")
    return EXIT_PASS


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mulmetric",
        description="Multiplicative/additive metric duality, axiom checks, "
                    "and fixed-point solvers with convergence certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="certify metric axioms on a CSV distance table")
    p.add_argument("table", help="CSV table (optional header row of labels)")
    p.add_argument("--flavor", required=True, choices=["metric", "mult", "metric-like"])
    p.add_argument("--out", help="also write the JSON report here")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("transform", help="log/exp transform a distance table")
    p.add_argument("table")
    p.add_argument("--dir", required=True, choices=["log", "exp"])
    p.add_argument("--out", help="write the transformed table CSV here")
    p.set_defaults(handler=cmd_transform)

    p = sub.add_parser("solve", help="Picard iteration for a multiplicative contraction")
    p.add_argument("--map", required=True, help="affine:a,b | constant:c | identity")
    p.add_argument("--metric", choices=["exp-abs"], default="exp-abs")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="declared contraction factor in [0,1)")
    p.add_argument("--estimate", action="store_true",
                   help="estimate lambda from probe pairs instead of declaring it")
    p.add_argument("--pairs", help="explicit probe pairs 'x,y;x,y;...'")
    p.add_argument("--probes", type=int, default=16, help="number of seeded probe pairs")
    p.add_argument("--range", default="0,1", help="probe interval 'lo,hi'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9, help="additive-units tolerance")
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--trace", help="write the iteration trace here")
    p.add_argument("--format", choices=["csv", "json"], default="csv",
                   help="trace file format")
    p.add_argument("--out", help="also write the result JSON here")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("common", help="common fixed point of a four-map system manifest")
    p.add_argument("manifest", help="system manifest JSON")
    p.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="linear contractive-modulus slope in [0,1)")
    p.add_argument("--x0", help="starting point (label or number)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--out", help="also write the result JSON here")
    p.set_defaults(handler=cmd_common)

    p = sub.add_parser("estimate-lambda", help="contraction-factor estimate from probe pairs")
    p.add_argument("--map", required=True)
    p.add_argument("--metric", choices=["exp-abs"], default="exp-abs")
    p.add_argument("--pairs", help="explicit probe pairs 'x,y;x,y;...'")
    p.add_argument("--probes", type=int, default=16)
    p.add_argument("--range", default="0,1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="also write the JSON outcome here")
    p.set_defaults(handler=cmd_estimate_lambda)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ManifestError as e:
        _emit(_error_doc("manifest", e))
        _note(f"error: {e}")
        return EXIT_USAGE
    except StructureError as e:
        _emit(_error_doc("structure", e))
        _note(f"error: {e}")
        return EXIT_USAGE
    except DomainError as e:
        _emit(_error_doc("domain", e))
        _note(f"error: {e}")
        return EXIT_FAIL
    except (SolverError, NumericError) as e:
        _emit(_error_doc("solver", e))
        _note(f"error: {e}")
        return EXIT_FAIL
    except ValueError as e:
        _emit(_error_doc("argument", e))
        _note(f"error: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
