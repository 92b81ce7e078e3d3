"""Single command-line entry point; every subcommand emits JSON, CSV or text.

Usage examples:

    kqmc primes --m 20
    kqmc primes calibrate --max 100000
    kqmc points --kind S --m 10 --d 2 --out pts.txt
    kqmc norm --scheme f2 --fn f.json
    kqmc expsum --kind T --p 3 --k "1"
    kqmc expsum --kind P1 --m 20 --k "1,1" --report
    kqmc integrate --kind P1 --m 20 --fn f.json
    kqmc integrate --kind P2 --builtin cos1 --d 1 --m-list 10,20,50 --csv
    kqmc certify --m 100 --d 3
    kqmc plan --eps 0.8 --d 1
    kqmc fool --nodes nodes.txt --d 1 --fn-out gstar.json
    kqmc verify --cert cert.json --nodes nodes.txt

Exit codes: 0 success, 1 domain/data error, 2 violated mathematical
invariant (a bound check that fails), 64 usage error.

Density constants resolve in order: built-in calibrated defaults, then the
JSON file named by $KOROBOV_QMC_CONSTANTS, then --constants FILE, then the
individual --c-p/--C-p overrides.  Identical invocations (including --seed)
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import adversary, expsums, fourier, integrator, points, primes
from .errors import DataError, DomainError, InvariantViolation

ENV_CONSTANTS = "KOROBOV_QMC_CONSTANTS"

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INVARIANT = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 64 instead of argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    fmt: str  # json | csv | text
    constants: primes.DensityConstants
    seed: int


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True)


def _resolve_constants(args: argparse.Namespace) -> primes.DensityConstants:
    c = primes.DEFAULT_CONSTANTS
    path = getattr(args, "constants", None) or os.environ.get(ENV_CONSTANTS)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
            c = primes.DensityConstants(
                c_p=float(doc["c_p"]),
                C_p=float(doc["C_p"]),
                calibrated_up_to=int(doc.get("m_max", 0)),
            )
        except (OSError, KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise DataError(f"bad constants file {path!r}: {exc}") from exc
    c_p = getattr(args, "c_p", None)
    C_p = getattr(args, "C_p_override", None)
    if c_p is not None or C_p is not None:
        c = primes.DensityConstants(
            c_p=c_p if c_p is not None else c.c_p,
            C_p=C_p if C_p is not None else c.C_p,
            calibrated_up_to=0,
        )
    return c


def _parse_k(text: str) -> fourier.Frequency:
    try:
        entries = [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise DomainError(f"bad frequency {text!r}: {exc}") from exc
    if not entries:
        raise DomainError("empty frequency")
    return fourier.Frequency.from_entries(entries)


def _parse_int_list(text: str, what: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise DomainError(f"bad {what} list {text!r}") from exc


def _load_function(path: str) -> fourier.SpectralFunction:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read function file {path!r}: {exc}") from exc
    return fourier.from_json_dict(doc)


def _load_nodes(path: str, d: int):
    """Nodes file: either the points export format (rational nodes) or one
    point per line with d float coordinates."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read nodes file {path!r}: {exc}") from exc
    stripped = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not stripped:
        raise DataError(f"nodes file {path!r} is empty")
    if stripped[0].startswith("#"):
        blocks = points.read_points(io.StringIO(text))
        nodes = [pt for blk in blocks for pt in blk.rational_points()]
        if nodes[0].d != d:
            raise DomainError(f"nodes have d={nodes[0].d}, expected {d}")
        return nodes
    rows = []
    for ln in stripped:
        vals = [float(tok) for tok in ln.split()]
        if len(vals) != d:
            raise DataError(f"node row has {len(vals)} coordinates, expected {d}")
        rows.append(vals)
    return np.asarray(rows, dtype=np.float64)


def _load_weights(path: str, n: int) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            vals = [float(ln) for ln in fh if ln.strip()]
    except (OSError, ValueError) as exc:
        raise DataError(f"bad weights file {path!r}: {exc}") from exc
    if len(vals) != n:
        raise DataError(f"{len(vals)} weights for {n} nodes")
    return np.asarray(vals, dtype=np.float64)


# --- built-in black-box integrands (name -> (callable, known integral)) -----

BUILTINS: dict[str, tuple[Callable[[np.ndarray], float], float | None]] = {
    "one": (lambda x: 1.0, 1.0),
    "cos1": (lambda x: math.cos(2.0 * math.pi * x[0]), 0.0),
    "cos9x1": (lambda x: math.cos(2.0 * math.pi * 9.0 * x[0]), 0.0),
    "prodcos": (
        lambda x: float(np.prod(1.0 + np.cos(2.0 * math.pi * x))),
        1.0,
    ),
}


# --- subcommand handlers; each returns (document, exit_code) -----------------


def _cmd_primes(args, config: RunConfig) -> tuple[str, int]:
    if getattr(args, "primes_cmd", None) == "calibrate":
        consts = primes.calibrate_constants(args.max)
        return (
            _dump({"c_p": consts.c_p, "C_p": consts.C_p, "m_max": consts.calibrated_up_to}),
            EXIT_OK,
        )
    if args.m is None:
        raise DomainError("primes requires --m (or the calibrate subcommand)")
    window = primes.enumerate_window(args.m)
    if args.json:
        return (
            _dump({"m": window.m, "count": len(window), "primes": list(window.primes)}),
            EXIT_OK,
        )
    return (" ".join(str(p) for p in window.primes), EXIT_OK)


def _cmd_points(args, config: RunConfig) -> tuple[str, int]:
    uset = points.union_set(args.kind, args.m, args.d)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            points.write_points(uset, fh)
        return (_dump({"kind": args.kind, "m": args.m, "d": args.d, "n": uset.n, "out": args.out}), EXIT_OK)
    buf = io.StringIO()
    points.write_points(uset, buf)
    return (buf.getvalue().rstrip("\n"), EXIT_OK)


def _cmd_norm(args, config: RunConfig) -> tuple[str, int]:
    f = _load_function(args.fn)
    value = fourier.norm(f, args.scheme)
    return (_dump({"d": f.d, "scheme": args.scheme, "norm": value}), EXIT_OK)


def _cmd_expsum(args, config: RunConfig) -> tuple[str, int]:
    k = _parse_k(args.k)
    kind = args.kind.upper()
    if kind in ("S", "T"):
        if args.p is None:
            raise DomainError(f"kind {kind} requires --p")
        kset = points.KorobovSet(kind=points.SetKind[kind], p=args.p, d=k.d)
        result, report = expsums.single_sum_report(k, kset)
        scope = {"p": args.p}
    elif kind in ("P1", "P2"):
        if args.m is None:
            raise DomainError(f"kind {kind} requires --m")
        uset = points.union_set(kind, args.m, k.d)
        result, report = expsums.union_sum_report(k, uset, config.constants)
        scope = {"m": args.m}
    else:
        raise DomainError(f"unknown kind {args.kind!r}")
    doc = {
        "kind": kind,
        "k": list(k.entries()),
        "n_terms": result.n_terms,
        "re": result.value.real,
        "im": result.value.imag,
        "abs": abs(result.value),
        "bound": report.rhs,
        **scope,
    }
    code = EXIT_OK
    if args.report:
        doc["satisfied"] = report.satisfied
        doc["slack"] = report.slack
        if not report.satisfied:
            code = EXIT_INVARIANT
    return (_dump(doc), code)


def _integrate_row(args, config: RunConfig, m: int) -> dict:
    uset = points.union_set(args.kind, m, args.d)
    try:
        bound = integrator.wc_bound(m, config.constants, args.d).bound
    except DomainError:
        bound = None
    if args.fn:
        f = _load_function(args.fn)
        estimate = integrator.qmc_apply(f, uset)
        reference = fourier.integral(f)
        return {
            "m": m,
            "kind": args.kind,
            "d": args.d,
            "n": uset.n,
            "estimate_re": estimate.real,
            "estimate_im": estimate.imag,
            "reference_re": reference.real,
            "reference_im": reference.imag,
            "abs_error": integrator.exact_error(f, uset),
            "bound": bound,
        }
    func, known = BUILTINS[args.builtin]
    estimate = integrator.qmc_apply(func, uset)
    return {
        "m": m,
        "kind": args.kind,
        "d": args.d,
        "n": uset.n,
        "estimate_re": estimate,
        "estimate_im": 0.0,
        "reference_re": known,
        "reference_im": 0.0 if known is not None else None,
        "abs_error": abs(estimate - known) if known is not None else None,
        "bound": None,
    }


def _cmd_integrate(args, config: RunConfig) -> tuple[str, int]:
    if (args.fn is None) == (args.builtin is None):
        raise DomainError("need exactly one of --fn or --builtin")
    if args.builtin is not None and args.builtin not in BUILTINS:
        raise DomainError(
            f"unknown builtin {args.builtin!r}; have {sorted(BUILTINS)}"
        )
    if args.fn is not None:
        args.d = _load_function(args.fn).d
    elif args.d is None:
        raise DomainError("--builtin requires --d")
    ms = _parse_int_list(args.m_list, "m") if args.m_list else [args.m]
    if ms == [None]:
        raise DomainError("need --m or --m-list")
    rows = [_integrate_row(args, config, m) for m in ms]
    if args.csv:
        return (_to_csv(rows), EXIT_OK)
    if len(rows) == 1:
        return (_dump(rows[0]), EXIT_OK)
    return (_dump({"rows": rows}), EXIT_OK)


def _cmd_certify(args, config: RunConfig) -> tuple[str, int]:
    ms = _parse_int_list(args.m_list, "m") if args.m_list else [args.m]
    if ms == [None]:
        raise DomainError("need --m or --m-list")
    rows = []
    for m in ms:
        cert = integrator.wc_bound(m, config.constants, args.d)
        rows.append(
            {
                "m": cert.m,
                "d": args.d,
                "c_p": cert.c_p,
                "bound": cert.bound,
                "n": cert.n,
                "d_max": cert.d_max,
            }
        )
    if args.csv:
        return (_to_csv(rows), EXIT_OK)
    if len(rows) == 1:
        return (_dump(rows[0]), EXIT_OK)
    return (_dump({"rows": rows}), EXIT_OK)


def _cmd_plan(args, config: RunConfig) -> tuple[str, int]:
    if args.eps_list:
        eps_values = [float(t) for t in args.eps_list.split(",") if t.strip()]
    else:
        eps_values = [args.eps]
    if eps_values == [None]:
        raise DomainError("need --eps or --eps-list")
    rows = []
    for eps in eps_values:
        result = integrator.plan(eps, args.d, config.constants)
        rows.append(
            {
                "eps": eps,
                "d": args.d,
                "c_p": config.constants.c_p,
                "m": result.m,
                "n": result.n,
            }
        )
    if args.csv:
        return (_to_csv(rows), EXIT_OK)
    if len(rows) == 1:
        return (_dump(rows[0]), EXIT_OK)
    return (_dump({"rows": rows}), EXIT_OK)


def _algorithm_from_files(nodes_path: str, weights_path: str | None, d: int):
    nodes = _load_nodes(nodes_path, d)
    n = len(nodes)
    weights = _load_weights(weights_path, n) if weights_path else None
    return integrator.LinearAlgorithm.from_nodes(nodes, weights)


def _cmd_fool(args, config: RunConfig) -> tuple[str, int]:
    alg = _algorithm_from_files(args.nodes, args.weights, args.d)
    cert = adversary.fooling_certificate(alg, args.d)
    if args.fn_out:
        with open(args.fn_out, "w", encoding="utf-8") as fh:
            json.dump(fourier.to_json_dict(cert.g_star), fh, sort_keys=True)
            fh.write("\n")
    return (_dump(adversary.certificate_to_json(cert)), EXIT_OK)


def _cmd_verify(args, config: RunConfig) -> tuple[str, int]:
    try:
        with open(args.cert, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read certificate {args.cert!r}: {exc}") from exc
    cert = adversary.certificate_from_json(doc)
    alg = _algorithm_from_files(args.nodes, args.weights, cert.d)
    check = adversary.verify_certificate(cert, alg)
    out = {
        "all_satisfied": check.all_satisfied,
        "checks": {
            name: {
                "lhs": r.lhs,
                "rhs": r.rhs,
                "satisfied": r.satisfied,
                "slack": r.slack,
            }
            for name, r in check.reports.items()
        },
    }
    return (_dump(out), EXIT_OK if check.all_satisfied else EXIT_INVARIANT)


def _to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0].keys())
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if row[k] is None else row[k] for k in header])
    return buf.getvalue().rstrip("\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="kqmc", description=__doc__.splitlines()[0])
    parser.add_argument("--constants", help="JSON file with c_p, C_p, m_max")
    parser.add_argument("--c-p", dest="c_p", type=float, help="override c_p")
    parser.add_argument(
        "--C-p", dest="C_p_override", type=float, help="override C_p"
    )
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("primes", help="enumerate a prime window")
    p.add_argument("--m", type=int)
    p.add_argument("--json", action="store_true")
    psub = p.add_subparsers(dest="primes_cmd", parser_class=_Parser)
    pc = psub.add_parser("calibrate", help="sweep density constants")
    pc.add_argument("--max", type=int, required=True)
    p.set_defaults(handler=_cmd_primes)

    p = sub.add_parser("points", help="export a union point set")
    p.add_argument("--kind", required=True, choices=["S", "T"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_points)

    p = sub.add_parser("norm", help="weighted coefficient norm of a function file")
    p.add_argument("--scheme", required=True, choices=["f1", "f2", "f3"])
    p.add_argument("--fn", required=True)
    p.set_defaults(handler=_cmd_norm)

    p = sub.add_parser("expsum", help="normalized exponential sum and its bound")
    p.add_argument("--kind", required=True, choices=["S", "T", "P1", "P2"])
    p.add_argument("--k", required=True, help='frequency, e.g. "1,-2,0"')
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--report", action="store_true")
    p.set_defaults(handler=_cmd_expsum)

    p = sub.add_parser("integrate", help="apply the union QMC rule")
    p.add_argument("--kind", required=True, choices=["P1", "P2"])
    p.add_argument("--m", type=int)
    p.add_argument("--m-list", dest="m_list")
    p.add_argument("--fn")
    p.add_argument("--builtin")
    p.add_argument("--d", type=int)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(handler=_cmd_integrate)

    p = sub.add_parser("certify", help="worst-case error certificate")
    p.add_argument("--m", type=int)
    p.add_argument("--m-list", dest="m_list")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(handler=_cmd_certify)

    p = sub.add_parser("plan", help="window size reaching a target accuracy")
    p.add_argument("--eps", type=float)
    p.add_argument("--eps-list", dest="eps_list")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(handler=_cmd_plan)

    p = sub.add_parser("fool", help="adversarial fooling certificate for nodes")
    p.add_argument("--nodes", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--weights")
    p.add_argument("--fn-out", dest="fn_out", help="write g* as a function file")
    p.set_defaults(handler=_cmd_fool)

    p = sub.add_parser("verify", help="re-check a fooling certificate")
    p.add_argument("--cert", required=True)
    p.add_argument("--nodes", required=True)
    p.add_argument("--weights")
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            subcommand=args.subcommand,
            fmt="csv" if getattr(args, "csv", False) else "json",
            constants=_resolve_constants(args),
            seed=args.seed,
        )
        document, code = args.handler(args, config)
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except DomainError as exc:  # includes DataError
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print(document)
    return code


if __name__ == "__main__":
    sys.exit(main())
