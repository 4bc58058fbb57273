"""Command-line front end: evaluate functions, run verification suites,
emit machine-readable reports.

Subcommands: eval, eval-prepotential, wdvv-check, oracle-compare, suite.
Complex numbers serialize to two-element [re, im] arrays; every float is
rounded to 15 significant digits, so reports are byte-identical across
runs with the same seed.  Exit codes: 0 pass, 1 check failure, 2 usage or
domain error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import checks as checks_mod
from .errors import WdvvDualError
from .numeric_core import DiffSpec
from .prepotentials import PrepotentialModel
from .sampling import sample_points
from .special_functions import (
    ModularPoint,
    SeriesPolicy,
    eisenstein,
    elliptic_polylog,
    lambdaN,
    polylog,
    theta1,
    theta1_log_derivative,
)
from .superpotential import (
    ResidueBudget,
    Superpotential,
    tensors_from_complementary_contours,
    tensors_from_critical_points,
)
from .prepotentials import EllipticChart, RationalChart
from .wdvv import MetricMatrix, intersection_metric, structure_tensor, \
    wdvv_residual


def parse_complex(text: str) -> complex:
    """Parse '0.3+0.1i', '30i', '2', '-1.5-2i'."""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad complex number: {text!r}") \
            from exc


def parse_point(text: str):
    return [parse_complex(p) for p in text.split(",") if p.strip()]


def parse_multiplicities(text: str):
    return tuple(int(p) for p in text.split(",") if p.strip())


def round15(x: float) -> float:
    return float(f"{x:.15g}")


def jsonify(obj):
    """Recursive conversion with the complex-as-[re, im] convention."""
    if isinstance(obj, complex):
        return [round15(obj.real), round15(obj.imag)]
    if isinstance(obj, float):
        return round15(obj)
    if isinstance(obj, (np.floating,)):
        return round15(float(obj))
    if isinstance(obj, (np.complexfloating,)):
        return jsonify(complex(obj))
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    if isinstance(obj, dict):
        return {k: jsonify(v) for k, v in obj.items()}
    return obj


def emit(doc, out_path):
    text = json.dumps(jsonify(doc), indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    print(text)


def format_value(v: complex) -> str:
    v = complex(v)
    return f"{v.real:.15g}{v.imag:+.15g}i"


def load_config(path):
    """Flat key=value pairs; '#' starts a comment line."""
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def apply_config(args, parser):
    """Config-file values fill in flags the user left at their defaults."""
    if not getattr(args, "config", None):
        return args
    values = load_config(args.config)
    for key, raw in values.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            continue
        if parser.get_default(dest) == getattr(args, dest):
            default = parser.get_default(dest)
            if isinstance(default, int) and not isinstance(default, bool):
                setattr(args, dest, int(raw))
            elif isinstance(default, float):
                setattr(args, dest, float(raw))
            elif isinstance(default, bool):
                setattr(args, dest, raw.lower() in ("1", "true", "yes"))
            else:
                setattr(args, dest, raw)
    return args


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wdvvdual",
        description="dual prepotentials, special functions, and WDVV checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a special function")
    p_eval.add_argument("function", choices=[
        "theta1", "theta1-logder", "polylog", "lambdaN", "epolylog3",
        "eisenstein", "prepotential"])
    p_eval.add_argument("--z", type=parse_complex, default=None)
    p_eval.add_argument("--tau", type=parse_complex, default=None)
    p_eval.add_argument("--n", type=int, default=None,
                        help="index N (polylog / lambdaN)")
    p_eval.add_argument("--d", type=int, default=0,
                        help="theta1 derivative order")
    p_eval.add_argument("--k", default=None,
                        help="Eisenstein weight, or multiplicities k0,..,kl")
    p_eval.add_argument("--q", type=parse_complex, default=None,
                        help="first argument of epolylog3")
    p_eval.add_argument("--zeta", type=parse_complex, default=None)
    p_eval.add_argument("--case", default="rational")
    p_eval.add_argument("--point", default=None,
                        help="comma-separated chart coordinates")

    p_ep = sub.add_parser("eval-prepotential",
                          help="evaluate a dual prepotential")
    p_ep.add_argument("--case", required=True,
                      choices=["rational", "deformed", "elliptic"])
    p_ep.add_argument("--rank", type=int, required=True)
    p_ep.add_argument("--point", required=True,
                      help="z1,..,zl or u,z1,..,zl (elliptic; tau separate)")
    p_ep.add_argument("--tau", type=parse_complex, default=None)
    p_ep.add_argument("--k", default=None, help="multiplicities k0,..,kl")

    p_w = sub.add_parser("wdvv-check", help="WDVV residual at seeded points")
    p_w.add_argument("--case", default="rational",
                     choices=["rational", "deformed", "elliptic"])
    p_w.add_argument("--rank", type=int, default=3)
    p_w.add_argument("--k", default=None)
    p_w.add_argument("--points", type=int, default=5)
    p_w.add_argument("--seed", type=int, default=1)
    p_w.add_argument("--tol-residual", type=float, default=None)
    p_w.add_argument("--samples", type=int, default=64)
    p_w.add_argument("--out", default=None)
    p_w.add_argument("--config", default=None)
    p_w.add_argument("--debug-flip-z-sign", action="store_true")
    p_w.add_argument("--debug-drop-single-sum", action="store_true")

    p_o = sub.add_parser("oracle-compare",
                         help="residue oracle vs closed forms")
    p_o.add_argument("--case", default="rational",
                     choices=["rational", "deformed", "elliptic"])
    p_o.add_argument("--rank", type=int, default=2)
    p_o.add_argument("--k", default=None)
    p_o.add_argument("--seed", type=int, default=2)
    p_o.add_argument("--point", default=None)
    p_o.add_argument("--tau", type=parse_complex, default=None)
    p_o.add_argument("--tol-residual", type=float, default=None)
    p_o.add_argument("--out", default=None)
    p_o.add_argument("--config", default=None)

    p_s = sub.add_parser("suite", help="run every verification family")
    p_s.add_argument("--seed", type=int, default=7)
    p_s.add_argument("--points", type=int, default=3)
    p_s.add_argument("--tail-tol", type=float, default=1e-14)
    p_s.add_argument("--max-terms", type=int, default=400)
    p_s.add_argument("--out", default=None)
    p_s.add_argument("--config", default=None)
    p_s.add_argument("--debug-flip-z-sign", action="store_true")
    p_s.add_argument("--debug-drop-single-sum", action="store_true")
    return parser


def cmd_eval(args):
    fn = args.function
    need_tau = fn in ("theta1", "theta1-logder", "lambdaN", "eisenstein")
    if need_tau and args.tau is None:
        raise WdvvDualError(f"{fn} needs --tau")
    m = ModularPoint(args.tau) if args.tau is not None else None
    if fn == "theta1":
        val = theta1(args.z if args.z is not None else 0.0, m, args.d)
    elif fn == "theta1-logder":
        val = theta1_log_derivative(args.z, m)
    elif fn == "polylog":
        if args.n is None or args.z is None:
            raise WdvvDualError("polylog needs --n and --z")
        val = polylog(args.n, args.z)
    elif fn == "lambdaN":
        if args.n is None or args.z is None:
            raise WdvvDualError("lambdaN needs --n, --z, --tau")
        val = lambdaN(args.n, args.z, m)
    elif fn == "epolylog3":
        if args.q is None or args.zeta is None:
            raise WdvvDualError("epolylog3 needs --q and --zeta")
        val = elliptic_polylog(3, args.q, args.zeta)
    elif fn == "eisenstein":
        if args.k is None:
            raise WdvvDualError("eisenstein needs --k 2|4 and --tau")
        val = eisenstein(int(args.k), m)
    else:  # prepotential
        if args.point is None:
            raise WdvvDualError("prepotential needs --case, --point")
        val = _eval_prepotential(args.case, args.point, args.tau, args.k)
    print(format_value(val))
    return 0


def _eval_prepotential(case, point_text, tau, k_text):
    pt = parse_point(point_text)
    ks = parse_multiplicities(k_text) if k_text else None
    if case == "elliptic":
        if tau is None:
            raise WdvvDualError("elliptic prepotential needs --tau")
        vector = pt + [tau]
        model = PrepotentialModel("elliptic", len(pt) - 1)
    else:
        vector = pt
        model = PrepotentialModel(case, len(pt), ks)
    return model.value(vector)


def cmd_eval_prepotential(args):
    val = _eval_prepotential(args.case, args.point, args.tau, args.k)
    print(format_value(val))
    return 0


def cmd_wdvv_check(args):
    ks = parse_multiplicities(args.k) if args.k else None
    tol = args.tol_residual
    if tol is None:
        tol = {"rational": 1e-8, "deformed": 1e-7,
               "elliptic": 1e-6}[args.case]
    spec = DiffSpec(samples=args.samples)
    result, reports = checks_mod.check_wdvv(
        args.case, args.rank, args.points, args.seed, tol,
        multiplicities=ks, flip_z_sign=args.debug_flip_z_sign,
        drop_single_sum=args.debug_drop_single_sum, spec=spec)
    notes = sorted({n for r in reports for n in r.notes})
    doc = {
        "case": args.case,
        "rank": args.rank,
        "seed": args.seed,
        "points": [r.point for r in reports],
        "per_point_relative_residual": [r.max_relative_residual
                                        for r in reports],
        "max_relative_residual": result.residual,
        "tolerance": tol,
        "pass": result.passed,
        "notes": notes,
    }
    if ks:
        doc["multiplicities"] = list(ks)
    emit(doc, args.out)
    return 0 if result.passed else 1


def cmd_oracle_compare(args):
    tol = args.tol_residual
    results = []
    if args.case == "rational":
        tol = tol or 1e-7
        pts = [parse_point(args.point)] if args.point else None
        results.extend(checks_mod.check_oracle_rational(
            points=pts, seed=args.seed))
    elif args.case == "elliptic":
        tol = tol or 1e-6
        pts = None
        if args.point:
            pt = parse_point(args.point)
            if args.tau is not None:
                pt = pt + [args.tau]
            pts = [pt]
        results.extend(checks_mod.check_oracle_elliptic(
            points=pts, seed=args.seed, rank=args.rank))
    else:
        tol = tol or 1e-7
        ks = parse_multiplicities(args.k) if args.k else (1, 1, 1, -1)
        result, _ = checks_mod.check_wdvv("deformed", args.rank, 2,
                                          args.seed, tol, multiplicities=ks)
        results.append(result)
    ok = all(r.passed for r in results)
    doc = {
        "case": args.case,
        "rank": args.rank,
        "checks": [{"name": r.name, "max_deviation": r.residual,
                    "tolerance": r.tolerance, "pass": r.passed}
                   for r in results],
        "pass": ok,
    }
    emit(doc, args.out)
    return 0 if ok else 1


def cmd_suite(args):
    policy = SeriesPolicy(max_terms=args.max_terms,
                          tail_tolerance=args.tail_tol)
    results = checks_mod.run_suite(
        seed=args.seed, policy=policy, wdvv_points=args.points,
        flip_z_sign=args.debug_flip_z_sign,
        drop_single_sum=args.debug_drop_single_sum)
    ok = all(r.passed for r in results)
    doc = {
        "seed": args.seed,
        "checks": [{"name": r.name, "residual": r.residual,
                    "tolerance": r.tolerance, "pass": r.passed}
                   for r in results],
        "failures": [r.name for r in results if not r.passed],
        "pass": ok,
    }
    emit(doc, args.out)
    return 0 if ok else 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args = apply_config(args, parser) if hasattr(args, "config") else args
    handlers = {
        "eval": cmd_eval,
        "eval-prepotential": cmd_eval_prepotential,
        "wdvv-check": cmd_wdvv_check,
        "oracle-compare": cmd_oracle_compare,
        "suite": cmd_suite,
    }
    try:
        return handlers[args.command](args)
    except WdvvDualError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
