"""Command line entry point.

Exit codes: 0 success, 1 condition failure, 2 input error, 3 search exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .errors import ParameterError, ToolkitError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_EXHAUSTED = 0, 1, 2, 3


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, ensure_ascii=False, default=str) + "\n")


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot read {path}: {exc}") from None


def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"not a rational number: {s!r}") from None


# ------------------------------------------------------------- commands

def cmd_search(args) -> int:
    from .pipeline import SearchConfig, search, statistics

    obj = _load_json(args.config) if args.config else {}
    for key, val in (("primes", args.p), ("N", args.N), ("max_candidates", args.max),
                     ("seed", args.seed), ("output", args.output),
                     ("stop_after", args.stop_after)):
        if val is not None:
            obj[key] = val
    config = SearchConfig.from_json(obj)
    lines = []
    for line in search(config):
        lines.append(line)
        if line["status"] == "accepted":
            _emit(line["report"])
    stats = statistics(lines)
    stats["config_hash"] = config.hash()
    sys.stderr.write(json.dumps(stats, sort_keys=True) + "\n")
    return EXIT_OK if stats["accepted"] else EXIT_EXHAUSTED


def _sigma_from(path: str):
    from .family import FamilyParams

    obj = _load_json(path)
    if isinstance(obj, dict) and "sigma" in obj:
        obj = obj["sigma"]
    return FamilyParams.from_json(obj)


def cmd_verify(args) -> int:
    from .pipeline import evaluate

    params = _sigma_from(args.sigma)
    report = evaluate(params, args.p, args.precision)
    _emit(report)
    return EXIT_OK if report["status"] == "accepted" else EXIT_FAIL


def cmd_igusa(args) -> int:
    from .igusa import QuinticModel, igusa_invariants

    v = [_fraction(x) for x in args.v]
    if len(v) != 6:
        raise ParameterError("igusa needs six coefficients v_0 .. v_5")
    J = igusa_invariants(QuinticModel(tuple(v)))
    _emit({k: str(x) for k, x in zip(("J2", "J4", "J6", "J8", "J10"), J.as_tuple())})
    return EXIT_OK


def cmd_exactness(args) -> int:
    from .family import FamilyParams, specialize_family
    from .jacring import JacobianRing, verify_condition_A

    rng = random.Random(args.seed)
    params = FamilyParams.random(rng, args.prime)
    R = JacobianRing(specialize_family(params, args.prime), args.prime)
    report = verify_condition_A(R)
    report["seed"] = args.seed
    _emit(report)
    ok = all(v["pass"] for v in report.values() if isinstance(v, dict) and "pass" in v)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_intersect(args) -> int:
    from .family import plane_intersection_matrix

    M, det = plane_intersection_matrix(args.degrees)
    _emit({"matrix": M, "det": det})
    return EXIT_OK


def _point(s: str):
    parts = s.split(",")
    if len(parts) != 2:
        raise ParameterError(f"points are given as x,y: {s!r}")
    return tuple(int(x) for x in parts)


def cmd_log(args) -> int:
    if args.sigma:
        from .jacobian.toric import section_logs
        params = _sigma_from(args.sigma)
        logs, eps, _ = section_logs(params, args.p, args.precision, args.index)
        _emit({"indices": args.index, "eps": [list(e) for e in eps],
               "logs": [lam.to_json() for lam in logs]})
        return EXIT_OK
    from .jacobian.curve import HyperCurve
    from .jacobian.logs import aj_log
    if not (args.curve and args.P and args.Q):
        raise ParameterError("log needs --sigma, or --curve with --P and --Q")
    work = args.precision + 12
    curve = HyperCurve.over_padics([int(c) for c in args.curve], args.p, work)
    lam = aj_log(curve, _point(args.P), _point(args.Q), args.precision)
    _emit(lam.to_json())
    return EXIT_OK


def cmd_relation(args) -> int:
    from .jacobian.logs import LogVector, find_relation, relation_residual
    from .kernels.padic import PadicNum

    try:
        raw = json.loads(args.logs)
        logs = [LogVector(PadicNum(args.p, args.n, int(a)), PadicNum(args.p, args.n, int(b)))
                for a, b in raw]
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise ParameterError(f"logs must be a JSON list of three integer pairs: {exc}") from None
    if len(logs) != 3:
        raise ParameterError("relation needs exactly three log vectors")
    rel = find_relation(*logs, args.n)
    _emit(dict(rel.to_json(), residual=relation_residual(rel.r, logs, args.n)))
    return EXIT_OK


# ------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nodalquintic")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="randomized search for accepted specializations")
    s.add_argument("--config")
    s.add_argument("--p", type=int, nargs="+")
    s.add_argument("--N", type=int)
    s.add_argument("--max", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--output")
    s.add_argument("--stop-after", type=int)
    s.set_defaults(func=cmd_search)

    v = sub.add_parser("verify", help="check conditions (ii)-(vi) for one specialization")
    v.add_argument("--sigma", required=True)
    v.add_argument("--p", type=int, required=True)
    v.add_argument("--precision", type=int, default=6)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("igusa", help="Igusa invariants of v_0 x^5 - v_1 x^4 + ... - v_5")
    g.add_argument("v", nargs=6)
    g.set_defaults(func=cmd_igusa)

    e = sub.add_parser("exactness", help="Jacobian-ring exactness checks")
    e.add_argument("--seed", type=int, default=42)
    e.add_argument("--prime", type=int, default=31991)
    e.set_defaults(func=cmd_exactness)

    i = sub.add_parser("intersect", help="intersection matrix of a blown-up plane")
    i.add_argument("degrees", type=int, nargs="+")
    i.set_defaults(func=cmd_intersect)

    lg = sub.add_parser("log", help="p-adic logarithms of point differences")
    lg.add_argument("--sigma")
    lg.add_argument("--index", type=int, nargs="+", default=[1, 2, 3])
    lg.add_argument("--curve", nargs="+", help="integer coefficients f_0 .. f_d")
    lg.add_argument("--P")
    lg.add_argument("--Q")
    lg.add_argument("--p", type=int, required=True)
    lg.add_argument("--precision", type=int, default=6)
    lg.set_defaults(func=cmd_log)

    r = sub.add_parser("relation", help="relation among three log vectors mod p^n")
    r.add_argument("--logs", required=True, help="JSON list of three [l1, l2] integer pairs")
    r.add_argument("--p", type=int, required=True)
    r.add_argument("--n", type=int, required=True)
    r.set_defaults(func=cmd_relation)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ParameterError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except ToolkitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
