"""Command-line front end.

Exit codes: 0 success/pass, 1 invalid fan or failed condition, 2 malformed
input, 3 internal error. Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import builtin
from .category import check_all, hom_dim, relations
from .fan import FanFormatError, ValidationError, fan_from_json, fan_info, fan_problems
from .linalg import MatQ
from .quiver import build_quiver, export_dot, export_json
from .serialize import RepresentationFormatError, morphism_to_json, rep_from_json

OK, FAILED, MALFORMED, INTERNAL = 0, 1, 2, 3


class Malformed(Exception):
    pass


def _read_json(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise Malformed(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise Malformed(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _emit_error(args, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    else:
        print(f"error: {payload.get('message', payload)}", file=sys.stderr)


def _load_fan(args, path: str):
    data = _read_json(path)
    try:
        return fan_from_json(data, trust_fan=args.trust_fan)
    except FanFormatError as exc:
        raise Malformed(str(exc)) from None


def cmd_fan_check(args) -> int:
    data = _read_json(args.path)
    if not isinstance(data, dict) or not {"dim", "rays", "max_cones"} <= data.keys():
        raise Malformed("fan must be an object with dim, rays and max_cones")
    rays, cones = data["rays"], data["max_cones"]
    if not isinstance(rays, list) or not isinstance(cones, list) or not all(isinstance(c, list) for c in cones):
        raise Malformed("rays and max_cones must be arrays")
    try:
        fan_from_json(data, trust_fan=args.trust_fan)
        problems = []
    except FanFormatError as exc:
        raise Malformed(str(exc)) from None
    except ValidationError:
        problems = fan_problems(
            data["dim"], rays, [[i + 1 for i in c] for c in cones], trust_fan=args.trust_fan
        )
    if not problems:
        print("valid")
        return OK
    print("invalid")
    if args.json:
        print(json.dumps({"failures": [p.to_json() for p in problems]}, sort_keys=True), file=sys.stderr)
    else:
        for p in problems:
            print(f"{p.kind}: {p}", file=sys.stderr)
    return FAILED


def cmd_fan_info(args) -> int:
    fan = _load_fan(args, args.path)
    print(json.dumps(fan_info(fan), indent=2))
    return OK


def cmd_quiver(args) -> int:
    fan = _load_fan(args, args.path)
    q = build_quiver(fan)
    sys.stdout.write(export_dot(q) if args.format == "dot" else export_json(q))
    return OK


def cmd_relations(args) -> int:
    fan = _load_fan(args, args.path)
    for word in relations(fan):
        print(word)
    return OK


def _load_rep(fan, path):
    try:
        return rep_from_json(fan, _read_json(path))
    except RepresentationFormatError as exc:
        raise Malformed(str(exc)) from None


def _witness_json(w):
    return {k: v.to_json() if isinstance(v, MatQ) else v for k, v in w.items()}


def cmd_rep_check(args) -> int:
    fan = _load_fan(args, args.fan)
    rep = _load_rep(fan, args.rep)
    report = check_all(rep, fan)
    if report.passed:
        print("pass")
        return OK
    if report.conditions() == {"shape"}:
        raise Malformed("; ".join(f.message for f in report.failures))
    print("fail")
    for f in report.failures:
        if args.json:
            print(json.dumps({"condition": f.condition, "message": f.message, "witness": _witness_json(f.witness)},
                             sort_keys=True), file=sys.stderr)
        else:
            extra = "".join(f"\n  {k} = {v.to_json() if isinstance(v, MatQ) else v}" for k, v in f.witness.items())
            print(f.message + extra, file=sys.stderr)
    return FAILED


def cmd_rep_hom(args) -> int:
    fan = _load_fan(args, args.fan)
    a, b = _load_rep(fan, args.source), _load_rep(fan, args.target)
    dim, basis = hom_dim(a, b)
    print(dim)
    if args.basis:
        print(json.dumps([morphism_to_json(m) for m in basis], indent=2))
    return OK


def cmd_example(args) -> int:
    try:
        data = builtin.example_json(args.name)
    except KeyError:
        raise Malformed(f"unknown example {args.name!r}; choose from {', '.join(builtin.NAMES)}") from None
    print(json.dumps(data, indent=2))
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="structured diagnostics on stderr")
    common.add_argument("--trust-fan", action="store_true", default=argparse.SUPPRESS,
                        help="skip the Fourier-Motzkin stage of the fan axiom check")

    parser = argparse.ArgumentParser(prog="toricquiver", parents=[common],
                                     description="Quivers and perverse-sheaf categories of smooth toric varieties.")
    sub = parser.add_subparsers(dest="command", required=True)

    fan = sub.add_parser("fan", help="validate or describe a fan").add_subparsers(dest="action", required=True)
    p = fan.add_parser("check", parents=[common], help="validate a fan file")
    p.add_argument("path")
    p.set_defaults(func=cmd_fan_check)
    p = fan.add_parser("info", parents=[common], help="print cones, maximal cones and chart bases")
    p.add_argument("path")
    p.set_defaults(func=cmd_fan_info)

    p = sub.add_parser("quiver", parents=[common], help="export the quiver of a fan")
    p.add_argument("path")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.set_defaults(func=cmd_quiver)

    p = sub.add_parser("relations", parents=[common], help="list the monodromy relations")
    p.add_argument("path")
    p.set_defaults(func=cmd_relations)

    rep = sub.add_parser("rep", help="check representations").add_subparsers(dest="action", required=True)
    p = rep.add_parser("check", parents=[common], help="decide membership of a representation")
    p.add_argument("fan")
    p.add_argument("rep")
    p.set_defaults(func=cmd_rep_check)
    p = rep.add_parser("hom", parents=[common], help="dimension of the Hom space")
    p.add_argument("fan")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--basis", action="store_true", help="also print a basis of morphisms as JSON")
    p.set_defaults(func=cmd_rep_hom)

    p = sub.add_parser("example", parents=[common], help="print a built-in fan")
    p.add_argument("name", help=", ".join(builtin.NAMES))
    p.set_defaults(func=cmd_example)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else MALFORMED
    args.json = getattr(args, "json", False)
    args.trust_fan = getattr(args, "trust_fan", False)
    try:
        return args.func(args)
    except Malformed as exc:
        _emit_error(args, {"error": "MalformedInput", "message": str(exc)})
        return MALFORMED
    except ValidationError as exc:
        _emit_error(args, exc.to_json())
        return FAILED
    except Exception as exc:  # noqa: BLE001
        _emit_error(args, {"error": "InternalError", "message": f"{type(exc).__name__}: {exc}"})
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
