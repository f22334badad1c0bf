"""Command line verifier.

Exit codes: 0 when the property holds (or the form exists), 1 when it fails,
2 for unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable

from . import certificates as certs
from .colored import ColoredFan, is_stable_colored, validate_colored_fan
from .descent import check_descent_colored, check_descent_toric
from .document import (
    dumps,
    fan_document,
    load_colored,
    load_fan,
    loads,
    read,
    verdict_document,
)
from .examples import NAMES, load_example
from .fan import Fan, is_complete, is_stable
from .subdivide import equivariant_stellar, smooth_equivariant, stellar_subdivide
from .support_lp import is_quasi_projective, is_quasi_projective_colored

HOLDS, FAILS, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _rays(cone) -> list:
    return [list(r) for r in cone.rays]


def _text(report: dict, indent: str = "") -> str:
    lines = []
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_text(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for item in value:
                lines.append(f"{indent}  - " + ", ".join(f"{k}={item[k]}" for k in sorted(item)))
        else:
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(lines)


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(args, command: str, holds: bool, report: dict) -> int:
    if args.format == "json":
        _emit(args, dumps(verdict_document(command, holds, report)))
    else:
        _emit(args, f"{command}: {'holds' if holds else 'fails'}\n" + _text(report) + "\n")
    return HOLDS if holds else FAILS


def _write_certificate(args, doc: dict) -> None:
    if args.certificate:
        with open(args.certificate, "w", encoding="utf-8") as fh:
            fh.write(dumps(doc))


def _input(args) -> dict:
    if not args.input:
        raise InputError("--input is required for this command")
    if args.input == "-":
        return loads(sys.stdin.read())
    return read(args.input)


def _valid_fan(args):
    f, g = load_fan(_input(args))
    if not f.is_valid:
        raise InputError("fan is not valid; run validate-fan for details")
    return f, g


def _valid_colored(args) -> ColoredFan:
    cf = load_colored(_input(args))
    if not cf.is_valid:
        raise InputError("colored fan is not valid; run validate-colored for details")
    return cf


# -- commands -------------------------------------------------------------------


def cmd_validate_fan(args) -> int:
    f, _ = load_fan(_input(args))
    rep = f.report
    return _report(args, "validate-fan", rep.valid, {
        "valid": rep.valid, "complete": rep.complete, "smooth": rep.smooth, "simplicial": rep.simplicial,
        "violations": [{"cones": list(ij), "reason": why} for ij, why in rep.violations],
    })


def cmd_check_smooth(args) -> int:
    f, _ = _valid_fan(args)
    singular = [{"cone": _rays(c), "multiplicity": c.multiplicity if c.is_simplicial else None}
                for c in f.maximal_cones if not c.is_smooth]
    return _report(args, "check-smooth", not singular, {"smooth": not singular, "singular_cones": singular})


def cmd_check_complete(args) -> int:
    f, _ = _valid_fan(args)
    ok = is_complete(f)
    return _report(args, "check-complete", ok, {"complete": ok})


def cmd_check_stable(args) -> int:
    f, g = _valid_fan(args)
    ok, witness = is_stable(f, g)
    report = {"stable": ok, "group_order": g.order}
    if witness:
        report["witness"] = {"matrix": [list(r) for r in witness[0]], "cone": _rays(witness[1])}
    return _report(args, "check-stable", ok, report)


def cmd_check_qp(args) -> int:
    f, _ = _valid_fan(args)
    res = is_quasi_projective(f)
    _write_certificate(args, certs.qp_certificate(f.ambient_rank, "fan", f.maximal_cones, res))
    return _report(args, "check-qp", res.holds, {"quasi_projective": res.holds, "maximal_cones": len(f)})


def _verdict_report(verdict, cone_repr: Callable) -> dict:
    report = {"stable": verdict.stable, "has_form": verdict.has_form, "note": verdict.note}
    if verdict.failing_orbit is not None:
        report["failing_orbit"] = [cone_repr(c) for c in verdict.failing_orbit.orbit]
    if verdict.stability_witness is not None:
        report["stability_witness"] = cone_repr(verdict.stability_witness[1])
    report["orbits_checked"] = len(verdict.per_orbit_support)
    return report


def cmd_check_descent(args) -> int:
    f, g = _valid_fan(args)
    verdict = check_descent_toric(f, g)
    _write_certificate(args, certs.descent_certificate(f.ambient_rank, "fan", verdict))
    return _report(args, "check-descent", verdict.has_form, _verdict_report(verdict, lambda c: str(c)))


def cmd_validate_colored(args) -> int:
    cf = load_colored(_input(args))
    rep = validate_colored_fan(cf)
    report = {"valid": rep.valid, "violations": list(rep.violations)}
    if rep.valid:
        report["stable"] = is_stable_colored(cf)[0]
    return _report(args, "validate-colored", rep.valid, report)


def cmd_check_qp_colored(args) -> int:
    cf = _valid_colored(args)
    res = is_quasi_projective_colored(cf)
    _write_certificate(args, certs.qp_certificate(cf.datum.rank, "colored_fan", cf.maximal_colored_cones, res))
    return _report(args, "check-qp-colored", res.holds, {"quasi_projective": res.holds})


def cmd_check_descent_colored(args) -> int:
    cf = _valid_colored(args)
    verdict = check_descent_colored(cf)
    _write_certificate(args, certs.descent_certificate(cf.datum.rank, "colored_fan", verdict))
    return _report(args, "check-descent-colored", verdict.has_form, _verdict_report(verdict, lambda c: repr(c)))


def _parse_vector(text: str, n: int) -> tuple:
    try:
        v = tuple(int(x) for x in text.replace("(", "").replace(")", "").split(","))
    except ValueError:
        raise InputError(f"--at expects comma-separated integers, got {text!r}") from None
    if len(v) != n:
        raise InputError(f"--at expects {n} coordinates, got {len(v)}")
    return v


def _fan_output(args, f: Fan, g, doc: dict) -> int:
    out = fan_document(f, g, doc.get("meta"))
    _emit(args, dumps(out))
    return HOLDS


def cmd_subdivide(args) -> int:
    doc = _input(args)
    f, g = load_fan(doc)
    if not f.is_valid:
        raise InputError("fan is not valid; run validate-fan for details")
    if not args.at:
        raise InputError("subdivide needs --at")
    v = _parse_vector(args.at, f.ambient_rank)
    out = equivariant_stellar(f, g, v) if args.equivariant else stellar_subdivide(f, v)
    return _fan_output(args, out, g, {})


def cmd_smooth_equivariant(args) -> int:
    doc = _input(args)
    f, g = load_fan(doc)
    if not f.is_valid:
        raise InputError("fan is not valid; run validate-fan for details")
    return _fan_output(args, smooth_equivariant(f, g), g, {})


def cmd_example(args) -> int:
    if args.name not in NAMES:
        raise InputError(f"unknown example {args.name!r}; choose from {', '.join(NAMES)}")
    _emit(args, load_example(args.name).text())
    return HOLDS


def cmd_verify_certificate(args) -> int:
    doc = _input(args)
    if not args.certificate:
        raise InputError("verify-certificate needs --certificate")
    cert = read(args.certificate)
    ok = certs.verify_certificate(doc, cert)
    return _report(args, "verify-certificate", ok, {"certificate_valid": ok,
                                                     "type": cert["certificate"].get("type"),
                                                     "claim": cert["certificate"].get("claim")})


COMMANDS = {
    "validate-fan": cmd_validate_fan,
    "check-smooth": cmd_check_smooth,
    "check-complete": cmd_check_complete,
    "check-stable": cmd_check_stable,
    "check-qp": cmd_check_qp,
    "check-descent": cmd_check_descent,
    "validate-colored": cmd_validate_colored,
    "check-qp-colored": cmd_check_qp_colored,
    "check-descent-colored": cmd_check_descent_colored,
    "subdivide": cmd_subdivide,
    "smooth-equivariant": cmd_smooth_equivariant,
    "example": cmd_example,
    "verify-certificate": cmd_verify_certificate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fandescent", description="Exact checks for fans and colored fans.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", help="input document (JSON), or - for stdin")
        p.add_argument("--output", help="write the report or document here instead of stdout")
        p.add_argument("--certificate", help="certificate file to write (checks) or read (verify-certificate)")
        p.add_argument("--format", choices=("json", "text"), default="text")
        if name == "subdivide":
            p.add_argument("--at", help="lattice vector, e.g. 0,-5,28")
            p.add_argument("--equivariant", action="store_true", help="subdivide along the whole group orbit")
        if name == "example":
            p.add_argument("name", help=", ".join(NAMES))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InputError, ValueError) as exc:
        # DocumentError, LatticeError, SubdivisionError and CertificateKindError are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
