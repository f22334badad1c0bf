"""JSON documents for fans, colored fans, certificates and verdicts.

Integers of absolute value at least 2**53 are written as decimal strings and
non-integral rationals as ``"p/q"``.  Output is canonical: keys sorted, rays
sorted, cones sorted by their index lists, so parsing and re-serialising a
canonical document reproduces it byte for byte.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Sequence

from .colored import ColoredCone, ColoredFan, SphericalDatum
from .cone import Cone, cone_from_generators, cone_from_inequalities
from .fan import Fan
from .lattice import FiniteMatrixGroup, LatticeError, group_closure, trivial_group

SCHEMA_VERSION = 1
KINDS = ("fan", "colored_fan", "certificate", "verdict")
_BIG = 2 ** 53
_RAT = re.compile(r"^-?\d+(/\d+)?$")


class DocumentError(ValueError):
    """Malformed input; ``where`` is a JSON path or a line:column position."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where
        self.message = message


# -- numbers -----------------------------------------------------------------


def encode_number(x) -> Any:
    x = Fraction(x)
    if x.denominator != 1:
        return f"{x.numerator}/{x.denominator}"
    v = x.numerator
    return str(v) if abs(v) >= _BIG else v


def decode_rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise DocumentError(where, "expected a number, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RAT.match(value):
        num, _, den = value.partition("/")
        if den and int(den) == 0:
            raise DocumentError(where, "zero denominator")
        return Fraction(int(num), int(den or 1))
    raise DocumentError(where, f"expected an integer or a 'p/q' string, got {value!r}")


def decode_int(value, where: str) -> int:
    x = decode_rational(value, where)
    if x.denominator != 1:
        raise DocumentError(where, f"expected an integer, got {value!r}")
    return x.numerator


def _int_vector(value, where: str, length: int | None = None) -> tuple:
    if not isinstance(value, list):
        raise DocumentError(where, "expected a list")
    if length is not None and len(value) != length:
        raise DocumentError(where, f"expected length {length}, got {len(value)}")
    return tuple(decode_int(x, f"{where}[{i}]") for i, x in enumerate(value))


def _rat_vector(value, where: str, length: int | None = None) -> tuple:
    if not isinstance(value, list):
        raise DocumentError(where, "expected a list")
    if length is not None and len(value) != length:
        raise DocumentError(where, f"expected length {length}, got {len(value)}")
    return tuple(decode_rational(x, f"{where}[{i}]") for i, x in enumerate(value))


def _vec(v: Sequence) -> list:
    return [encode_number(x) for x in v]


# -- text --------------------------------------------------------------------


def _flat(value) -> bool:
    return not isinstance(value, (dict, list)) or (
        isinstance(value, list) and all(not isinstance(x, (dict, list)) for x in value))


def _dump(value, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(value[k], indent + 1)}" for k in sorted(value)]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(value, list):
        if all(_flat(x) for x in value) and all(not isinstance(x, list) for x in value):
            return json.dumps(value, separators=(", ", ": "))
        if all(_flat(x) for x in value) and len(value) and all(isinstance(x, list) for x in value):
            # list of scalar lists: one per line
            inner = [pad + json.dumps(x, separators=(", ", ": ")) for x in value]
            return "[\n" + ",\n".join(inner) + "\n" + "  " * indent + "]"
        if not value:
            return "[]"
        return "[\n" + ",\n".join(pad + _dump(x, indent + 1) for x in value) + "\n" + "  " * indent + "]"
    return json.dumps(value)


def dumps(doc: dict) -> str:
    """Canonical text of a document."""
    return _dump(doc, 0) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    if not isinstance(doc, dict):
        raise DocumentError("$", "top level must be an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError("$.schema_version", f"unsupported schema version {version!r}")
    if doc.get("kind") not in KINDS:
        raise DocumentError("$.kind", f"unknown kind {doc.get('kind')!r}")
    return doc


def read(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(path, exc.strerror or str(exc)) from None
    return loads(text)


# -- fans --------------------------------------------------------------------


def _rank(doc: dict) -> int:
    n = decode_int(doc.get("lattice_rank"), "$.lattice_rank")
    if n < 1:
        raise DocumentError("$.lattice_rank", "rank must be positive")
    return n


def _group_section(g: FiniteMatrixGroup, action=None) -> dict:
    out = {"generators": [[_vec(row) for row in m] for m in g.generators]}
    if action is not None:
        out["color_action"] = [dict(sorted(action[m].items())) for m in g.generators]
    return out


def _read_generators(doc: dict, n: int) -> list:
    sec = doc.get("group", {})
    if not isinstance(sec, dict):
        raise DocumentError("$.group", "expected an object")
    gens = sec.get("generators", [])
    if not isinstance(gens, list):
        raise DocumentError("$.group.generators", "expected a list")
    out = []
    for i, m in enumerate(gens):
        where = f"$.group.generators[{i}]"
        if not isinstance(m, list) or len(m) != n:
            raise DocumentError(where, f"expected a {n}x{n} matrix")
        out.append(tuple(_int_vector(row, f"{where}[{j}]", n) for j, row in enumerate(m)))
    return out


def _read_group(doc: dict, n: int) -> FiniteMatrixGroup:
    gens = _read_generators(doc, n)
    try:
        return group_closure(n, gens)
    except LatticeError as exc:
        raise DocumentError("$.group.generators", str(exc)) from None


def _meta(doc: dict) -> dict:
    meta = doc.get("meta")
    return {"meta": meta} if meta is not None else {}


def fan_section(f: Fan) -> dict:
    return {"rays": [_vec(r) for r in f.ray_index], "maximal_cones": [list(c) for c in f.index_form()]}


def fan_document(f: Fan, g: FiniteMatrixGroup | None = None, meta: dict | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "fan",
        "lattice_rank": f.ambient_rank,
        "group": _group_section(g or trivial_group(f.ambient_rank)),
        "fan": fan_section(f),
    }
    if meta:
        doc["meta"] = meta
    return doc


def _read_fan_section(sec, n: int, where: str) -> Fan:
    if not isinstance(sec, dict):
        raise DocumentError(where, "expected an object")
    rays = sec.get("rays")
    if not isinstance(rays, list):
        raise DocumentError(f"{where}.rays", "expected a list")
    rays = [_int_vector(r, f"{where}.rays[{i}]", n) for i, r in enumerate(rays)]
    cones = sec.get("maximal_cones")
    if not isinstance(cones, list):
        raise DocumentError(f"{where}.maximal_cones", "expected a list")
    out = []
    for i, idx in enumerate(cones):
        w = f"{where}.maximal_cones[{i}]"
        if not isinstance(idx, list):
            raise DocumentError(w, "expected a list of ray indices")
        gens = []
        for j, k in enumerate(idx):
            k = decode_int(k, f"{w}[{j}]")
            if not 0 <= k < len(rays):
                raise DocumentError(f"{w}[{j}]", f"ray index {k} out of range")
            gens.append(rays[k])
        out.append(cone_from_generators(n, gens))
    return Fan(n, out)


def load_fan(doc: dict) -> tuple[Fan, FiniteMatrixGroup]:
    if doc.get("kind") != "fan":
        raise DocumentError("$.kind", f"expected a fan document, got {doc.get('kind')!r}")
    n = _rank(doc)
    return _read_fan_section(doc.get("fan"), n, "$.fan"), _read_group(doc, n)


# -- colored fans ------------------------------------------------------------------


def _colored_cone_entry(cc: ColoredCone) -> dict:
    return {"rays": [_vec(r) for r in cc.cone.rays], "colors": sorted(cc.colors)}


def colored_document(cf: ColoredFan, meta: dict | None = None) -> dict:
    d = cf.datum
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "colored_fan",
        "lattice_rank": d.rank,
        "group": _group_section(d.group, d.color_action),
        "colored": {
            "valuation_cone": {"inequalities": [_vec(h) for h in d.valuation_cone.inequalities]},
            "colors": [{"name": name, "rho": _vec(rho)} for name, rho in sorted(d.colors)],
            "maximal_cones": [_colored_cone_entry(cc) for cc in cf.maximal_colored_cones],
        },
    }
    if meta:
        doc["meta"] = meta
    return doc


def _read_valuation_cone(sec, n: int) -> Cone:
    where = "$.colored.valuation_cone"
    if not isinstance(sec, dict) or len(set(sec) & {"generators", "inequalities"}) != 1:
        raise DocumentError(where, "expected exactly one of 'generators' or 'inequalities'")
    if "generators" in sec:
        gens = sec["generators"]
        if not isinstance(gens, list):
            raise DocumentError(f"{where}.generators", "expected a list")
        return cone_from_generators(n, [_int_vector(v, f"{where}.generators[{i}]", n) for i, v in enumerate(gens)])
    ineqs = sec["inequalities"]
    if not isinstance(ineqs, list):
        raise DocumentError(f"{where}.inequalities", "expected a list")
    return cone_from_inequalities(n, [_rat_vector(v, f"{where}.inequalities[{i}]", n) for i, v in enumerate(ineqs)])


def _read_colored_cones(entries, n: int, names, where: str) -> list[ColoredCone]:
    if not isinstance(entries, list):
        raise DocumentError(where, "expected a list")
    out = []
    for i, e in enumerate(entries):
        w = f"{where}[{i}]"
        if not isinstance(e, dict) or not isinstance(e.get("rays"), list):
            raise DocumentError(w, "expected an object with 'rays'")
        cols = e.get("colors", [])
        if not isinstance(cols, list) or not all(isinstance(x, str) for x in cols):
            raise DocumentError(f"{w}.colors", "expected a list of color names")
        for x in cols:
            if x not in names:
                raise DocumentError(f"{w}.colors", f"unknown color {x!r}")
        rays = [_int_vector(r, f"{w}.rays[{j}]", n) for j, r in enumerate(e["rays"])]
        out.append(ColoredCone(cone_from_generators(n, rays), frozenset(cols)))
    return out


def load_colored(doc: dict, check: bool = True) -> ColoredFan:
    if doc.get("kind") != "colored_fan":
        raise DocumentError("$.kind", f"expected a colored_fan document, got {doc.get('kind')!r}")
    n = _rank(doc)
    sec = doc.get("colored")
    if not isinstance(sec, dict):
        raise DocumentError("$.colored", "expected an object")
    vc = _read_valuation_cone(sec.get("valuation_cone"), n)
    colors = sec.get("colors", [])
    if not isinstance(colors, list):
        raise DocumentError("$.colored.colors", "expected a list")
    cols = []
    for i, c in enumerate(colors):
        if not isinstance(c, dict) or not isinstance(c.get("name"), str):
            raise DocumentError(f"$.colored.colors[{i}]", "expected an object with a string 'name'")
        cols.append((c["name"], _int_vector(c.get("rho"), f"$.colored.colors[{i}].rho", n)))
    names = [c[0] for c in cols]
    gens = _read_generators(doc, n)
    action = doc.get("group", {}).get("color_action")
    if action is None:
        action = [{x: x for x in names} for _ in gens]
    if not isinstance(action, list) or len(action) != len(gens) or not all(isinstance(p, dict) for p in action):
        raise DocumentError("$.group.color_action", "expected one color permutation per generator")
    try:
        datum = SphericalDatum.build(n, vc, cols, gens, action, check=check)
    except (ValueError, LatticeError) as exc:
        raise DocumentError("$.group", str(exc)) from None
    cones = _read_colored_cones(sec.get("maximal_cones"), n, set(names), "$.colored.maximal_cones")
    return ColoredFan(datum, cones)


# -- certificates ------------------------------------------------------------------


def _cones_entry(cones) -> list:
    out = []
    for c in cones:
        if isinstance(c, ColoredCone):
            out.append(_colored_cone_entry(c))
        else:
            out.append({"rays": [_vec(r) for r in c.rays]})
    return out


def certificate_document(rank: int, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": "certificate", "lattice_rank": rank, "certificate": body}


def farkas_body(subject: str, claim: str, cones, cert) -> dict:
    return {
        "type": "farkas",
        "subject": subject,
        "claim": claim,
        "cones": _cones_entry(cones),
        "inequality_multipliers": _vec(cert.inequality_multipliers),
        "equality_multipliers": _vec(cert.equality_multipliers),
    }


def family_entry(cones, family) -> dict:
    return {"cones": _cones_entry(cones), "forms": [_vec(l) for l in family.forms]}


def verdict_document(command: str, holds: bool, report: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": "verdict", "command": command, "holds": holds,
            "report": report}
