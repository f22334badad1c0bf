"""Building and re-checking certificate documents.

Every check here is plain exact arithmetic against the input document: cone
membership by facet inequalities, Farkas combinations, support-family
conditions.  The LP solver is never called.
"""

from __future__ import annotations

from .colored import ColoredCone, ColoredFan, is_stable_colored
from .cone import cone_from_generators
from .document import (
    DocumentError,
    _int_vector,
    _rat_vector,
    _read_colored_cones,
    _vec,
    certificate_document,
    decode_int,
    family_entry,
    farkas_body,
    load_colored,
    load_fan,
)
from .fan import Fan, is_stable, orbit
from .lp import FarkasCertificate, verify_farkas
from .support_lp import (
    CyclicDifferenceCertificate,
    SupportFamily,
    encode_colored_qp,
    encode_fan_qp,
    verify_colored_support_family,
    verify_cyclic_certificate,
    verify_support_family,
)


class CertificateKindError(ValueError):
    pass


# -- emitting ------------------------------------------------------------------


def qp_certificate(rank: int, subject: str, cones, result) -> dict:
    if result.holds:
        body = {"type": "support_family", "subject": subject, "claim": "quasi_projective"}
        body.update(family_entry(cones, result.family))
    else:
        body = farkas_body(subject, "not_quasi_projective", cones, result.certificate)
    return certificate_document(rank, body)


def descent_certificate(rank: int, subject: str, verdict) -> dict:
    if not verdict.stable:
        m, c = verdict.stability_witness
        cone = c.cone if isinstance(c, ColoredCone) else c
        body = {"type": "unstable", "subject": subject, "claim": "no_form",
                "matrix": [_vec(row) for row in m], "cone": {"rays": [_vec(r) for r in cone.rays]}}
        if isinstance(c, ColoredCone):
            body["cone"]["colors"] = sorted(c.colors)
        return certificate_document(rank, body)
    if verdict.failing_orbit is not None:
        fo = verdict.failing_orbit
        return certificate_document(rank, farkas_body(subject, "no_form", fo.orbit, fo.certificate))
    body = {"type": "descent_support", "subject": subject, "claim": "has_form",
            "orbits": [family_entry(orb, fam) for _, orb, fam in verdict.per_orbit_support]}
    return certificate_document(rank, body)


# -- reading -----------------------------------------------------------------------


def _plain_cones(entries, n: int, where: str) -> list:
    if not isinstance(entries, list):
        raise DocumentError(where, "expected a list")
    out = []
    for i, e in enumerate(entries):
        if not isinstance(e, dict) or not isinstance(e.get("rays"), list):
            raise DocumentError(f"{where}[{i}]", "expected an object with 'rays'")
        out.append(cone_from_generators(n, [_int_vector(r, f"{where}[{i}].rays[{j}]", n)
                                            for j, r in enumerate(e["rays"])]))
    return out


def _family(entry: dict, n: int, where: str) -> list:
    forms = entry.get("forms")
    if not isinstance(forms, list):
        raise DocumentError(f"{where}.forms", "expected a list")
    return [_rat_vector(l, f"{where}.forms[{i}]", n) for i, l in enumerate(forms)]


def _reordered(cones, forms, ordered) -> SupportFamily | None:
    if len(cones) != len(forms):
        return None
    by_cone = dict(zip(cones, forms))
    if len(by_cone) != len(cones):
        return None
    return SupportFamily(tuple(by_cone[c] for c in ordered))


def _farkas(body: dict) -> FarkasCertificate:
    ineq = body.get("inequality_multipliers")
    eq = body.get("equality_multipliers", [])
    if not isinstance(ineq, list) or not isinstance(eq, list):
        raise DocumentError("$.certificate", "multipliers must be lists")
    return FarkasCertificate(_rat_vector(ineq, "$.certificate.inequality_multipliers"),
                             _rat_vector(eq, "$.certificate.equality_multipliers"))


def _is_one_orbit(cones, orbit_of) -> bool:
    return bool(cones) and set(orbit_of(cones[0])) == set(cones)


# -- verification ------------------------------------------------------------------


def verify_certificate(doc: dict, cert_doc: dict) -> bool:
    """Re-check a certificate against the document it is about."""
    if cert_doc.get("kind") != "certificate":
        raise CertificateKindError("second document is not a certificate")
    body = cert_doc.get("certificate")
    if not isinstance(body, dict):
        raise DocumentError("$.certificate", "expected an object")
    subject = body.get("subject")
    if subject != doc.get("kind"):
        raise CertificateKindError(f"certificate is about a {subject!r}, document is a {doc.get('kind')!r}")
    if decode_int(cert_doc.get("lattice_rank"), "$.lattice_rank") != decode_int(doc.get("lattice_rank"),
                                                                                 "$.lattice_rank"):
        return False
    if subject == "fan":
        return _verify_fan(doc, body)
    if subject == "colored_fan":
        return _verify_colored(doc, body)
    raise CertificateKindError(f"unknown certificate subject {subject!r}")


def _verify_fan(doc: dict, body: dict) -> bool:
    f, g = load_fan(doc)
    n = f.ambient_rank
    present = set(f.maximal_cones)
    kind, claim = body.get("type"), body.get("claim")
    if kind == "farkas":
        cones = _plain_cones(body.get("cones"), n, "$.certificate.cones")
        if not cones or not set(cones) <= present:
            return False
        sub = Fan(n, cones)
        if not verify_farkas(encode_fan_qp(sub), _farkas(body)):
            return False
        if claim == "no_form":
            return _is_one_orbit(sub.maximal_cones, lambda c: orbit(c, g))
        return claim == "not_quasi_projective"
    if kind == "support_family" and claim == "quasi_projective":
        cones = _plain_cones(body.get("cones"), n, "$.certificate.cones")
        fam = _reordered(cones, _family(body, n, "$.certificate"), f.maximal_cones)
        return fam is not None and set(cones) == present and verify_support_family(f, fam)
    if kind == "descent_support" and claim == "has_form":
        if not f.is_valid or not is_stable(f, g)[0]:
            return False
        seen = []
        for i, entry in enumerate(body.get("orbits", [])):
            where = f"$.certificate.orbits[{i}]"
            cones = _plain_cones(entry.get("cones"), n, f"{where}.cones")
            sub = Fan(n, cones)
            fam = _reordered(cones, _family(entry, n, where), sub.maximal_cones)
            if fam is None or not _is_one_orbit(sub.maximal_cones, lambda c: orbit(c, g)):
                return False
            if not verify_support_family(sub, fam):
                return False
            seen += cones
        return len(seen) == len(set(seen)) and set(seen) == present
    if kind == "unstable" and claim == "no_form":
        m, cone = _unstable_parts(body, n)
        return m in g.elements and cone in present and cone.image(m) not in present
    if kind == "cyclic_difference" and claim == "not_quasi_projective":
        return verify_cyclic_certificate(f, _cyclic(body, n))
    raise CertificateKindError(f"unsupported certificate type {kind!r} with claim {claim!r}")


def _unstable_parts(body: dict, n: int):
    mat = body.get("matrix")
    if not isinstance(mat, list) or len(mat) != n:
        raise DocumentError("$.certificate.matrix", f"expected a {n}x{n} matrix")
    m = tuple(_int_vector(row, f"$.certificate.matrix[{i}]", n) for i, row in enumerate(mat))
    cone = _plain_cones([body.get("cone")], n, "$.certificate.cone")[0]
    return m, cone


def _cyclic(body: dict, n: int) -> CyclicDifferenceCertificate:
    cycle = body.get("cycle")
    if not isinstance(cycle, list):
        raise DocumentError("$.certificate.cycle", "expected a list")
    entries = []
    for i, e in enumerate(cycle):
        where = f"$.certificate.cycle[{i}]"
        if not isinstance(e, dict):
            raise DocumentError(where, "expected an object")
        entries.append((decode_int(e.get("cone"), f"{where}.cone"), _rat_vector(e.get("p"), f"{where}.p", n),
                        _rat_vector(e.get("q"), f"{where}.q", n)))
    return CyclicDifferenceCertificate(_rat_vector(body.get("v"), "$.certificate.v", n), entries)


def cyclic_certificate_document(rank: int, cert: CyclicDifferenceCertificate) -> dict:
    body = {"type": "cyclic_difference", "subject": "fan", "claim": "not_quasi_projective",
            "v": _vec(cert.v),
            "cycle": [{"cone": i, "p": _vec(p), "q": _vec(q)} for i, p, q in cert.cycle]}
    return certificate_document(rank, body)


def _verify_colored(doc: dict, body: dict) -> bool:
    cf = load_colored(doc)
    d = cf.datum
    n = d.rank
    present = set(cf.maximal_colored_cones)
    names = set(d.color_names)
    kind, claim = body.get("type"), body.get("claim")

    def colored_orbit_of(cc):
        return {cc.image(d, m) for m in d.group.elements}

    if kind == "farkas":
        cones = _read_colored_cones(body.get("cones"), n, names, "$.certificate.cones")
        if not cones or not set(cones) <= present:
            return False
        sub = ColoredFan(d, cones)
        if not verify_farkas(encode_colored_qp(sub), _farkas(body)):
            return False
        if claim == "no_form":
            return _is_one_orbit(sub.maximal_colored_cones, colored_orbit_of)
        return claim == "not_quasi_projective"
    if kind == "support_family" and claim == "quasi_projective":
        cones = _read_colored_cones(body.get("cones"), n, names, "$.certificate.cones")
        fam = _reordered(cones, _family(body, n, "$.certificate"), cf.maximal_colored_cones)
        return fam is not None and set(cones) == present and verify_colored_support_family(cf, fam)
    if kind == "descent_support" and claim == "has_form":
        if not cf.is_valid or not is_stable_colored(cf)[0]:
            return False
        seen = []
        for i, entry in enumerate(body.get("orbits", [])):
            where = f"$.certificate.orbits[{i}]"
            cones = _read_colored_cones(entry.get("cones"), n, names, f"{where}.cones")
            sub = ColoredFan(d, cones)
            fam = _reordered(cones, _family(entry, n, where), sub.maximal_colored_cones)
            if fam is None or not _is_one_orbit(sub.maximal_colored_cones, colored_orbit_of):
                return False
            if not verify_colored_support_family(sub, fam):
                return False
            seen += cones
        return len(seen) == len(set(seen)) and set(seen) == present
    if kind == "unstable" and claim == "no_form":
        m, _ = _unstable_parts(body, n)
        cc = _read_colored_cones([body.get("cone")], n, names, "$.certificate.cone")[0]
        return m in d.group.elements and cc in present and cc.image(d, m) not in present
    raise CertificateKindError(f"unsupported certificate type {kind!r} with claim {claim!r}")
