import json

import pytest

from fandescent.certificates import cyclic_certificate_document, verify_certificate
from fandescent.cli import main
from fandescent.document import dumps, loads, read
from fandescent.examples import NAMES, f4, load_example
from fandescent.support_lp import CyclicDifferenceCertificate
from test_support_lp import _hand_cycle


@pytest.fixture
def fixtures(tmp_path):
    for name in NAMES:
        (tmp_path / f"{name}.json").write_text(load_example(name).text(), encoding="utf-8")
    return tmp_path


def test_check_smooth_f3(fixtures, capsys):
    assert main(["check-smooth", "--input", str(fixtures / "F3.json")]) == 0
    assert "holds" in capsys.readouterr().out


def test_check_descent_f3_writes_certificate(fixtures, capsys):
    cert = fixtures / "cert.json"
    assert main(["check-descent", "--input", str(fixtures / "F3.json"), "--certificate", str(cert)]) == 1
    doc = read(str(cert))
    assert doc["certificate"]["type"] == "farkas"
    assert verify_certificate(read(str(fixtures / "F3.json")), doc)
    assert main(["verify-certificate", "--input", str(fixtures / "F3.json"), "--certificate", str(cert)]) == 0


def test_check_qp_f3_json(fixtures, capsys):
    assert main(["check-qp", "--format", "json", "--input", str(fixtures / "F3.json")]) == 1
    doc = loads(capsys.readouterr().out)
    assert doc["kind"] == "verdict"


def test_yes_verdict_ships_family(fixtures):
    cert = fixtures / "family.json"
    assert main(["check-qp", "--input", str(fixtures / "F2.json"), "--certificate", str(cert)]) == 0
    doc = read(str(cert))
    assert doc["certificate"]["type"] == "support_family"
    assert verify_certificate(read(str(fixtures / "F2.json")), doc)


def test_colored_commands(fixtures):
    f6 = str(fixtures / "F6.json")
    cert = fixtures / "colored.json"
    assert main(["validate-colored", "--input", f6]) == 0
    assert main(["check-qp-colored", "--input", f6]) == 1
    assert main(["check-descent-colored", "--input", f6, "--certificate", str(cert)]) == 1
    assert verify_certificate(read(f6), read(str(cert)))
    assert main(["validate-colored", "--input", str(fixtures / "F6-printed.json")]) == 1


def test_other_fan_commands(fixtures):
    f4_path = str(fixtures / "F4.json")
    assert main(["validate-fan", "--input", f4_path]) == 0
    assert main(["check-complete", "--input", f4_path]) == 0
    assert main(["check-complete", "--input", str(fixtures / "F3.json")]) == 1
    assert main(["check-stable", "--input", f4_path]) == 0
    assert main(["check-smooth", "--input", f4_path]) == 1


def test_round_trip_byte_identical(fixtures):
    for name in NAMES:
        text = (fixtures / f"{name}.json").read_text(encoding="utf-8")
        assert dumps(loads(text)) == text


def test_tampered_fan_rejects_certificate(fixtures):
    cert = fixtures / "cert.json"
    main(["check-qp", "--input", str(fixtures / "F3.json"), "--certificate", str(cert)])
    doc = read(str(fixtures / "F3.json"))
    assert verify_certificate(doc, read(str(cert)))
    doc["fan"]["rays"][7] = [5, 1, 14]
    assert not verify_certificate(doc, read(str(cert)))


def test_kind_mismatch_exit_two(fixtures, capsys):
    cert = fixtures / "cert.json"
    main(["check-descent", "--input", str(fixtures / "F3.json"), "--certificate", str(cert)])
    assert main(["verify-certificate", "--input", str(fixtures / "F6.json"), "--certificate", str(cert)]) == 2
    assert main(["check-qp-colored", "--input", str(fixtures / "F3.json")]) == 2


def test_parse_error_has_position(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "kind": "fan",,\n}\n', encoding="utf-8")
    assert main(["check-qp", "--input", str(bad)]) == 2
    assert "line 2 column" in capsys.readouterr().err


def test_cyclic_certificate_document(fixtures):
    f, cycle = _hand_cycle()
    doc = cyclic_certificate_document(3, CyclicDifferenceCertificate((0, 0, -151), cycle))
    path = fixtures / "cyclic.json"
    path.write_text(dumps(doc), encoding="utf-8")
    assert main(["verify-certificate", "--input", str(fixtures / "F3.json"), "--certificate", str(path)]) == 0


def test_example_command(capsys):
    assert main(["example", "F4"]) == 0
    assert capsys.readouterr().out == load_example("F4").text()
    assert main(["example", "F9"]) == 2


def test_subdivide_commands(fixtures, capsys):
    f4_path = str(fixtures / "F4.json")
    out = fixtures / "sub.json"
    assert main(["subdivide", "--input", f4_path, "--at", "0,0,1", "--output", str(out)]) == 0
    assert len(json.loads(out.read_text())["fan"]["maximal_cones"]) == len(f4()) + 2
    assert main(["subdivide", "--input", f4_path, "--at", "0,-5,28", "--equivariant"]) == 2
    assert main(["subdivide", "--input", f4_path, "--at", "0,0"]) == 2


def test_reports_are_deterministic(fixtures, capsys):
    args = ["check-descent", "--format", "json", "--input", str(fixtures / "F3.json")]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first
