import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from polya import cli, quadratic, serialize

SCHEMA = serialize.load_schema()


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv, expect=0):
    code, out, err = call(*argv)
    assert code == expect, err
    env = json.loads(out)
    jsonschema.validate(env, SCHEMA)
    assert env["schema_version"] == serialize.SCHEMA_VERSION
    return env


COMMANDS = [
    ("quad", "-5"),
    ("quad", "10"),
    ("classify", "quad", "-7"),
    ("classify", "quad", "34"),
    ("classify", "biquad", "--shape", "p_qr", "3", "7", "5"),
    ("classify", "biquad", "--shape", "pair", "--", "-2", "3"),
    ("classify", "cubic", "--minpoly-3x1"),
    ("classify", "cubic", "--u", "5", "--w", "1"),
    ("classify", "quartic", "1", "2", "1", "5", "--unit-norm", "trivial"),
    ("classify", "sextic", "2"),
    ("classify", "cyclic", "--ell", "5", "--r", "2"),
    ("lehmer", "0", "--to", "5"),
    ("construct", "consecutive", "--k", "1", "--M", "1"),
    ("construct", "multiplicative", "--k", "5", "--M", "1", "--polya"),
    ("construct", "iterate", "--k", "1", "--M", "1", "--count", "2"),
    ("scan", "class-gap", "--range", "2", "60"),
    ("scan", "polya-gap", "--range", "2", "60", "--convention", "squarefree_only"),
    ("scan", "odd-exp-pairs", "--limit", "40", "--k", "2"),
    ("scan", "fermat", "--range", "0", "5"),
    ("sweep", "--dmin", "-50", "--dmax", "50"),
]


@pytest.mark.parametrize("argv", COMMANDS, ids=[" ".join(a[:2]) for a in COMMANDS])
def test_every_command_validates(argv):
    env = call_json(*argv)
    assert env["command"] in SCHEMA["properties"]["command"]["enum"]
    assert json.loads(serialize.dumps(env)) == env
    assert "jobs" not in env["parameters"]


def test_quad_minus5():
    res = call_json("quad", "-5", "--format", "json")["result"]
    assert res["order_formula"] == 2 and res["order_direct"] == 2 and res["ramified_primes"] == [2, 5]


def test_classify_quad_minus7():
    res = call_json("classify", "quad", "-7")["result"]
    assert res == {"d": -7, "is_polya": True, "case": "5", "unit_norm": None}


def test_odd_exp_pairs_contains_21_22():
    assert [21, 22] in call_json("scan", "odd-exp-pairs", "--limit", "40", "--k", "2")["result"]["pairs"]


def test_biquad_provenance_maps_hypotheses_to_methods():
    env = call_json("classify", "biquad", "--shape", "p_qr", "3", "17", "41")
    assert env["provenance"]["(q/r) = -1"] == "legendre_symbol"
    ids = {c["theorem_id"]: c for c in env["result"]["claims"]}
    assert ids["AUTHORS_1"]["conclusion"] == "PO_IS_Z2"


def test_csv_for_scans():
    code, out, _ = call("scan", "odd-exp-pairs", "--limit", "40", "--k", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["m", "m_plus_1"] and ["21", "22"] in rows
    code, out, _ = call("scan", "class-gap", "--range", "2", "30", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows and all(r["gap"] == rows[0]["gap"] for r in rows)


def test_csv_rejected_for_non_scans():
    code, out, err = call("quad", "5", "--format", "csv")
    assert code == 1 and out == "" and "csv" in err


def test_text_format():
    code, out, _ = call("quad", "-5", "--format", "text")
    assert code == 0 and "command: quad" in out and "order_direct: 2" in out


@pytest.mark.parametrize("argv", [
    ("quad", "4"),
    ("quad", "0"),
    ("quad", "--bogus", "5"),
    ("nosuch",),
    ("classify", "biquad", "--shape", "p_qr", "3", "9", "5"),
    ("classify", "quartic", "2", "1", "1", "2"),
    ("classify", "cubic", "--u", "5"),
    ("classify", "sextic", "16"),
    ("lehmer", "5", "--to", "2"),
    ("construct", "consecutive", "--k", "0", "--M", "1"),
    ("scan", "fermat", "--range", "0", "9"),
    ("sweep", "--dmin", "1"),
    ("quad", "5", "--jobs", "0"),
    ("verify-cert", "/nonexistent/cert.json"),
])
def test_input_errors_exit_1(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == "" and err


def test_resource_limit_exit_2():
    code, out, err = call("construct", "consecutive", "--k", "200", "--M", "1000000")
    assert code == 2 and "bits" in err


def test_oracle_bound_env_override(monkeypatch):
    monkeypatch.setenv("POLYA_ORACLE_BOUND", "10")
    env = call_json("quad", "-5")
    assert env["parameters"]["oracle_bound"] == 10
    assert env["result"]["order_direct"] is None and env["result"]["order_formula"] == 2
    env = call_json("quad", "-5", "--oracle-bound", "1000")
    assert env["parameters"]["oracle_bound"] == 1000 and env["result"]["order_direct"] == 2


def test_scan_with_tiny_bound_records_skips():
    res = call_json("scan", "class-gap", "--range", "2", "40", "--oracle-bound", "20")["result"]
    assert res["skipped"]


def test_certificate_file_roundtrip(tmp_path):
    path = tmp_path / "cert.json"
    env = call_json("construct", "consecutive", "--k", "1", "--M", "1", "--out", str(path))
    assert env["result"]["certificate"]["d"] == 7454
    ok = call_json("verify-cert", str(path))
    assert ok["result"]["ok"] and ok["result"]["oracle_status"] == "passed"
    data = json.loads(path.read_text())
    data["d"] += 2
    path.write_text(json.dumps(data))
    bad = call_json("verify-cert", str(path), expect=3)
    assert not bad["result"]["ok"]


def test_verify_cert_not_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("not json")
    assert call("verify-cert", str(path))[0] == 1


def test_sweep_violation_exit_3(monkeypatch):
    real = quadratic.check_field

    def planted(d, bound=None):
        found, clamped = real(d, bound)
        if d == 7:
            found.append({"d": 7, "check": "planted"})
        return found, clamped

    monkeypatch.setattr(quadratic, "check_field", planted)
    env = call_json("sweep", "--dmin", "2", "--dmax", "10", expect=3)
    assert env["result"]["violations"] == [{"d": 7, "check": "planted"}]


def test_biquad_conflict_exit_3(monkeypatch):
    from polya import families
    from polya.families import TheoremClaim

    real = families.classify_biquadratic

    def contradictory(shape, args):
        claims = real(shape, args)
        return claims + [TheoremClaim("RAJAEI_A", claims[0].field, (), families.NOT_POLYA)]

    monkeypatch.setattr(families, "classify_biquadratic", contradictory)
    env = call_json("classify", "biquad", "--shape", "p_qr", "3", "7", "5", expect=3)
    assert env["result"]["conflicts"]


def test_version_and_help():
    assert call("--version")[0] == 0
    assert call("--help")[0] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polya", "classify", "quad", "-7"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["case"] == "5"


def test_canonical_json_drops_timing():
    env = call_json("quad", "-5")
    other = dict(env, timing_ms=env["timing_ms"] + 100)
    assert serialize.canonical_json(env) == serialize.canonical_json(other)
    assert "timing_ms" not in json.loads(serialize.canonical_json(env))
