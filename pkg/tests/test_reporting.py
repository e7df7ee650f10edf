import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from doubleforms import algebra as alg
from doubleforms.cli import main
from doubleforms.errors import ConfigError, DimensionExceeded, ParseError, SymmetryConflict
from doubleforms.models import constant_curvature, random_curvature
from doubleforms.reporting import CHECK_SCHEMA, REPORT_SCHEMA, RunConfig, dumps, parse_input, run_report


def test_parse_entries():
    R = parse_input({"n": 2, "entries": [{"i": 1, "j": 2, "k": 1, "l": 2, "value": 1.0}]})
    assert alg.residual(R, constant_curvature(2, 1.0)) == 0.0
    # entries given in any of their symmetric forms land on the same coefficient
    R = parse_input(json.dumps({"n": 3, "entries": [
        {"i": 2, "j": 1, "k": 3, "l": 1, "value": 0.5},
        {"i": 1, "j": 3, "k": 1, "l": 2, "value": 0.5},
    ]}))
    assert R.entry((1, 2), (1, 3)) == 0.5 and R.entry((1, 3), (1, 2)) == 0.5


def test_parse_model():
    R = parse_input('{"model": "constant", "n": 4, "lambda": 1.0}')
    assert alg.residual(R, constant_curvature(4, 1.0)) == 0.0


def test_parse_errors():
    with pytest.raises(SymmetryConflict):
        parse_input({"n": 2, "entries": [{"i": 1, "j": 2, "k": 1, "l": 2, "value": 1.0},
                                         {"i": 2, "j": 1, "k": 1, "l": 2, "value": 1.0}]})
    with pytest.raises(SymmetryConflict):
        parse_input({"n": 3, "entries": [{"i": 1, "j": 1, "k": 1, "l": 2, "value": 1.0}]})
    for bad in ("not json", "[1, 2]", '{"n": 3}', '{"n": 3, "entries": [{"i": 1}]}',
                '{"n": 3, "entries": [{"i": 1, "j": 4, "k": 1, "l": 2, "value": 1}]}',
                '{"n": 3, "entries": [{"i": 1, "j": 2, "k": 1, "l": 2, "value": "x"}]}', b"\xff"):
        with pytest.raises(ParseError):
            parse_input(bad)
    with pytest.raises(DimensionExceeded):
        parse_input({"n": 11, "entries": []})


def test_non_bianchi_input_warns():
    # a lone R(1,2,3,4) entry breaks the first Bianchi identity
    R = parse_input({"n": 4, "entries": [{"i": 1, "j": 2, "k": 3, "l": 4, "value": 1.0}]})
    assert not R.bianchi_certified
    doc = run_report(R, RunConfig())
    assert doc["bianchi_residual"] > 0.1 and doc["warnings"]
    jsonschema.validate(json.loads(dumps(doc)), REPORT_SCHEMA)


def test_report_constant_curvature():
    doc = run_report(constant_curvature(4, 1.0), RunConfig(q_max=2))
    assert doc["h"]["2"] == pytest.approx(6.0) and doc["h"]["4"] == pytest.approx(6.0)
    assert doc["lovelock"]["2"]["min_eig"] == pytest.approx(3.0)
    assert doc["lovelock"]["2"]["max_eig"] == pytest.approx(3.0)
    assert doc["avez_residual"] < 1e-9
    back = json.loads(dumps(doc))
    jsonschema.validate(back, REPORT_SCHEMA)
    assert set(back) == set(REPORT_SCHEMA["required"])
    with pytest.raises(ConfigError):
        run_report(constant_curvature(4, 1.0), RunConfig(q_max=3))


def test_report_flat_and_positivity():
    doc = run_report(constant_curvature(5, 0.0), RunConfig(samples=50, p=(1, 2)), positivity=True)
    assert all(v == 0.0 for v in doc["h"].values())
    assert doc["positivity"]["h4_sign"] == "zero"
    for key in ("p_curvature(p=1)", "p_curvature(p=2)", "isotropic", "condition_A"):
        assert doc["positivity"][key]["verdict"] == "nonnegative"
    jsonschema.validate(json.loads(dumps(doc)), REPORT_SCHEMA)


def test_dumps_precision():
    x = 0.1 + 0.2
    text = dumps({"x": x, "y": 6.0, "z": [1.0, 2], "w": float("nan")})
    back = json.loads(text)
    assert back["x"] == x and "0.30000000000000004" in text
    assert back["y"] == 6.0 and back["w"] is None


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(tol=0.0)
    with pytest.raises(ConfigError):
        RunConfig(tol=-1.0)
    RunConfig(command="check", tol=0.0)


def test_cli_invariants(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["invariants", "--model", '{"model": "hypersurface", "principal_curvatures": [1, 2, 3, 4]}',
                 "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["h"]["2"] == pytest.approx(35.0) and doc["h"]["4"] == pytest.approx(144.0)
    src = tmp_path / "in.json"
    src.write_text(json.dumps({"n": 2, "entries": [{"i": 1, "j": 2, "k": 1, "l": 2, "value": 1.0}]}))
    assert main(["positivity", "--input", str(src), "--samples", "20"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["h"] == {"2": 1.0}


def test_cli_errors(tmp_path, capsys):
    assert main(["invariants", "--model", "{bad"]) == 2
    assert json.loads(capsys.readouterr().out)["error"]["type"] == "ParseError"
    assert main(["invariants", "--input", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()
    assert main(["check", "--suite", "nope"]) == 2
    assert json.loads(capsys.readouterr().out)["error"]["type"] == "ConfigError"
    assert main(["invariants", "--model", '{"model": "constant", "n": 4, "lambda": 1}', "--q-max", "5"]) == 2


def test_cli_check(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["check", "--suite", "algebra", "--seed", "42", "--out", str(a)]) == 0
    assert main(["check", "--suite", "algebra", "--seed", "42", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    jsonschema.validate(json.loads(a.read_text()), CHECK_SCHEMA)
    assert main(["check", "--suite", "algebra", "--tol", "0", "--out", str(a)]) == 1
    assert not json.loads(a.read_text())["passed"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "doubleforms", "invariants", "--model",
                          '{"model": "constant", "n": 3, "lambda": 2}'], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["h"]["2"] == pytest.approx(6.0)
