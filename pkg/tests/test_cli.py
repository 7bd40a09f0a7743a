import json
import subprocess
import sys

import pytest

from ngrings.cli import EXIT_ERROR, EXIT_OK, EXIT_UNKNOWN, RunConfig, main
from ngrings.demazure import e8_pair, family_pair
from ngrings.divisors import SchemaError, divisor_to_json


def write(tmp_path, obj, name="in.json"):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def run_json(capsys, argv):
    code = main(argv + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_reproduce_e8(capsys):
    assert main(["reproduce", "e8-list"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "NG set: {1, 7, 11, 17, 19, 29}" in out


def test_analyze_family(tmp_path, capsys):
    path = write(tmp_path, divisor_to_json(family_pair(4, 5, 8).D))
    code, out = run_json(capsys, ["analyze", "--input", path])
    assert code == EXIT_OK
    assert out["type"] == "Elliptic" and out["pg"] == 1
    assert out["ng"]["verdict"] == "NearlyGorensteinNotGorenstein"


def test_ng_and_resolve(tmp_path, capsys):
    path = write(tmp_path, divisor_to_json(family_pair(3, 10, 17).D))
    code, out = run_json(capsys, ["ng", "--input", path])
    assert code == EXIT_OK and out["verdict"] == "NotNearlyGorenstein"
    path = write(tmp_path, divisor_to_json(e8_pair().D))
    code, out = run_json(capsys, ["resolve", "--input", path])
    assert code == EXIT_OK
    assert out["negative_definite"] and out["p_a"] == 0 and out["nearly_gorenstein"]
    ring = write(tmp_path, {"preset": "hyperelliptic", "genus": 2, "d": 5}, "ring.json")
    code, out = run_json(capsys, ["ng", "--input", ring])
    assert code == EXIT_OK and out["verdict"] == "NotNearlyGorenstein"


def test_veronese_scan(tmp_path, capsys):
    ring = write(tmp_path, {"preset": "hyperelliptic", "genus": 2})
    code, out = run_json(capsys, ["veronese-scan", "--input", ring, "--from", "1", "--to", "8"])
    assert code == EXIT_OK
    ng = [r["d"] for r in out["rows"] if r["verdict"] == "NearlyGorensteinNotGorenstein"]
    assert ng == [3, 4, 7, 8]


def test_cone_commands(tmp_path, capsys):
    path = write(tmp_path, {"genus": 3, "class": {"k": 2, "points": {"P": 1}}})
    code, out = run_json(capsys, ["cone", "classify", "--input", path])
    assert code == EXIT_OK and out["verdict"] == "NotNearlyGorenstein"
    path = write(tmp_path, {"genus": 2, "class": {"k": 3}})
    code, out = run_json(capsys, ["cone", "compare", "--input", path])
    assert code == EXIT_OK and out["listed_case"] == "neither-c"


def test_unknown_exit_code(tmp_path, capsys):
    path = write(tmp_path, {"genus": 3, "class": {"points": {"P": 9}}})
    code, out = run_json(capsys, ["cone", "classify", "--input", path])
    assert code == EXIT_UNKNOWN and out["missing"] == "R1=K0*L1"
    path = write(tmp_path, divisor_to_json(family_pair(4, 5, 8).D))
    assert main(["ng", "--input", path, "--cap", "3"]) == EXIT_UNKNOWN


@pytest.mark.parametrize("payload", [
    '{"curve": {"model": "P1", "points": [{"label": "P", "coord": "0"}]}, "divisor": []}',
    "not json",
    '{"genus": 2, "class": {"points": {"P": 3}}, "flags": ["D~K+P", "not D~K+P"]}',
])
def test_error_exit_code(tmp_path, capsys, payload):
    cmd = "cone" if "genus" in payload else "analyze"
    argv = [cmd, "classify"] if cmd == "cone" else [cmd]
    assert main(argv + ["--input", write(tmp_path, payload)]) == EXIT_ERROR
    assert capsys.readouterr().err.startswith("error:")


def test_missing_input_and_bad_config(capsys):
    assert main(["analyze"]) == EXIT_ERROR
    assert main(["veronese-scan", "--from", "5", "--to", "2", "--input", "x"]) == EXIT_ERROR
    with pytest.raises(SchemaError):
        RunConfig("ng", cap=0)


def test_reproduce_is_byte_stable():
    cmd = [sys.executable, "-m", "ngrings", "reproduce", "genus2-classification", "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    rows = json.loads(first)["rows"]
    assert len(rows) == 13


def test_json_output_round_trips(tmp_path, capsys):
    path = write(tmp_path, divisor_to_json(e8_pair().D))
    assert main(["analyze", "--input", path, "--format", "json"]) == EXIT_OK
    text = capsys.readouterr().out
    assert json.dumps(json.loads(text), indent=2) + "\n" == text
