import json
import shutil
import subprocess

import pytest

from brauertriples.builtins import builtin, builtin_names
from brauertriples.cli import main, parse_recipe
from brauertriples.clifford import is_stable
from brauertriples.fakegal import CandidateRecipe
from brauertriples.groupio import instance_from_json, instance_to_json, load_source, same_instance
from brauertriples.modrep import irr_brauer


def run(argv, tmp_path, name="out"):
    out = tmp_path / f"{name}.txt"
    code = main(argv + ["--out", str(out)])
    return code, out.read_bytes()


DETERMINISTIC = [
    ["classes", "--group", "builtin:SL23"],
    ["chartab", "--group", "builtin:A5", "--format", "tsv"],
    ["ibr", "--group", "builtin:SL25", "--ell", "3"],
    ["decmat", "--group", "builtin:GL23", "--ell", "2"],
    ["fake-galois", "--group", "builtin:SL23_semi_C2", "--normal", "SL23", "--ell", "7", "--m", "5", "11"],
    ["check-approx", "--group", "builtin:SL23_semi_C2", "--normal", "SL23", "--ell", "5", "--theta", "0",
     "--m", "1", "7"],
    ["stab-cyclicity", "--group", "builtin:D8_on_C3^2"],
    ["goursat-audit", "--a", "3"],
]


@pytest.mark.parametrize("argv", DETERMINISTIC, ids=lambda a: a[0])
def test_byte_identical_reruns(argv, tmp_path):
    c1, b1 = run(argv, tmp_path, "a")
    c2, b2 = run(argv, tmp_path, "b")
    assert c1 == c2 == 0
    assert b1 == b2 and b1


@pytest.mark.parametrize("name", builtin_names())
def test_group_json_round_trip(name, tmp_path):
    inst = builtin(name)
    obj = instance_to_json(inst)
    assert obj["format"] == "brauertriples-group" and obj["version"] == "v1"
    path = tmp_path / "g.json"
    path.write_text(json.dumps(obj))
    back = load_source(str(path))
    assert same_instance(inst, back)
    assert same_instance(back, instance_from_json(instance_to_json(back)))


def test_file_groups_work_in_commands(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(instance_to_json(builtin("SL23_semi_C2"))))
    code, out = run(["fake-galois", "--group", str(path), "--normal", "SL23", "--ell", "7", "--m", "5"], tmp_path)
    assert code == 0 and json.loads(out)["verdict"] == "verified"


def test_ibr_a5_mod_2(tmp_path):
    code, out = run(["ibr", "--group", "builtin:A5", "--ell", "2"], tmp_path)
    assert code == 0
    obj = json.loads(out)
    assert sorted(obj["degrees"]) == [1, 2, 2, 4]


def test_exit_code_for_refutation(tmp_path):
    code, out = run(["check-approx", "--group", "builtin:D8", "--normal", "Z", "--ell", "3", "--theta", "0",
                     "--target", "1", "--m", "1"], tmp_path)
    assert code == 2
    assert json.loads(out)["results"][0]["status"] == "refuted"
    code, out = run(["goursat-audit", "--a", "2"], tmp_path)
    assert code == 2 and len(json.loads(out)["reports"][0]["failures"]) == 3


def test_exit_code_for_failed_recipe(tmp_path):
    inst = builtin("SL23_semi_C2")
    G, N = inst.group, inst.subgroups["SL23"]
    ibr = irr_brauer(N, 7)
    a = next(i for i, t in enumerate(ibr) if is_stable(t, G))
    b = next(i for i, t in enumerate(ibr) if not is_stable(t, G))
    table = list(range(len(ibr)))
    table[a], table[b] = b, a
    code, out = run(["fake-galois", "--group", "builtin:SL23_semi_C2", "--normal", "SL23", "--ell", "7",
                     "--m", "5", "--recipe", "table:" + ",".join(map(str, table))], tmp_path)
    obj = json.loads(out)
    assert code == 2 and obj["verdict"] == "failure" and "violation" in obj


@pytest.mark.parametrize("argv", [
    ["check-approx", "--group", "builtin:SL23_semi_C2", "--normal", "SL23", "--ell", "7", "--theta", "0",
     "--m", "3"],
    ["ibr", "--group", "builtin:A5", "--ell", "4"],
    ["ibr", "--group", "builtin:NoSuchGroup", "--ell", "2"],
    ["fake-galois", "--group", "builtin:SL23_semi_C2", "--normal", "SL23", "--ell", "7", "--m", "5",
     "--recipe", "nonsense"],
    ["fake-galois", "--group", "builtin:SL23_semi_C2", "--normal", "nope", "--ell", "7", "--m", "5"],
    ["classes"],
], ids=["gcd", "ell-not-prime", "unknown-builtin", "bad-recipe", "bad-subgroup", "missing-group"])
def test_usage_errors_exit_1(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1
    assert capsys.readouterr().err


def test_gcd_message(capsys):
    main(["check-approx", "--group", "builtin:SL23_semi_C2", "--normal", "SL23", "--ell", "7", "--theta", "0",
          "--m", "3"])
    assert "(m, |N|) = 1" in capsys.readouterr().err


def test_malformed_json_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"degree": 3,\n "generators": [[1, 2, 0]\n')
    assert main(["classes", "--group", str(path)]) == 1
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_resource_limit(monkeypatch, tmp_path, capsys):
    path = tmp_path / "s5.json"
    path.write_text(json.dumps({"format": "brauertriples-group", "version": "v1", "name": "S5", "degree": 5,
                                "generators": [[1, 2, 3, 4, 0], [1, 0, 2, 3, 4]]}))
    monkeypatch.setenv("BT_MAX_ORDER", "50")
    assert main(["classes", "--group", str(path)]) == 1
    assert "resource" in capsys.readouterr().err


def test_parse_recipe():
    assert parse_recipe("auto") == "auto"
    assert parse_recipe("piecewise-r:4") == CandidateRecipe("piecewise-r", r=4)
    assert parse_recipe("k-pair:4,5") == CandidateRecipe("k-pair", k=(4, 5))
    assert parse_recipe("table:1,0").table == {0: 1, 1: 0}


@pytest.mark.skipif(shutil.which("brauertriples") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["brauertriples", "builtins", "--format", "tsv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "SL23_semi_C2\t48" in proc.stdout
