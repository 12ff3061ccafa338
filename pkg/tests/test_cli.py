from __future__ import annotations

import json
import subprocess
import sys

import jsonschema
import pytest

from onerel.cli import COMMANDS, SCHEMA_FOR, load_schema, main

RUNS = {
    "parse": ["<a,b; a^2>"],
    "normalize": ["<a,b; a^-1 b a^-1 b^-1 a>"],
    "magnus-tree": ["<a,b; a^2 b^-3>"],
    "complex": ["<a,b; a b a^-1 b^-1>"],
    "ball": ["<a,b; a b a^-1 b^-1>", "--radius", "3"],
    "ends": ["<a,b; a^2>", "--radius", "5"],
    "freiheitssatz": ["<a,b; a^2>", "--subset", "b", "--radius", "3"],
    "pro-pi1": ["<a,b; a b a^-1 b^-1>", "--radii", "2..4"],
    "semistable": ["<a,b; b>", "--radii", "2,3"],
}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("command", COMMANDS)
def test_json_output_validates(capsys, command):
    code, out, _ = run(capsys, command, *RUNS[command], "--seed", "5")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, load_schema(command))
    assert data["command"] == command and data["seed"] == 5


def test_every_command_has_a_schema():
    assert set(SCHEMA_FOR) == set(COMMANDS)
    for command in COMMANDS:
        jsonschema.Draft202012Validator.check_schema(load_schema(command))


@pytest.mark.parametrize("command", COMMANDS)
def test_deterministic(capsys, command):
    first = run(capsys, command, *RUNS[command])[1]
    assert run(capsys, command, *RUNS[command])[1] == first


def test_magnus_tree_example(capsys):
    _, out, _ = run(capsys, "magnus-tree", "<a,b;a^2b^-3>")
    root = json.loads(out)["root"]
    assert root["case"] == "Case2" and (root["p"], root["q"]) == (2, -3)
    child = root["children"][0]
    assert child["case"] == "Case1"

    def leaves(n):
        return [n] if not n["children"] else [x for c in n["children"] for x in leaves(c)]

    assert all(leaf["case"] == "Base" for leaf in leaves(root))


def test_ends_example(capsys):
    _, out, _ = run(capsys, "ends", "<a,b;a^2>", "--radius", "5")
    assert json.loads(out)["classification"] == "Many"


def test_normalize_fields(capsys):
    _, out, _ = run(capsys, "normalize", "<a,b;a^-1ba^-1b^-1a>")
    data = json.loads(out)
    assert data["s"] == 1
    assert data["core"] == "a^-1" and data["conjugator"] == "a^-1 b"
    assert data["abelianization"] == {"free_rank": 1, "torsion": []}


def test_text_and_dot_formats(capsys):
    code, out, _ = run(capsys, "magnus-tree", "<a,b; a^2 b^-3>", "--format", "dot")
    assert code == 0 and out.startswith("digraph magnus")
    code, out, _ = run(capsys, "complex", "<a,b; a^2>", "--format", "dot")
    assert code == 0 and "graph" in out
    code, out, _ = run(capsys, "ball", "<a; a^3>", "--format", "dot")
    assert code == 0 and "digraph" in out
    code, out, _ = run(capsys, "normalize", "<a,b; a^2>", "--format", "text")
    assert code == 0 and out.startswith("core")
    code, _, err = run(capsys, "ends", "<a,b; a^2>", "--format", "dot")
    assert code == 1 and "no DOT output" in err


def test_parse_error_exit_1(capsys):
    code, out, err = run(capsys, "parse", "<a, a; a>")
    assert code == 1 and not out and "error" in err
    code, _, _ = run(capsys, "normalize", "<a,b; >")
    assert code == 1
    code, _, _ = run(capsys, "freiheitssatz", "<a,b; a b>", "--subset", "a,b")
    assert code == 1


def test_strict_exit_2_on_unknown(capsys):
    args = ["ball", "<a,b; a b^2 a^-1 b^-3>", "--radius", "3", "--budget-states", "1"]
    assert run(capsys, *args)[0] == 0
    code, out, err = run(capsys, *args, "--strict")
    assert code == 2 and "inconclusive" in err
    assert json.loads(out)["complete"] is False


def test_budget_env_default(capsys, monkeypatch):
    monkeypatch.setenv("MAGNUS_BUDGET_STATES", "1")
    code, _, _ = run(capsys, "ball", "<a,b; a b^2 a^-1 b^-3>", "--radius", "3", "--strict")
    assert code == 2


def test_presentation_from_file(capsys, tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("<a,b; a^2>\n")
    code, out, _ = run(capsys, "parse", str(f))
    assert code == 0 and json.loads(out)["relators"] == ["a^2"]


def test_bad_radius_rejected(capsys):
    with pytest.raises(SystemExit) as info:
        main(["ball", "<a;>", "--radius", "0"])
    assert info.value.code == 2
    assert run(capsys, "ends", "<a,b;a^2>", "--radius", "3")[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "onerel", "parse", "<a; a^3>"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["generators"] == ["a"]
