import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import make_rep, p2_rigged
from toricquiver.builtin import example_json
from toricquiver.category import constant_object
from toricquiver.cli import main
from toricquiver.serialize import rep_to_json

NAMES = ["cn:1", "cn:2", "cn:3", "cstar:1,3", "cstar:0,2", "p1", "p2", "fan1"]


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- fan check ------------------------------------------------------------------

def test_fan_check_valid(tmp_path, capsys):
    path = write(tmp_path, "p2.json", example_json("p2"))
    assert run(capsys, "fan", "check", path)[0] == 0


def test_fan_check_non_smooth(tmp_path, capsys):
    path = write(tmp_path, "bad.json", {"dim": 2, "rays": [[1, 0], [1, 2]], "max_cones": [[0, 1]]})
    code, out, err = run(capsys, "--json", "fan", "check", path)
    assert code == 1
    failures = json.loads(err)["failures"]
    assert failures == [{"error": "NonSmoothCone", "cone": [0, 1], "snf_diagonal": [1, 2],
                         "message": failures[0]["message"]}]


def test_fan_check_truncated(tmp_path, capsys):
    text = json.dumps(example_json("p2"))[:-5]
    path = write(tmp_path, "trunc.json", text)
    assert run(capsys, "fan", "check", path)[0] == 2


def test_missing_file(capsys):
    assert run(capsys, "fan", "check", "/nonexistent/fan.json")[0] == 2


def test_flags_after_subcommand(tmp_path, capsys):
    path = write(tmp_path, "bad.json", {"dim": 2, "rays": [[1, 0], [1, 2]], "max_cones": [[0, 1]]})
    code, _, err = run(capsys, "fan", "check", path, "--json")
    assert code == 1 and json.loads(err)["failures"]


def test_fan_info_and_trust_flag(tmp_path, capsys):
    path = write(tmp_path, "fan1.json", example_json("fan1"))
    code, out, _ = run(capsys, "--trust-fan", "fan", "info", path)
    info = json.loads(out)
    assert code == 0 and info["trust_fan"] is True
    assert info["bases"][0]["cone"] == [2]


# -- quiver / relations -------------------------------------------------------

def test_quiver_dot_p1(tmp_path, capsys):
    path = write(tmp_path, "p1.json", example_json("p1"))
    code, out, _ = run(capsys, "quiver", path, "--format", "dot")
    assert code == 0
    assert out.count('";\n') == 3 and out.count("->") == 4


def test_quiver_json_c3(tmp_path, capsys):
    path = write(tmp_path, "c3.json", example_json("cn:3"))
    code, out, _ = run(capsys, "quiver", path, "--format", "json")
    assert code == 0 and len(json.loads(out)["vertices"]) == 8


def test_quiver_fan1_has_one_self_loop(tmp_path, capsys):
    path = write(tmp_path, "fan1.json", example_json("fan1"))
    out = run(capsys, "quiver", path)[1]
    assert out.count('"[2]" -> "[2]"') == 1


def test_relations(tmp_path, capsys):
    code, out, _ = run(capsys, "relations", write(tmp_path, "p2.json", example_json("p2")))
    lines = out.splitlines()
    assert code == 0 and len(lines) == 9
    assert "M[|2] = M[|0]^-1 * M[|1]^-1" in lines
    assert run(capsys, "relations", write(tmp_path, "c3.json", example_json("cn:3")))[1] == ""
    assert len(run(capsys, "relations", write(tmp_path, "f1.json", example_json("fan1")))[1].splitlines()) == 1


def test_invalid_fan_is_code_1_for_every_command(tmp_path, capsys):
    path = write(tmp_path, "bad.json", {"dim": 2, "rays": [[1, 0], [1, 2]], "max_cones": [[0, 1]]})
    assert run(capsys, "quiver", path)[0] == 1
    assert run(capsys, "relations", path)[0] == 1


# -- rep check / hom ---------------------------------------------------------------

@pytest.fixture
def p2_file(tmp_path):
    return write(tmp_path, "p2.json", example_json("p2"))


def test_rep_check_constant(tmp_path, capsys, p2, p2_file):
    rep = write(tmp_path, "rep.json", rep_to_json(constant_object(p2, 1)))
    code, out, _ = run(capsys, "rep", "check", p2_file, rep)
    assert code == 0 and out.strip() == "pass"


def test_rep_check_zero_loop(tmp_path, capsys, fan1):
    fan = write(tmp_path, "fan1.json", example_json("fan1"))
    rep = write(tmp_path, "rep.json", rep_to_json(make_rep(fan1, 1, loops={((3,), 1): [[0]]})))
    code, _, err = run(capsys, "rep", "check", fan, rep)
    assert code == 1
    assert "(i) at [2], loop 1" in err


def test_rep_check_relation_failure(tmp_path, capsys, p2, p2_file):
    rep = write(tmp_path, "rep.json", rep_to_json(p2_rigged(p2, 2, 3, 6)))
    code, _, err = run(capsys, "--json", "rep", "check", p2_file, rep)
    assert code == 1
    records = [json.loads(line) for line in err.splitlines()]
    assert {r["condition"] for r in records} == {"iv"}
    hit = [r for r in records if r["message"] == "(iv) at ([], 2, K=[0, 1])"]
    assert hit and hit[0]["witness"] == {"lhs": [[6]], "rhs": [["1/6"]]}


def test_rep_check_shape_mismatch(tmp_path, capsys, p2, p2_file):
    data = rep_to_json(constant_object(p2, 1))
    data["u"]["[]->[0]"] = [[1, 1]]
    rep = write(tmp_path, "rep.json", data)
    assert run(capsys, "rep", "check", p2_file, rep)[0] == 2


def test_rep_hom(tmp_path, capsys, p1, c2, p2):
    fan = write(tmp_path, "p1.json", example_json("p1"))
    rep = write(tmp_path, "c.json", rep_to_json(constant_object(p1, 1)))
    assert run(capsys, "rep", "hom", fan, rep, rep)[1].strip() == "3"
    fan = write(tmp_path, "c2.json", example_json("cn:2"))
    rep = write(tmp_path, "c2r.json", rep_to_json(constant_object(c2, 1)))
    code, out, _ = run(capsys, "rep", "hom", fan, rep, rep, "--basis")
    first, rest = out.split("\n", 1)
    assert code == 0 and first == "4" and len(json.loads(rest)) == 4
    fan = write(tmp_path, "p2.json", example_json("p2"))
    zero = write(tmp_path, "z.json", rep_to_json(constant_object(p2, 0)))
    other = write(tmp_path, "o.json", rep_to_json(p2_rigged(p2, 2, 3, Fraction(1, 6))))
    assert run(capsys, "rep", "hom", fan, zero, other)[1].strip() == "0"


# -- examples ---------------------------------------------------------------------

def test_example_names(capsys):
    code, out, _ = run(capsys, "example", "p2")
    data = json.loads(out)
    assert code == 0 and len(data["rays"]) == 3 and len(data["max_cones"]) == 3
    data = json.loads(run(capsys, "example", "cn:2")[1])
    assert data["rays"] == [[1, 0], [0, 1]] and data["max_cones"] == [[0, 1]]
    data = json.loads(run(capsys, "example", "fan1")[1])
    assert data["rays"] == [[1, 0], [0, 1], [-1, -1]] and data["max_cones"] == [[0, 1], [2]]
    assert run(capsys, "example", "p7")[0] == 2
    assert run(capsys, "example", "cstar:3,2")[0] == 2


@pytest.mark.parametrize("name", NAMES)
def test_example_pipes_into_check(tmp_path, capsys, name):
    out = run(capsys, "example", name)[1]
    path = write(tmp_path, "f.json", out)
    assert run(capsys, "fan", "check", path)[0] == 0


def test_stdin_pipeline():
    example = subprocess.run([sys.executable, "-m", "toricquiver", "example", "p2"],
                             capture_output=True, text=True, check=True)
    check = subprocess.run([sys.executable, "-m", "toricquiver", "fan", "check", "-"],
                           input=example.stdout, capture_output=True, text=True)
    assert check.returncode == 0


def test_usage_errors_are_code_2(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "quiver")[0] == 2
    assert run(capsys, "quiver", "x.json", "--format", "svg")[0] == 2


# -- fuzzing ------------------------------------------------------------------------

VALID = json.dumps(example_json("p2"))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, len(VALID) - 1))
def test_truncations_are_code_2(tmp_path_factory, cut):
    path = tmp_path_factory.mktemp("fz") / "f.json"
    path.write_text(VALID[:cut])
    assert main(["fan", "check", str(path)]) == 2


@settings(max_examples=60, deadline=None)
@given(st.text(max_size=40))
def test_random_text_never_crashes(tmp_path_factory, text):
    path = tmp_path_factory.mktemp("fz") / "f.json"
    path.write_text(text)
    try:
        json.loads(text)
        parses = True
    except ValueError:
        parses = False
    code = main(["fan", "check", str(path)])
    if not parses:
        assert code == 2
    else:
        assert code in (1, 2)


json_values = st.recursive(
    st.none() | st.booleans() | st.integers(-3, 3) | st.text(max_size=3),
    lambda inner: st.lists(inner, max_size=3) | st.dictionaries(st.text(max_size=3), inner, max_size=3),
    max_leaves=10,
)


@settings(max_examples=80, deadline=None)
@given(json_values, json_values, json_values)
def test_wrong_types_are_code_2(tmp_path_factory, dim, rays, cones):
    path = tmp_path_factory.mktemp("fz") / "f.json"
    path.write_text(json.dumps({"dim": dim, "rays": rays, "max_cones": cones}))
    for argv in (["fan", "check", str(path)], ["quiver", str(path)]):
        assert main(argv) in (0, 1, 2)
