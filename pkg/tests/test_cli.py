import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from greenberg.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def cfg(name):
    return str(CONFIGS / name)


def run(*args):
    result = CliRunner().invoke(main, [str(a) for a in args])
    return result.exit_code, result.stdout, result.stderr


def report(*args):
    code, out, _ = run(*args)
    return code, json.loads(out)


def test_structure_polys_golden():
    code, out, err = run("structure-polys", cfg("base_equal_p3.json"), "-N", 1)
    assert code == 0
    assert "mul[1] = x0*y1 + x1*y0" in out
    assert "structure-polys:" in err


def test_structure_polys_to_file(tmp_path):
    path = tmp_path / "laws.txt"
    assert run("structure-polys", cfg("base_w2.json"), "-N", 1, "-o", path)[0] == 0
    assert "add[1] = x0*y0 + x1 + y1" in path.read_text()


def test_transform_square_zero_example():
    code, out = report("transform", cfg("square_zero_y2_pi_x.json"), "--text")
    assert code == 0
    assert out["gens"] == ["y0^2", "2*y0*y1 + 2*x0"]


def test_transform_units_shape():
    code, out = report("transform", cfg("gm_w2_level1.json"), "--text")
    assert len(out["vars"]) == 4 and len(out["gens"]) == 2


def test_transform_then_count(tmp_path):
    path = tmp_path / "t.json"
    assert run("transform", cfg("square_zero_y2_pi_x.json"), "-o", path)[0] == 0
    code, out = report("count", path, "-a", cfg("alg_f3.json"), "--list")
    assert out["count"] == 9
    # y0 = 0 and x0 = 0 with x1 and y1 free
    assert all(s[0] == 0 and s[2] == 0 for s in out["solutions"])


def test_transform_with_separate_base():
    scheme = '{"vars": ["x"], "gens": []}'
    code, out = report("transform", scheme, "--base", cfg("base_w2.json"), "-N", 2, "--text")
    assert out["vars"] == ["x0", "x1", "x2"] and out["gens"] == []


def test_counts():
    assert report("count", cfg("gm_w3_level1.json"), "-a", cfg("alg_f3.json"))[1]["count"] == 6
    assert report("count", cfg("plane_f2.json"), "-a", cfg("alg_f2.json"))[1]["count"] == 4


def test_change_level():
    code, out = report("change-level", cfg("gm_w3_level1.json"), "-M", 0)
    assert out["images"] == {"x0": "x0", "y0": "y0"}


def test_weil_restrict():
    code, out = report("weil-restrict", cfg("ext_tot_ram.json"), cfg("x2_minus_pi_x.json"), "--text")
    assert code == 0 and out["vars"] == ["x0", "x1"]


def test_wr_gr_check():
    code, out = report(
        "wr-gr-check", cfg("ext_mixed_f4.json"), cfg("x2_minus_pi_x.json"), "-a", cfg("alg_f2.json"), "-a", cfg("alg_f2_dual.json")
    )
    assert code == 0 and out["passed"]
    assert [(c["lhs"], c["rhs"]) for c in out["cells"]] == [(4, 4), (16, 16)]


def test_checks_pass_and_fail():
    assert report("check", "rat-pts", cfg("gm_w3_level1.json"), "-a", cfg("alg_f3.json"))[1]["passed"]
    code, out = report("check", "surjective", cfg("xy_minus_pi_w2_level1.json"), "-m", 0, "-i", 1, "-a", cfg("alg_f2.json"))
    assert code == 1 and out["non_lifting"] == [[0, 0]]
    code, out = report("check", "cartesian", cfg("etale_sqrt_w3_level1.json"), "-m", 0, "-i", 1, "-a", cfg("alg_f3.json"))
    assert code == 0 and out["source_points"] == 6
    code, out = report("check", "kernel", cfg("gm_group_w3_level2.json"), "-m", 0, "-i", 2, "-a", cfg("alg_f3.json"))
    assert code == 0 and out["count"] == 9


def test_kernel_expected_dimension_mismatch():
    args = ("check", "kernel", cfg("gm_group_w3_level2.json"), "-m", 0, "-i", 1, "-a", cfg("alg_f3.json"))
    assert run(*args, "--expect-dim", 2)[0] == 1


def test_unknown_key_exit_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "vars": ["x"],\n  "gens": [],\n  "colour": 1\n}\n')
    code, _, err = run("count", path, "-a", cfg("alg_f2.json"))
    assert code == 2
    assert "[parse_error]" in err and "line 4, column 3" in err


@pytest.mark.parametrize(
    "args",
    [
        ("count", "/no/such/file.json", "-a", "{}"),
        ("count", '{"vars": [', "-a", "{}"),
        ("count", "{}"),
        ("verify", "nonsense"),
        ("structure-polys", '{"case": "mixed", "p": 2, "eisenstein": [0, -4]}', "-N", 1),
    ],
)
def test_usage_and_parse_errors_exit_2(args):
    assert run(*args)[0] == 2


def test_guard_exit_1():
    # the plane over F_2 has exactly 4 candidates
    assert run("--guard", 4, "count", cfg("plane_f2.json"), "-a", cfg("alg_f2.json"))[0] == 0
    assert run("--guard", 3, "count", cfg("plane_f2.json"), "-a", cfg("alg_f2.json"))[0] == 1
    vars = ",".join(f'"v{i}"' for i in range(5))
    scheme = f'{{"ring": {{"field": {{"p": 2}}}}, "vars": [{vars}], "gens": ["v0*v1 - v2"]}}'
    code, _, err = run("--guard", 16, "count", scheme, "-a", cfg("alg_f2.json"))
    assert code == 1 and "[size_guard]" in err


def test_carrier_mismatch_exit_1():
    code, _, err = run("count", cfg("plane_f2.json"), "-a", cfg("alg_f3.json"))
    assert code == 1 and "[carrier_mismatch]" in err


def test_verify_suite_deterministic():
    code_a, out_a, _ = run("verify", "ratpts")
    code_b, out_b, _ = run("verify", "ratpts")
    assert code_a == code_b == 0 and out_a == out_b
    assert json.loads(out_a)["passed"]
