import json
import os
import subprocess
import sys

import pytest

from dycoh.cli import parse, run
from dycoh.cli.report import canonical, dumps
from dycoh import fixtures as fx
from dycoh.dycomplex import cohomology
from dycoh.presentations import unitalize_category

from conftest import DATA
from oracles import cyclic, group_cohomology_dim, pentagon_failures


def invoke(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_dy_table_on_vec_z2(capsys):
    code, out, err = invoke(capsys, "dy", DATA / "vec_z2.cat", "--functor", "id", "--max-degree", "3")
    assert code == 0
    report = json.loads(out)
    dims = [row["dim_H"] for row in report["result"]["table"]]
    assert dims == [group_cohomology_dim(cyclic(2), n, 2) for n in (1, 2, 3)] == [1, 1, 1]
    assert report["tool"] == "dycoh" and report["input"]["files"] == ["vec_z2.cat"]


def test_unit_invariance_passes(capsys):
    code, out, _ = invoke(capsys, "invariance", DATA / "vec_z2.cat", "--kind", "unit", "--max-degree", "2")
    assert code == 0
    assert json.loads(out)["verdict"] == "PASS"


def test_broken_pentagon_is_a_violation(capsys):
    code, out, err = invoke(capsys, "validate", DATA / "broken_pentagon.cat")
    assert code == 1
    report = json.loads(out)
    (cat,) = report["result"]["reports"]
    witnesses = [tuple(v["objects"]) for v in cat["violations"] if v["axiom"] == "pentagon"]
    # oracle: scalar associator 2 at (g, g, g) and 1 elsewhere
    omega = {k: 1 for k in [(a, b, c) for a in range(2) for b in range(2) for c in range(2)]}
    omega[(1, 1, 1)] = 2
    names = ("e", "g")
    assert witnesses == [tuple(names[i] for i in q) for q in pentagon_failures(cyclic(2), omega)]
    assert "pentagon" in err


def test_valid_file_validates(capsys):
    code, out, _ = invoke(capsys, "validate", DATA / "vec_z2xz2.cat")
    assert code == 0 and json.loads(out)["verdict"] == "PASS"


def test_hochschild_table(capsys):
    code, out, _ = invoke(capsys, "hochschild", DATA / "dual.cat", "--bimodule", "reg", "--max-degree", "3")
    assert code == 0
    assert [r["dim_H"] for r in json.loads(out)["result"]["table"]] == [2, 1, 1, 1]


def test_normalize_reports_sign(capsys):
    code, out, _ = invoke(capsys, "normalize", DATA / "dual.cat", "--cocycle", DATA / "dual_cocycle.cat")
    assert code == 0
    result = json.loads(out)["result"]
    assert result["sign"] == -1 and result["sign_verified"] and result["correction_is_coboundary"]


def test_restrict_unit_square(capsys):
    code, out, _ = invoke(capsys, "restrict", DATA / "vec_z2_square.cat", "--square", "unit_sq")
    assert code == 0
    for entry in json.loads(out)["result"]["entries"]:
        assert entry["induced"]["injective"] and entry["induced"]["surjective"]


@pytest.mark.parametrize("kind", ["karoubi", "additive"])
def test_envelope_invariance(capsys, kind):
    code, out, _ = invoke(capsys, "invariance", DATA / "eps.cat", "--kind", kind, "--max-degree", "1",
                          "--samples", "all")
    assert code == 0 and json.loads(out)["verdict"] == "PASS"


def test_algebra_unitalization_invariance(capsys):
    code, out, _ = invoke(capsys, "invariance", DATA / "zero2.cat", "--kind", "unit", "--bimodule", "nil_both")
    assert code == 0 and json.loads(out)["verdict"] == "PASS"


# -- unitalize round trip ------------------------------------------------------


def test_unitalize_output_reparses_and_matches(capsys, tmp_path):
    code, out, _ = invoke(capsys, "unitalize", DATA / "vec_z2.cat")
    assert code == 0
    pf = parse(out)
    (cu,) = pf.categories.values()
    path = tmp_path / "vec_z2u.cat"
    path.write_text(out)
    code, _, _ = invoke(capsys, "validate", path)
    assert code == 0
    code, rep, _ = invoke(capsys, "dy", path, "--max-degree", "2")
    assert code == 0
    expected = unitalize_category(fx.vec_z2())
    table = json.loads(rep)["result"]["table"]
    assert [r["dim_H"] for r in table] == [cohomology(expected, n).dim_H for n in (1, 2)]
    assert [r["dim_cochains"] for r in table] == [3, 9]
    assert cu.objects == expected.objects


def test_unitalize_algebra(capsys):
    code, out, _ = invoke(capsys, "unitalize", DATA / "zero2.cat", "--algebra", "zero2", "--bimodule", "nil_both")
    assert code == 0
    pf = parse(out)
    (a,) = pf.algebras.values()
    assert a.dim == 3 and a.unit_coords == (0, 0, 1)
    assert len(pf.bimodules) == 1


# -- determinism and output plumbing ---------------------------------------------


@pytest.mark.parametrize("argv", [
    ("dy", "vec_z3.cat", "--max-degree", "2"),
    ("invariance", "vec_z2.cat", "--kind", "unit"),
    ("hochschild", "dual.cat", "--bimodule", "reg"),
    ("validate", "broken_pentagon.cat"),
])
def test_reports_are_byte_identical(capsys, argv):
    args = [argv[0], DATA / argv[1], *argv[2:]]
    _, first, _ = invoke(capsys, *args)
    _, second, _ = invoke(capsys, *args)
    assert first == second and first.endswith("\n")
    assert dumps(json.loads(first)) == first


def test_out_and_quiet(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = invoke(capsys, "dy", DATA / "vec_z2.cat", "--max-degree", "1", "--out", target)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["command"] == "dy"
    code, out, _ = invoke(capsys, "dy", DATA / "vec_z2.cat", "--max-degree", "1", "--quiet")
    assert code == 0 and out == ""


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.cat"
    bad.write_text((DATA / "vec_z2.cat").read_text().replace("tensor g e = g", "tensor g h = g"))
    code, out, err = invoke(capsys, "validate", bad)
    assert code == 2 and out == ""
    assert "bad.cat:11:12: resolution error" in err


def test_budget_error_exit_code(capsys):
    code, _, err = invoke(capsys, "dy", DATA / "vec_z2.cat", "--max-degree", "4", "--cap", "4")
    assert code == 2 and "BudgetError" in err


def test_usage_errors(capsys):
    code, _, err = invoke(capsys, "dy", DATA / "vec_z2.cat", "--functor", "nope")
    assert code == 2 and "nope" in err
    code, _, _ = invoke(capsys, "dy", DATA / "missing.cat")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 2


def test_canonical_scalars():
    from fractions import Fraction
    assert canonical({"a": (Fraction(1, 2), Fraction(4, 2))}) == {"a": ["1/2", "2"]}


def test_console_script_honours_no_color(tmp_path):
    bad = tmp_path / "bad.cat"
    bad.write_text("field Q\nfoo\n")
    env = dict(os.environ, NO_COLOR="1")
    proc = subprocess.run([sys.executable, "-m", "dycoh.cli", "dy", str(DATA / "vec_z2.cat"), "--functor", "x"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 2
    assert "\033[" not in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "dycoh.cli", "validate", str(bad)], capture_output=True, text=True,
                          env=env)
    assert proc.returncode == 2 and "bad.cat:2:1: syntax error" in proc.stderr
