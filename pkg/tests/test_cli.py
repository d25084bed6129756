"""Command-line behaviour: golden outputs, exit codes, JSON reports, poly round trips.

Set FINFTY_UPDATE_GOLDEN=1 to rewrite the golden files from the current output.
"""

import json
import os
import random
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from finfty import cli, textio
from finfty.poly import polynomial_ring, random_poly
from finfty.scalars import cyclotomic

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"
PAIRS = GOLDEN / "pairs"

# (golden name, argv, exit code); "@name" expands to a pair file
CASES = [
    ("axioms_polygon4", ["axioms", "polygon4"], 0),
    ("axioms_finf3", ["axioms", "Finf^3"], 0),
    ("order_polygon4", ["order", "polygon4.finalg"], 0),
    ("dim_polygon4", ["dim", "polygon4"], 0),
    ("dim_lexmax3", ["dim", "lexmax(3)"], 0),
    ("dual_polygon2", ["dual", "polygon(2)"], 0),
    ("join_polygon4", ["join", "polygon4", "e0", "e1"], 0),
    ("join_top", ["join", "polygon4", "v0", "v1"], 0),
    ("polygon_3", ["polygon", "--n", "3"], 0),
    ("polygon_2_dump", ["polygon", "--n", "2", "--dump"], 0),
    ("coproduct_finf", ["coproduct", "Finf", "Finf"], 0),
    ("product_finf", ["product", "Finf", "Finf"], 0),
    ("tensor_literal", ["tensor", "polygon(2)", "Finf", "--method", "literal"], 0),
    ("tensor_polygons", ["tensor", "polygon(2)", "polygon(2)"], 0),
    ("sym_polygon2", ["sym", "polygon(2)", "--n", "2"], 0),
    ("pclosure_finf", ["pclosure", "Finf"], 0),
    ("funring_polygon2", ["funring", "polygon(2)", "--n", "1"], 0),
    ("congruence_poly", ["congruence", "--pairs", "@x_one", "--bound", "3",
                         "--query", "1+x ~ 1", "--query", "x ~ -1"], 0),
    ("congruence_sample", ["congruence", "--pairs", "@one_plus_x", "--bound", "2",
                           "--sample", "4", "--seed", "3"], 0),
    ("congruence_polygon", ["congruence", "polygon(2)", "--pairs", "@polygon_v"], 0),
    ("classify_product", ["classify", "FinfxFinf.finalg", "--pairs", "@finfxfinf_proj"], 0),
    ("classify_nil2", ["classify", "nil2"], 0),
    ("decompose_product", ["decompose", "Finf^2"], 0),
    ("decompose_nil2", ["decompose", "nil2"], 0),
    ("spec_nil2", ["spec", "nil2"], 0),
    ("spec_finf2", ["spec", "Finf^2"], 0),
    ("krull", ["krull", "--n-max", "2", "--no-verify"], 0),
    ("krull_two_variable", ["krull", "--n-max", "1", "--no-verify", "--two-variable"], 0),
    ("catalog_list", ["catalog", "--n", "2"], 0),
    ("catalog_family13", ["catalog", "--family", "13", "--n", "2", "--bound", "4"], 0),
    ("catalog_family1", ["catalog", "--family", "1", "--verify", "--bound", "4"], 0),
    ("verify_catalog", ["verify-catalog", "--n-max", "1", "--bound", "4"], 0),
    ("fraction_field_finf2", ["fraction-field", "Finf^2"], 0),
    ("fraction_field_nil2", ["fraction-field", "nil2"], 1),
    ("maxcong_nil2", ["maxcong", "nil2", "--ideal", "0 x -x"], 0),
    ("maxcong_polygon", ["maxcong", "polygon(2)"], 0),
    ("axioms_signblind", ["axioms", "signblind.finalg"], 1),
    ("unknown_structure", ["dim", "nosuch"], 2),
    ("bad_pairs", ["congruence", "--pairs", "@bad"], 2),
]


def case_argv(argv):
    out = []
    for a in argv:
        if a.startswith("@"):
            out.append(str(PAIRS / f"{a[1:]}.txt"))
        elif a.endswith(".finalg") and (GOLDEN / a).exists():
            out.append(str(GOLDEN / a))
        else:
            out.append(a)
    return out


def run(argv, capsys):
    code = cli.main(case_argv(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


@pytest.mark.parametrize("name,argv,code", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, code, capsys):
    got, out, err = run(argv, capsys)
    path = GOLDEN / f"{name}.txt"
    if os.environ.get("FINFTY_UPDATE_GOLDEN"):
        path.write_text(out)
    assert got == code, err
    assert out == path.read_text()
    if code == 2:
        assert out == "" and err.startswith("error:")


@pytest.mark.parametrize("name,argv,code", CASES, ids=[c[0] for c in CASES])
def test_json_report_schema(name, argv, code, capsys):
    got, out, _ = run(argv + ["--json"], capsys)
    assert got == code
    rep = json.loads(out)
    jsonschema.validate(rep, textio.REPORT_SCHEMA)
    assert rep["command"] == argv[0]
    if code == 2:
        assert rep["verified"] is False and "error" in rep["witness"]


def test_json_flags_carry_witness(capsys):
    _, out, _ = run(["classify", "nil2", "--json"], capsys)
    rep = json.loads(out)
    assert rep["flags"]["is_prime"] is False
    assert rep["witness"]["is_cancellative"]["elements"] == ["x", "0", "x"]


def test_global_options_before_verb(capsys):
    got, out, _ = run(["--json", "--bound", "2", "congruence", "--pairs", "@x_one"], capsys)
    assert got == 0
    assert json.loads(out)["bound"] == 2


def test_console_script_module_entry():
    r = subprocess.run([sys.executable, "-m", "finfty", "dim", "polygon(3)"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.strip() == "dimension 2"


def test_poly_round_trip_fuzz():
    rng = random.Random(1234)
    rings = [polynomial_ring("x"), polynomial_ring("x1,x2,x3"),
             polynomial_ring("x,y", cyclotomic(3))]
    for i in range(1000):
        R = rings[i % len(rings)]
        p = random_poly(R, rng)
        text = str(p)
        q = textio.parse_poly(text, R)
        assert q == p, text
        assert str(q) == text
