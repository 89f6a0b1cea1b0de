import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from helpcore import cli
from helpcore.ctbl import serialize_table, table_to_json

REPORT_SCHEMA = json.loads(resources.files("helpcore.data").joinpath("report.schema.json").read_text())


def run(*argv):
    out = io.StringIO()
    args = cli.build_parser().parse_args(list(argv))
    code = cli.dispatch(args, out)
    return code, out.getvalue()


def test_verify_a5_exit_zero():
    code, text = run("verify", "A5")
    assert code == 0
    assert text.strip().endswith("ZC1 verified")


def test_verify_a7_exit_two():
    code, text = run("verify", "A7")
    assert code == 2
    assert "critical [[1],[2,-1]]" in text
    assert text.strip().splitlines()[-1] == "critical distributions remain at orders 4, 6"


def test_json_report_validates_and_is_deterministic():
    code1, a = run("verify", "A7", "--format", "json")
    code2, b = run("verify", "A7", "--format", "json")
    assert code1 == code2 == 2
    assert a == b
    doc = json.loads(a)
    jsonschema.validate(doc, REPORT_SCHEMA)
    by_order = {o["order"]: o for o in doc["orders"]}
    assert by_order[4]["critical"] == [[[1], [2, -1]]]
    assert {r["killed_by"] for r in by_order[6]["removed"]} == {"block_inequality"}
    # every removal names its distribution and the witness
    assert all(r["distribution"] and "xi=" in r["reason"] for r in by_order[6]["removed"])


def test_json_report_with_padic_filter():
    code, text = run("verify", "150_5", "--orders", "10", "--padic", "5:any:kernel", "--format", "json")
    doc = json.loads(text)
    jsonschema.validate(doc, REPORT_SCHEMA)
    o10 = [o for o in doc["orders"] if o["order"] == 10][0]
    assert o10["status"] == "all trivial"
    assert o10["removed"] and all(r["killed_by"] == "padic_filter" for r in o10["removed"])
    assert code == 0


def test_order_not_dividing_exponent_is_rejected(capsys):
    assert cli.main(["verify", "A7", "--orders", "8"]) == 1
    assert "exponent" in capsys.readouterr().err


def test_unknown_table(capsys):
    assert cli.main(["verify", "nosuchgroup"]) == 1
    assert "bundled" in capsys.readouterr().err


def test_malformed_distribution(capsys):
    assert cli.main(["multiplicities", "A7", "--char", "2", "--order", "6", "--dist", "[[1],[0,1]]"]) == 1
    assert "needs" in capsys.readouterr().err


def test_multiplicities_trivial_distribution():
    code, text = run("multiplicities", "A7", "--char", "2", "--order", "2", "--dist", "[[1]]")
    assert code == 0
    assert "mu(z2^0) = 4" in text and "mu(z2^1) = 2" in text


def test_multiplicities_flag_negative_entries():
    code, text = run("multiplicities", "A7", "--char", "2", "--order", "4", "--dist", "[[1],[5,-4]]")
    assert code == 2
    assert "not a non-negative integer" in text


def test_block_command_verdicts():
    code, text = run("block", "A7", "--leaf", "2", "--prime", "3", "--order", "6", "--dist", "[[1],[0,1],[2,-1,1,-1]]", "--xi", "1")
    assert code == 2
    assert text.strip().endswith("contradiction")
    code, text = run("block", "A7", "--leaf", "2", "--prime", "3", "--order", "6", "--dist", "[[1],[1,0],[0,0,0,1]]")
    assert code == 0
    assert text.strip().endswith("consistent")


def test_block_json_output():
    code, text = run(
        "block", "A7", "--leaf", "2", "--prime", "3", "--order", "6", "--dist", "[[1],[0,1],[2,-1,1,-1]]", "--format", "json"
    )
    doc = json.loads(text)
    assert doc["verdict"] == "contradiction"
    assert {"xi": 1, "zeta": 1, "value": "-1"} in doc["values"]


def test_block_ambiguous_selection(capsys):
    assert cli.main(["block", "J1", "--prime", "3", "--order", "6", "--dist", "[[1],[1],[0,0,1]]"]) == 1
    assert "--block" in capsys.readouterr().err


def test_export_system():
    code, text = run("export-system", "A7", "--order", "12", "--powers", "[[1],[1,0],[0,1],[0,0,0,1]]")
    assert code == 0
    assert "variables 2a 3a 3b 4a 6a" in text
    assert "mod " in text
    _, loose = run("export-system", "A7", "--order", "12", "--powers", "[[1],[1,0],[0,1],[0,0,0,1]]", "--no-congruences")
    assert "\nmod " not in loose


def test_validate(tmp_path, get_table):
    assert run("validate", "A6") == (0, "A6: valid\n")
    doc = table_to_json(get_table("A5"))
    doc["characters"][2][2] = {"n": 1, "terms": [[7, 1, 0]]}
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, text = run("validate", str(bad))
    assert code == 1
    assert "problems" in text


def test_stdin_and_module_entry_point(get_table):
    proc = subprocess.run(
        [sys.executable, "-m", "helpcore", "verify", "-", "--orders", "2,3"],
        input=serialize_table(get_table("A5")),
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "ZC1 verified" in proc.stdout


def test_extended_solve_reports_nonrational_solutions():
    code, text = run("solve", "A5", "--order", "6", "--extended", "30")
    assert "non-rational" in text


def test_parse_padic_forms(get_table):
    t = get_table("A7")
    h = cli.parse_padic(t, "3:3a/3b:user")
    assert h.prime == 3 and h.anchors == (t.class_index("3a"), t.class_index("3b"))
    assert cli.parse_padic(t, "2:any").anchors is None
    with pytest.raises(cli.UsageError):
        cli.parse_padic(t, "3:9z")


@pytest.mark.parametrize(
    "char,spectrum",
    [
        # diag(1, zeta, zeta^2, -zeta, -zeta^2) with zeta = z6^2
        (2, ["1", "z6^1", "z6^2", "z6^4", "z6^5"]),
        # diag(1, zeta, zeta^2, -1, -1)
        (3, ["1", "z6^2", "z6^3", "z6^3", "z6^4"]),
    ],
)
def test_a6_eigenvalues(char, spectrum):
    code, text = run("multiplicities", "A6", "--char", str(char), "--order", "6", "--dist", "[[1],[0,1],[-2,2,1]]")
    assert code == 0
    assert f"eigenvalues: {', '.join(spectrum)}" in text
