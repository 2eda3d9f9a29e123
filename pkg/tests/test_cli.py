"""End-to-end command surface: payload shapes, exit codes, determinism.

Everything runs in-process through ``main(argv)`` (which returns the exit
code); one subprocess test at the bottom exercises the installed console
script and argparse's own failure path.
"""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from trunca.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


# -- tables ---------------------------------------------------------------------


def test_roots_table(capsys):
    payload = run_json(capsys, "roots", "--type", "A2")
    rows = payload["positive_roots"]
    assert payload["rank_ss"] == 2 and len(rows) == 3
    assert [r["index"] for r in rows] == [1, 2, 3]
    assert all(r["reduced"] for r in rows)
    # the highest root of A2 has coords (1, 1) and self-dual covector
    high = next(r for r in rows if r["coords"] == [1, 1])
    assert high["covector"] == [1, 1] and high["coroot"] == [1, 1]


def test_weyl_table(capsys):
    payload = run_json(capsys, "weyl", "--type", "A2")
    assert payload["order"] == 6
    words = [e["word"] for e in payload["elements"]]
    assert words[0] == "e" and payload["longest_length"] == 3
    lengths = [e["length"] for e in payload["elements"]]
    assert lengths == sorted(lengths)


def test_refine_payload_and_determinism(capsys):
    first = run_cli(capsys, "refine", "--type", "B2", "--seed", "11")
    second = run_cli(capsys, "refine", "--type", "B2", "--seed", "11")
    assert first == second                      # byte-identical
    other = run_cli(capsys, "refine", "--type", "B2", "--seed", "12")
    assert other[1] != first[1]
    payload = json.loads(first[1])
    assert set(payload) == {"type", "seed", "polyhedron", "refinement", "degrees"}
    assert set(payload["refinement"]) == {"subset", "rep"}
    assert all(1 <= i <= 2 for i in payload["refinement"]["subset"])
    for row in payload["degrees"]:
        Fraction(row["degree"])                 # "num/den" strings re-parse


# -- pointwise commands ------------------------------------------------------------


def test_gamma_single_point(capsys):
    payload = run_json(capsys, "gamma", "--type", "A1", "--P", "",
                       "--H", "1/2", "--X", "2")
    assert payload == {"H": ["1/2"], "X": ["2/1"], "gamma": 1}


def test_gamma_vanishes_at_zero(capsys):
    payload = run_json(capsys, "gamma", "--type", "A2", "--P", "1",
                       "--H", "3/7,-2/7", "--X", "0,0")
    assert payload["gamma"] == 0


def test_gamma_batch(tmp_path, capsys):
    batch = tmp_path / "points.csv"
    batch.write_text("1/2,2\n5/2,2\n-1,2\n")
    payload = run_json(capsys, "gamma", "--type", "A1", "--P", "",
                       "--batch", str(batch))
    assert [row["gamma"] for row in payload["rows"]] == [1, 0, 0]


def test_qpsum_agreement(capsys):
    payload = run_json(capsys, "qpsum", "--type", "A1", "--P", "",
                       "--X", "6", "--q", "3")
    assert payload["equal"] is True
    assert payload["brute"] == payload["product"] == "3/1"


def test_slltrace_sweep_table(capsys):
    payload = run_json(capsys, "slltrace", "--q", "2", "--l", "3", "--sweep")
    assert (payload["m"], payload["z"]) == (7, 1)
    rows = [(r["k_lambda"], r["k_mu"], r["char_sum"], r["J"])
            for r in payload["rows"]]
    assert rows == [(1, 1, -9, "0/1"), (1, 3, 12, "1/1"),
                    (3, 1, 12, "1/1"), (3, 3, -9, "0/1")]
    assert all(r["general_position"] and r["central_ok"] for r in payload["rows"])


def test_slltrace_single_pair(capsys):
    payload = run_json(capsys, "slltrace", "--q", "3", "--l", "2",
                       "--theta-lambda", "1", "--theta-mu", "3")
    assert payload["contragredient"] is True
    assert payload["J"] == "1/1"


def test_filtercheck_both_outcomes(capsys):
    yes = run_json(capsys, "filtercheck", "--group", "SL2", "--q", "5",
                   "--theta-lambda", "1", "--theta-mu", "2")
    no = run_json(capsys, "filtercheck", "--group", "SL2", "--q", "5",
                  "--theta-lambda", "1", "--theta-mu", "3")
    assert yes["pass"] is True
    assert no["pass"] is False     # theta_mu = theta_lambda^{-1}


def test_verify_suite(capsys):
    payload = run_json(capsys, "verify", "--suite", "filtercheck")
    assert payload["ok"] is True
    assert [r["suite"] for r in payload["records"]] == ["filtercheck"] * 3
    cases = [r["case"] for r in payload["records"]]
    assert cases == sorted(cases)


def test_verify_small_sampled_suite(capsys):
    payload = run_json(capsys, "verify", "--suite", "inversion",
                       "--type", "A1", "--samples", "5", "--seed", "9")
    assert payload["ok"] is True
    assert all(r["ok"] for r in payload["records"])


# -- formats, files, config ----------------------------------------------------------


def test_csv_output(capsys):
    code, out, _ = run_cli(capsys, "roots", "--type", "A1", "--format", "csv")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header.split(",") == ["index", "coords", "covector", "coroot", "reduced"]
    assert row.split(",") == ["1", "1", "1", "2", "true"]


def test_out_path(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "weyl", "--type", "A1", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["order"] == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"q": 2, "l": 3, "sweep": True}))
    payload = run_json(capsys, "slltrace", "--config", str(cfg))
    assert payload["m"] == 7 and len(payload["rows"]) == 4
    # flags still win over the file on re-parse
    payload = run_json(capsys, "slltrace", "--config", str(cfg), "--q", "3", "--l", "2")
    assert payload["m"] == 4


# -- failure modes ----------------------------------------------------------------------


@pytest.mark.parametrize("argv", [
    ("refine", "--type", "Q9"),
    ("verify", "--suite", "nonsense"),
    ("verify", "--suite", "inversion", "--type", "E9"),
    ("gamma", "--type", "A1", "--P", "", "--H", "1/2"),        # missing --X
    ("gamma", "--type", "A2", "--P", "", "--H", "1", "--X", "0,0"),  # bad dim
    ("qpsum", "--type", "A1", "--P", "", "--X", "4", "--q", "6"),
    ("slltrace", "--q", "6", "--l", "2", "--sweep"),
    ("filtercheck", "--group", "GL2", "--q", "5",
     "--theta-lambda", "1", "--theta-mu", "2"),
])
def test_invalid_configuration_exits_2(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2
    assert "trunca:" in err


def test_config_file_validation(tmp_path, capsys):
    bad_key = tmp_path / "bad.json"
    bad_key.write_text(json.dumps({"quux": 1}))
    code, _, err = run_cli(capsys, "slltrace", "--config", str(bad_key))
    assert code == 2 and "quux" in err
    not_object = tmp_path / "list.json"
    not_object.write_text("[1, 2]")
    code, _, _ = run_cli(capsys, "slltrace", "--config", str(not_object))
    assert code == 2
    code, _, _ = run_cli(capsys, "slltrace", "--config", str(tmp_path / "nope.json"))
    assert code == 2


def test_module_errors_exit_1(capsys):
    # exponent 0 is not in general position: a module-level ValueError
    code, _, err = run_cli(capsys, "slltrace", "--q", "3", "--l", "2",
                           "--theta-lambda", "0", "--theta-mu", "1")
    assert code == 1
    assert "general position" in err


def test_console_script_and_usage_errors():
    ok = subprocess.run([sys.executable, "-m", "trunca.cli", "roots", "--type", "A1"],
                        capture_output=True, text=True)
    assert ok.returncode == 0
    assert json.loads(ok.stdout)["rank_ss"] == 1
    bad = subprocess.run([sys.executable, "-m", "trunca.cli", "nosuchcommand"],
                         capture_output=True, text=True)
    assert bad.returncode == 2
