from __future__ import annotations

import csv
import io
import json

import pytest

from listrecovery.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_text_and_json(capsys):
    code, out, _ = run(capsys, "bounds", "--rate", "1/4", "--eps", "1/2", "--ell", "2")
    assert code == 0 and "q_min" in out and "1024" in out
    code, out, _ = run(capsys, "bounds", "--rate", "1/4", "--eps", "1/2", "--ell", "2", "--format", "json")
    doc = json.loads(out)
    assert doc["tool"] == "listrecovery" and doc["config"]["eps"] == "1/2"
    assert "workers" not in doc["config"]
    _, again, _ = run(capsys, "bounds", "--rate", "1/4", "--eps", "1/2", "--ell", "2", "--format", "json")
    assert again == out


def test_decimal_rationals_are_rejected(capsys):
    code, _, err = run(capsys, "bounds", "--rate", "1/4", "--eps", "0.5", "--ell", "2")
    assert code == 2 and "eps" in err


def test_missing_options_exit_2(capsys):
    code, _, err = run(capsys, "bounds", "--rate", "1/4")
    assert code == 2 and "--eps" in err


def test_budget_exit_3(capsys):
    code, _, err = run(capsys, "distance", "--p", "5", "--n", "12", "--k", "8", "--budget", "100")
    assert code == 3 and "budget" in err


def test_independent_n_too_small_exit_2(capsys):
    code, _, err = run(capsys, "certify-independent", "--p", "2", "--m", "3", "--n", "4", "--k", "3",
                       "--ell", "2", "--eps", "1/7")
    assert code == 2 and "agrees on 3" in err


def test_certify_then_verify_and_corrupt(tmp_path, capsys):
    path = tmp_path / "cert.json"
    code, _, _ = run(capsys, "certify-lower-bound", "--p", "5", "--n", "20", "--k", "10", "--ell", "2",
                     "--eps", "21/100", "--seed", "3", "--out", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["report"]["passed"] and doc["params"]["certified_list_size"] == 4

    code, out, _ = run(capsys, "certify-lower-bound", "--verify", str(path), "--verify-brute-force",
                       "--format", "text")
    assert code == 0 and "verification: PASS" in out

    doc["trapped"][1][0] = (doc["trapped"][1][0] + 1) % 5
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "certify-lower-bound", "--verify", str(bad), "--format", "text")
    assert code == 1
    assert "FAIL codewords" in out or "FAIL in_ball" in out

    code, _, err = run(capsys, "certify-independent", "--verify", str(path))
    assert code == 2 and "different certificate type" in err


def test_certify_independent_json(capsys):
    code, out, _ = run(capsys, "certify-independent", "--p", "2", "--m", "3", "--n", "16", "--k", "8",
                       "--ell", "2", "--eps", "1/4", "--verify-brute-force")
    doc = json.loads(out)
    assert code == 0 and doc["params"]["m"] == 3
    assert [c["name"] for c in doc["report"]["checks"]][-1] == "brute_force"


def test_mc_csv_header_and_single_list(capsys):
    code, out, _ = run(capsys, "mc", "--p", "3", "--n", "8", "--k", "2", "--ell", "1", "--eps", "1/4",
                       "--trials", "3", "--search-budget", "2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3
    assert list(rows[0]) == ["trial", "resamples", "distance", "relative_distance", "distance_event",
                             "max_list", "independent"]
    # codeword-seeded lists always catch their seed codeword
    assert all(int(r["max_list"]) >= 1 for r in rows)


def test_mc_records_budget_errors(capsys):
    code, out, _ = run(capsys, "mc", "--p", "5", "--n", "12", "--k", "8", "--trials", "2",
                       "--budget", "100", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["aggregate"]["budget_errors"] == 2


def test_recover_with_documents(tmp_path, capsys):
    from listrecovery.algebra import GF
    from listrecovery.codes import dumps_code, sample_rlc
    from listrecovery.listrec import dumps_ball, make_ball
    code = sample_rlc(GF(3), 6, 2, seed=0)
    (tmp_path / "c.txt").write_text(dumps_code(code))
    (tmp_path / "b.txt").write_text(dumps_ball(make_ball(code.field, 1, [(0,)] * 6)))
    rc, out, _ = run(capsys, "recover", "--code", str(tmp_path / "c.txt"), "--ball", str(tmp_path / "b.txt"),
                     "--format", "json")
    assert rc == 0 and json.loads(out)["list_size"] == 9


def test_lcl_check_small(capsys):
    code, out, _ = run(capsys, "lcl-check", "--p", "3", "--n", "6", "--k", "3", "--trials", "3",
                       "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["aggregate"]["violations"] == 0


@pytest.mark.parametrize("argv", [
    ("mc", "--p", "2", "--m", "4", "--n", "16", "--k", "4", "--eps", "1/4", "--trials", "4"),
    ("distance", "--p", "13", "--n", "12", "--k", "4", "--family", "rs", "--distinct", "--trials", "2"),
])
def test_output_independent_of_workers(capsys, argv):
    outs = {run(capsys, *argv, "--format", "json", "--workers", w)[1] for w in ("1", "3")}
    assert len(outs) == 1


def test_timing_goes_to_stderr(capsys):
    code, out, err = run(capsys, "bounds", "--rate", "1/4", "--eps", "1/2", "--ell", "2", "--timing")
    assert code == 0 and "wall-clock" in err and "wall-clock" not in out


def test_lcl_check_single_column_is_consistent(capsys):
    code, out, _ = run(capsys, "lcl-check", "--p", "3", "--n", "6", "--k", "3", "--b", "1", "--trials", "5",
                       "--format", "json")
    assert code == 0 and json.loads(out)["aggregate"]["violations"] == 0
