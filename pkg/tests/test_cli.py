import io
import json
import subprocess
import sys

import pytest

from liecascade.cli import run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_roots_text_and_json():
    code, out, _ = invoke("roots", "D4")
    assert code == 0 and "roots 24 (positive 12)" in out and "(1,2,1,1)" in out
    code, out, _ = invoke("roots", "D4", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["type"] == "D4" and len(doc["positives"]) == 12


def test_fold_single_and_all():
    code, out, _ = invoke("fold", "A3")
    assert code == 0 and "B2" in out
    code, out, _ = invoke("fold", "--all", "--json")
    rows = json.loads(out)
    assert code == 0 and rows
    code, _, _ = invoke("fold")
    assert code == 2
    code, _, _ = invoke("fold", "A3", "--all")
    assert code == 2


def test_cascade():
    code, out, _ = invoke("cascade", "D5")
    assert code == 0 and "span 4 + kernel 1 = rank 5" in out


def test_normal_form_classifies_d_sets():
    code, out, _ = invoke("normal-form", "--type", "D5", "--set", "[[1,2,2,1,1],[0,0,1,1,1]]", "--nu", "flip", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["form"] == {"index": 3, "kind": "Form2"}
    code, _, err = invoke("normal-form", "--type", "D5", "--set", "1,2", "--nu", "flip")
    assert code == 2 and err.startswith("error:")


def test_verify_subcommands():
    assert invoke("verify", "counts", "--type", "A3")[0] == 0
    assert invoke("verify", "strings", "--type", "B3")[0] == 0
    assert invoke("verify", "parity", "--type", "D6")[0] == 0
    code, out, _ = invoke("verify", "prop71", "--type", "D5", "--json")
    assert code == 0 and json.loads(out)["counterexamples"] == []
    code, out, _ = invoke("verify", "star", "--type", "A3", "--json")
    assert code == 0 and json.loads(out)["failed"] == 0


def test_verify_star_reports_failure_with_exit_one():
    code, out, err = invoke("verify", "star", "--type", "D4", "--json", "--limit", "1")
    doc = json.loads(out)
    assert code == 1 and doc["failed"] > 0 and len(doc["failures"]) == 1
    assert "verification failed" in err


def test_certify():
    code, out, _ = invoke("certify", "--list")
    assert code == 0 and len(out.strip().splitlines()) == 20
    code, out, _ = invoke("certify", "--scenario", "d5-form2", "--json")
    assert code == 0 and json.loads(out)["case_path"] == "InnerOuter_D_form2"
    code, out, _ = invoke("certify", "--type", "E6", "--sigma1", "id", "--sigma2", "flip", "--json")
    assert code == 0 and json.loads(out)["case_path"] == "InnerOuter_E6"
    code, _, err = invoke("certify", "--type", "A3", "--sigma1", '{"word":[1]}', "--sigma2", '{"word":[2]}')
    assert code == 2 and "error" in err


def test_subgroups():
    code, out, _ = invoke("subgroups", "4", "--json")
    subs = json.loads(out)
    assert code == 0 and len(subs) == 8
    assert subs[-1]["classification"] == "TwoByR{4}"


@pytest.mark.parametrize(
    "argv",
    [["roots", "X9"], ["roots", "D3"], ["subgroups", "0"], ["verify", "star", "--type", "E8"], ["nonsense"], ["roots"]],
)
def test_usage_errors_exit_two(argv):
    assert invoke(*argv)[0] == 2


def test_jobs_env_validated(monkeypatch):
    monkeypatch.setenv("LIECASCADE_JOBS", "zero")
    code, _, err = invoke("roots", "A2")
    assert code == 2 and "LIECASCADE_JOBS" in err
    monkeypatch.setenv("LIECASCADE_JOBS", "2")
    code, out_env, _ = invoke("verify", "star", "--type", "A3", "--json")
    monkeypatch.delenv("LIECASCADE_JOBS")
    code1, out_one, _ = invoke("verify", "star", "--type", "A3", "--json", "--jobs", "1")
    assert code == code1 == 0 and out_env == out_one


def test_output_is_deterministic_for_a_fixed_seed():
    a = invoke("verify", "prop71", "--type", "D5", "--json", "--seed", "3")[1]
    b = invoke("verify", "prop71", "--type", "D5", "--json", "--seed", "3")[1]
    assert a == b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "liecascade", "roots", "A2", "--json"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["type"] == "A2"
