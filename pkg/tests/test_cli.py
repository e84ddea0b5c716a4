import csv
import io
import json
import subprocess
import sys

import mpmath
import pytest

from zetaforms.cli import (
    EXIT_INCONCLUSIVE,
    EXIT_INVALID,
    EXIT_OK,
    GOLDEN_PATH,
    RunConfig,
    InvalidParameters,
    compare_golden,
    load_golden,
    run,
)
from zetaforms.certify import reproduce
from zetaforms.exactnum import PrecisionContext, parse_rational
from zetaforms.formbuilder import FormParameters, build_form


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def test_form_schema_and_roundtrip():
    code, text = invoke("form", "-a", "3", "-b", "1", "-c", "3", "-n", "1")
    assert code == EXIT_OK
    report = json.loads(text)
    assert {"params", "A0", "As", "I", "residual"} <= set(report)
    _, form = build_form(FormParameters(3, 1, 3, 1))
    assert parse_rational(report["A0"]) == form.A0
    assert {int(s): parse_rational(v) for s, v in report["As"].items()} == form.As
    assert mpmath.mpf(report["residual"]["value"]) < mpmath.mpf(10) ** (12 - report["digits"])
    assert report["I"]["value"].startswith("0.00158581042434287601571030931300055")


def test_lemma1_command():
    code, text = invoke("lemma1", "-a", "3", "-b", "1", "-c", "3", "--n-max", "6")
    report = json.loads(text)
    assert code == EXIT_OK and report["status"] == "PASS"
    assert all(row["status"] == "PASS" and row["nuMatchesPhi"] for row in report["rows"])
    assert len(report["rows"]) == 6


def test_asymptotics_command():
    code, text = invoke("asymptotics", "-a", "7", "-b", "1", "-c", "3")
    report = json.loads(text)
    assert code == EXIT_OK
    assert round(float(report["mu1"]["value"]), 5) == 3.02472
    assert report["condition19"] is True
    assert mpmath.mpf(report["boundSharp"]["value"]) <= mpmath.mpf(report["boundSimple"]["value"])
    for key in ("mu0", "mu1", "mu", "eta", "kappa", "boundSimple", "boundSharp"):
        assert key in report


def test_ladder_csv_columns(tmp_path):
    target = tmp_path / "ladder.csv"
    code, text = invoke("ladder", "-a", "3", "-b", "1", "-c", "3", "--n", "5", "10",
                        "--format", "csv", "--output", str(target))
    assert code == EXIT_OK and text == ""
    rows = list(csv.reader(target.open()))
    assert rows[0] == ["n", "logAbsI_over_n", "kappa", "gap"]
    assert [r[0] for r in rows[1:]] == ["5", "10"]


def test_output_is_written_atomically(tmp_path):
    target = tmp_path / "nested" / "form.json"
    code, _ = invoke("form", "-a", "3", "-b", "1", "-c", "3", "-n", "1", "--output", str(target))
    assert code == EXIT_OK
    assert json.loads(target.read_text())["params"]["n"] == 1
    assert [p.name for p in target.parent.iterdir()] == ["form.json"]


def test_text_format():
    code, text = invoke("form", "-a", "3", "-b", "1", "-c", "3", "-n", "1", "--format", "text")
    assert code == EXIT_OK and "A0: " in text


@pytest.mark.parametrize("argv", [
    ("form", "-a", "4", "-b", "1", "-c", "3", "-n", "1"),
    ("form", "-a", "3", "-b", "1", "-c", "3", "-n", "0"),
    ("form", "-a", "3", "-b", "1", "-c", "3", "-n", "1", "--digits", "10"),
    ("certify",),
    ("certify", "-a", "145"),
])
def test_invalid_parameters(argv):
    code, _ = invoke(*argv)
    assert code == EXIT_INVALID


def test_argparse_errors_exit_with_invalid_code():
    with pytest.raises(SystemExit) as info:
        invoke("form", "-a", "3")
    assert info.value.code == EXIT_INVALID


def test_env_digits(monkeypatch):
    monkeypatch.setenv("ZETAFORMS_DIGITS", "40")
    _, text = invoke("form", "-a", "3", "-b", "1", "-c", "3", "-n", "1")
    assert json.loads(text)["digits"] == 40
    monkeypatch.setenv("ZETAFORMS_DIGITS", "many")
    assert invoke("form", "-a", "3", "-b", "1", "-c", "3", "-n", "1")[0] == EXIT_INVALID


def test_run_config_validation():
    with pytest.raises(InvalidParameters):
        RunConfig(command="form", digits=5)
    with pytest.raises(InvalidParameters):
        RunConfig(command="form", format="xml")


def test_certify_theorem1_against_golden():
    code, text = invoke("certify", "--theorem", "1")
    report = json.loads(text)
    assert code == EXIT_OK and report["verdict"] == "PASS"
    assert report["golden"] == {"checked": True, "mismatches": []}
    assert len(report["items"]) == 3


def test_certify_theorem3_reports_both_pairs():
    code, text = invoke("certify", "--theorem", "3")
    report = json.loads(text)
    assert code == EXIT_OK
    params = [item["certificate"]["params"] for item in report["items"]]
    assert [(p["a"], p["c"]) for p in params] == [(145, 21), (1971, 131)]


def test_certify_suboptimal_c_runs():
    code, text = invoke("certify", "-a", "145", "-c", "131")
    report = json.loads(text)
    assert code == EXIT_INCONCLUSIVE
    assert report["deltaBound"]["digits"] == 30


def test_golden_mismatch_detected():
    rep = reproduce(1, PrecisionContext(80))
    golden = load_golden()
    label = rep.items[0].label
    golden["theorem1"][label]["kappa"] = "1.0"
    assert any(label in m for m in compare_golden(rep, golden))


def test_golden_regeneration_needs_explicit_flag(tmp_path):
    path = tmp_path / "golden.json"
    code, text = invoke("certify", "--theorem", "1", "--golden-path", str(path))
    assert code == EXIT_OK and json.loads(text)["golden"] == {"checked": False}
    assert not path.exists()
    invoke("certify", "--theorem", "1", "--golden-path", str(path), "--regenerate-golden")
    stored = json.loads(path.read_text())
    assert stored["theorem1"] == load_golden(GOLDEN_PATH)["theorem1"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zetaforms", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "zetaforms" in proc.stdout
