import json
import subprocess
import sys

import pytest

from galois_atlas.algebra import format_q
from galois_atlas.atlas import load_atlas
from galois_atlas.cli import main, parse_curve_spec, run_batch
from galois_atlas.diophantine import PlaneCurve
from galois_atlas.galois import GaloisReport
from galois_atlas.tables import EXAMPLE_MODEL

DATA = load_atlas.__globals__["_atlas_text"](None)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_50a1(capsys):
    code, out, _ = run(capsys, "analyze", "--curve", "1,0,1,-126,-552", "--p-bound", "3000")
    assert code == 0
    doc = json.loads(out)
    assert doc["smallest_surjective_prime"] == 7
    assert doc["j"] == "-349938025/8"
    assert GaloisReport.from_dict(doc).to_dict() == doc


def test_analyze_cm_exit_code(capsys):
    code, _, err = run(capsys, "analyze", "--j", "0")
    assert code == 2 and "CM j-invariant" in err


def test_analyze_negative_j_is_deterministic(capsys):
    outs = [run(capsys, "analyze", "--j", "-25/2", "--p-bound", "2000") for _ in range(2)]
    assert outs[0] == outs[1]
    assert outs[0][0] == 0
    assert json.loads(outs[0][1])["smallest_surjective_prime"] in (2, 3, 5, 7)


def test_analyze_pretty_and_output_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "analyze", "--curve", "0,0,1,-1,0", "--p-bound", "500", "-o", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["smallest_surjective_prime"] == 2
    code, out, _ = run(capsys, "analyze", "--curve", "0,0,1,-1,0", "--p-bound", "500", "--pretty")
    assert "smallest surjective  2" in out


@pytest.mark.parametrize("argv", [
    ["analyze", "--curve", "1,2,3"],
    ["analyze", "--curve", "1,0,1,-126,zz"],
    ["analyze", "--j", "3/0"],
    ["analyze"],
    ["analyze", "--bogus"],
    ["model", "3.4.0.1", "7.8.0.1"],
    ["genus", "3.4.0.1x9.9.9.9"],
    ["search", "--model", "x^2 + $", "--height", "3"],
    ["localsolve", "--hyperelliptic", "1,2,1", "--p", "3"],
    ["verify-paper", "--only", "no-such-check"],
])
def test_usage_errors_exit_1(argv):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse-level errors
        code = exc.code
    assert code == 1


def test_parse_error_reports_column():
    with pytest.raises(ValueError, match="column 12"):
        parse_curve_spec("1,0,1,-126,5/")


def test_unknown_label_lists_valid_labels(capsys):
    code, _, err = run(capsys, "model", "3.4.0.1", "7.8.0.1")
    assert code == 1 and "5.5.0.1" in err and "9.27.0.1" in err


def test_model_command(capsys):
    code, out, _ = run(capsys, "model", "3.4.0.1", "5.5.0.1")
    assert code == 0
    assert PlaneCurve.parse(out.strip()).poly == PlaneCurve.parse(EXAMPLE_MODEL).poly
    code, out, _ = run(capsys, "model", "3.4.0.1", "5.5.0.1", "--json")
    assert json.loads(out)["labels"] == ["3.4.0.1", "5.5.0.1"]


@pytest.mark.parametrize("spec,genus", [("3.4.0.1x5.6.0.1", 1), ("3.4.0.1x5.10.0.1", 2), ("4.4.0.1", 0)])
def test_genus_command(capsys, spec, genus):
    code, out, _ = run(capsys, "genus", spec)
    assert code == 0 and out.strip() == str(genus)


def test_localsolve_sextic(capsys):
    code, out, _ = run(capsys, "localsolve", "--hyperelliptic", "6,-9,-18,33,9,-36,-12", "--p", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"] == "empty"
    assert set(doc) == {"model", "p", "result", "witness", "depth"}


def test_localsolve_plane(capsys):
    code, out, _ = run(capsys, "localsolve", "--labels", "3.4.0.1", "5.5.0.1", "--p", "3", "--max-depth", "2")
    assert code == 0 and json.loads(out)["result"] == "smooth-point"


def test_search_command(capsys):
    code, out, _ = run(capsys, "search", "--labels", "3.4.0.1", "5.5.0.1", "--height", "100", "--pretty")
    assert code == 0
    assert "(-81 : -13 : 1)" in out and "(1 : 0 : 0)" in out
    code, out, _ = run(capsys, "search", "--model", "x^2 + y^2 - z^2", "--height", "5")
    doc = json.loads(out)
    assert ["3/5", "4/5", "1"] in doc["points"]


def test_atlas_commands(capsys):
    code, out, _ = run(capsys, "atlas", "list")
    assert code == 0 and len(out.strip().splitlines()) == 13
    code, out, _ = run(capsys, "atlas", "validate", "--quick")
    assert code == 0


# ---------------------------------------------------------------------------
# batch


def _six_j_lines(atlas):
    return [f"j={format_q(j)}" for j in sorted(atlas.exceptional_j)]


def test_batch_six_j_histogram(atlas, tmp_path):
    summary = run_batch(["# the six exceptional j"] + _six_j_lines(atlas), tmp_path / "out", p_bound=3000)
    assert summary["histogram"] == {"7": 6}
    assert summary["curves"] == 6 and summary["failures"] == []
    files = sorted(p.name for p in (tmp_path / "out").iterdir())
    assert files == [f"curve_000{k}.json" for k in range(1, 7)] + ["summary.json"]


def test_batch_empty_input(tmp_path):
    summary = run_batch([], tmp_path / "out")
    assert summary == {"curves": 0, "analyzed": 0, "histogram": {}, "failures": []}
    assert json.loads((tmp_path / "out" / "summary.json").read_text()) == summary


def test_batch_flags_cm_line_and_continues(tmp_path):
    lines = ["1,0,1,-126,-552", "j=1728", "0,0,1,-1,0"]
    summary = run_batch(lines, tmp_path / "out", p_bound=2000)
    assert summary["curves"] == 3 and summary["analyzed"] == 2
    assert [f["line"] for f in summary["failures"]] == [2]
    assert summary["failures"][0]["status"] == "cm-rejected"
    doc = json.loads((tmp_path / "out" / "curve_0002.json").read_text())
    assert doc["status"] == "cm-rejected"


def test_batch_aborts_before_work_on_bad_lines(tmp_path, capsys):
    src = tmp_path / "in.csv"
    src.write_text("1,0,1,-126,-552\nnot a curve\n0,0,1,-1,0\n1,2\n")
    code, _, err = run(capsys, "batch", str(src), "--out", str(tmp_path / "out"))
    assert code == 1
    assert "line 2" in err and "line 4" in err
    assert not (tmp_path / "out").exists()


def test_batch_output_independent_of_workers(atlas, tmp_path):
    lines = _six_j_lines(atlas) + ["1,0,1,-126,-552", "j=0", "0,1,1,2,4"]
    blobs = []
    for w in (1, 2, 4):
        out = tmp_path / f"w{w}"
        run_batch(lines, out, workers=w, p_bound=1500)
        blobs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert blobs[0] == blobs[1] == blobs[2]


def test_batch_reports_round_trip(tmp_path):
    run_batch(["1,0,1,-126,-552"], tmp_path, p_bound=1000)
    doc = json.loads((tmp_path / "curve_0001.json").read_text())
    assert set(doc) == {"line", "input", "status", "report"}
    assert GaloisReport.from_dict(doc["report"]).to_dict() == doc["report"]


# ---------------------------------------------------------------------------
# verify-paper


def test_verify_paper_only_six_j(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "six-j", "--json", "--p-bound", "3000")
    doc = json.loads(out)
    assert code == 0 and doc["overall"]
    assert [c["name"] for c in doc["checks"]] == ["six-j"]


def test_verify_paper_mutated_atlas_fails_only_atlas(tmp_path, monkeypatch, capsys):
    path = tmp_path / "atlas.txt"
    path.write_text(DATA.replace("2.3.0.1 | X_0(2) | 2 | 2 | 3 | 0 |", "2.3.0.1 | X_0(2) | 2 | 2 | 3 | 1 |"))
    monkeypatch.setenv("GALOIS_ATLAS_PATH", str(path))
    code, out, _ = run(capsys, "verify-paper", "--json", "--p-bound", "2000",
                       "--only", "atlas,genus,example-model,place-tables,local-solvability,six-j")
    doc = json.loads(out)
    assert code == 1 and not doc["overall"]
    failed = [c["name"] for c in doc["checks"] if not c["pass"]]
    assert failed == ["atlas"]


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "galois_atlas.cli", "genus", "3.4.0.1x5.5.0.1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "1"
