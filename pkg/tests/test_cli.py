import json

import numpy as np
import pytest

from ideaopt.cli import main
from ideaopt.records import Archive


def test_run_writes_all_outputs(tmp_path, capsys):
    assert main(["run", "--problem", "paraboloid:3", "--algo", "idea", "--budget", "5000",
                 "--seed", "1", "--out", str(tmp_path)]) == 0
    stem = tmp_path / "paraboloid_idea_s1"
    best = json.loads((tmp_path / "paraboloid_idea_s1_best.json").read_text())
    assert best["best_f"] <= 1e-4 and best["evaluations"] <= 5000
    trace = (tmp_path / "paraboloid_idea_s1_trace.csv").read_text().splitlines()
    assert trace[0] == "evaluations,best_f"
    assert len(Archive.read_jsonl(f"{stem}_archive.jsonl")) >= 1
    # the resolved parameter file can be fed back in
    assert main(["run", "--problem", "paraboloid:3", "--algo", "idea", "--budget", "5000",
                 "--seed", "1", "--params", f"{stem}_params.ini",
                 "--out", str(tmp_path / "again")]) == 0
    again = json.loads((tmp_path / "again" / "paraboloid_idea_s1_best.json").read_text())
    assert again == best


@pytest.mark.parametrize("argv", [
    ["run", "--problem", "tandem", "--algo", "idea", "--budget", "100"],
    ["run", "--problem", "cassini1", "--algo", "idea", "--budget", "0"],
    ["run", "--problem", "cassini1", "--algo", "pso", "--budget", "100"],
])
def test_bad_invocations_exit_nonzero(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_malformed_parameter_file(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[de]\nF = fast\n")
    code = main(["run", "--problem", "paraboloid:2", "--algo", "de", "--budget", "100",
                 "--params", str(bad), "--out", str(tmp_path)])
    assert code == 2 and "de.F" in capsys.readouterr().err
    bad.write_text("[pso]\nw = 0.7\n")
    assert main(["run", "--problem", "paraboloid:2", "--algo", "de", "--budget", "100",
                 "--params", str(bad), "--out", str(tmp_path)]) == 2


def test_bench_rows_and_reproducibility(capsys):
    argv = ["bench", "--problem", "rastrigin:2", "--algo", "idea,de", "--runs", "5",
            "--budgets", "500,2000", "--seed", "3"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    lines = first.splitlines()
    assert len(lines) == 1 + 4
    for line in lines[1:]:
        fields = line.split(",")
        assert 0 <= int(fields[5]) <= 5 and fields[-1] == ""
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_bench_best_found_reference(capsys):
    assert main(["bench", "--problem", "rastrigin:2", "--algo", "mbh", "--runs", "3",
                 "--budgets", "800", "--f-ref", "best-found"]) == 0
    row = capsys.readouterr().out.splitlines()[1].split(",")
    assert int(row[5]) >= 1


def test_outputs_default_to_the_data_directory(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("IDEAOPT_DATA_DIR", str(tmp_path))
    assert main(["run", "--problem", "paraboloid:2", "--algo", "mbh", "--budget", "300"]) == 0
    assert (tmp_path / "paraboloid_mbh_s0_best.json").exists()


def test_analyze_a_single_record(tmp_path, capsys):
    from ideaopt.records import MinimumRecord
    path = tmp_path / "a.jsonl"
    Archive([MinimumRecord(np.array([0.2, 0.4]), 1.5, 30, "harvest")]).write_jsonl(path, "x")
    out = tmp_path / "levels.csv"
    assert main(["analyze", "--archive", str(path), "--best-known", "0.2,0.4",
                 "--out", str(out)]) == 0
    assert out.read_text().splitlines() == ["id,f,level,d_il,d_tl", "0,1.5,1,,0.0"]
    assert "level 1: 1 minima" in capsys.readouterr().out


def test_samplesize(capsys):
    assert main(["samplesize"]) == 0
    assert capsys.readouterr().out.strip() == "385"
    assert main(["samplesize", "--d-err", "0.1"]) == 0
    assert capsys.readouterr().out.strip() == "97"
    with pytest.raises(SystemExit):
        main(["samplesize", "--help"])
    text = capsys.readouterr().out
    assert "385" in text and "175" in text
