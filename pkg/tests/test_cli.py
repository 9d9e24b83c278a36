"""End-to-end command-line behavior: exit codes, determinism, formats."""

import json
import math

import numpy as np
import pytest

from schatten_lab import blockmat, cli, inequality_lab as iq
from schatten_lab.cli import main


def _read_jsonl(path):
    with open(path, "r", encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def _body(path):
    """Report body: every line after the timestamp header."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    return lines[1:]


def test_fuzz_writes_records_and_summary(tmp_path, capsys):
    out = tmp_path / "thm1.jsonl"
    code = main(["fuzz", "--inequality", "thm1", "--trials", "20",
                 "--dims", "2,3", "--p-grid", "1,2,3,inf",
                 "--seed", "1", "--out", str(out)])
    assert code == 0
    rows = _read_jsonl(out)
    assert rows[0]["type"] == "header" and rows[0]["seed"] == 1
    records = rows[1:]
    assert len(records) == 20 * 4
    assert all(r["pass"] for r in records)
    assert {r["p"] for r in records} == {1, 2, 3, "inf"}
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["failures"] == 0
    assert summary["trials"] == 20
    assert summary["p_grid"] == [1, 2, 3, "inf"]


def test_fuzz_deterministic_body(tmp_path):
    args = ["fuzz", "--inequality", "gross", "--trials", "50",
            "--seed", "7", "--p-grid", "default"]
    out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert _body(out1) == _body(out2)


def test_fuzz_parallel_body_matches(tmp_path):
    args = ["fuzz", "--inequality", "lemma3", "--trials", "40", "--seed", "3"]
    out1, out2 = tmp_path / "s.jsonl", tmp_path / "p.jsonl"
    assert main(args + ["--out", str(out1), "--jobs", "1"]) == 0
    assert main(args + ["--out", str(out2), "--jobs", "2"]) == 0
    assert _body(out1) == _body(out2)


def test_fuzz_records_replay(tmp_path):
    out = tmp_path / "thm2.jsonl"
    assert main(["fuzz", "--inequality", "thm2", "--trials", "10",
                 "--dims", "2", "--p-grid", "1.5,3", "--seed", "13",
                 "--out", str(out)]) == 0
    spec = iq.FuzzSpec(inequality="thm2", trials=10, dims=(2,),
                       p_grid=(1.5, 3.0), seed=13)
    for obj in _read_jsonl(out)[1:]:
        rec = iq.CheckRecord.from_json(obj)
        again = iq.replay_record(spec, rec)
        assert again.lhs == rec.lhs and again.rhs == rec.rhs


def test_fuzz_violation_exit_code(tmp_path):
    # negative tolerance turns equality cases into reported violations
    out = tmp_path / "v.jsonl"
    code = main(["fuzz", "--inequality", "gross", "--trials", "20",
                 "--seed", "2", "--tol-rel", "-0.01", "--out", str(out)])
    assert code == 1


def test_fuzz_csv_summary(tmp_path):
    out = tmp_path / "summary.csv"
    assert main(["fuzz", "--inequality", "thm1", "--trials", "10",
                 "--dims", "2", "--p-grid", "1,3", "--seed", "4",
                 "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "inequality_id,p,records,failures,errors,min_margin"
    assert any(line.startswith("THM1A,1") for line in lines[1:])
    assert any(line.startswith("THM1B,3") for line in lines[1:])


def test_check_thm1_block_file(tmp_path, capsys):
    rng = np.random.default_rng(0)
    blk = blockmat.sample_positive_block(2, rng)
    block_path = tmp_path / "block.json"
    block_path.write_text(json.dumps(blockmat.block_to_json(blk)))
    code = main(["check", "--inequality", "thm1", "--p", "1.5",
                 "--block", f"@{block_path}"])
    assert code == 0
    rec = json.loads(capsys.readouterr().out.strip())
    assert rec["inequality_id"] == "THM1A" and rec["pass"]


def test_check_gross_and_lemma4(capsys):
    assert main(["check", "--inequality", "gross", "--p", "1.5",
                 "--a", "2.0", "--b", "1.0"]) == 0
    rec = json.loads(capsys.readouterr().out.strip())
    assert rec["margin"] >= 0.0

    assert main(["check", "--inequality", "lemma4", "--p", "1.5",
                 "--mat-a", "1.0,1.0,0.5", "--delta", "2.0"]) == 0
    rec = json.loads(capsys.readouterr().out.strip())
    assert rec["inequality_id"] == "LEMMA4" and rec["pass"]


def test_check_requires_inputs():
    assert main(["check", "--inequality", "thm1", "--p", "2"]) == 2
    assert main(["check", "--inequality", "lemma2", "--p", "1.5"]) == 2


def test_nu_p_cli_matches_closed_form(capsys):
    code = main(["nu-p", "--channel",
                 '{"kind":"depolarizing","lambda":0.5}',
                 "--p", "3", "--seed", "5", "--restarts", "6"])
    assert code == 0
    out = json.loads(capsys.readouterr().out.strip())
    want = (0.75 ** 3 + 0.25 ** 3) ** (1.0 / 3.0)
    assert out["value"] == pytest.approx(want, abs=1e-6)
    assert out["converged"]


def test_smin_cli(capsys):
    code = main(["smin", "--channel", '{"kind":"depolarizing","lambda":0.0}',
                 "--seed", "5", "--restarts", "4"])
    assert code == 0
    out = json.loads(capsys.readouterr().out.strip())
    assert out["value"] == pytest.approx(math.log(2.0), abs=1e-7)


def test_gap_cli(capsys):
    code = main(["gap", "--channel", '{"kind":"depolarizing","lambda":0.5}',
                 "--channel2", '{"kind":"depolarizing","lambda":0.3}',
                 "--p", "3", "--seed", "5", "--restarts", "6"])
    assert code == 0
    out = json.loads(capsys.readouterr().out.strip())
    assert out["gap"] <= 1e-5 * out["nu_product"]


def test_scan_threshold_cli(tmp_path, capsys):
    out = tmp_path / "scan.jsonl"
    code = main(["scan-threshold", "--channel",
                 '{"kind":"werner_holevo","d":3}',
                 "--p-from", "4.7", "--p-to", "4.9", "--step", "0.05",
                 "--seed", "6", "--restarts", "4", "--out", str(out)])
    assert code == 0
    rows = _read_jsonl(out)
    summary = rows[-1]
    assert summary["type"] == "summary"
    assert summary["sign_changes"] == 1
    assert 4.70 <= summary["first_positive_p"] <= 4.90
    stdout_summary = json.loads(capsys.readouterr().out.strip())
    assert stdout_summary == summary


def test_report_markdown(tmp_path):
    src = tmp_path / "records.jsonl"
    assert main(["fuzz", "--inequality", "thm1", "--trials", "10",
                 "--dims", "2", "--p-grid", "1.5,4", "--seed", "8",
                 "--out", str(src)]) == 0
    md = tmp_path / "report.md"
    assert main(["report", str(src), "--out", str(md)]) == 0
    text = md.read_text()
    assert "## THM1A" in text and "## THM1B" in text
    assert "| p | records | failures | errors | min margin |" in text
    assert "failures: 0" in text


def test_seed_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV_VAR, "777")
    out = tmp_path / "env.jsonl"
    assert main(["fuzz", "--inequality", "gross", "--trials", "5",
                 "--out", str(out)]) == 0
    assert _read_jsonl(out)[0]["seed"] == 777

    monkeypatch.setenv(cli.SEED_ENV_VAR, "not-a-seed")
    assert main(["fuzz", "--inequality", "gross", "--trials", "5",
                 "--out", str(out)]) == 2


def test_random_seed_is_printed(tmp_path, capsys):
    out = tmp_path / "r.jsonl"
    assert main(["fuzz", "--inequality", "gross", "--trials", "3",
                 "--out", str(out)]) == 0
    assert "drew seed=" in capsys.readouterr().err


def test_config_errors_exit_2():
    assert main(["fuzz", "--inequality", "thm1", "--trials", "5",
                 "--seed", "-4"]) == 2
    assert main(["nu-p", "--channel", "{bad json", "--p", "2",
                 "--seed", "1"]) == 2
    assert main(["nu-p", "--channel", '{"kind":"nope"}', "--p", "2",
                 "--seed", "1"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["fuzz", "--inequality", "not-a-family", "--seed", "1"])
    assert exc.value.code == 2


def test_entry_point_runs():
    import subprocess
    import sys
    proc = subprocess.run(
        [sys.executable, "-m", "schatten_lab.cli", "check",
         "--inequality", "gross", "--p", "1.5", "--a", "1", "--b", "0"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    rec = json.loads(proc.stdout.strip())
    assert rec["margin"] == pytest.approx(0.0, abs=1e-12)
