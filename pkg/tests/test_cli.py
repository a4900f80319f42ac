import csv
import io
import json
from pathlib import Path

import numpy as np
import pytest

from pgquadric.cli import run
from pgquadric.report import FamilyFileError, read_family_file, strip_timings, write_family_file

from conftest import space

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"
FAMILY = HERE / "data" / "pg42_hplus.txt"


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def golden(name):
    return json.loads((GOLDEN / name).read_text())


def test_census_matches_golden(capsys):
    code, report = run_json(capsys, ["census", "--n", "2", "--q", "2", "--sign", "+"])
    assert code == 0
    assert set(report["timings"]) >= {"build", "classify", "colour"}
    assert strip_timings(report) == golden("census_n2_q2_plus.json")


def test_check_theorem_matches_golden(capsys):
    code, report = run_json(capsys, ["check-theorem", "--n", "2", "--q", "2^2", "--sign", "-"])
    assert code == 0
    assert strip_timings(report) == golden("check_theorem_n2_q4_minus.json")
    assert report["results"]["conclusion"]["branch"] == "quadric"


def test_reports_are_byte_stable(tmp_path):
    paths = [tmp_path / f"r{i}.json" for i in range(2)]
    for p in paths:
        assert run(["identities", "--n", "2", "--q", "4", "--sign", "+", "--emit-json", str(p)]) == 0
    a, b = (json.loads(p.read_text()) for p in paths)
    dump = lambda d: json.dumps(strip_timings(d), sort_keys=True, indent=2)
    assert dump(a) == dump(b)
    assert a["schema"] == 1 and a["verdicts"]["identities"] is True


def test_family_file_pg42(capsys):
    code, report = run_json(capsys, ["check-theorem", "--n", "2", "--q", "2", "--sign", "+",
                                     "--family", str(FAMILY)])
    assert code == 0
    assert report["results"]["colouring"]["family_size"] == 10
    assert report["spectra"]["per_point"] == {"6": 15, "4": 15, "0": 1}
    assert report["results"]["conclusion"]["branch"] == "quadric"


def test_family_file_failing_family_exits_1(tmp_path, capsys):
    lines = [l for l in FAMILY.read_text().splitlines() if l and not l.startswith("#")]
    bad = tmp_path / "nine.txt"
    bad.write_text("\n".join(lines[1:]) + "\n")
    code, report = run_json(capsys, ["check-theorem", "--n", "2", "--q", "2", "--family", str(bad)])
    assert code == 1
    assert report["verdicts"]["condition_I"] is False
    assert report["results"]["colouring"]["n_violations"] == 15
    assert "conclusion" not in report["verdicts"]


def test_family_file_parsing():
    S = space(4, 2)
    text = "# comment\n\n0 1 0 0 0  # x1 = 0\n0 1 0 0 0\n1 1 1 1 1\n"
    mask = read_family_file(io.StringIO(text), S)
    assert mask.sum() == 2 and mask[S.point_index([0, 1, 0, 0, 0])]
    buf = io.StringIO()
    write_family_file(buf, S, mask, "two planes")
    assert np.array_equal(read_family_file(io.StringIO(buf.getvalue()), S), mask)
    for bad in ["1 0 0 0\n", "0 0 0 0 0\n", "1 0 0 0 2\n", "a b c d e\n"]:
        with pytest.raises(FamilyFileError):
            read_family_file(io.StringIO(bad), S)


def test_family_file_normalizes_scalar_multiples():
    S = space(4, 4)
    a = read_family_file(io.StringIO("0 2 3 0 1\n"), S)
    b = read_family_file(io.StringIO(" ".join(map(str, S.normalize([[0, 2, 3, 0, 1]])[0])) + "\n"), S)
    assert np.array_equal(a, b)


def test_bad_family_file_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 0 0\n")
    assert run(["check-theorem", "--n", "2", "--q", "2", "--family", str(bad)]) == 2
    assert run(["check-theorem", "--n", "2", "--q", "2", "--family", str(tmp_path / "missing")]) == 2
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    assert run(["check-theorem", "--n", "2", "--q", "2", "--family", str(empty)]) == 2
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["census", "--q", "3"],
    ["census", "--q", "6"],
    ["census", "--n", "1"],
    ["odd-spectrum", "--q", "4"],
    ["switch-search", "--q", "4"],
    ["hyperoval", "--q", "8", "--translation", "3"],
    ["check-theorem", "--construct", "hyperoval", "--sign", "+"],
    ["census", "--workers", "0"],
    ["census", "--sign", "x"],
    ["frobnicate"],
])
def test_configuration_errors_exit_2(argv):
    try:
        code = run(argv)
    except SystemExit as exc:  # argparse rejects before run() returns
        code = exc.code
    assert code == 2


def test_summary_line_and_csv(tmp_path, capsys):
    out = tmp_path / "r.json"
    spectra = tmp_path / "s.csv"
    assert run(["hyperoval", "--q", "4", "--emit-json", str(out), "--emit-csv", str(spectra)]) == 0
    line = capsys.readouterr().out
    assert line.startswith("hyperoval: PASS") and "conclusion=ok" in line
    rows = list(csv.reader(spectra.open()))
    assert rows[0] == ["spectrum", "value", "multiplicity"]
    per_flat = {int(v): int(m) for name, v, m in rows[1:] if name == "per_flat"}
    assert per_flat == {0: 1837, 2: 3840, 4: 120}
    report = json.loads(out.read_text())
    assert report["results"]["colouring"]["r"] == 6
    assert report["results"]["conclusion"]["branch"] == "hyperoval"


def test_switch_search_cli(tmp_path, capsys):
    jsonl = tmp_path / "v.jsonl"
    code, report = run_json(capsys, ["switch-search", "--emit-jsonl", str(jsonl)])
    assert code == 0
    assert strip_timings(report)["results"] == golden("switch_search_pg42.json")["results"]
    rows = jsonl.read_text().splitlines()
    assert len(rows) == 32768


def test_odd_spectrum_and_sampled_flats(capsys):
    code, report = run_json(capsys, ["odd-spectrum", "--n", "2", "--q", "3", "--sign", "-"])
    assert code == 0 and report["verdicts"]["odd_spectrum"] is True
    assert report["spectra"]["per_flat"] == {"0": 280, "1": 540, "2": 270, "3": 120}
    code, report = run_json(capsys, ["check-theorem", "--n", "2", "--q", "4", "--sample-flats", "500"])
    assert code == 0
    assert report["results"]["condition_II"]["samples"] == 500
    assert "conclusion" not in report["verdicts"]


def test_workers_env_and_dense_path(monkeypatch, capsys):
    monkeypatch.setenv("PGQUADRIC_WORKERS", "2")
    code, a = run_json(capsys, ["census", "--n", "2", "--q", "4"])
    code2, b = run_json(capsys, ["census", "--n", "2", "--q", "4", "--memory-bound", "10"])
    assert code == code2 == 0
    assert a["results"] == b["results"]
