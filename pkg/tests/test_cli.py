import json

import numpy as np
import pytest

from qht import fileio
from qht.cli import main
from qht.errors import EXIT_CODES


def write_cosine_csv(path, n=16, cycles=1):
    k = np.arange(n)
    values = np.cos(2 * np.pi * cycles * k / n)
    path.write_text("\n".join(repr(float(v)) for v in values) + "\n")
    return values


def read_report(path):
    return json.loads(path.read_text())


def test_exit_codes_are_distinct():
    assert len(set(EXIT_CODES.values())) == 3
    assert 0 not in EXIT_CODES.values()


def test_analytic_writes_artifacts(tmp_path):
    assert main(["analytic", "--out", str(tmp_path)]) == 0
    report = read_report(tmp_path / "analytic_report.json")
    assert report["schema_version"] == 1
    assert report["results"]["fidelity"] >= 1 - 1e-9
    assert report["results"]["fidelity_ok"] is True
    total = report["results"]["success_probability"] + report["results"]["dc_fraction"]
    assert total == pytest.approx(1.0, abs=1e-9)
    assert report["results"]["max_row_error"] <= 1e-9
    csv_lines = (tmp_path / "analytic.csv").read_text().splitlines()
    assert csv_lines[0] == "# x,f,hf_quantum,hf_classical,hf_analytic"
    assert len(csv_lines) == 129


def test_envelope_synthetic_detects_faults(tmp_path, capsys):
    assert main(["envelope", "--synthetic", "--out", str(tmp_path)]) == 0
    report = read_report(tmp_path / "envelope_report.json")
    windows = report["results"]["fault_windows"]
    assert any(lo <= 300 <= hi for lo, hi in windows)
    assert any(lo <= 700 <= hi for lo, hi in windows)
    out = capsys.readouterr().out
    assert "detected deviation windows" in out


def test_envelope_from_file_pads_with_warning(tmp_path, capsys):
    src = tmp_path / "sig.csv"
    k = np.arange(100)
    src.write_text(
        "\n".join(f"{float(t) * 0.1!r},{float(np.cos(2 * np.pi * t / 100))!r}" for t in k)
    )
    assert main(["envelope", str(src), "--out", str(tmp_path), "--faults", "0"]) == 0
    assert "zero-padded 100 samples to 128" in capsys.readouterr().err
    report = read_report(tmp_path / "envelope_report.json")
    assert report["input"]["length_adjustment"].startswith("zero-padded")
    assert report["params"]["n"] == 7


def test_envelope_empty_file(tmp_path):
    src = tmp_path / "empty.csv"
    src.write_text("# no data\n")
    assert main(["envelope", str(src), "--out", str(tmp_path)]) == EXIT_CODES["bad_input"]


def test_envelope_without_input(tmp_path):
    assert main(["envelope", "--out", str(tmp_path)]) == EXIT_CODES["bad_input"]


def test_corners_chessboard(tmp_path):
    out = tmp_path / "run"
    assert main(
        ["corners", "--chessboard", "16", "--squares", "4", "--tau", "0.7", "--out", str(out)]
    ) == 0
    report = read_report(out / "corners_report.json")
    assert report["results"]["corners_equal_classical"] is True
    assert report["results"]["corner_cluster_count"] >= 1
    assert report["params"]["tau"] == 0.7
    total = report["results"]["success_probability"] + report["results"]["dc_fraction"]
    assert total == pytest.approx(1.0, abs=1e-9)
    img = fileio.read_pgm(out / "magnitude.pgm")
    assert img.shape == (16, 16)
    lines = (out / "corners.csv").read_text().splitlines()
    assert lines[0] == "# row,col"
    assert len(lines) - 1 == report["results"]["corners_detected"]


def test_corners_uniform_image_exit_code(tmp_path):
    src = tmp_path / "gray.pgm"
    fileio.write_pgm(src, np.full((8, 8), 77, dtype=np.uint8))
    assert main(["corners", str(src), "--out", str(tmp_path)]) == EXIT_CODES[
        "postselection_impossible"
    ]


def test_corners_non_square_image(tmp_path):
    src = tmp_path / "rect.pgm"
    fileio.write_pgm(src, np.zeros((4, 8), dtype=np.uint8))
    assert main(["corners", str(src), "--out", str(tmp_path)]) == EXIT_CODES["bad_input"]


def test_transform_cosine_to_sine(tmp_path):
    src = tmp_path / "cos.csv"
    write_cosine_csv(src, n=16)
    out = tmp_path / "run"
    assert main(["transform", str(src), "--out", str(out)]) == 0
    lines = (out / "transform.csv").read_text().splitlines()
    rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    expected = np.sin(2 * np.pi * np.arange(16) / 16)
    assert np.abs(rows[:, 0] - expected).max() <= 1e-9  # quantum_re
    assert np.abs(rows[:, 0] - rows[:, 2]).max() <= 1e-9  # vs classical_re
    report = read_report(out / "transform_report.json")
    assert report["results"]["max_row_error"] <= 1e-9
    total = report["results"]["success_probability"] + report["results"]["dc_fraction"]
    assert total == pytest.approx(1.0, abs=1e-9)
    assert report["results"]["fidelity"] >= 1 - 1e-9


def test_transform_constant_exit_code(tmp_path):
    src = tmp_path / "const.csv"
    src.write_text("1.0\n" * 16)
    code = main(["transform", str(src), "--out", str(tmp_path)])
    assert code == EXIT_CODES["postselection_impossible"]
    assert code != EXIT_CODES["bad_input"]


def test_transform_missing_file(tmp_path):
    assert main(["transform", str(tmp_path / "nope.csv"), "--out", str(tmp_path)]) == EXIT_CODES[
        "bad_input"
    ]


def test_transform_dimension_mismatch(tmp_path):
    src = tmp_path / "cos.csv"
    write_cosine_csv(src)
    assert main(["transform", str(src), "--d", "2", "--out", str(tmp_path)]) == EXIT_CODES[
        "bad_input"
    ]


def test_transform_qubit_limit_exit_code(tmp_path, monkeypatch):
    monkeypatch.setenv("QHT_MAX_QUBITS", "4")
    src = tmp_path / "cos.csv"
    write_cosine_csv(src, n=64)
    assert main(["transform", str(src), "--out", str(tmp_path)]) == EXIT_CODES["qubit_limit"]


def test_transform_pgm_input(tmp_path):
    from qht.signals import make_chessboard

    src = tmp_path / "board.pgm"
    fileio.write_pgm(src, make_chessboard(8, 4))
    out = tmp_path / "run"
    assert main(["transform", str(src), "--out", str(out)]) == 0
    assert (out / "transform_magnitude.pgm").exists()
    report = read_report(out / "transform_report.json")
    assert report["params"]["d"] == 2


def test_transform_reports_are_deterministic(tmp_path):
    src = tmp_path / "cos.csv"
    write_cosine_csv(src)
    out = tmp_path / "run"
    assert main(["transform", str(src), "--seed", "7", "--out", str(out)]) == 0
    first_report = read_report(out / "transform_report.json")
    first_csv = (out / "transform.csv").read_bytes()
    assert main(["transform", str(src), "--seed", "7", "--out", str(out)]) == 0
    second_report = read_report(out / "transform_report.json")
    assert (out / "transform.csv").read_bytes() == first_csv
    first_report.pop("wall_time_s")
    second_report.pop("wall_time_s")
    assert json.dumps(first_report, sort_keys=True) == json.dumps(second_report, sort_keys=True)


def test_unreachable_server_fails_cleanly(tmp_path, capsys):
    code = main(
        ["analytic", "--server", "http://127.0.0.1:1", "--out", str(tmp_path)]
    )
    assert code == 1
    assert "server_unreachable" in capsys.readouterr().err


def test_resources_table_and_json(tmp_path, capsys):
    assert main(["resources", "--n", "4..6", "--d", "1,2", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "quantum_total" in out
    data = read_report(tmp_path / "resources.json")
    assert len(data["rows"]) == 6
    assert data["rows"][0]["n"] == 4


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
