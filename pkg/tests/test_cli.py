import json
import subprocess
import sys

import numpy as np
import pytest
from PIL import Image

from qrough.cli import main
from qrough.frame_io import read_mask, read_report


@pytest.fixture
def grow_dir(tmp_path):
    out = tmp_path / "grow"
    assert main(["synth", "--scenario", "grow", "--frames", "8", "--out", str(out),
                 "--width", "64", "--height", "48", "--base-area", "200", "--rate", "1.05"]) == 0
    return out


def test_synth_layout(grow_dir):
    frames = sorted((grow_dir / "frames").iterdir())
    gts = sorted((grow_dir / "gt").iterdir())
    assert len(frames) == len(gts) == 8
    assert Image.open(frames[0]).size == (64, 48)


def test_segment_then_eval(grow_dir, tmp_path):
    masks = tmp_path / "masks"
    assert main(["segment", "--input", str(grow_dir / "frames"), "--out", str(masks)]) == 0
    assert len(list(masks.glob("*.pgm"))) == 8
    np.testing.assert_array_equal(read_mask(masks / "frame_00003.pgm"),
                                  read_mask(grow_dir / "gt" / "frame_00003.pgm"))
    rep = tmp_path / "eval.json"
    assert main(["eval", "--pred", str(masks), "--gt", str(grow_dir / "gt"), "--report", str(rep)]) == 0
    s = json.loads(rep.read_text())
    assert s["precision"] == 1 and s["recall"] == 1
    assert s["fp_pct"] == 0 and s["fn_pct"] == 0
    assert s["avg_corner_rmse"] == 0 and s["undefined_frames"] == 0
    assert set(s) >= {"fp_pct", "fn_pct", "precision", "recall", "avg_corner_rmse", "undefined_frames"}


def test_png_masks(grow_dir, tmp_path):
    out = tmp_path / "m"
    assert main(["segment", "--input", str(grow_dir / "frames"), "--out", str(out),
                 "--mask-format", "png", "--thr", "10", "--gamma", "0.5"]) == 0
    assert len(list(out.glob("*.png"))) == 8


def test_threat_report(grow_dir, tmp_path):
    rep = tmp_path / "threat.jsonl"
    plot = tmp_path / "plot.csv"
    qt = tmp_path / "q.json"
    argv = ["threat", "--input", str(grow_dir / "frames"), "--fps", "4", "--report", str(rep),
            "--plot", str(plot), "--save-qtable", str(qt), "--out", str(tmp_path / "masks")]
    assert main(argv) == 0
    header, reports = read_report(rep)
    assert header["p"] == 4 and header["alarm_k"] == 2 and header["alarm_tau"] == 0.2
    assert header["thr"] == 30 and header["gamma"] == 0.9
    assert len(reports) == 8
    assert len(rep.read_text().splitlines()) == 9
    assert [r.frame_index for r in reports] == list(range(8))
    assert all(r.threat > 0 for r in reports[4:])
    assert plot.read_text().splitlines()[0] == "frame_index,threat"
    assert len(list((tmp_path / "masks").iterdir())) == 8
    assert json.loads(qt.read_text())["format"] == "qrough-qtable"
    # warm start from the saved table
    assert main(argv[:-4] + ["--load-qtable", str(qt), "--p", "3", "--alarm-k", "1"]) == 0
    header, _ = read_report(rep)
    assert header["p"] == 3 and header["alarm_k"] == 1


def test_empty_input(tmp_path):
    (tmp_path / "in").mkdir()
    assert main(["segment", "--input", str(tmp_path / "in"), "--out", str(tmp_path / "o")]) == 0
    assert list((tmp_path / "o").iterdir()) == []


def test_errors_exit_nonzero(tmp_path, capsys):
    assert main(["segment", "--input", str(tmp_path / "missing"), "--out", str(tmp_path / "o")]) == 1
    assert "missing" in capsys.readouterr().err
    bad = tmp_path / "bad"
    bad.mkdir()
    (bad / "f0001.ppm").write_bytes(b"nope")
    assert main(["threat", "--input", str(bad), "--fps", "30", "--report", str(tmp_path / "r")]) == 1
    assert "f0001.ppm" in capsys.readouterr().err
    assert main(["threat", "--input", str(bad), "--fps", "0", "--report", str(tmp_path / "r")]) == 1


def test_eval_undefined_and_mismatch(tmp_path):
    pred, gt = tmp_path / "p", tmp_path / "g"
    pred.mkdir()
    gt.mkdir()
    g = np.zeros((10, 20), np.uint8)
    g[2:5, 3:7] = 255
    for i in range(2):
        Image.fromarray(g).save(gt / f"m{i}.pgm")
    Image.fromarray(g).save(pred / "m0.pgm")
    Image.fromarray(np.zeros_like(g)).save(pred / "m1.pgm")
    rep = tmp_path / "e.json"
    assert main(["eval", "--pred", str(pred), "--gt", str(gt), "--report", str(rep)]) == 0
    s = json.loads(rep.read_text())
    assert s["undefined_frames"] == 1
    assert s["avg_corner_rmse"] == 0
    assert s["avg_corner_rmse_penalized"] == pytest.approx(np.hypot(10, 20) / 2)
    assert s["recall"] == 0.5
    (pred / "m1.pgm").unlink()
    assert main(["eval", "--pred", str(pred), "--gt", str(gt), "--report", str(rep)]) == 1


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "qrough", "synth", "--scenario", "flicker",
                        "--frames", "2", "--out", str(tmp_path), "--width", "32", "--height", "24",
                        "--base-area", "100"], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert len(list((tmp_path / "frames").iterdir())) == 2
