import hashlib

import pytest

from cvsoc.dataset_io import BoundingBox
from cvsoc.errors import ValidationError
from cvsoc.extrapolation import DetectionOracle
from cvsoc.synthetic import moving_box_track, noise_frame, static_sequence, translated_sequence
from cvsoc.sweep import CSV_HEADER, SweepRow, emit_csv, format_csv, run_sweep
from cvsoc.traffic import reference_network


@pytest.fixture(scope="module")
def static_scene():
    seq = static_sequence(noise_frame(64, 64, seed=8), 40)
    truth = moving_box_track(BoundingBox(10, 10, 20, 20), 40)
    return seq, truth


def test_baseline_only(static_scene):
    seq, truth = static_scene
    (row,) = run_sweep(seq, truth, DetectionOracle(truth), [1], reference_network())
    assert (row.ew, row.inferences, row.accuracy_loss_pp, row.saving_fraction) == (1, 40, 0.0, 0.0)


def test_static_scene_ew2(static_scene):
    seq, truth = static_scene
    rows = run_sweep(seq, truth, DetectionOracle(truth), [1, 2], reference_network())
    assert rows[1].ew == 2
    assert rows[1].accuracy_loss_pp == 0.0
    assert rows[1].saving_fraction == pytest.approx(0.42, abs=1e-12)


def test_saving_increases(static_scene):
    seq, truth = static_scene
    rows = run_sweep(seq, truth, DetectionOracle(truth), [8, 2, 4], reference_network())
    assert [r.ew for r in rows] == [1, 2, 4, 8]
    savings = [r.saving_fraction for r in rows]
    assert all(a < b for a, b in zip(savings, savings[1:]))
    assert all(r.inferences == -(-40 // r.ew) for r in rows)


def test_duplicates_collapse(static_scene):
    seq, truth = static_scene
    rows = run_sweep(seq, truth, DetectionOracle(truth), [2, 2, 1], reference_network())
    assert [r.ew for r in rows] == [1, 2]


def test_bad_ews(static_scene):
    seq, truth = static_scene
    with pytest.raises(ValidationError):
        run_sweep(seq, truth, DetectionOracle(truth), [], reference_network())
    with pytest.raises(ValidationError, match="ew=0"):
        run_sweep(seq, truth, DetectionOracle(truth), [0], reference_network())


def test_errors_carry_the_ew():
    seq = translated_sequence(64, 64, 4, (1, 0))
    truth = moving_box_track(BoundingBox(0, 0, 8, 8), 4)
    short = moving_box_track(BoundingBox(0, 0, 8, 8), 3)
    with pytest.raises(ValidationError, match=r"ew=1: oracle/sequence length mismatch"):
        run_sweep(seq, truth, DetectionOracle(short), [2], reference_network())


def test_accuracy_degrades_when_motion_is_invisible():
    # the object moves 2 px/frame but the frames never change, so extrapolated boxes lag
    seq = static_sequence(noise_frame(192, 64, seed=1), 48)
    truth = moving_box_track(BoundingBox(4, 16, 32, 32), 48, (2, 0))
    rows = run_sweep(seq, truth, DetectionOracle(truth), [2, 4, 8], reference_network())
    ious = [r.mean_iou for r in rows]
    assert ious[0] == 1.0
    assert all(b < a for a, b in zip(ious, ious[1:]))
    # EW=2: every other frame lags 2 px, IoU 30/34
    assert rows[1].mean_iou == pytest.approx((1 + 30 / 34) / 2, abs=1e-12)
    assert rows[1].accuracy_loss_pp == pytest.approx(100 * (1 - (1 + 30 / 34) / 2), abs=1e-9)


def _row(ew):
    return SweepRow(ew, 10, 1.0, 0.0, 1234.5, 0.25)


def test_emit_one_row(tmp_path):
    emit_csv([_row(1)], tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines == [CSV_HEADER, "1,10,1.000000,0.000000,1234.500000,0.250000"]


def test_emit_sorts_rows(tmp_path):
    emit_csv([_row(4), _row(1), _row(2)], tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert [line.split(",")[0] for line in lines[1:]] == ["1", "2", "4"]


def test_emit_is_byte_stable(tmp_path, static_scene):
    seq, truth = static_scene
    digests = []
    for name in ("a.csv", "b.csv"):
        rows = run_sweep(seq, truth, DetectionOracle(truth), [1, 2, 5], reference_network())
        emit_csv(rows, tmp_path / name)
        digests.append(hashlib.sha256((tmp_path / name).read_bytes()).hexdigest())
    assert digests[0] == digests[1]


def test_emit_errors(tmp_path):
    with pytest.raises(ValidationError):
        format_csv([])
    with pytest.raises(OSError, match="cannot write output"):
        emit_csv([_row(1)], tmp_path / "missing" / "s.csv")
