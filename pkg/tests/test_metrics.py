import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cvsoc.dataset_io import BoundingBox, Detection, DetectionSet, DetectionTrack
from cvsoc.errors import ValidationError
from cvsoc.extrapolation import ExtrapolationWindow, PipelineResult
from cvsoc.metrics import iou, iou_fraction, score_frame, score_track, sequence_accuracy

from oracles import pixel_iou

boxes = st.builds(BoundingBox, st.integers(0, 30), st.integers(0, 30), st.integers(1, 20), st.integers(1, 20))


def _set(i, *bs):
    return DetectionSet(i, tuple(Detection(b) for b in bs))


def test_iou_examples():
    a = BoundingBox(0, 0, 10, 10)
    assert iou(a, a) == 1.0
    assert iou(a, BoundingBox(20, 20, 5, 5)) == 0.0
    assert iou(a, BoundingBox(5, 0, 10, 10)) == pytest.approx(50 / 150, abs=1e-15)


@settings(max_examples=150, deadline=None)
@given(boxes, boxes)
def test_iou_matches_pixel_enumeration(a, b):
    assert iou(a, b) == pytest.approx(pixel_iou(a, b), abs=1e-12)
    assert iou(a, b) == iou(b, a)
    assert 0.0 <= iou(a, b) <= 1.0
    overlap_x = a.x < b.x + b.w and b.x < a.x + a.w
    overlap_y = a.y < b.y + b.h and b.y < a.y + a.h
    assert (iou(a, b) == 0.0) == (not (overlap_x and overlap_y))


def test_identity_frame():
    s = score_frame(_set(0, BoundingBox(1, 1, 5, 5)), _set(0, BoundingBox(1, 1, 5, 5)))
    assert (s.mean_iou, s.matched, s.missed, s.spurious) == (1.0, 1, 0, 0)


def test_empty_prediction():
    s = score_frame(_set(0), _set(0, BoundingBox(1, 1, 5, 5)))
    assert (s.mean_iou, s.matched, s.missed, s.spurious) == (0.0, 0, 1, 0)


def test_both_empty():
    s = score_frame(_set(2), _set(2))
    assert (s.mean_iou, s.matched, s.missed, s.spurious) == (1.0, 0, 0, 0)


def test_below_threshold_hand_trace():
    truth = _set(0, BoundingBox(0, 0, 10, 10))
    pred = _set(0, BoundingBox(5, 0, 10, 10), BoundingBox(20, 20, 5, 5))
    s = score_frame(pred, truth, 0.5)
    assert (s.mean_iou, s.matched, s.missed, s.spurious) == (0.0, 0, 1, 2)
    # the same pair does match once the threshold admits IoU 1/3
    s = score_frame(pred, truth, 0.3)
    assert s.matched == 1 and s.spurious == 1
    assert s.mean_iou == pytest.approx(1 / 3)


def test_greedy_takes_best_pair_first():
    t1, t2 = BoundingBox(0, 0, 10, 10), BoundingBox(4, 0, 10, 10)
    p = BoundingBox(3, 0, 10, 10)
    s = score_frame(_set(0, p), _set(0, t1, t2))
    assert s.matched == 1 and s.missed == 1
    assert s.mean_iou == pytest.approx(float(iou_fraction(p, t2)) / 2)


def test_tie_break_prefers_lower_indices():
    t = BoundingBox(10, 10, 10, 10)
    p_left, p_right = BoundingBox(9, 10, 10, 10), BoundingBox(11, 10, 10, 10)
    assert iou(p_left, t) == iou(p_right, t)
    s = score_frame(_set(0, p_left, p_right), _set(0, t))
    assert s.matched == 1 and s.spurious == 1


def test_frame_mismatch():
    with pytest.raises(ValidationError, match="frame mismatch"):
        score_frame(_set(0), _set(1))


@settings(max_examples=80, deadline=None)
@given(st.lists(boxes, min_size=1, max_size=4), st.lists(boxes, min_size=1, max_size=4), st.randoms())
def test_permutation_invariance(preds, truths, rnd):
    values = [iou_fraction(p, t) for p in preds for t in truths]
    assume(len(set(values)) == len(values))
    base = score_frame(_set(0, *preds), _set(0, *truths))
    rnd.shuffle(preds)
    rnd.shuffle(truths)
    assert score_frame(_set(0, *preds), _set(0, *truths)) == base


def _result(track):
    return PipelineResult(track, tuple(range(len(track))), ExtrapolationWindow(1))


def test_sequence_identity():
    track = DetectionTrack(tuple(_set(i, BoundingBox(i, i, 4, 4)) for i in range(5)))
    assert sequence_accuracy(_result(track), track).mean_iou == 1.0


def test_sequence_half_missed():
    truth = DetectionTrack(tuple(_set(i, BoundingBox(1, 1, 4, 4)) for i in range(6)))
    pred = DetectionTrack(tuple(truth[i] if i % 2 == 0 else _set(i) for i in range(6)))
    report = sequence_accuracy(_result(pred), truth)
    assert report.mean_iou == 0.5
    assert report.scored_frames == 6


def test_sequence_all_empty_is_vacuous(tmp_path):
    truth = DetectionTrack(tuple(_set(i) for i in range(3)))
    report = sequence_accuracy(_result(truth), truth)
    assert report.mean_iou == 1.0 and report.vacuous
    report.write_csv(tmp_path / "acc.csv")
    assert (tmp_path / "acc.csv").read_text().splitlines()[-1].endswith("vacuous")


def test_empty_truth_frames_are_excluded():
    truth = DetectionTrack((_set(0, BoundingBox(0, 0, 4, 4)), _set(1)))
    pred = DetectionTrack((_set(0, BoundingBox(0, 0, 4, 4)), _set(1, BoundingBox(9, 9, 3, 3))))
    report = score_track(pred, truth)
    assert report.mean_iou == 1.0 and report.scored_frames == 1
    assert report.per_frame[1].spurious == 1


def test_length_mismatch():
    truth = DetectionTrack(tuple(_set(i) for i in range(3)))
    with pytest.raises(ValidationError, match="track length mismatch"):
        sequence_accuracy(_result(DetectionTrack(truth.sets[:2])), truth)


def test_report_csv_format():
    truth = DetectionTrack((_set(0, BoundingBox(0, 0, 10, 10)),))
    pred = DetectionTrack((_set(0, BoundingBox(2, 0, 10, 10)),))
    lines = score_track(pred, truth).to_csv_lines()
    assert lines[0] == "frame_index,mean_iou,matched,missed,spurious"
    assert lines[1] == f"0,{80 / 120:.6f},1,0,0"
    assert lines[2].startswith("#summary mean_iou=0.666667")
