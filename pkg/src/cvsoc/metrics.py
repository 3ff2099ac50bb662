"""Tracking accuracy: IoU, greedy per-frame matching and sequence mean IoU."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .dataset_io import BoundingBox, DetectionSet, DetectionTrack
from .errors import ValidationError
from .extrapolation import PipelineResult


def _overlap(a: BoundingBox, b: BoundingBox) -> tuple[int, int]:
    if a.w <= 0 or a.h <= 0 or b.w <= 0 or b.h <= 0:
        raise ValidationError("degenerate box")
    iw = max(0, min(a.x + a.w, b.x + b.w) - max(a.x, b.x))
    ih = max(0, min(a.y + a.h, b.y + b.h) - max(a.y, b.y))
    inter = iw * ih
    return inter, a.w * a.h + b.w * b.h - inter


def iou_fraction(a: BoundingBox, b: BoundingBox) -> Fraction:
    inter, union = _overlap(a, b)
    return Fraction(inter, union)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union; areas are exact integers, only the ratio is a float."""
    inter, union = _overlap(a, b)
    return inter / union


@dataclass(frozen=True)
class FrameScore:
    frame_index: int
    mean_iou: float
    matched: int
    missed: int
    spurious: int


@dataclass(frozen=True)
class AccuracyReport:
    mean_iou: float
    per_frame: tuple[FrameScore, ...]
    scored_frames: int

    @property
    def vacuous(self) -> bool:
        """True when no frame had ground truth and ``mean_iou`` is the 1.0 convention."""
        return self.scored_frames == 0

    def to_csv_lines(self) -> list[str]:
        lines = ["frame_index,mean_iou,matched,missed,spurious"]
        for s in self.per_frame:
            lines.append(f"{s.frame_index},{s.mean_iou:.6f},{s.matched},{s.missed},{s.spurious}")
        flag = ",vacuous" if self.vacuous else ""
        lines.append(f"#summary mean_iou={self.mean_iou:.6f},scored_frames={self.scored_frames}{flag}")
        return lines

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self.to_csv_lines()) + "\n", encoding="utf-8")


def score_frame(pred: DetectionSet, truth: DetectionSet, iou_threshold: float = 0.5) -> FrameScore:
    """Greedy matching of predictions to ground truth.

    The highest-IoU pair at or above the threshold is matched first; ties go
    to the lower prediction index, then the lower truth index. Unmatched truth
    boxes contribute zero to ``mean_iou``.
    """
    if pred.frame_index != truth.frame_index:
        raise ValidationError(f"frame mismatch: {pred.frame_index} vs {truth.frame_index}")
    if not 0.0 < iou_threshold < 1.0:
        raise ValidationError(f"iou_threshold must be in (0, 1), got {iou_threshold}")
    if not truth.detections:
        return FrameScore(truth.frame_index, 1.0 if not pred.detections else 0.0,
                          0, 0, len(pred.detections))

    threshold = Fraction(iou_threshold)
    candidates = []
    for i, p in enumerate(pred.boxes):
        for j, t in enumerate(truth.boxes):
            value = iou_fraction(p, t)
            if value >= threshold:
                candidates.append((-value, i, j))
    # exact rational keys make the tie-break independent of float rounding
    candidates.sort()
    used_pred: set[int] = set()
    used_truth: set[int] = set()
    total = Fraction(0)
    for neg_value, i, j in candidates:
        if i in used_pred or j in used_truth:
            continue
        used_pred.add(i)
        used_truth.add(j)
        total -= neg_value
    matched = len(used_truth)
    return FrameScore(
        frame_index=truth.frame_index,
        mean_iou=float(total / len(truth.detections)),
        matched=matched,
        missed=len(truth.detections) - matched,
        spurious=len(pred.detections) - matched,
    )


def score_track(pred: DetectionTrack, truth: DetectionTrack, iou_threshold: float = 0.5) -> AccuracyReport:
    if len(pred) != len(truth):
        raise ValidationError(f"track length mismatch: {len(pred)} vs {len(truth)}")
    scores = tuple(score_frame(p, t, iou_threshold) for p, t in zip(pred, truth))
    included = [s.mean_iou for s, t in zip(scores, truth) if t.detections]
    mean = sum(included) / len(included) if included else 1.0
    return AccuracyReport(mean_iou=mean, per_frame=scores, scored_frames=len(included))


def sequence_accuracy(result: PipelineResult, truth: DetectionTrack,
                      iou_threshold: float = 0.5) -> AccuracyReport:
    """Mean IoU over frames whose ground truth is non-empty.

    With no scored frames the mean is defined as 1.0 and the report is
    flagged ``vacuous``.
    """
    return score_track(result.per_frame_boxes, truth, iou_threshold)


def accuracy_loss_pp(baseline_mean_iou: float, mean_iou: float) -> float:
    """Loss in percentage points of mean IoU relative to the EW=1 baseline."""
    return (baseline_mean_iou - mean_iou) * 100.0
