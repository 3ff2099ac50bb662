"""Detection extrapolation under an extrapolation-window (EW) schedule.

Frame ``f`` is an anchor when ``f % ew == 0``: the detection oracle is queried
and its boxes are taken verbatim. Every other frame reuses the previous
frame's output boxes, each shifted by the mean motion vector of the blocks
under it.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .dataset_io import (
    BoundingBox,
    Detection,
    DetectionSet,
    DetectionTrack,
    FrameSequence,
    format_annotation_lines,
)
from .errors import ValidationError
from .motion import MotionField, MotionParams, MotionVector, compute_motion_field


@dataclass(frozen=True)
class ExtrapolationWindow:
    ew: int

    def __post_init__(self) -> None:
        if self.ew < 1:
            raise ValidationError(f"extrapolation window must be >= 1, got {self.ew}")

    def is_anchor(self, frame_index: int) -> bool:
        return frame_index % self.ew == 0

    def inference_count(self, n_frames: int) -> int:
        return -(-n_frames // self.ew)


class DetectionOracle:
    """Replays recorded detections in place of CNN inference and counts queries."""

    def __init__(self, track: DetectionTrack):
        self.track = track
        self.inference_count = 0

    def __len__(self) -> int:
        return len(self.track)

    def infer(self, frame_index: int) -> DetectionSet:
        self.inference_count += 1
        return self.track[frame_index]

    def fresh(self) -> DetectionOracle:
        return DetectionOracle(self.track)


@dataclass(frozen=True)
class PipelineResult:
    per_frame_boxes: DetectionTrack
    inference_frames: tuple[int, ...]
    ew: ExtrapolationWindow

    @property
    def inferences(self) -> int:
        return len(self.inference_frames)

    def to_csv_lines(self) -> list[str]:
        sidecar = "#inference_frames=" + ",".join(str(f) for f in self.inference_frames)
        return [sidecar] + format_annotation_lines(self.per_frame_boxes)

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self.to_csv_lines()) + "\n", encoding="utf-8")


def _round_mean(total: int, count: int) -> int:
    # nearest integer, ties away from zero, in exact integer arithmetic
    q = (2 * abs(total) + count) // (2 * count)
    return q if total >= 0 else -q


def aggregate_box_motion(field: MotionField, box: BoundingBox) -> MotionVector:
    """Rounded mean vector of the blocks whose centers lie strictly inside ``box``.

    Falls back to the rounded mean over the whole field when no block center
    is inside (boxes smaller than a block, or over residual pixels).
    """
    b = field.params.block_size
    # doubled coordinates keep odd block sizes exact
    centers_x = 2 * b * np.arange(field.blocks_x) + b
    centers_y = 2 * b * np.arange(field.blocks_y) + b
    in_x = (centers_x > 2 * box.x) & (centers_x < 2 * (box.x + box.w))
    in_y = (centers_y > 2 * box.y) & (centers_y < 2 * (box.y + box.h))
    selected = field.vectors[np.ix_(in_y, in_x)].reshape(-1, 2)
    if selected.shape[0] == 0:
        selected = field.vectors.reshape(-1, 2)
    count = selected.shape[0]
    sx, sy = (int(v) for v in selected.sum(axis=0))
    return MotionVector(_round_mean(sx, count), _round_mean(sy, count))


def _clamp(value: int, lo: int, hi: int) -> int:
    return max(lo, min(value, hi))


def extrapolate_detections(dets: DetectionSet, field: MotionField,
                           frame_w: int, frame_h: int) -> DetectionSet:
    """Translate each box by its aggregated motion and clamp it inside the frame.

    Width and height never change; labels and scores carry over.
    """
    moved = []
    for det in dets:
        box = det.box
        if box.w > frame_w or box.h > frame_h:
            raise ValidationError(f"box {box} larger than frame {frame_w}x{frame_h}")
        mv = aggregate_box_motion(field, box)
        x = _clamp(box.x + mv.dx, 0, frame_w - box.w)
        y = _clamp(box.y + mv.dy, 0, frame_h - box.h)
        moved.append(Detection(BoundingBox(x, y, box.w, box.h), det.label, det.score))
    return DetectionSet(dets.frame_index + 1, tuple(moved))


FieldSource = Callable[[int], MotionField]


def motion_field_source(seq: FrameSequence, params: MotionParams) -> FieldSource:
    """Memoized ``f -> compute_motion_field(seq[f-1], seq[f])``.

    Fields do not depend on EW, so one source can serve a whole sweep.
    """
    cache: dict[int, MotionField] = {}

    def field_for(f: int) -> MotionField:
        if f not in cache:
            cache[f] = compute_motion_field(seq[f - 1], seq[f], params)
        return cache[f]

    return field_for


def run_pipeline(seq: FrameSequence, oracle: DetectionOracle, ew: ExtrapolationWindow | int,
                 params: MotionParams = MotionParams(),
                 fields: FieldSource | None = None) -> PipelineResult:
    """Run detection with inference only on anchor frames.

    Extrapolation chains inside a window: each extrapolated frame starts from
    the previous frame's output. ``fields`` may supply precomputed motion
    fields, keyed by the index of the later frame.
    """
    if not isinstance(ew, ExtrapolationWindow):
        ew = ExtrapolationWindow(ew)
    n = len(seq)
    if len(oracle) < n:
        raise ValidationError(
            f"oracle/sequence length mismatch: oracle covers {len(oracle)} frames, sequence has {n}"
        )
    if fields is None:
        fields = motion_field_source(seq, params)
    out: list[DetectionSet] = []
    anchors: list[int] = []
    for f in range(n):
        if ew.is_anchor(f):
            out.append(oracle.infer(f))
            anchors.append(f)
        else:
            out.append(extrapolate_detections(out[-1], fields(f), seq.width, seq.height))
    return PipelineResult(DetectionTrack(tuple(out)), tuple(anchors), ew)

