"""Deterministic synthetic scenes for tests and walkthroughs."""

from __future__ import annotations

import numpy as np

from .dataset_io import BoundingBox, Detection, DetectionSet, DetectionTrack, Frame, FrameSequence


def noise_frame(width: int, height: int, seed: int = 0) -> Frame:
    rng = np.random.default_rng(seed)
    return Frame.from_array(rng.integers(0, 256, size=(height, width), dtype=np.uint8))


def translated_sequence(width: int, height: int, n_frames: int, shift: tuple[int, int],
                        seed: int = 0) -> FrameSequence:
    """Uniform noise whose content moves by ``shift`` pixels every frame.

    Frames are crops of one larger noise canvas, so new content enters at the
    trailing edges instead of wrapping around.
    """
    tx, ty = shift
    span_x, span_y = (n_frames - 1) * abs(tx), (n_frames - 1) * abs(ty)
    rng = np.random.default_rng(seed)
    canvas = rng.integers(0, 256, size=(height + span_y, width + span_x), dtype=np.uint8)
    base_x, base_y = max(0, (n_frames - 1) * tx), max(0, (n_frames - 1) * ty)
    frames = []
    for k in range(n_frames):
        cx, cy = base_x - k * tx, base_y - k * ty
        frames.append(Frame.from_array(canvas[cy : cy + height, cx : cx + width]))
    return FrameSequence(tuple(frames))


def static_sequence(frame: Frame, n_frames: int) -> FrameSequence:
    return FrameSequence((frame,) * n_frames)


def moving_box_track(box: BoundingBox, n_frames: int, shift: tuple[int, int] = (0, 0),
                     label: int = 0) -> DetectionTrack:
    """Ground truth for one box moving by ``shift`` every frame."""
    tx, ty = shift
    return DetectionTrack(tuple(
        DetectionSet(k, (Detection(BoundingBox(box.x + k * tx, box.y + k * ty, box.w, box.h), label),))
        for k in range(n_frames)
    ))
