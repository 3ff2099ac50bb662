"""Frame sequences and detection annotations.

Frames are 8-bit luma planes stored as binary PGM (``P5``, maxval 255) named
``frame_%06d.pgm``. Annotations are CSV lines
``frame_index,x,y,w,h[,label[,score]]`` with ``#`` comment lines ignored.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ValidationError

FRAME_PATTERN = re.compile(r"^frame_(\d{6})\.pgm$")
_WHITESPACE = b" \t\n\r\v\f"


@dataclass(frozen=True, eq=False)
class Frame:
    """One grayscale frame; ``pixels`` is a read-only ``(height, width)`` uint8 array."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValidationError(f"frame dimensions must be >= 1, got {self.width}x{self.height}")
        pixels = np.asarray(self.pixels)
        if pixels.dtype != np.uint8:
            raise ValidationError(f"frame pixels must be uint8, got {pixels.dtype}")
        if pixels.size != self.width * self.height:
            raise ValidationError(
                f"pixel count {pixels.size} != {self.width}x{self.height}"
            )
        pixels = np.ascontiguousarray(pixels.reshape(self.height, self.width))
        pixels.flags.writeable = False
        object.__setattr__(self, "pixels", pixels)

    @classmethod
    def from_array(cls, array: np.ndarray) -> Frame:
        array = np.asarray(array)
        if array.ndim != 2:
            raise ValidationError(f"expected a 2-D luma array, got shape {array.shape}")
        return cls(width=array.shape[1], height=array.shape[0], pixels=array.astype(np.uint8, copy=True))


@dataclass(frozen=True)
class FrameSequence:
    frames: tuple[Frame, ...]

    def __post_init__(self) -> None:
        frames = tuple(self.frames)
        if not frames:
            raise ValidationError("frame sequence is empty")
        w, h = frames[0].width, frames[0].height
        for i, f in enumerate(frames):
            if (f.width, f.height) != (w, h):
                raise ValidationError(
                    f"inconsistent frame size: frame {i} is {f.width}x{f.height}, expected {w}x{h}"
                )
        object.__setattr__(self, "frames", frames)

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height

    def __len__(self) -> int:
        return len(self.frames)

    def __getitem__(self, index: int) -> Frame:
        return self.frames[index]

    def __iter__(self) -> Iterator[Frame]:
        return iter(self.frames)


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned integer pixel rectangle covering ``[x, x+w) x [y, y+h)``."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self) -> None:
        if self.w <= 0 or self.h <= 0:
            raise ValidationError(f"degenerate box: w={self.w}, h={self.h}")
        if self.x < 0 or self.y < 0:
            raise ValidationError(f"box origin must be non-negative, got ({self.x}, {self.y})")

    @property
    def area(self) -> int:
        return self.w * self.h

    def contains_point(self, px: float, py: float) -> bool:
        return self.x <= px <= self.x + self.w and self.y <= py <= self.y + self.h

    def fits_in(self, width: int, height: int) -> bool:
        return self.x + self.w <= width and self.y + self.h <= height


@dataclass(frozen=True)
class Detection:
    box: BoundingBox
    label: int = 0
    score: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 1.0:
            raise ValidationError(f"invalid score: {self.score}")


@dataclass(frozen=True)
class DetectionSet:
    frame_index: int
    detections: tuple[Detection, ...] = ()

    def __post_init__(self) -> None:
        if self.frame_index < 0:
            raise ValidationError(f"index out of range: {self.frame_index}")
        object.__setattr__(self, "detections", tuple(self.detections))

    @property
    def boxes(self) -> list[BoundingBox]:
        return [d.box for d in self.detections]

    def __len__(self) -> int:
        return len(self.detections)

    def __iter__(self) -> Iterator[Detection]:
        return iter(self.detections)


@dataclass(frozen=True)
class DetectionTrack:
    """Exactly one DetectionSet per frame, indices contiguous from 0."""

    sets: tuple[DetectionSet, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        sets = tuple(self.sets)
        for i, s in enumerate(sets):
            if s.frame_index != i:
                raise ValidationError(f"track entry {i} has frame_index {s.frame_index}")
        object.__setattr__(self, "sets", sets)

    def __len__(self) -> int:
        return len(self.sets)

    def __getitem__(self, index: int) -> DetectionSet:
        return self.sets[index]

    def __iter__(self) -> Iterator[DetectionSet]:
        return iter(self.sets)

    @property
    def box_count(self) -> int:
        return sum(len(s) for s in self.sets)


# --- PGM ---------------------------------------------------------------------


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos : pos + 1] not in _WHITESPACE and data[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise ValidationError("unsupported format: truncated PGM header")
    return data[start:pos], pos


def decode_pgm(data: bytes) -> Frame:
    magic, pos = _next_token(data, 0)
    if magic != b"P5":
        raise ValidationError(f"unsupported format: magic {magic[:8]!r}, expected P5")
    fields = []
    for _ in range(3):
        tok, pos = _next_token(data, pos)
        try:
            fields.append(int(tok))
        except ValueError:
            raise ValidationError(f"unsupported format: bad header field {tok[:16]!r}") from None
    width, height, maxval = fields
    if maxval != 255:
        raise ValidationError(f"unsupported format: maxval {maxval}, expected 255")
    if width < 1 or height < 1:
        raise ValidationError(f"unsupported format: dimensions {width}x{height}")
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
        raise ValidationError("unsupported format: missing raster separator")
    pos += 1
    raster = data[pos : pos + width * height]
    if len(raster) != width * height:
        raise ValidationError(
            f"unsupported format: raster has {len(raster)} bytes, expected {width * height}"
        )
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return Frame(width=width, height=height, pixels=pixels.copy())


def encode_pgm(frame: Frame) -> bytes:
    header = f"P5\n{frame.width} {frame.height}\n255\n".encode("ascii")
    return header + frame.pixels.tobytes()


def read_pgm(path: str | Path) -> Frame:
    return decode_pgm(Path(path).read_bytes())


def write_pgm(frame: Frame, path: str | Path) -> None:
    Path(path).write_bytes(encode_pgm(frame))


def load_frame_sequence(directory_path: str | Path) -> FrameSequence:
    """Load ``frame_%06d.pgm`` files from a directory, sorted by index.

    Files not matching the naming pattern are ignored.
    """
    directory = Path(directory_path)
    if not directory.is_dir():
        raise FileNotFoundError(f"frame directory not found: {directory}")
    indexed = {}
    for entry in directory.iterdir():
        m = FRAME_PATTERN.match(entry.name)
        if m:
            indexed[int(m.group(1))] = entry
    if not indexed:
        raise ValidationError(f"no frame_%06d.pgm files in {directory}")
    indices = sorted(indexed)
    if indices != list(range(len(indices))):
        missing = sorted(set(range(indices[-1] + 1)) - set(indices))
        raise ValidationError(f"non-contiguous sequence: missing frame indices {missing[:10]}")
    return FrameSequence(tuple(read_pgm(indexed[i]) for i in indices))


def write_frame_sequence(seq: FrameSequence | Iterable[Frame], directory_path: str | Path) -> None:
    directory = Path(directory_path)
    directory.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(seq):
        write_pgm(frame, directory / f"frame_{i:06d}.pgm")


# --- annotations -------------------------------------------------------------


def _parse_int(text: str, what: str, lineno: int) -> int:
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise ValidationError(f"line {lineno}: cannot parse {what} {text!r}") from None
    if not math.isfinite(value) or value != int(value):
        raise ValidationError(f"line {lineno}: {what} must be an integer pixel value, got {text!r}")
    return int(value)


def parse_annotation_lines(lines: Iterable[str], frame_count: int) -> DetectionTrack:
    if frame_count < 1:
        raise ValidationError(f"frame_count must be >= 1, got {frame_count}")
    per_frame: list[list[Detection]] = [[] for _ in range(frame_count)]
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if not 5 <= len(parts) <= 7:
            raise ValidationError(f"line {lineno}: expected 5 to 7 fields, got {len(parts)}")
        idx = _parse_int(parts[0], "frame_index", lineno)
        x, y, w, h = (_parse_int(p, name, lineno) for p, name in zip(parts[1:5], "xywh"))
        label = _parse_int(parts[5], "label", lineno) if len(parts) >= 6 else 0
        try:
            score = float(parts[6]) if len(parts) == 7 else 1.0
        except ValueError:
            raise ValidationError(f"line {lineno}: cannot parse score {parts[6]!r}") from None
        if w <= 0 or h <= 0:
            raise ValidationError(f"degenerate box at line {lineno}: w={w}, h={h}")
        if idx < 0 or idx >= frame_count:
            raise ValidationError(f"index out of range at line {lineno}: {idx} not in [0, {frame_count})")
        if not 0.0 <= score <= 1.0:
            raise ValidationError(f"invalid score at line {lineno}: {score}")
        per_frame[idx].append(Detection(BoundingBox(x, y, w, h), label, score))
    return DetectionTrack(tuple(DetectionSet(i, tuple(d)) for i, d in enumerate(per_frame)))


def parse_annotations(file_path: str | Path, frame_count: int) -> DetectionTrack:
    """Read an annotation CSV into a track covering ``0..frame_count-1``.

    Frames absent from the file get empty sets. Omitted label defaults to 0,
    omitted score to 1.0.
    """
    with open(file_path, encoding="utf-8") as fh:
        return parse_annotation_lines(fh, frame_count)


def format_annotation_lines(track: DetectionTrack) -> list[str]:
    lines = []
    for dets in track:
        for d in dets:
            b = d.box
            lines.append(f"{dets.frame_index},{b.x},{b.y},{b.w},{b.h},{d.label},{d.score!r}")
    return lines


def write_annotations(track: DetectionTrack, file_path: str | Path, header: Sequence[str] = ()) -> None:
    """Write a track in the annotation schema; ``header`` lines are emitted as ``#`` comments."""
    out = [f"#{h}" for h in header] + format_annotation_lines(track)
    Path(file_path).write_text("".join(line + "\n" for line in out), encoding="utf-8")


def polygon_to_box(points: Sequence[tuple[float, float]]) -> BoundingBox:
    """Tightest integer axis-aligned box containing a 4-point (VOT-style) polygon."""
    if len(points) != 4:
        raise ValidationError(f"expected 4 points, got {len(points)}")
    pts = [(float(px), float(py)) for px, py in points]
    (x0, y0) = pts[0]
    collinear = all(
        (bx - x0) * (cy - y0) - (by - y0) * (cx - x0) == 0
        for (bx, by) in pts[1:]
        for (cx, cy) in pts[1:]
    )
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    left, top = math.floor(min(xs)), math.floor(min(ys))
    right, bottom = math.ceil(max(xs)), math.ceil(max(ys))
    if collinear or right == left or bottom == top:
        raise ValidationError(f"degenerate polygon: {points}")
    return BoundingBox(left, top, right - left, bottom - top)
