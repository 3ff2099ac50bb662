"""Exhaustive block-matching motion estimation.

A reported vector ``v`` for a block of ``curr`` is the displacement of its
content since ``prev``: the block at origin ``p`` in ``curr`` is compared
against the block at ``p - v`` in ``prev``, i.e. the cost is
``block_sad(prev, curr, p, -v)``. Content that moved right by 4 pixels
reports ``dx = +4``, which is what box extrapolation adds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple

import numba
import numpy as np

from .dataset_io import Frame
from .errors import ValidationError


class MotionVector(NamedTuple):
    dx: int
    dy: int


@dataclass(frozen=True)
class MotionParams:
    block_size: int = 16
    search_range: int = 8

    def __post_init__(self) -> None:
        if self.block_size < 4:
            raise ValidationError(f"block_size must be >= 4, got {self.block_size}")
        if self.search_range < 1:
            raise ValidationError(f"search_range must be >= 1, got {self.search_range}")


@dataclass(frozen=True, eq=False)
class MotionField:
    """Per-block vectors; ``vectors[by, bx] == (dx, dy)``."""

    blocks_x: int
    blocks_y: int
    vectors: np.ndarray
    params: MotionParams

    def __post_init__(self) -> None:
        vectors = np.ascontiguousarray(self.vectors, dtype=np.int64)
        if vectors.shape != (self.blocks_y, self.blocks_x, 2):
            raise ValidationError(
                f"vector grid shape {vectors.shape} != ({self.blocks_y}, {self.blocks_x}, 2)"
            )
        vectors.flags.writeable = False
        object.__setattr__(self, "vectors", vectors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MotionField):
            return NotImplemented
        return self.params == other.params and np.array_equal(self.vectors, other.vectors)

    def __getitem__(self, block: tuple[int, int]) -> MotionVector:
        bx, by = block
        dx, dy = self.vectors[by, bx]
        return MotionVector(int(dx), int(dy))

    @classmethod
    def uniform(cls, blocks_x: int, blocks_y: int, vector: tuple[int, int],
                params: MotionParams = MotionParams()) -> MotionField:
        vectors = np.empty((blocks_y, blocks_x, 2), dtype=np.int64)
        vectors[...] = vector
        return cls(blocks_x, blocks_y, vectors, params)

    def to_csv_lines(self) -> list[str]:
        lines = ["block_x,block_y,dx,dy"]
        for by in range(self.blocks_y):
            for bx in range(self.blocks_x):
                dx, dy = self.vectors[by, bx]
                lines.append(f"{bx},{by},{dx},{dy}")
        return lines

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self.to_csv_lines()) + "\n", encoding="utf-8")


def block_sad(prev: Frame, curr: Frame, block_origin: tuple[int, int],
              displacement: tuple[int, int], block_size: int) -> int:
    """Sum over the block of ``|curr[p] - prev[p + displacement]|``."""
    x, y = block_origin
    dx, dy = displacement
    if x < 0 or y < 0 or x + block_size > curr.width or y + block_size > curr.height:
        raise ValidationError(f"block at {block_origin} lies outside the current frame")
    sx, sy = x + dx, y + dy
    if sx < 0 or sy < 0 or sx + block_size > prev.width or sy + block_size > prev.height:
        raise ValidationError(f"displacement out of bounds: {displacement} from {block_origin}")
    a = curr.pixels[y : y + block_size, x : x + block_size].astype(np.int64)
    b = prev.pixels[sy : sy + block_size, sx : sx + block_size].astype(np.int64)
    return int(np.abs(a - b).sum())


@lru_cache(maxsize=None)
def candidate_order(search_range: int) -> np.ndarray:
    """All vectors within the search square, in tie-break order.

    Sorted by squared magnitude, then ``dy``, then ``dx``. The search keeps
    the first strictly-smaller cost, so this order alone decides ties.
    """
    r = search_range
    cands = [(dx, dy) for dy in range(-r, r + 1) for dx in range(-r, r + 1)]
    cands.sort(key=lambda v: (v[0] * v[0] + v[1] * v[1], v[1], v[0]))
    out = np.array(cands, dtype=np.int64)
    out.flags.writeable = False
    return out


@numba.njit(cache=True, nogil=True)
def _full_search(prev, curr, block, blocks_x, blocks_y, cands, out):
    height, width = prev.shape
    n_cands = cands.shape[0]
    for by in range(blocks_y):
        y0 = by * block
        for bx in range(blocks_x):
            x0 = bx * block
            best = np.int64(1) << 62
            best_k = -1
            for k in range(n_cands):
                sx = x0 - cands[k, 0]
                sy = y0 - cands[k, 1]
                if sx < 0 or sy < 0 or sx + block > width or sy + block > height:
                    continue
                s = np.int64(0)
                for r in range(block):
                    for c in range(block):
                        d = np.int64(curr[y0 + r, x0 + c]) - np.int64(prev[sy + r, sx + c])
                        s += d if d >= 0 else -d
                    # partial sums only grow; a later candidate must be strictly better
                    if s >= best:
                        break
                if s < best:
                    best = s
                    best_k = k
            out[by, bx, 0] = cands[best_k, 0]
            out[by, bx, 1] = cands[best_k, 1]


def compute_motion_field(prev: Frame, curr: Frame, params: MotionParams = MotionParams()) -> MotionField:
    """Full-search motion field of ``curr`` relative to ``prev``.

    Residual pixels beyond the last whole block are ignored. Candidate source
    blocks falling outside ``prev`` are skipped, never padded.
    """
    if (prev.width, prev.height) != (curr.width, curr.height):
        raise ValidationError(
            f"frame size mismatch: {prev.width}x{prev.height} vs {curr.width}x{curr.height}"
        )
    b = params.block_size
    if curr.width < b or curr.height < b:
        raise ValidationError(f"frame too small: {curr.width}x{curr.height} < block {b}")
    blocks_x, blocks_y = curr.width // b, curr.height // b
    out = np.zeros((blocks_y, blocks_x, 2), dtype=np.int64)
    _full_search(prev.pixels, curr.pixels, b, blocks_x, blocks_y,
                 candidate_order(params.search_range), out)
    return MotionField(blocks_x, blocks_y, out, params)
