"""EW sweeps joining accuracy and energy into one tradeoff table."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .dataset_io import DetectionTrack, FrameSequence
from .energy import EnergyConfig, sequence_energy
from .errors import ValidationError
from .extrapolation import DetectionOracle, ExtrapolationWindow, motion_field_source, run_pipeline
from .metrics import accuracy_loss_pp, sequence_accuracy
from .motion import MotionParams
from .traffic import MemoryConfig, NetworkSpec, simulate_network_traffic

CSV_HEADER = "ew,inferences,mean_iou,accuracy_loss_pp,energy_total,saving_fraction"


@dataclass(frozen=True)
class SweepRow:
    ew: int
    inferences: int
    mean_iou: float
    accuracy_loss_pp: float
    energy_total: float
    saving_fraction: float

    def to_csv(self) -> str:
        return (f"{self.ew},{self.inferences},{self.mean_iou:.6f},{self.accuracy_loss_pp:.6f},"
                f"{self.energy_total:.6f},{self.saving_fraction:.6f}")


def run_sweep(seq: FrameSequence, truth: DetectionTrack, oracle: DetectionOracle,
              ews: Iterable[int], net: NetworkSpec, mem_cfg: MemoryConfig = MemoryConfig(),
              energy_cfg: EnergyConfig = EnergyConfig(), params: MotionParams = MotionParams(),
              iou_threshold: float = 0.5) -> list[SweepRow]:
    """One row per distinct EW, ascending; the EW=1 baseline row is always present.

    Motion fields are computed once and shared by every EW. Each EW gets its
    own oracle so inference counts never mix across runs.
    """
    requested = list(ews)
    if not requested:
        raise ValidationError("ews must not be empty")
    for ew in requested:
        if isinstance(ew, bool) or not isinstance(ew, int) or ew < 1:
            raise ValidationError(f"ew={ew!r}: extrapolation window must be an integer >= 1")
    if len(truth) != len(seq):
        raise ValidationError(f"track length mismatch: truth covers {len(truth)} frames, sequence has {len(seq)}")

    traffic = simulate_network_traffic(net, mem_cfg)
    fields = motion_field_source(seq, params)
    rows: list[SweepRow] = []
    baseline_iou = None
    for ew in sorted(set(requested) | {1}):
        try:
            result = run_pipeline(seq, oracle.fresh(), ExtrapolationWindow(ew), params, fields)
            accuracy = sequence_accuracy(result, truth, iou_threshold)
            energy = sequence_energy(energy_cfg, result, traffic)
        except ValidationError as exc:
            raise ValidationError(f"ew={ew}: {exc}") from exc
        if baseline_iou is None:
            baseline_iou = accuracy.mean_iou
        rows.append(SweepRow(
            ew=ew,
            inferences=result.inferences,
            mean_iou=accuracy.mean_iou,
            accuracy_loss_pp=accuracy_loss_pp(baseline_iou, accuracy.mean_iou),
            energy_total=energy.total,
            saving_fraction=energy.saving_fraction,
        ))
    return rows


def format_csv(rows: Iterable[SweepRow]) -> str:
    rows = sorted(rows, key=lambda r: r.ew)
    if not rows:
        raise ValidationError("no sweep rows to emit")
    return "\n".join([CSV_HEADER] + [r.to_csv() for r in rows]) + "\n"


def emit_csv(rows: Iterable[SweepRow], out_path: str | Path) -> None:
    """Write the sweep table sorted by EW, fractions to 6 decimals."""
    text = format_csv(rows)
    try:
        Path(out_path).write_bytes(text.encode("utf-8"))
    except OSError as exc:
        raise OSError(f"cannot write output: {out_path}: {exc.strerror or exc}") from exc
