"""Desk-scale simulator of a continuous-vision mobile SoC.

CNN inference runs only on anchor frames; in between, detections are moved
along block motion vectors. Memory traffic is routed through the L3 over ACP
when a feature map fits, and a relative energy model turns both into an
accuracy/energy tradeoff per extrapolation window.
"""

from .dataset_io import (
    BoundingBox,
    Detection,
    DetectionSet,
    DetectionTrack,
    Frame,
    FrameSequence,
    load_frame_sequence,
    parse_annotations,
    polygon_to_box,
    read_pgm,
    write_annotations,
    write_frame_sequence,
    write_pgm,
)
from .energy import EnergyConfig, EnergySummary, frame_energy, load_energy_config, sequence_energy
from .errors import ValidationError
from .extrapolation import (
    DetectionOracle,
    ExtrapolationWindow,
    PipelineResult,
    aggregate_box_motion,
    extrapolate_detections,
    run_pipeline,
)
from .metrics import AccuracyReport, FrameScore, iou, score_frame, sequence_accuracy
from .motion import MotionField, MotionParams, MotionVector, block_sad, compute_motion_field
from .sweep import SweepRow, emit_csv, run_sweep
from .traffic import (
    LayerSpec,
    MemoryConfig,
    NetworkSpec,
    TrafficReport,
    acp_utilization,
    load_network,
    reference_network,
    simulate_network_traffic,
)

__version__ = "0.1.0"
