"""Relative SoC energy for the continuous-vision pipeline.

Units are abstract. The default configuration makes one baseline (inference)
frame of the reference detector cost 100 units:

    sensor 10 + ISP 4 + static 1 + NNX compute 45 + memory traffic 40

An extrapolated frame costs sensor + ISP + static + extrapolation = 16. The
per-byte DRAM/ACP coefficients are normalized so that the reference
network's per-inference traffic under the default MemoryConfig sums to
exactly the memory share; ACP bytes cost 1/8 of DRAM bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ValidationError
from .extrapolation import PipelineResult
from .traffic import MemoryConfig, TrafficReport, reference_network, simulate_network_traffic

COMPONENTS = ("sensor", "isp", "static", "nnx", "dram", "acp", "extrapolation")

ACP_TO_DRAM_COST = 0.125
REFERENCE_MEMORY_ENERGY = 40.0


def normalized_byte_costs(traffic: TrafficReport, memory_energy: float = REFERENCE_MEMORY_ENERGY,
                          acp_to_dram: float = ACP_TO_DRAM_COST) -> tuple[float, float]:
    """(dram, acp) per-byte costs making ``traffic`` cost ``memory_energy``."""
    weighted = traffic.total_dram_bytes + acp_to_dram * traffic.total_acp_bytes
    if weighted <= 0:
        raise ValidationError("cannot normalize byte costs against zero traffic")
    dram = memory_energy / weighted
    return dram, dram * acp_to_dram


REFERENCE_TRAFFIC = simulate_network_traffic(reference_network(), MemoryConfig())
_DRAM_PER_BYTE, _ACP_PER_BYTE = normalized_byte_costs(REFERENCE_TRAFFIC)


@dataclass(frozen=True)
class EnergyConfig:
    e_sensor: float = 10.0
    e_isp: float = 4.0
    e_nnx_inference: float = 45.0
    e_dram_per_byte: float = _DRAM_PER_BYTE
    e_acp_per_byte: float = _ACP_PER_BYTE
    e_extrapolation: float = 1.0
    e_static: float = 1.0

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ValidationError(f"{f.name} must be non-negative, got {getattr(self, f.name)}")
        # on-chip transfer must be cheaper than DRAM; an all-zero memory model is allowed
        if self.e_acp_per_byte > self.e_dram_per_byte or (
            self.e_acp_per_byte == self.e_dram_per_byte and self.e_dram_per_byte > 0
        ):
            raise ValidationError(
                f"e_acp_per_byte ({self.e_acp_per_byte}) must be below e_dram_per_byte ({self.e_dram_per_byte})"
            )

    def scaled(self, factor: float) -> EnergyConfig:
        return replace(self, **{f.name: getattr(self, f.name) * factor for f in fields(self)})


def frame_breakdown(cfg: EnergyConfig, is_inference: bool, traffic: TrafficReport) -> dict[str, float]:
    parts = dict.fromkeys(COMPONENTS, 0.0)
    parts["sensor"] = cfg.e_sensor
    parts["isp"] = cfg.e_isp
    parts["static"] = cfg.e_static
    if is_inference:
        parts["nnx"] = cfg.e_nnx_inference
        parts["dram"] = traffic.total_dram_bytes * cfg.e_dram_per_byte
        parts["acp"] = traffic.total_acp_bytes * cfg.e_acp_per_byte
    else:
        parts["extrapolation"] = cfg.e_extrapolation
    return parts


def frame_energy(cfg: EnergyConfig, is_inference: bool, traffic: TrafficReport) -> float:
    """Energy of one frame; ``traffic`` is ignored for extrapolated frames."""
    return sum(frame_breakdown(cfg, is_inference, traffic).values())


def nnx_share(cfg: EnergyConfig, traffic: TrafficReport) -> float:
    """NNX compute as a fraction of a baseline (inference) frame; should stay <= 0.5."""
    return cfg.e_nnx_inference / frame_energy(cfg, True, traffic)


@dataclass(frozen=True)
class EnergySummary:
    total: float
    per_component: dict[str, float]
    baseline_total: float
    saving_fraction: float


def _combine(n_inf: int, n_ext: int, inf: dict[str, float], ext: dict[str, float]) -> dict[str, float]:
    return {c: n_inf * inf[c] + n_ext * ext[c] for c in COMPONENTS}


def sequence_energy(cfg: EnergyConfig, result: PipelineResult, traffic: TrafficReport) -> EnergySummary:
    """Energy of a pipeline run against the all-inference baseline.

    Both totals sum the components in the same order, so EW=1 gives a
    saving of exactly zero.
    """
    n = len(result.per_frame_boxes)
    n_inf = len(result.inference_frames)
    inf = frame_breakdown(cfg, True, traffic)
    ext = frame_breakdown(cfg, False, traffic)
    per_component = _combine(n_inf, n - n_inf, inf, ext)
    total = sum(per_component.values())
    baseline = sum(_combine(n, 0, inf, ext).values())
    saving = 1.0 - total / baseline if baseline > 0 else 0.0
    return EnergySummary(total, per_component, baseline, saving)


def parse_energy_config(text: str) -> EnergyConfig:
    """Parse ``key = value`` lines; missing keys keep their defaults."""
    known = {f.name for f in fields(EnergyConfig)}
    values: dict[str, float] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        key = key.strip()
        if not sep:
            raise ValidationError(f"energy config line {lineno}: expected 'key = value'")
        if key not in known:
            raise ValidationError(f"energy config line {lineno}: unknown key {key!r}")
        try:
            values[key] = float(value)
        except ValueError:
            raise ValidationError(f"energy config line {lineno}: bad value {value.strip()!r}") from None
    return EnergyConfig(**values)


def load_energy_config(path: str | Path) -> EnergyConfig:
    return parse_energy_config(Path(path).read_text(encoding="utf-8"))


def format_energy_config(cfg: EnergyConfig) -> str:
    return "".join(f"{f.name} = {getattr(cfg, f.name)!r}\n" for f in fields(cfg))
