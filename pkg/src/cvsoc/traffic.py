"""Per-inference CNN memory traffic with the CPU-cluster L3 as a bandwidth filter.

Routing rules, per layer:

* weights are always read from DRAM;
* the network input is read from DRAM once (charged to the first layer);
* a non-final ofmap that fits the accelerator SRAM never leaves it; otherwise
  it is written and re-read (2x bytes) over ACP into L3 when it fits L3,
  else through DRAM;
* the final ofmap is written once, over ACP when it fits L3, else to DRAM.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ValidationError

MIB = 1 << 20


@dataclass(frozen=True)
class LayerSpec:
    name: str
    ofmap_bytes: int
    weight_bytes: int
    macs: int = 0

    def __post_init__(self) -> None:
        if self.ofmap_bytes < 0 or self.weight_bytes < 0 or self.macs < 0:
            raise ValidationError(f"layer {self.name!r}: byte and MAC counts must be non-negative")


@dataclass(frozen=True)
class NetworkSpec:
    layers: tuple[LayerSpec, ...]
    input_bytes: int = 0

    def __post_init__(self) -> None:
        layers = tuple(self.layers)
        if not layers:
            raise ValidationError("network has no layers")
        if self.input_bytes < 0:
            raise ValidationError(f"input_bytes must be non-negative, got {self.input_bytes}")
        object.__setattr__(self, "layers", layers)


@dataclass(frozen=True)
class MemoryConfig:
    l3_bytes: int = 2 * MIB
    sram_bytes: int = 512 * 1024
    acp_bw_bytes_per_s: float = 20e9
    fps: float = 60.0

    def __post_init__(self) -> None:
        for name in ("l3_bytes", "sram_bytes", "acp_bw_bytes_per_s", "fps"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be strictly positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class LayerTraffic:
    name: str
    acp_bytes: int
    dram_bytes: int


@dataclass(frozen=True)
class TrafficReport:
    per_layer: tuple[LayerTraffic, ...]
    total_acp_bytes: int
    total_dram_bytes: int

    @property
    def total_bytes(self) -> int:
        return self.total_acp_bytes + self.total_dram_bytes

    def to_csv_lines(self) -> list[str]:
        lines = ["name,acp_bytes,dram_bytes"]
        lines += [f"{t.name},{t.acp_bytes},{t.dram_bytes}" for t in self.per_layer]
        lines.append(f"total,{self.total_acp_bytes},{self.total_dram_bytes}")
        return lines


def simulate_network_traffic(net: NetworkSpec, cfg: MemoryConfig = MemoryConfig()) -> TrafficReport:
    last = len(net.layers) - 1
    rows = []
    for i, layer in enumerate(net.layers):
        acp = 0
        dram = layer.weight_bytes
        if i == 0:
            dram += net.input_bytes
        if i == last:
            if layer.ofmap_bytes <= cfg.l3_bytes:
                acp += layer.ofmap_bytes
            else:
                dram += layer.ofmap_bytes
        elif layer.ofmap_bytes > cfg.sram_bytes:
            if layer.ofmap_bytes <= cfg.l3_bytes:
                acp += 2 * layer.ofmap_bytes
            else:
                dram += 2 * layer.ofmap_bytes
        rows.append(LayerTraffic(layer.name, acp, dram))
    return TrafficReport(
        per_layer=tuple(rows),
        total_acp_bytes=sum(r.acp_bytes for r in rows),
        total_dram_bytes=sum(r.dram_bytes for r in rows),
    )


def acp_utilization(report: TrafficReport, cfg: MemoryConfig = MemoryConfig()) -> float:
    """Fraction of the ACP bandwidth used at ``cfg.fps``; above 1.0 is infeasible."""
    return report.total_acp_bytes * cfg.fps / cfg.acp_bw_bytes_per_s


# --- network files -----------------------------------------------------------

_NETWORK_HEADER = ["name", "ofmap_bytes", "weight_bytes", "macs"]


def parse_network(text: str) -> NetworkSpec:
    """Parse a network CSV.

    A header ``name,ofmap_bytes,weight_bytes,macs`` is required. ``#`` lines
    are comments, except ``#input_bytes=N`` which sets the input image size
    (0 when absent).
    """
    input_bytes = 0
    body = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            key, _, value = stripped[1:].partition("=")
            if key.strip() == "input_bytes":
                try:
                    input_bytes = int(value)
                except ValueError:
                    raise ValidationError(f"line {lineno}: bad input_bytes {value!r}") from None
            continue
        if stripped:
            body.append(stripped)
    if not body or [h.strip() for h in body[0].split(",")] != _NETWORK_HEADER:
        raise ValidationError("network file must start with header name,ofmap_bytes,weight_bytes,macs")
    layers = []
    for row in csv.reader(io.StringIO("\n".join(body[1:]))):
        if len(row) != 4:
            raise ValidationError(f"network row {row!r}: expected 4 fields")
        try:
            layers.append(LayerSpec(row[0].strip(), int(row[1]), int(row[2]), int(row[3])))
        except ValueError as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"network row {row!r}: non-integer field") from None
    return NetworkSpec(tuple(layers), input_bytes)


def load_network(path: str | Path) -> NetworkSpec:
    return parse_network(Path(path).read_text(encoding="utf-8"))


def format_network(net: NetworkSpec) -> str:
    lines = [f"#input_bytes={net.input_bytes}", ",".join(_NETWORK_HEADER)]
    lines += [f"{l.name},{l.ofmap_bytes},{l.weight_bytes},{l.macs}" for l in net.layers]
    return "\n".join(lines) + "\n"


def reference_network() -> NetworkSpec:
    """Tiny-YOLOv2-shaped detector at 416x416 with 8-bit activations and weights."""
    text = resources.files("cvsoc").joinpath("data/tiny_yolov2_416.csv").read_text(encoding="utf-8")
    return parse_network(text)
