"""Command-line entry point: ``run``, ``mv`` and ``traffic`` subcommands.

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .dataset_io import load_frame_sequence, parse_annotations, read_pgm
from .energy import load_energy_config
from .errors import ValidationError
from .extrapolation import DetectionOracle
from .motion import MotionParams, compute_motion_field
from .sweep import emit_csv, run_sweep
from .traffic import MemoryConfig, acp_utilization, load_network, simulate_network_traffic

log = logging.getLogger("cvsoc")

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ValidationError(message)


def _ew_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--ew expects comma-separated integers, got {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"--ew values must be integers >= 1, got {text!r}")
    return values


def _write_text(path: str | Path, text: str) -> None:
    try:
        Path(path).write_bytes(text.encode("utf-8"))
    except OSError as exc:
        raise OSError(f"cannot write output: {path}: {exc.strerror or exc}") from exc


def cmd_run(args: argparse.Namespace) -> None:
    seq = load_frame_sequence(args.frames)
    truth = parse_annotations(args.truth, len(seq))
    oracle_track = parse_annotations(args.oracle, len(seq)) if args.oracle else truth
    net = load_network(args.network)
    energy_cfg = load_energy_config(args.energy_config)
    mem_cfg = MemoryConfig(l3_bytes=args.mem_l3, sram_bytes=args.mem_sram)
    params = MotionParams(args.block, args.search)
    rows = run_sweep(seq, truth, DetectionOracle(oracle_track), args.ew, net, mem_cfg,
                     energy_cfg, params, args.iou_threshold)
    emit_csv(rows, args.out)
    log.info("wrote %d sweep rows to %s", len(rows), args.out)


def cmd_mv(args: argparse.Namespace) -> None:
    field = compute_motion_field(read_pgm(args.prev), read_pgm(args.curr),
                                 MotionParams(args.block, args.search))
    _write_text(args.out, "\n".join(field.to_csv_lines()) + "\n")


def cmd_traffic(args: argparse.Namespace) -> None:
    cfg = MemoryConfig(l3_bytes=args.l3, sram_bytes=args.sram, acp_bw_bytes_per_s=args.acp_bw, fps=args.fps)
    report = simulate_network_traffic(load_network(args.network), cfg)
    lines = report.to_csv_lines() + [f"#acp_utilization={acp_utilization(report, cfg):.9f}"]
    _write_text(args.out, "\n".join(lines) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cvsoc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="EW sweep: accuracy and energy per extrapolation window")
    run.add_argument("--frames", required=True, help="directory of frame_%%06d.pgm files")
    run.add_argument("--truth", required=True, help="ground-truth annotation CSV")
    run.add_argument("--oracle", help="recorded detections replayed at anchors (default: truth)")
    run.add_argument("--ew", required=True, type=_ew_list, help="comma-separated windows, e.g. 1,2,4,8")
    run.add_argument("--network", required=True)
    run.add_argument("--energy-config", required=True)
    run.add_argument("--mem-l3", type=int, default=MemoryConfig.l3_bytes)
    run.add_argument("--mem-sram", type=int, default=MemoryConfig.sram_bytes)
    run.add_argument("--block", type=int, default=16)
    run.add_argument("--search", type=int, default=8)
    run.add_argument("--iou-threshold", type=float, default=0.5)
    run.add_argument("--out", required=True)
    run.set_defaults(func=cmd_run)

    mv = sub.add_parser("mv", help="motion field between two PGM frames")
    mv.add_argument("--prev", required=True)
    mv.add_argument("--curr", required=True)
    mv.add_argument("--block", type=int, default=16)
    mv.add_argument("--search", type=int, default=8)
    mv.add_argument("--out", required=True)
    mv.set_defaults(func=cmd_mv)

    traffic = sub.add_parser("traffic", help="per-layer ACP/DRAM traffic of one inference")
    traffic.add_argument("--network", required=True)
    traffic.add_argument("--l3", type=int, default=MemoryConfig.l3_bytes)
    traffic.add_argument("--sram", type=int, default=MemoryConfig.sram_bytes)
    traffic.add_argument("--fps", type=float, default=MemoryConfig.fps)
    traffic.add_argument("--acp-bw", type=float, default=MemoryConfig.acp_bw_bytes_per_s)
    traffic.add_argument("--out", required=True)
    traffic.set_defaults(func=cmd_traffic)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
