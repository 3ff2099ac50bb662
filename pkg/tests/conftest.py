from pathlib import Path

import pytest

from cvsoc.dataset_io import BoundingBox, write_annotations, write_frame_sequence
from cvsoc.energy import EnergyConfig, format_energy_config
from cvsoc.synthetic import moving_box_track, translated_sequence
from cvsoc.traffic import format_network, reference_network


def write_scene(root: Path, n_frames=24, size=(160, 128), shift=(2, 1), seed=5):
    seq = translated_sequence(size[0], size[1], n_frames, shift, seed=seed)
    truth = moving_box_track(BoundingBox(16, 16, 48, 48), n_frames, shift)
    paths = {
        "frames": root / "frames",
        "truth": root / "truth.csv",
        "network": root / "net.csv",
        "energy": root / "energy.cfg",
    }
    write_frame_sequence(seq, paths["frames"])
    write_annotations(truth, paths["truth"], header=["synthetic translated scene"])
    paths["network"].write_text(format_network(reference_network()))
    paths["energy"].write_text(format_energy_config(EnergyConfig()))
    return paths


@pytest.fixture
def scene_files(tmp_path):
    return write_scene(tmp_path)


# --- acceptance summary -----------------------------------------------------

_acceptance_lines: list[str] = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _acceptance_lines.append(f"{'PASS' if report.passed else 'FAIL'}  {name}")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
