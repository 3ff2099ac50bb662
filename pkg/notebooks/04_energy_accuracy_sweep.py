# %% [markdown]
# # Energy/accuracy tradeoff sweep
#
# `run_sweep` joins the pieces: for each EW it runs the pipeline, scores
# it against ground truth and prices it with the energy model. Under the
# default configuration an inference frame costs 100 units and an
# extrapolated one 16.

# %%
import tempfile
from pathlib import Path

from cvsoc.dataset_io import BoundingBox
from cvsoc.energy import REFERENCE_TRAFFIC, EnergyConfig, frame_energy, nnx_share
from cvsoc.extrapolation import DetectionOracle
from cvsoc.sweep import emit_csv, run_sweep
from cvsoc.synthetic import moving_box_track, translated_sequence
from cvsoc.traffic import MemoryConfig, reference_network

cfg = EnergyConfig()
print("inference frame   :", round(frame_energy(cfg, True, REFERENCE_TRAFFIC), 9))
print("extrapolated frame:", frame_energy(cfg, False, REFERENCE_TRAFFIC))
print("NNX share         :", round(nnx_share(cfg, REFERENCE_TRAFFIC), 9))

# %%
n = 120
seq = translated_sequence(416, 256, n, shift=(2, 1), seed=5)
truth = moving_box_track(BoundingBox(16, 16, 48, 48), n, shift=(2, 1))
rows = run_sweep(seq, truth, DetectionOracle(truth), [2, 4, 8, 16], reference_network(),
                 MemoryConfig(), cfg)
for r in rows:
    print(f"EW={r.ew:2d}  inferences={r.inferences:3d}  loss={r.accuracy_loss_pp:.3f} pp  "
          f"saving={r.saving_fraction:.3f}")

# %% [markdown]
# The CSV is the hand-off to any plotting tool.

# %%
out = Path(tempfile.mkdtemp()) / "sweep.csv"
emit_csv(rows, out)
print(out.read_text())
