# %% [markdown]
# # The L3 as a bandwidth filter
#
# Inter-layer feature maps that overflow the accelerator SRAM go either to
# DRAM or, over the accelerator coherency port (ACP), into the CPU
# cluster's L3. The reference network is a tiny-YOLOv2-shaped detector at
# 416x416 with 8-bit data.

# %%
from cvsoc.traffic import MemoryConfig, acp_utilization, reference_network, simulate_network_traffic

net = reference_network()
report = simulate_network_traffic(net, MemoryConfig())
print("\n".join(report.to_csv_lines()))

# %% [markdown]
# Growing the L3 moves more spill traffic off DRAM. Weights always come
# from DRAM, so they set the floor.

# %%
weights = sum(layer.weight_bytes for layer in net.layers)
for l3_kib in (1, 512, 1024, 2048, 4096):
    r = simulate_network_traffic(net, MemoryConfig(l3_bytes=l3_kib * 1024))
    print(f"L3 {l3_kib:5d} KiB  DRAM {r.total_dram_bytes / 2**20:6.2f} MiB  "
          f"ACP {r.total_acp_bytes / 2**20:5.2f} MiB  (weights {weights / 2**20:.2f} MiB)")

# %% [markdown]
# At 60 fps the ACP traffic is a small fraction of a 20 GB/s port.

# %%
for fps in (30, 60, 120):
    cfg = MemoryConfig(fps=fps)
    print(f"{fps:3d} fps  ACP utilization {acp_utilization(report, cfg):.4f}")
