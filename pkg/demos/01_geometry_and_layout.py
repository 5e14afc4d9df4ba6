#!/usr/bin/env python3
"""Walk through the network geometry: the hexagonal BS lattice, the
cooperation-region tessellation, the reuse-6 coloring and the tiered
co-channel layout seen by a base station.

Run:  python demos/01_geometry_and_layout.py [--plot]
"""

import json
import sys

from comp_coverage import (
    NetworkConfig,
    build_tessellation,
    color_reuse6,
    interference_layout,
    worst_case_points,
)

d = 500.0  # hexagon side length, meters

for n in (2, 3):
    cfg = NetworkConfig(d=d, n=n)
    regions = color_reuse6(build_tessellation(cfg, extent=2))
    shape = "diamond" if n == 2 else "triangle"
    area = regions[0].polygon.area
    print(f"\n=== cooperation order n = {n} ({shape} CRs) ===")
    print(f"CR area: {area:,.0f} m^2  ({area / cfg.cell_area:.4f} of a hexagonal cell)")
    print(f"regions built: {len(regions)}; colors used: "
          f"{sorted({r.color for r in regions})}")

    lay = interference_layout(cfg)
    print(f"co-channel interference layout: {len(lay.tier1)} tier-1 and "
          f"{len(lay.tier2)} tier-2 regions (d-normalized frame)")
    nearest = min(lay.tier1, key=lambda p: min((v.x**2 + v.y**2) for v in p.vertices))
    print("nearest tier-1 region vertices (units of d):",
          [(round(v.x, 3), round(v.y, 3)) for v in nearest.vertices])

    for p, rvec in worst_case_points(cfg):
        print(f"worst-case point ({p.x:7.1f}, {p.y:7.1f}) m, "
              f"BS distances {tuple(round(r, 1) for r in rvec)}")

# the same layout document the CLI's `geometry dump` emits
doc = interference_layout(NetworkConfig(d=d, n=2)).to_dict()
print("\nlayout export (first region):")
print(json.dumps(doc["regions"][0], indent=2))

if "--plot" in sys.argv:
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(12, 6))
    for ax, n in zip(axes, (2, 3)):
        cfg = NetworkConfig(d=1.0, n=n)
        regions = color_reuse6(build_tessellation(cfg, extent=3))
        cmap = plt.get_cmap("tab10")
        for r in regions:
            xy = [(p.x, p.y) for p in r.polygon.vertices]
            ax.fill(*zip(*(xy + xy[:1])), color=cmap(r.color - 1), alpha=0.55,
                    edgecolor="k", linewidth=0.4)
        ax.set_title(f"reuse-6 coloring, n = {n}")
        ax.set_aspect("equal")
    fig.savefig("geometry_layout.png", dpi=150, bbox_inches="tight")
    print("\nwrote geometry_layout.png")
