#!/usr/bin/env python3
"""Per-point coverage: map the capacity coverage probability and ergodic
capacity over a cooperation region, and compare against the worst-case
point and the CR average.

Run:  python demos/03_coverage_maps.py [--plot]
"""

import sys

import numpy as np

from comp_coverage import (
    CoverageQuery,
    NetworkConfig,
    average_ccp,
    ccp_at_points,
    cr_grid_points,
    ergodic_at_points,
    worst_case_ccp,
    worst_case_ergodic,
)

cfg = NetworkConfig(d=1006.0, n=3, m=1, alpha=4.0, sigma_l=4.0)
q = CoverageQuery(0.5)

pts = cr_grid_points(cfg, 50)
probs = ccp_at_points(cfg, pts, q)
caps = ergodic_at_points(cfg, pts)

print(f"triangular CR, d = {cfg.d:.0f} m, target {q.c0} b/s/Hz")
print(f"coverage over {len(pts)} cells: min {probs.min():.4f}, "
      f"max {probs.max():.4f}")
k = int(np.argmin(probs))
print(f"minimum at ({pts[k, 0]:.0f}, {pts[k, 1]:.0f}) m "
      f"(the CR centroid is at ({cfg.d:.0f}, 0))")
print(f"worst-case formula:  {worst_case_ccp(cfg, q):.4f}")
print(f"CR-averaged coverage: {average_ccp(cfg, q, 64):.4f}")
print(f"ergodic capacity: min {caps.min():.4f}, max {caps.max():.4f} b/s/Hz; "
      f"worst-case formula {worst_case_ergodic(cfg):.4f}")

cfg2 = NetworkConfig(d=1034.0, n=2, m=1, alpha=4.0, sigma_l=4.0)
pts2 = cr_grid_points(cfg2, 50)
caps2 = ergodic_at_points(cfg2, pts2)
print(f"\ndiamond CR, d = {cfg2.d:.0f} m")
print(f"ergodic capacity: min {caps2.min():.4f} b/s/Hz "
      f"(worst-case formula {worst_case_ergodic(cfg2):.4f})")

if "--plot" in sys.argv:
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(12, 5))
    for ax, (p, v, label) in zip(axes, [(pts, probs, "coverage probability"),
                                        (pts2, caps2, "ergodic capacity (b/s/Hz)")]):
        sc = ax.scatter(p[:, 0], p[:, 1], c=v, s=6, cmap="viridis")
        fig.colorbar(sc, ax=ax, label=label)
        ax.set_aspect("equal")
        ax.set_xlabel("x (m)")
    axes[0].set_title("n = 3 triangular CR")
    axes[1].set_title("n = 2 diamond CR")
    fig.savefig("coverage_maps.png", dpi=150, bbox_inches="tight")
    print("\nwrote coverage_maps.png")
