#!/usr/bin/env python3
"""Network dimensioning: how coverage depends on base-station density, the
minimum density meeting a worst-case target, and the comparison between
cooperation orders and the no-cooperation baselines.

Run:  python demos/05_density_design.py  (a few minutes: the n = 1
baseline rows are simulated)
"""

import numpy as np

from comp_coverage import CoverageQuery, NetworkConfig, solve_density, sweep_metric
from comp_coverage.design import compare_orders

q = CoverageQuery(0.5)

print("worst-case coverage vs density (analytic, sigma_l = 4 dB, m = 1)")
lams = np.geomspace(2e-7, 2e-6, 6)
d_grid = [float(np.sqrt(2.0 / (3.0 * np.sqrt(3.0) * lam))) for lam in lams]
schemes = [NetworkConfig(d=500.0, n=2, alpha=3.0), NetworkConfig(d=500.0, n=2, alpha=4.0),
           NetworkConfig(d=500.0, n=3, alpha=3.0), NetworkConfig(d=500.0, n=3, alpha=4.0)]
rows = sweep_metric(schemes, d_grid, q)
print("lambda(/m^2)  " + "  ".join(f"n{c.n} a{c.alpha:g}" for c in schemes))
for i, lam in enumerate(lams):
    vals = [rows[j * len(d_grid) + i].ccp for j in range(len(schemes))]
    print(f"{lam:11.2e}  " + "    ".join(f"{v:.3f}" for v in vals))
print("note: alpha = 3 rows are interference-limited, so density barely matters")

print("\nminimum density for worst-case coverage 0.5 at 0.5 b/s/Hz")
for n, m in [(2, 1), (3, 1), (3, 2)]:
    cfg = NetworkConfig(d=500.0, n=n, m=m, alpha=4.0, sigma_l=4.0)
    sol = solve_density(cfg, 0.5, q)
    print(f"  n = {n}, m = {m}: lambda = {sol.lam:.3e} /m^2 "
          f"(d = {sol.d:.0f} m, achieved {sol.achieved:.4f}, {sol.status})")

cfg = NetworkConfig(d=500.0, n=2, m=1, alpha=4.0, sigma_l=4.0)
sol = solve_density(cfg, 0.5, q, metric="ergodic")
print(f"  n = 2 ergodic target 0.5 b/s/Hz: lambda = {sol.lam:.3e} /m^2 "
      f"(d = {sol.d:.0f} m)")

print("\ncooperation orders vs simulated no-cooperation baselines "
      "(50k trials, may take a minute)")
rows = compare_orders(NetworkConfig(d=500.0, n=1, reuse=1, alpha=4.0, sigma_l=4.0),
                      0.5, q, trials=50_000, master_seed=99)
print(f"{'scheme':18s} {'lambda(/m^2)':>12s} {'d(m)':>8s} {'vs reuse-1':>11s} "
      f"{'vs reuse-7':>11s}")
for r in rows:
    lam = f"{r.lam:.3e}" if r.lam else "-"
    dd = f"{r.d:.0f}" if r.d else "-"
    r1 = f"{r.ratio_vs_reuse1:.3f}" if r.ratio_vs_reuse1 else "-"
    r7 = f"{r.ratio_vs_reuse7:.3f}" if r.ratio_vs_reuse7 else "-"
    print(f"{r.scheme:18s} {lam:>12s} {dd:>8s} {r1:>11s} {r7:>11s}")
