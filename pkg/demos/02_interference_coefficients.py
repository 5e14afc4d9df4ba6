#!/usr/bin/env python3
"""Average inter-CR interference: the dimensionless beta(alpha, n)
coefficients, the closed-form average power versus cell size, the
first/second tier split, and a Monte Carlo cross-check.

Run:  python demos/02_interference_coefficients.py
"""

import math

from comp_coverage import NetworkConfig, beta_total, estimate_icri, icri_avg, watts_to_dbm

print("beta(alpha, n) over the first interference tier")
print("alpha      n=2      n=3")
for alpha in (3.0, 3.5, 4.0):
    row = [beta_total(alpha, n).total for n in (2, 3)]
    print(f"{alpha:5.1f}   {row[0]:.4f}   {row[1]:.4f}")

print("\naverage interference at one antenna (dBm), sigma_l = 4 dB")
print("   d(m)   n=2 a=3   n=2 a=4   n=3 a=3   n=3 a=4")
for d in (250.0, 500.0, 1000.0, 2000.0):
    cells = []
    for n in (2, 3):
        for alpha in (3.0, 4.0):
            cells.append(icri_avg(NetworkConfig(d=d, n=n, alpha=alpha)).total_avg.dbm)
    print(f"{d:7.0f}  " + "  ".join(f"{v:8.2f}" for v in cells))

print("\ntier split for n = 2, alpha = 4 (second tier is ~9 dB down)")
for d in (500.0, 1000.0):
    res = icri_avg(NetworkConfig(d=d, n=2, alpha=4.0, tiers=2))
    t1, t2 = res.per_tier
    print(f"  d = {d:6.0f} m: tier1 {t1.dbm:7.2f} dBm, tier2 {t2.dbm:7.2f} dBm, "
          f"gap {10 * math.log10(t1.watts / t2.watts):.2f} dB")

print("\nMonte Carlo cross-check at 100k trials (one interferer per region)")
for n in (2, 3):
    cfg = NetworkConfig(d=1000.0, n=n, alpha=4.0)
    analytic = icri_avg(cfg).total_avg
    est = estimate_icri(cfg, 100_000, master_seed=7)[0]
    print(f"  n = {n}: analytic {analytic.dbm:7.3f} dBm,  "
          f"simulated {watts_to_dbm(est.mean):7.3f} dBm "
          f"(+-{watts_to_dbm(est.mean + est.stderr) - watts_to_dbm(est.mean):.3f} dB)")
