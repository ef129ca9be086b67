"""Head-to-head benchmark on a synthetic kernel-expansion target.

The target is a 5-term Laplace kernel expansion over [0,1]^2 plus noise.
The multilevel features are compared against the four random-feature
baselines at matched feature counts; the multilevel rows also carry far
fewer nonzeros, which shows up in the timing split.
"""

import numpy as np

from eof import bench

ds = bench.synthetic_rkhs_dataset(N_train=2000, N_test=500, D=2, omega=2.0,
                                  seed=11)
sizes = [17, 49, 129]       # full designs at levels 3, 4, 5
results = bench.run_benchmark(ds, ["eof", "rks", "orf", "lkrf", "eerf"],
                              sizes, runs=10, seed=7)
print(bench.report(results, fmt="text"))

print("median test MSE by method and feature count")
for M in sizes:
    row = {r.method: float(np.median(r.errors)) for r in results if r.M == M}
    best = min(row, key=row.get)
    cells = "  ".join(f"{m}={v:.4f}" for m, v in row.items())
    print(f"  M={M:>3}: {cells}  (best: {best})")
