"""Sparsity of the feature matrix.

A point can touch at most one feature per level vector, so a full design at
level n yields exactly C(n+D-1, D) nonzeros per generic point while the
design holds |S*_n| columns.  The nonzero fraction therefore decays like
n / 2^n, which is what makes the downstream Gram accumulation cheap.
"""

from math import comb

import numpy as np

from eof import KernelSpec, embed_batch, enumerate_sparse_grid

rng = np.random.default_rng(1)

for D in (1, 2, 3):
    spec = KernelSpec("laplace", omega=2.0, dim=D)
    X = rng.uniform(0.0, 1.0, (500, D))
    print(f"D = {D}")
    print(f"{'n':>3} {'columns':>8} {'nnz/row':>8} {'fraction':>9}")
    for n in range(2, 7):
        S = enumerate_sparse_grid(D, n)
        F = embed_batch(spec, S, X)
        per_row = F.nnz / X.shape[0]
        print(f"{n:>3} {len(S):>8} {per_row:>8.1f} {per_row / len(S):>9.4f}")
        assert per_row <= comb(n + D - 1, D)
    print()
