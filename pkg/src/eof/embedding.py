"""Sparse feature embedding and truncated kernel reconstruction.

For each level vector in the design, at most one position index can be
nonzero at a given point (supports within a level have disjoint interiors),
and it is found directly from the dyadic coordinates of the point: the odd
member of {ceil(x 2^l), floor(x 2^l)} per dimension.  The embedding therefore
costs O(#levels) per point regardless of the total feature count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.sparse as sp

from .design import IndexSet
from .errors import DimError
from .features import _sinh_ratio, phi_1d
from .kernels import (BROWNIAN_BRIDGE, LAPLACE, SOBOLEV, KernelSpec,
                      _prepare_point, expansion_coeff)

SCALE_SQRT = "sqrt"   # value = sqrt(C) * phi; makes z(x).z(x') track k(x,x')
SCALE_RAW = "raw"     # value = C * phi; the literal per-level update rule
SCALE_PLAIN = "plain"  # value = phi alone; learned weights absorb the constants


@dataclass(frozen=True)
class SparseVec:
    """A length-M sparse vector with strictly increasing column indices."""

    dim: int
    cols: np.ndarray
    vals: np.ndarray

    @property
    def nnz(self) -> int:
        return len(self.cols)

    def toarray(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.cols] = self.vals
        return out

    def dot(self, other: "SparseVec") -> float:
        if self.dim != other.dim:
            raise DimError("sparse vectors have different dimensions")
        out = 0.0
        ia = ib = 0
        while ia < self.nnz and ib < other.nnz:
            ca, cb = self.cols[ia], other.cols[ib]
            if ca == cb:
                out += self.vals[ia] * other.vals[ib]
                ia += 1
                ib += 1
            elif ca < cb:
                ia += 1
            else:
                ib += 1
        return float(out)


def _scale_value(spec: KernelSpec, l, scale: str) -> float:
    if scale == SCALE_PLAIN:
        return 1.0
    c = expansion_coeff(spec, l)
    return np.sqrt(c) if scale == SCALE_SQRT else c


def embed(spec: KernelSpec, S: IndexSet, x, scale: str = SCALE_SQRT) -> SparseVec:
    """Sparse feature vector z(x) over the columns of ``S``."""
    x = _prepare_point(spec, x)
    if S.dim and x.shape[0] != S.dim:
        raise DimError(f"point dimension {x.shape[0]} != design dimension {S.dim}")
    cols = []
    vals = []
    for l, positions in S.by_level().items():
        i = []
        ok = True
        for d, ld in enumerate(l):
            t = x[d] * 2.0 ** ld
            up, dn = int(np.ceil(t)), int(np.floor(t))
            if up % 2 == 1:
                i.append(up)
            elif dn % 2 == 1:
                i.append(dn)
            else:
                # x_d sits on an even grid node; every feature of this level
                # vanishes there
                ok = False
                break
        if not ok:
            continue
        col = positions.get(tuple(i))
        if col is None:
            continue
        val = _scale_value(spec, l, scale)
        for d, ld in enumerate(l):
            val *= phi_1d(spec, ld, i[d], x[d])
        if val != 0.0:
            cols.append(col)
            vals.append(val)
    order = np.argsort(cols) if cols else []
    return SparseVec(len(S),
                     np.asarray(cols, dtype=np.int64)[order] if cols else np.empty(0, np.int64),
                     np.asarray(vals, dtype=float)[order] if cols else np.empty(0))


def embed_batch(spec: KernelSpec, S: IndexSet, X,
                scale: str = SCALE_SQRT) -> sp.csr_matrix:
    """Embed N points into an N x M CSR matrix, vectorized per level."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimError("X must be a 2-D array of shape (N, D)")
    if S.dim and X.shape[1] != S.dim:
        raise DimError(f"row dimension {X.shape[1]} != design dimension {S.dim}")
    if not np.all(np.isfinite(X)):
        raise DimError("X contains non-finite values")
    if spec.strict:
        if np.any(X < 0.0) or np.any(X > 1.0):
            raise DimError("X outside [0,1]^D in strict mode")
    else:
        X = np.clip(X, 0.0, 1.0)
    N = X.shape[0]
    rows_out, cols_out, vals_out = [], [], []
    for l, positions in S.by_level().items():
        valid = np.ones(N, dtype=bool)
        idx_mat = np.zeros((N, len(l)), dtype=np.int64)
        value = np.full(N, _scale_value(spec, l, scale))
        for d, ld in enumerate(l):
            t = X[:, d] * 2.0 ** ld
            up = np.ceil(t).astype(np.int64)
            dn = np.floor(t).astype(np.int64)
            i_d = np.where(up % 2 == 1, up, dn)
            valid &= (i_d % 2 == 1)
            idx_mat[:, d] = i_d
            value *= _phi_profile(spec, ld, np.abs(X[:, d] - i_d * 2.0 ** (-ld)))
        for r in np.nonzero(valid & (value != 0.0))[0]:
            col = positions.get(tuple(idx_mat[r]))
            if col is not None:
                rows_out.append(r)
                cols_out.append(col)
                vals_out.append(value[r])
    mat = sp.coo_matrix((vals_out, (rows_out, cols_out)), shape=(N, len(S)))
    out = mat.tocsr()
    out.sort_indices()
    return out


def _phi_profile(spec: KernelSpec, level: int, dist: np.ndarray) -> np.ndarray:
    """1-D feature value as a function of |x - center| (vectorized)."""
    h = 2.0 ** (-level)
    inside = dist < h
    if spec.kind in (BROWNIAN_BRIDGE, SOBOLEV):
        return np.where(inside, 1.0 - dist / h, 0.0)
    if spec.kind == LAPLACE:
        return np.where(inside,
                        _sinh_ratio(spec.omega * (h - np.minimum(dist, h)),
                                    spec.omega * h),
                        0.0)
    raise NotImplementedError("batch embedding of custom kernels")


def kernel_approx(spec: KernelSpec, S: IndexSet, x, xp) -> float:
    """Truncated expansion z(x)^T z(x') approximating k(x, x')."""
    return embed(spec, S, x).dot(embed(spec, S, xp))
