"""Multilevel compactly-supported features and the surplus operator.

A feature is indexed by a level vector ``l`` (each component >= 1) and an odd
position vector ``i`` with ``1 <= i_d <= 2^{l_d} - 1``.  The 1-D feature is
supported on ``[(i-1) 2^-l, (i+1) 2^-l]``, equals 1 at the center node
``i 2^-l`` and vanishes at the endpoints; D-dimensional features are plain
tensor products.  Within one level the supports have disjoint interiors and
across levels they are nested, which is what makes the embedding sparse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Tuple

import numpy as np

from .errors import DimError, InvalidIndex, InvalidLevel
from .kernels import (BROWNIAN_BRIDGE, LAPLACE, SOBOLEV, KernelSpec,
                      surplus_alpha_1d, surplus_beta_1d)


@dataclass(frozen=True)
class FeatureIndex:
    """A multilevel index (l, i) identifying one basis function."""

    l: Tuple[int, ...]
    i: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "l", tuple(int(v) for v in self.l))
        object.__setattr__(self, "i", tuple(int(v) for v in self.i))
        if len(self.l) != len(self.i):
            raise DimError("level and position vectors differ in length")
        for ld, id_ in zip(self.l, self.i):
            if ld < 1:
                raise InvalidLevel(f"level {ld} must be >= 1")
            if id_ % 2 == 0:
                raise InvalidIndex(f"position {id_} must be odd")
            if not 1 <= id_ <= 2 ** ld - 1:
                raise InvalidIndex(f"position {id_} out of range for level {ld}")

    @property
    def dim(self) -> int:
        return len(self.l)

    @property
    def center(self) -> np.ndarray:
        """The grid node z_{l,i} where the feature equals 1."""
        return np.array([i * 2.0 ** (-l) for l, i in zip(self.l, self.i)])

    def sort_key(self):
        """Canonical ordering key: (|l|, l, i)."""
        return (sum(self.l), self.l, self.i)


def phi_1d(spec: KernelSpec, l: int, i: int, x) -> float:
    """Evaluate the 1-D feature at ``x`` (scalar or array).

    For the Brownian-bridge and weighted-Sobolev kernels this is the
    triangular hat centered at i 2^-l; for the Laplace kernel it is the
    sinh-ratio profile sinh(w(h - |x - z|)) / sinh(w h) on the support.
    """
    if l < 1:
        raise InvalidLevel(f"level {l} must be >= 1")
    if i % 2 == 0:
        raise InvalidIndex(f"position {i} must be odd")
    if not 1 <= i <= 2 ** l - 1:
        raise InvalidIndex(f"position {i} out of range for level {l}")
    x = np.asarray(x, dtype=float)
    h = 2.0 ** (-l)
    z = i * h
    dist = np.abs(x - z)
    inside = dist < h
    if spec.kind in (BROWNIAN_BRIDGE, SOBOLEV):
        val = np.where(inside, 1.0 - dist / h, 0.0)
    elif spec.kind == LAPLACE:
        val = np.where(inside, _sinh_ratio(spec.omega * (h - np.minimum(dist, h)),
                                           spec.omega * h), 0.0)
    else:
        p, q = spec.pq()
        zm, zp = z - h, z + h
        left = (p(x) * q(zm) - q(x) * p(zm)) / (p(z) * q(zm) - q(z) * p(zm))
        right = (q(x) * p(zp) - p(x) * q(zp)) / (q(z) * p(zp) - p(z) * q(zp))
        val = np.where(inside, np.where(x <= z, left, right), 0.0)
    if val.ndim == 0:
        return float(val)
    return val


def _sinh_ratio(a, b):
    # sinh(a)/sinh(b) for 0 <= a <= b, stable against overflow for large b:
    # sinh(a)/sinh(b) = e^{a-b} (1 - e^{-2a}) / (1 - e^{-2b}).
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        num = -np.expm1(-2.0 * a)
        den = -np.expm1(-2.0 * b)
        out = np.exp(a - b) * num / den
    return np.where(den == 0.0, np.where(a == b, 1.0, 0.0), out)


def phi_nd(spec: KernelSpec, idx: FeatureIndex, x) -> float:
    """Tensor-product feature value at a D-dimensional point."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.shape[-1] != idx.dim:
        raise DimError(f"point dimension {x.shape[-1]} != index dimension {idx.dim}")
    val = 1.0
    for d in range(idx.dim):
        val = val * phi_1d(spec, idx.l[d], idx.i[d], x[..., d])
    return float(val) if np.ndim(val) == 0 else val


def support_box(idx: FeatureIndex):
    """Axis-aligned support box as (lo, hi) arrays."""
    l = np.array(idx.l, dtype=float)
    i = np.array(idx.i, dtype=float)
    h = 2.0 ** (-l)
    return (i - 1.0) * h, (i + 1.0) * h


def hierarchical_surplus(spec: KernelSpec, f: Callable, idx: FeatureIndex) -> float:
    """Apply the tensorized surplus operator to ``f`` at index ``idx``.

    Returns <f, phi_idx>_k computed from the 3^D point evaluations of ``f``
    on the dyadic stencil {z_{l,i-1}, z_{l,i}, z_{l,i+1}} per dimension, with
    weights (-beta, alpha, -beta) built from the kernel's (p, q) pair.  For
    the Brownian bridge this is 2^l times the dyadic second difference per
    dimension.  Applied to phi_idx itself it returns ||phi_idx||_k^2.
    """
    coeffs = []
    nodes = []
    for d in range(idx.dim):
        l, i = idx.l[d], idx.i[d]
        h = 2.0 ** (-l)
        alpha = surplus_alpha_1d(spec, l, i)
        beta_left = surplus_beta_1d(spec, l, i - 1)
        beta_right = surplus_beta_1d(spec, l, i)
        coeffs.append((-beta_left, alpha, -beta_right))
        nodes.append(((i - 1) * h, i * h, (i + 1) * h))
    total = 0.0
    for combo in product((0, 1, 2), repeat=idx.dim):
        w = 1.0
        pt = np.empty(idx.dim)
        for d, c in enumerate(combo):
            w *= coeffs[d][c]
            pt[d] = nodes[d][c]
        total += w * f(pt if idx.dim > 1 else float(pt[0]))
    return float(total)


def children_1d(l: int, i: int):
    """The two next-level indices whose supports tile the parent support."""
    return (l + 1, 2 * i - 1), (l + 1, 2 * i + 1)
